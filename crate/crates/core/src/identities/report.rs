use serde::Serialize;

use super::params::Params;
use super::Mode;
use crate::qcore::SeriesStats;
use crate::scalar::Tower;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    SkippedDomain,
    NoConvergence,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::SkippedDomain => "skipped-domain",
            Verdict::NoConvergence => "no-convergence",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub lhs: Option<SeriesStats>,
    pub rhs: Option<SeriesStats>,
    pub violations: Vec<String>,
    pub error: Option<String>,
}

/// Outcome of one identity instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub mode: Mode,
    pub tower: Tower,
    pub precision_bits: u32,
    pub params: Params,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub abs_residual: Option<f64>,
    pub rel_residual: Option<f64>,
    pub tol: f64,
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
}

impl CheckReport {
    /// Blank report; the verdict starts as skipped-domain.
    pub fn new(id: &str, params: &Params, mode: Mode, tol: f64) -> Self {
        CheckReport {
            id: id.to_string(),
            mode,
            tower: match mode {
                Mode::Exact => Tower::Exact,
                Mode::Float => Tower::F64,
            },
            precision_bits: match mode {
                Mode::Exact => 0,
                Mode::Float => 53,
            },
            params: params.clone(),
            lhs: None,
            rhs: None,
            abs_residual: None,
            rel_residual: None,
            tol,
            verdict: Verdict::SkippedDomain,
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let mut s = format!("{} [{}] {}", self.id, self.verdict.as_str(), self.params_text());
        if let (Some(l), Some(r)) = (&self.lhs, &self.rhs) {
            s.push_str(&format!(" lhs={l} rhs={r}"));
        }
        if let Some(rel) = self.rel_residual {
            s.push_str(&format!(" rel={rel:.3e}"));
        }
        for v in &self.diagnostics.violations {
            s.push_str(&format!(" violation: {v};"));
        }
        if let Some(e) = &self.diagnostics.error {
            s.push_str(&format!(" error: {e}"));
        }
        s
    }

    pub fn params_text(&self) -> String {
        self.params
            .rendered()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
