//! Seeded sweeps: case generation, a case-parallel pool, and order-stable
//! aggregation.

use std::time::Instant;

use qseries::identities::{
    lookup, sample_params, CheckReport, Mode, Params, SampleOptions, Verdict,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::SweepConfig;
use crate::error::CliError;

pub const SCHEMA: &str = "qverify.sweep/1";

/// One scheduled evaluation.
#[derive(Clone, Debug)]
pub struct Case {
    pub id: &'static str,
    pub mode: Mode,
    pub tol: Option<f64>,
    pub params: Params,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Aggregate {
    pub id: String,
    pub mode: Option<Mode>,
    pub cases: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped_domain: usize,
    pub no_convergence: usize,
    /// Largest relative residual among evaluated cases.
    pub max_rel_residual: Option<f64>,
    pub max_abs_residual: Option<f64>,
    /// Set when no cases could be sampled.
    pub error: Option<String>,
    /// Deviations and sampling caveats carried by the registry entry.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<&'static str>,
}

impl Aggregate {
    fn add(&mut self, r: &CheckReport) {
        self.cases += 1;
        match r.verdict {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::SkippedDomain => self.skipped_domain += 1,
            Verdict::NoConvergence => self.no_convergence += 1,
        }
        let bump = |slot: &mut Option<f64>, v: Option<f64>| {
            if let Some(v) = v {
                *slot = Some(slot.map_or(v, |m: f64| m.max(v)));
            }
        };
        bump(&mut self.max_rel_residual, r.rel_residual);
        bump(&mut self.max_abs_residual, r.abs_residual);
    }

    pub fn failures(&self) -> usize {
        self.fail + self.no_convergence + usize::from(self.error.is_some())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexedCase {
    pub index: usize,
    #[serde(flatten)]
    pub report: CheckReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub version: &'static str,
    pub config: SweepConfig,
    pub aggregates: Vec<Aggregate>,
    pub totals: Aggregate,
    pub cases: Vec<IndexedCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl SweepReport {
    /// Failed plus non-converged cases, plus identities that could not be sampled.
    pub fn failures(&self) -> usize {
        self.aggregates.iter().map(Aggregate::failures).sum()
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "index", "id", "mode", "tower", "bits", "verdict", "rel_residual", "abs_residual",
            "tol", "params", "lhs", "rhs", "note",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for c in &self.cases {
            let r = &c.report;
            let note = r
                .diagnostics
                .error
                .clone()
                .unwrap_or_else(|| r.diagnostics.violations.join("; "));
            w.write_record([
                c.index.to_string(),
                r.id.clone(),
                serde_json::to_value(r.mode)?.as_str().unwrap_or("").to_string(),
                serde_json::to_value(r.tower)?.as_str().unwrap_or("").to_string(),
                r.precision_bits.to_string(),
                r.verdict.as_str().to_string(),
                opt(r.rel_residual),
                opt(r.abs_residual),
                r.tol.to_string(),
                r.params_text(),
                r.lhs.clone().unwrap_or_default(),
                r.rhs.clone().unwrap_or_default(),
                note,
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Expand a config into its case list plus per-identity sampling errors.
pub fn plan(cfg: &SweepConfig) -> Result<(Vec<Case>, Vec<Aggregate>), CliError> {
    let mut cases = Vec::new();
    let mut aggs = Vec::new();
    for id in cfg.selected()? {
        let def = lookup(id)?;
        let block = cfg.blocks.get(id).cloned().unwrap_or_default();
        let mode = block.mode.unwrap_or(cfg.mode).resolve(def.exact_capable);
        let mut opts = SampleOptions::new(
            block.seed.unwrap_or(cfg.seed),
            block.count.unwrap_or(cfg.count),
            block.strategy.unwrap_or(cfg.strategy),
            mode,
        );
        opts.ranges = block.ranges.clone();
        let mut agg = Aggregate {
            id: id.to_string(),
            mode: Some(mode),
            notes: def.notes.to_vec(),
            ..Aggregate::default()
        };
        match sample_params(id, &opts, &cfg.policy) {
            Ok(points) => cases.extend(points.into_iter().map(|params| Case {
                id,
                mode,
                tol: block.tol.or(cfg.tol),
                params,
            })),
            Err(e) => agg.error = Some(e.to_string()),
        }
        aggs.push(agg);
    }
    Ok((cases, aggs))
}

fn evaluate(case: &Case, cfg: &SweepConfig) -> CheckReport {
    match lookup(case.id).and_then(|d| d.evaluate(&case.params, case.mode, case.tol, &cfg.policy)) {
        Ok(r) => r,
        Err(e) => {
            // schema errors cannot come from the sampler; keep them as per-case failures anyway
            let mut r = CheckReport::new(case.id, &case.params, case.mode, case.tol.unwrap_or(0.0));
            r.verdict = Verdict::Fail;
            r.diagnostics.error = Some(e.to_string());
            r
        }
    }
}

/// Run a sweep. Cases are evaluated on a pool of `cfg.parallel` workers and
/// gathered back in case order, so the report does not depend on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport, CliError> {
    let start = Instant::now();
    let (cases, mut aggs) = plan(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let reports: Vec<CheckReport> =
        pool.install(|| cases.par_iter().map(|c| evaluate(c, cfg)).collect());
    let mut totals = Aggregate {
        id: "total".into(),
        ..Aggregate::default()
    };
    for r in &reports {
        if let Some(a) = aggs.iter_mut().find(|a| a.id == r.id) {
            a.add(r);
        }
        totals.add(r);
    }
    totals.error = aggs
        .iter()
        .filter_map(|a| a.error.as_ref().map(|e| format!("{}: {e}", a.id)))
        .reduce(|a, b| format!("{a}; {b}"));
    Ok(SweepReport {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        aggregates: aggs,
        totals,
        cases: reports
            .into_iter()
            .enumerate()
            .map(|(index, report)| IndexedCase { index, report })
            .collect(),
        wall_time_ms: cfg.timing.then(|| start.elapsed().as_millis()),
    })
}
