//! Registry of summation and integral identities, each held as a pair of
//! independently computed sides over a typed parameter schema.

pub mod binomial;
pub mod chu;
mod domain;
pub mod degenerate;
pub mod generalized;
pub mod oracles;
pub mod integral;
mod operator;
pub mod params;
mod registry;
pub mod report;
pub mod sample;
mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::{Deserialize, Serialize};

use crate::error::{QError, QResult};
use crate::policy::Policy;
use crate::qcore::{SeriesResult, SeriesStats};
use crate::scalar::{mp_proto, Float, Rational, Scalar, Tower};

pub use domain::Domain;
pub use params::{parse_rational, Args, ParamValue, Params};
pub use registry::{lookup, register_all};
pub use report::{CheckReport, Diagnostics, Verdict};
pub use sample::{sample_params, Draw, SampleOptions, Strategy};
pub use support::q_exponent;

/// How an identity instance is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = QError;
    fn from_str(s: &str) -> QResult<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(QError::InvalidParams(format!(
                "unknown mode `{other}` (expected exact or float)"
            ))),
        }
    }
}

/// A parameter slot and its default sampling box.
#[derive(Clone, Debug, Serialize)]
pub struct Slot {
    pub name: &'static str,
    #[serde(flatten)]
    pub kind: SlotKind,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SlotKind {
    /// Sampled uniformly in `[lo, hi]`, rejecting `|v| < min_abs`.
    Scalar { lo: f64, hi: f64, min_abs: f64 },
    /// `hard` bounds are part of the domain; `sample` is the default draw range.
    Int { hard: (i64, i64), sample: (i64, i64) },
}

impl Slot {
    pub const fn scalar(name: &'static str, lo: f64, hi: f64) -> Self {
        Slot {
            name,
            kind: SlotKind::Scalar { lo, hi, min_abs: 0.0 },
        }
    }

    pub const fn away(name: &'static str, lo: f64, hi: f64, min_abs: f64) -> Self {
        Slot {
            name,
            kind: SlotKind::Scalar { lo, hi, min_abs },
        }
    }

    pub const fn int(name: &'static str, hard: (i64, i64), sample: (i64, i64)) -> Self {
        Slot {
            name,
            kind: SlotKind::Int { hard, sample },
        }
    }
}

pub(crate) type SideFn<S> = fn(&Args<'_, S>, &Policy) -> QResult<SeriesResult<S>>;

/// One side of an identity, instantiated for every tower.
#[derive(Clone, Copy)]
pub(crate) struct Side {
    pub f64: SideFn<f64>,
    pub mp: SideFn<Float>,
    pub exact: SideFn<Rational>,
}

macro_rules! side {
    ($($p:ident)::+) => {
        $crate::identities::Side {
            f64: $($p)::+::<f64>,
            mp: $($p)::+::<$crate::scalar::Float>,
            exact: $($p)::+::<$crate::scalar::Rational>,
        }
    };
}
pub(crate) use side;

/// A registry entry.
#[derive(Clone)]
pub struct IdentityDef {
    pub id: &'static str,
    pub anchor: &'static str,
    pub slots: Vec<Slot>,
    pub exact_capable: bool,
    pub default_tol: f64,
    /// Both sides below this magnitude count as agreeing (degenerate zero cases).
    pub abs_floor: f64,
    /// Deviations from the printed statement that this entry implements.
    pub notes: &'static [&'static str],
    pub(crate) domain: fn(&mut Domain<'_>),
    /// Working precision in bits for a float evaluation; `<= 53` selects `f64`.
    pub(crate) precision: fn(&Params, f64) -> u32,
    /// Optional sampler adjustment; returning `false` rejects the draw.
    pub(crate) shape: Option<fn(&mut Params, &mut Draw) -> bool>,
    pub(crate) lhs: Side,
    pub(crate) rhs: Side,
}

impl std::fmt::Debug for IdentityDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityDef")
            .field("id", &self.id)
            .field("exact_capable", &self.exact_capable)
            .finish()
    }
}

/// Serializable view of a registry entry.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityInfo {
    pub id: &'static str,
    pub anchor: &'static str,
    pub exact_capable: bool,
    pub default_tol: f64,
    pub params: Vec<Slot>,
    pub notes: Vec<&'static str>,
}

impl IdentityDef {
    pub fn info(&self) -> IdentityInfo {
        IdentityInfo {
            id: self.id,
            anchor: self.anchor,
            exact_capable: self.exact_capable,
            default_tol: self.default_tol,
            params: self.slots.clone(),
            notes: self.notes.to_vec(),
        }
    }

    /// Type-check an assignment against the schema.
    pub fn check_schema(&self, params: &Params) -> QResult<()> {
        for slot in &self.slots {
            match (&slot.kind, params.get(slot.name)) {
                (_, None) => {
                    return Err(QError::InvalidParams(format!(
                        "{}: missing parameter `{}` (expects {})",
                        self.id,
                        slot.name,
                        self.slot_names()
                    )))
                }
                (SlotKind::Scalar { .. }, Some(ParamValue::Int(i))) => {
                    // integers are valid scalars
                    let _ = i;
                }
                (SlotKind::Int { .. }, Some(ParamValue::Scalar(r))) => {
                    if !r.is_integer() {
                        return Err(QError::InvalidParams(format!(
                            "{}: `{}` must be an integer, got {r}",
                            self.id, slot.name
                        )));
                    }
                }
                _ => {}
            }
        }
        if let Some((extra, _)) = params
            .iter()
            .find(|(k, _)| !self.slots.iter().any(|s| s.name == k.as_str()))
        {
            return Err(QError::InvalidParams(format!(
                "{}: unknown parameter `{extra}` (expects {})",
                self.id,
                self.slot_names()
            )));
        }
        Ok(())
    }

    /// Coerce integer-valued scalars and scalar-valued integers to the slot kinds.
    pub fn normalize(&self, params: &Params) -> QResult<Params> {
        self.check_schema(params)?;
        let mut out = Params::new();
        for slot in &self.slots {
            match (&slot.kind, params.get(slot.name)) {
                (SlotKind::Scalar { .. }, Some(ParamValue::Int(i))) => {
                    out.set_scalar(slot.name, Rational::from(*i));
                }
                (SlotKind::Scalar { .. }, Some(ParamValue::Scalar(r))) => {
                    out.set_scalar(slot.name, r.clone());
                }
                (SlotKind::Int { .. }, Some(ParamValue::Int(i))) => {
                    out.set_int(slot.name, *i);
                }
                (SlotKind::Int { .. }, Some(ParamValue::Scalar(r))) => {
                    let i = r.numer().to_i64().ok_or_else(|| {
                        QError::InvalidParams(format!("{}: `{}` is out of range", self.id, slot.name))
                    })?;
                    out.set_int(slot.name, i);
                }
                (_, None) => unreachable!("schema checked"),
            }
        }
        Ok(out)
    }

    pub fn slot_names(&self) -> String {
        self.slots.iter().map(|s| s.name).collect::<Vec<_>>().join(", ")
    }

    /// Every violated clause for this assignment (empty when admissible).
    pub fn violations(&self, params: &Params, mode: Mode, policy: &Policy) -> QResult<Vec<String>> {
        let params = self.normalize(params)?;
        let mut d = Domain::new(&params, mode, policy);
        d.base_q();
        for slot in &self.slots {
            if let SlotKind::Int { hard, .. } = slot.kind {
                let v = params.int(slot.name)?;
                if v < hard.0 || v > hard.1 {
                    d.push(format!("{} in {}..={} (got {v})", slot.name, hard.0, hard.1));
                }
            }
        }
        if d.is_clean() {
            (self.domain)(&mut d);
        }
        Ok(d.into_violations())
    }

    /// Precision in bits a float evaluation at `tol` would use.
    pub fn working_bits(&self, params: &Params, tol: f64) -> QResult<u32> {
        let params = self.normalize(params)?;
        Ok((self.precision)(&params, tol.max(1e-30)))
    }

    /// Evaluate both sides and compare them.
    pub fn evaluate(
        &self,
        params: &Params,
        mode: Mode,
        tol: Option<f64>,
        policy: &Policy,
    ) -> QResult<CheckReport> {
        let params = self.normalize(params)?;
        if mode == Mode::Exact && !self.exact_capable {
            return Err(QError::ExactModeUnsupported(format!(
                "{} involves infinite sums or products; use float mode",
                self.id
            )));
        }
        let tol = tol.unwrap_or(match mode {
            Mode::Exact => 0.0,
            Mode::Float => self.default_tol,
        });
        let mut report = CheckReport::new(self.id, &params, mode, tol);
        let violations = self.violations(&params, mode, policy)?;
        if !violations.is_empty() {
            report.verdict = Verdict::SkippedDomain;
            report.diagnostics.violations = violations;
            return Ok(report);
        }
        match mode {
            Mode::Exact => {
                report.tower = Tower::Exact;
                self.run(&params, Rational::new(), self.lhs.exact, self.rhs.exact, policy, &mut report);
            }
            Mode::Float => {
                let bits = guarded(|| Ok((self.precision)(&params, tol.max(1e-30))))
                    .unwrap_or(64);
                if bits <= 53 {
                    report.tower = Tower::F64;
                    report.precision_bits = 53;
                    self.run(&params, 0.0f64, self.lhs.f64, self.rhs.f64, policy, &mut report);
                } else {
                    report.tower = Tower::Mp;
                    report.precision_bits = bits;
                    self.run(&params, mp_proto(bits), self.lhs.mp, self.rhs.mp, policy, &mut report);
                }
            }
        }
        Ok(report)
    }

    /// Both side values in the tower `evaluate` would pick, skipping the
    /// domain check. Meant for degenerate settings such as `r = 1`.
    pub fn sides_f64(&self, params: &Params, tol: f64, policy: &Policy) -> QResult<(f64, f64)> {
        let params = &self.normalize(params)?;
        let bits = (self.precision)(params, tol.max(1e-30));
        if bits <= 53 {
            self.sides_in(params, 0.0f64, self.lhs.f64, self.rhs.f64, policy)
        } else {
            self.sides_in(params, mp_proto(bits), self.lhs.mp, self.rhs.mp, policy)
        }
    }

    /// Exact side values, skipping the domain check.
    pub fn sides_exact(&self, params: &Params, policy: &Policy) -> QResult<(Rational, Rational)> {
        if !self.exact_capable {
            return Err(QError::ExactModeUnsupported(self.id.into()));
        }
        let params = &self.normalize(params)?;
        let args = Args::new(params, Rational::new());
        let l = guarded(|| (self.lhs.exact)(&args, policy))?;
        let r = guarded(|| (self.rhs.exact)(&args, policy))?;
        Ok((l.value, r.value))
    }

    fn sides_in<S: Scalar>(
        &self,
        params: &Params,
        proto: S,
        lhs: SideFn<S>,
        rhs: SideFn<S>,
        policy: &Policy,
    ) -> QResult<(f64, f64)> {
        let args = Args::new(params, proto);
        let l = guarded(|| lhs(&args, policy))?;
        let r = guarded(|| rhs(&args, policy))?;
        Ok((l.value.to_f64(), r.value.to_f64()))
    }

    fn run<S: Scalar>(
        &self,
        params: &Params,
        proto: S,
        lhs: SideFn<S>,
        rhs: SideFn<S>,
        policy: &Policy,
        report: &mut CheckReport,
    ) {
        let args = Args::new(params, proto);
        let l = guarded(|| lhs(&args, policy));
        let r = guarded(|| rhs(&args, policy));
        if let Ok(v) = &l {
            report.diagnostics.lhs = Some(SeriesStats::from(v));
            report.lhs = Some(v.value.render());
        }
        if let Ok(v) = &r {
            report.diagnostics.rhs = Some(SeriesStats::from(v));
            report.rhs = Some(v.value.render());
        }
        let (l, r) = match (l, r) {
            (Ok(l), Ok(r)) => (l.value, r.value),
            (Err(e), _) | (_, Err(e)) => {
                report.verdict = match e {
                    QError::Domain(_) | QError::DenominatorPole(_) => Verdict::SkippedDomain,
                    QError::NoConvergence { .. } => Verdict::NoConvergence,
                    _ => Verdict::Fail,
                };
                report.diagnostics.error = Some(e.to_string());
                return;
            }
        };
        if !l.is_finite() || !r.is_finite() {
            report.verdict = Verdict::NoConvergence;
            report.diagnostics.error = Some("a side evaluated to a non-finite value".into());
            return;
        }
        let diff = (l.clone() - &r).abs();
        report.abs_residual = Some(diff.to_f64());
        let scale = l.log2_abs().max(r.log2_abs());
        let rel = if diff.is_zero() {
            0.0
        } else if scale == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            (diff.log2_abs() - scale).exp2()
        };
        report.rel_residual = Some(rel);
        let pass = if S::is_exact() {
            diff.is_zero()
        } else {
            let floor = self.abs_floor;
            rel <= report.tol
                || (floor > 0.0 && l.to_f64().abs() <= floor && r.to_f64().abs() <= floor)
        };
        report.verdict = if pass { Verdict::Pass } else { Verdict::Fail };
    }
}

/// Run `f`, turning a panic into an error value.
fn guarded<T>(f: impl FnOnce() -> QResult<T>) -> QResult<T> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            Err(QError::InvalidParams(format!("internal evaluation error: {msg}")))
        }
    }
}

/// Evaluate a registered identity on one assignment.
pub fn evaluate_identity(
    id: &str,
    params: &Params,
    mode: Mode,
    tol: Option<f64>,
    policy: &Policy,
) -> QResult<CheckReport> {
    lookup(id)?.evaluate(params, mode, tol, policy)
}

/// Violated clauses for an assignment; float mode applies the safety margin.
pub fn domain_validate(id: &str, params: &Params, mode: Mode, policy: &Policy) -> QResult<Vec<String>> {
    lookup(id)?.violations(params, mode, policy)
}
