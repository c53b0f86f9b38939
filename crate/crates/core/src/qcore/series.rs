use serde::Serialize;

use crate::error::{QError, QResult};
use crate::policy::Policy;
use crate::scalar::Scalar;

const TRACE_LEN: usize = 8;

/// Outcome of any truncated sum or product.
#[derive(Clone, Debug)]
pub struct SeriesResult<S> {
    pub value: S,
    pub terms_used: usize,
    /// Bound on the neglected remainder (absolute).
    pub tail_estimate: f64,
    pub converged: bool,
    /// The last few partial sums, oldest first.
    pub trace: Vec<f64>,
}

impl<S: Scalar> SeriesResult<S> {
    pub fn exact(value: S, terms_used: usize) -> Self {
        let trace = vec![value.to_f64()];
        SeriesResult {
            value,
            terms_used,
            tail_estimate: 0.0,
            converged: true,
            trace,
        }
    }

    pub fn map(self, f: impl FnOnce(S) -> S) -> Self {
        let value = f(self.value);
        SeriesResult { value, ..self }
    }

    /// Multiply by a factor, scaling the tail bound along with the value.
    pub fn scaled(self, factor: &S) -> Self {
        let k = factor.to_f64().abs();
        SeriesResult {
            value: self.value * factor,
            tail_estimate: self.tail_estimate * k,
            trace: self.trace.iter().map(|t| t * factor.to_f64()).collect(),
            ..self
        }
    }
}

/// Compact diagnostics shared by report records.
#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct SeriesStats {
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub trace: Vec<f64>,
}

impl<S: Scalar> From<&SeriesResult<S>> for SeriesStats {
    fn from(r: &SeriesResult<S>) -> Self {
        SeriesStats {
            terms_used: r.terms_used,
            tail_estimate: r.tail_estimate,
            trace: r.trace.clone(),
        }
    }
}

/// How a sum is allowed to stop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Stop on the tolerance rule; float towers only.
    Adaptive,
    /// Sum indices `0..=n` and nothing else.
    Finite(usize),
}

fn push_trace(trace: &mut Vec<f64>, v: f64) {
    if trace.len() == TRACE_LEN {
        trace.remove(0);
    }
    trace.push(v);
}

/// Sum `term(0) + term(1) + ...`.
///
/// Adaptive mode stops after three consecutive terms that are both below
/// `rel_tol * |partial|` and smaller than their predecessor.
pub fn sum_series<S, F>(
    proto: &S,
    policy: &Policy,
    stop: Termination,
    mut term: F,
) -> QResult<SeriesResult<S>>
where
    S: Scalar,
    F: FnMut(usize) -> QResult<S>,
{
    let mut partial = proto.zero();
    let mut trace = Vec::with_capacity(TRACE_LEN);
    match stop {
        Termination::Finite(n) => {
            for k in 0..=n {
                let t = term(k)?;
                if !t.is_finite() {
                    return Err(QError::no_convergence(k, "non-finite term"));
                }
                partial = partial + &t;
                push_trace(&mut trace, partial.to_f64());
            }
            if !partial.is_finite() {
                return Err(QError::no_convergence(n + 1, "non-finite partial sum"));
            }
            Ok(SeriesResult {
                value: partial,
                terms_used: n + 1,
                tail_estimate: 0.0,
                converged: true,
                trace,
            })
        }
        Termination::Adaptive => {
            if S::is_exact() {
                return Err(QError::ExactModeUnsupported(
                    "an adaptively truncated series".into(),
                ));
            }
            let log_tol = policy.rel_tol.log2();
            let mut small = 0usize;
            let mut prev: Option<f64> = None;
            let mut ratios = [0.0f64; 3];
            for n in 0..=policy.n_max {
                let t = term(n)?;
                if !t.is_finite() {
                    return Err(QError::no_convergence(n, "non-finite term"));
                }
                partial = partial + &t;
                if !partial.is_finite() {
                    return Err(QError::no_convergence(n, "partial sum overflowed"));
                }
                push_trace(&mut trace, partial.to_f64());
                let lt = t.log2_abs();
                let lp = partial.log2_abs();
                let shrinking = t.is_zero() || prev.is_some_and(|p| lt < p);
                if t.is_zero() || (shrinking && lt < lp + log_tol) {
                    ratios[small.min(2)] = match prev {
                        Some(p) if p.is_finite() && lt.is_finite() => (lt - p).exp2(),
                        _ => 0.0,
                    };
                    small += 1;
                } else {
                    small = 0;
                }
                prev = Some(lt);
                if small >= 3 {
                    let rho = ratios.iter().cloned().fold(0.0, f64::max).min(0.999);
                    let tail = if t.is_zero() {
                        0.0
                    } else {
                        lt.exp2() * rho / (1.0 - rho)
                    };
                    return Ok(SeriesResult {
                        value: partial,
                        terms_used: n + 1,
                        tail_estimate: tail,
                        converged: true,
                        trace,
                    });
                }
            }
            Err(QError::no_convergence(
                policy.n_max + 1,
                "term cap reached before the tolerance rule was met",
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn geometric_half_sums_to_two() {
        let p = Policy::default();
        let mut t = 1.0f64;
        let r = sum_series(&0.0, &p, Termination::Adaptive, |n| {
            if n > 0 {
                t *= 0.5;
            }
            Ok(t)
        })
        .unwrap();
        assert!((r.value - 2.0).abs() <= 2.0 * p.rel_tol);
        assert!(r.converged);
        assert!(r.tail_estimate <= p.rel_tol * 2.0);
    }

    #[test]
    fn single_term() {
        let p = Policy::default();
        let r = sum_series(&0.0, &p, Termination::Adaptive, |n| Ok(if n == 0 { 3.5 } else { 0.0 }))
            .unwrap();
        assert_eq!(r.value, 3.5);
        assert!(r.converged);
        assert_eq!(r.tail_estimate, 0.0);
    }

    #[test]
    fn growing_alternating_terms_fail() {
        let p = Policy {
            n_max: 2000,
            ..Policy::default()
        };
        let r = sum_series(&0.0, &p, Termination::Adaptive, |n| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(s * (1.0 + n as f64))
        });
        assert!(matches!(r, Err(QError::NoConvergence { .. })));
    }

    #[test]
    fn exact_requires_bound() {
        let p = Policy::default();
        let z = Rational::new();
        let r = sum_series(&z, &p, Termination::Adaptive, |_| Ok(Rational::from(1)));
        assert!(matches!(r, Err(QError::ExactModeUnsupported(_))));
        let r = sum_series(&z, &p, Termination::Finite(3), |n| Ok(Rational::from((1, 1 << n))))
            .unwrap();
        assert_eq!(r.value, Rational::from((15, 8)));
        assert_eq!(r.tail_estimate, 0.0);
    }
}
