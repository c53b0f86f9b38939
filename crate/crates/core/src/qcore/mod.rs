//! q-shifted factorials, Gaussian binomials, Cauchy polynomials and the
//! series engine everything else is built on.

mod hyper;
mod poch;
mod series;

pub use hyper::{phi_rs, HyperSpec};
pub use poch::{
    cauchy_poly, exact_negative_power, pinf, pinf_many, pinf_ratio, poch_finite, poch_infinite,
    poch_many, poch_ratio_identities_check, poch_table, qbinom, qbinom_row, PochRatioCheck,
};
pub use series::{sum_series, SeriesResult, SeriesStats, Termination};

use crate::error::{QError, QResult};
use crate::policy::Policy;
use crate::scalar::Scalar;

/// The base `q` of every q-object, validated once.
#[derive(Clone, Debug, PartialEq)]
pub struct QBase<S> {
    q: S,
}

impl<S: Scalar> QBase<S> {
    /// Exact tower: `0 < q < 1`. Float towers additionally need `q <= q_max`.
    pub fn new(q: S, policy: &Policy) -> QResult<Self> {
        if !(q > q.zero() && q < q.one()) {
            return Err(QError::domain(format!("base q = {} is not in (0,1)", q.render())));
        }
        if !S::is_exact() && q.to_f64() > policy.q_max {
            return Err(QError::domain(format!(
                "base q = {} exceeds q_max = {}",
                q.render(),
                policy.q_max
            )));
        }
        Ok(QBase { q })
    }

    /// Skip validation; for callers that already checked the range.
    pub fn unchecked(q: S) -> Self {
        QBase { q }
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    /// `q^n`.
    pub fn pow(&self, n: usize) -> S {
        let mut p = self.q.one();
        for _ in 0..n {
            p = p * &self.q;
        }
        p
    }

    /// `q^e` for any integer `e`.
    pub fn powi(&self, e: i64) -> S {
        let p = self.pow(e.unsigned_abs() as usize);
        if e < 0 {
            self.q.one() / &p
        } else {
            p
        }
    }

    /// `q^{C(n,2)}`.
    pub fn tri(&self, n: usize) -> S {
        self.pow(n * n.saturating_sub(1) / 2)
    }
}
