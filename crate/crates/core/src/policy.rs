use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Truncation controls shared by every series, product and lattice sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    /// Stop once three consecutive terms fall below `rel_tol * |partial|`.
    pub rel_tol: f64,
    /// Hard cap on the number of terms of any adaptive sum.
    pub n_max: usize,
    /// Safety margin applied to every open modulus condition `|z| < 1`.
    pub margin: f64,
    /// Infinite products stop once `|a| q^K` drops below this (or below the
    /// working precision, whichever is smaller).
    pub product_cutoff: f64,
    /// Largest base accepted in float mode.
    pub q_max: f64,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            rel_tol: 1e-12,
            n_max: 100_000,
            margin: 0.05,
            product_cutoff: 1e-18,
            q_max: 0.95,
        }
    }
}

impl Policy {
    /// `log2` of the product cutoff for a scalar of the given precision.
    pub fn product_cutoff_log2<S: Scalar>(&self, proto: &S) -> f64 {
        let own = self.product_cutoff.log2();
        own.min(proto.log2_epsilon() - 8.0)
    }

    /// `1 - margin`, the largest modulus accepted for an open unit-disc condition.
    pub fn disc(&self) -> f64 {
        1.0 - self.margin
    }
}
