//! Computational q-calculus: q-shifted factorials, basic hypergeometric
//! series, q-difference operators, Jackson integrals, and a registry of
//! summation and integral identities checked over exact rationals, `f64` or
//! MPFR floats.

pub mod error;
pub mod identities;
pub mod policy;
pub mod qcore;
pub mod qintegral;
pub mod qops;
pub mod scalar;

pub use error::{QError, QResult};
pub use policy::Policy;
pub use scalar::{Float, Rational, Scalar, Tower};
