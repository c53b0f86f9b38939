//! Scalar towers shared by every evaluator.
//!
//! Three implementations exist: [`Rational`] (exact), `f64` and [`Float`]
//! (MPFR, precision chosen at runtime). Constants are always produced from an
//! existing value with [`Scalar::lift`] so that multiprecision values keep the
//! precision of the value they were derived from.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub use rug::{Float, Rational};

use crate::error::QError;

/// Which arithmetic a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tower {
    Exact,
    F64,
    Mp,
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    const TOWER: Tower;

    /// The rational `v` represented in the same tower (and precision) as `self`.
    fn lift(&self, v: &Rational) -> Self;
    fn int(&self, v: i64) -> Self;
    fn zero(&self) -> Self {
        self.int(0)
    }
    fn one(&self) -> Self {
        self.int(1)
    }
    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// `log2 |self|`, `-inf` for zero. Never underflows for tiny multiprecision values.
    fn log2_abs(&self) -> f64;
    /// Mantissa bits; `u32::MAX` for exact values.
    fn precision(&self) -> u32;
    fn to_rational(&self) -> Option<Rational>;
    /// Canonical text: `p/q` for exact values, 17 significant digits otherwise.
    fn render(&self) -> String;

    fn is_exact() -> bool {
        Self::TOWER == Tower::Exact
    }

    /// Integer power; negative exponents divide.
    fn powi(&self, e: i64) -> Result<Self, QError> {
        let mut base = self.clone();
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * &base;
            }
        }
        if e < 0 {
            acc.one().checked_div(&acc, "negative power of zero")
        } else {
            Ok(acc)
        }
    }

    /// Division that reports a zero divisor instead of producing inf/NaN or panicking.
    fn checked_div(self, d: &Self, what: &str) -> Result<Self, QError> {
        if d.is_zero() {
            return Err(QError::DenominatorPole(what.to_string()));
        }
        let out = self / d;
        if out.is_finite() {
            Ok(out)
        } else {
            Err(QError::DenominatorPole(format!("{what} (overflow)")))
        }
    }

    /// Unit roundoff of this tower, `0` for exact values.
    fn epsilon(&self) -> f64 {
        match Self::TOWER {
            Tower::Exact => 0.0,
            _ => (2.0f64).powi(-(self.precision() as i32 - 1)),
        }
    }

    /// `log2` of the unit roundoff, safe for precisions far below `f64` range.
    fn log2_epsilon(&self) -> f64 {
        match Self::TOWER {
            Tower::Exact => f64::NEG_INFINITY,
            _ => -(self.precision() as f64 - 1.0),
        }
    }
}

impl Scalar for f64 {
    const TOWER: Tower = Tower::F64;

    fn lift(&self, v: &Rational) -> Self {
        v.to_f64()
    }
    fn int(&self, v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn log2_abs(&self) -> f64 {
        f64::abs(*self).log2()
    }
    fn precision(&self) -> u32 {
        53
    }
    fn to_rational(&self) -> Option<Rational> {
        None
    }
    fn render(&self) -> String {
        fmt_sig17(*self)
    }
}

impl Scalar for Float {
    const TOWER: Tower = Tower::Mp;

    fn lift(&self, v: &Rational) -> Self {
        Float::with_val(self.prec(), v)
    }
    fn int(&self, v: i64) -> Self {
        Float::with_val(self.prec(), v)
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(self)
    }
    fn abs(&self) -> Self {
        Float::abs(self.clone())
    }
    fn to_f64(&self) -> f64 {
        Float::to_f64(self)
    }
    fn log2_abs(&self) -> f64 {
        if Float::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.to_f64_exp();
        f64::abs(m).log2() + e as f64
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn to_rational(&self) -> Option<Rational> {
        None
    }
    fn render(&self) -> String {
        if Float::is_zero(self) {
            return "0".into();
        }
        format!("{self:.16e}")
    }
}

impl Scalar for Rational {
    const TOWER: Tower = Tower::Exact;

    fn lift(&self, v: &Rational) -> Self {
        v.clone()
    }
    fn int(&self, v: i64) -> Self {
        Rational::from(v)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn abs(&self) -> Self {
        Rational::from(self.abs_ref())
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn log2_abs(&self) -> f64 {
        if Scalar::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        Float::with_val(64, self).log2_abs()
    }
    fn precision(&self) -> u32 {
        u32::MAX
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// Shortest round-trip text for finite values, otherwise `inf`/`nan` tokens.
pub fn fmt_sig17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A multiprecision zero with `bits` of mantissa.
pub fn mp_proto(bits: u32) -> Float {
    Float::new(bits.max(64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_handles_signs() {
        let h = 0.5f64;
        assert_eq!(Scalar::powi(&h, 3).unwrap(), 0.125);
        assert_eq!(Scalar::powi(&h, -2).unwrap(), 4.0);
        let r = Rational::from((2, 3));
        assert_eq!(Scalar::powi(&r, -2).unwrap(), Rational::from((9, 4)));
        assert!(Scalar::powi(&0.0f64, -1).is_err());
    }

    #[test]
    fn lift_keeps_precision() {
        let p = mp_proto(300);
        let third = p.lift(&Rational::from((1, 3)));
        assert_eq!(third.prec(), 300);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn log2_of_tiny_mp_value() {
        let p = mp_proto(128);
        let tiny = p.lift(&Rational::from(1)) / Float::with_val(128, Float::i_exp(1, 5000));
        assert!((tiny.log2_abs() + 5000.0).abs() < 1e-9);
    }

    #[test]
    fn checked_div_rejects_zero() {
        let r = Rational::from(1);
        assert!(matches!(
            r.checked_div(&Rational::new(), "x"),
            Err(QError::DenominatorPole(_))
        ));
    }
}
