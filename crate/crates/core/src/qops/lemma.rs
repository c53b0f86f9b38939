use crate::error::{QError, QResult};
use crate::policy::Policy;
use crate::qcore::{cauchy_poly, pinf, poch_finite, QBase};
use crate::scalar::Scalar;

/// The six closed forms for iterated differences of product kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaId {
    /// `D^k 1/(as;q)_∞`
    Id1,
    /// `θ^k 1/(as;q)_∞`
    Id2,
    /// `D^k (as;q)_∞`
    Id3,
    /// `θ^k (as;q)_∞`
    Id4,
    /// `D^n (as;q)_∞/(aω;q)_∞`
    Id5,
    /// `θ^n (as;q)_∞/(aω;q)_∞`
    Id6,
}

impl LemmaId {
    pub const ALL: [LemmaId; 6] = [
        LemmaId::Id1,
        LemmaId::Id2,
        LemmaId::Id3,
        LemmaId::Id4,
        LemmaId::Id5,
        LemmaId::Id6,
    ];
}

#[derive(Clone, Debug)]
pub struct LemmaParams<S> {
    pub a: S,
    pub s: S,
    pub omega: S,
    pub order: usize,
}

/// Closed-form value of the selected iterated difference at `a`.
pub fn lemma_closed_form<S: Scalar>(
    id: LemmaId,
    p: &LemmaParams<S>,
    q: &QBase<S>,
    policy: &Policy,
) -> QResult<S> {
    let LemmaParams { a, s, omega, order } = p;
    let k = *order;
    let as_ = a.clone() * s;
    let s_pow = s.powi(k as i64)?;
    let neg_s_pow = (-s.clone()).powi(k as i64)?;
    match id {
        LemmaId::Id1 => s_pow.checked_div(&pinf(&as_, q, policy)?, "(as;q)_inf"),
        LemmaId::Id2 => {
            if a.is_zero() {
                return Err(QError::domain("θ form needs a != 0"));
            }
            let shifted = as_ * &q.powi(-(k as i64));
            (s_pow * &q.powi(-((k * k.saturating_sub(1) / 2) as i64)))
                .checked_div(&pinf(&shifted, q, policy)?, "(as q^-k;q)_inf")
        }
        LemmaId::Id3 => {
            let shifted = as_ * &q.pow(k);
            Ok(neg_s_pow * &q.tri(k) * &pinf(&shifted, q, policy)?)
        }
        LemmaId::Id4 => {
            if a.is_zero() {
                return Err(QError::domain("θ form needs a != 0"));
            }
            Ok(neg_s_pow * &pinf(&as_, q, policy)?)
        }
        LemmaId::Id5 => {
            let ratio = pinf(&as_, q, policy)?
                .checked_div(&pinf(&(a.clone() * omega), q, policy)?, "(aω;q)_inf")?;
            // ω^n (s/ω;q)_n is the Cauchy polynomial p_n(ω, s)
            let num = cauchy_poly(k, omega, s, q);
            let den = poch_finite(&as_, q, k);
            Ok(num.checked_div(&den, "(as;q)_n")? * &ratio)
        }
        LemmaId::Id6 => {
            if a.is_zero() || omega.is_zero() {
                return Err(QError::domain("θ form needs a != 0 and ω != 0"));
            }
            let ratio = pinf(&as_, q, policy)?
                .checked_div(&pinf(&(a.clone() * omega), q, policy)?, "(aω;q)_inf")?;
            let num = poch_finite(&(s.clone() / omega), q, k);
            let den = poch_finite(&(q.q().clone() / &(a.clone() * omega)), q, k);
            let pref = (-(q.q().clone() / a)).powi(k as i64)?;
            Ok(pref * &num.checked_div(&den, "(q/(aω);q)_n")? * &ratio)
        }
    }
}
