//! Helpers shared by the identity families.

use rug::ops::Pow;
use rug::Rational;

use crate::error::QResult;
use crate::policy::Policy;
use crate::qcore::{poch_infinite, sum_series, QBase, SeriesResult, Termination};
use crate::scalar::Scalar;

/// `Π num_∞ / Π den_∞` packaged with product diagnostics.
pub fn product_result<S: Scalar>(
    num: &[S],
    den: &[S],
    q: &QBase<S>,
    policy: &Policy,
) -> QResult<SeriesResult<S>> {
    let mut n = q.q().one();
    let mut d = q.q().one();
    let mut terms = 0usize;
    let mut rel_tail = 0.0f64;
    for a in num {
        let r = poch_infinite(a, q, policy)?;
        terms = terms.max(r.terms_used);
        rel_tail += r.tail_estimate / r.value.to_f64().abs().max(f64::MIN_POSITIVE);
        n = n * &r.value;
    }
    for a in den {
        let r = poch_infinite(a, q, policy)?;
        terms = terms.max(r.terms_used);
        rel_tail += r.tail_estimate / r.value.to_f64().abs().max(f64::MIN_POSITIVE);
        d = d * &r.value;
    }
    let value = n.checked_div(&d, "infinite product in a denominator")?;
    let mag = value.to_f64().abs();
    Ok(SeriesResult {
        tail_estimate: if rel_tail.is_finite() { rel_tail * mag } else { 0.0 },
        converged: true,
        terms_used: terms,
        trace: vec![value.to_f64()],
        value,
    })
}

/// `Σ_m w_m Σ_{j+i=m} A_j B_i` where every sequence is generated from
/// successive ratios and starts at 1.
pub fn conv_series<S, W, A, B>(
    proto: &S,
    policy: &Policy,
    stop: Termination,
    mut w_step: W,
    mut a_step: A,
    mut b_step: B,
) -> QResult<SeriesResult<S>>
where
    S: Scalar,
    W: FnMut(usize) -> QResult<S>,
    A: FnMut(usize) -> QResult<S>,
    B: FnMut(usize) -> QResult<S>,
{
    let one = proto.one();
    let mut a = vec![one.clone()];
    let mut b = vec![one.clone()];
    let mut w = one.clone();
    sum_series(proto, policy, stop, |m| {
        if m > 0 {
            w = w.clone() * &w_step(m - 1)?;
        }
        while a.len() <= m {
            let j = a.len() - 1;
            let r = a_step(j)?;
            a.push(a[j].clone() * &r);
        }
        while b.len() <= m {
            let i = b.len() - 1;
            let r = b_step(i)?;
            b.push(b[i].clone() * &r);
        }
        let mut diag = proto.zero();
        for j in 0..=m {
            diag = diag + &(a[j].clone() * &b[m - j]);
        }
        Ok(w.clone() * &diag)
    })
}

/// Bits lost to cancellation in `Σ_{k≤n} (q^{-n};q)_k (z;q)_k q^k / (q, y;q)_k · h_k`
/// with `|h_k| ≈ 1`: the log2 of the largest term.
pub fn chu_amp_bits(n: usize, q: f64, z_abs: f64, y_abs: f64) -> f64 {
    let lq = q.log2();
    let mut acc = 0.0f64;
    let mut worst = 0.0f64;
    for l in 0..n {
        let ql = q.powi(l as i32);
        acc += (1.0 + q.powi(l as i32 - n as i32)).log2() + (1.0 + z_abs * ql).log2() + lq
            - (1.0 - ql * q).log2()
            - (1.0 - y_abs * ql).abs().max(1e-3).log2();
        worst = worst.max(acc);
    }
    worst
}

/// The integer `m` with `v = q^m` exactly, if there is one.
pub fn q_exponent(v: &Rational, q: &Rational) -> Option<i64> {
    if *v <= 0 || *q <= 0 || *q >= 1 {
        return None;
    }
    let est = v.to_f64().ln() / q.to_f64().ln();
    if !est.is_finite() {
        return None;
    }
    let m = est.round();
    if (est - m).abs() > 1e-6 || m.abs() > 1e6 {
        return None;
    }
    let m = m as i64;
    let p = Rational::from(q.clone().pow(m.unsigned_abs() as u32));
    let p = if m >= 0 { p } else { Rational::from(p.recip_ref()) };
    (p == *v).then_some(m)
}

/// Truncation tolerance tied to the working precision rather than the report tolerance.
pub fn working_policy<S: Scalar>(proto: &S, pol: &Policy) -> Policy {
    let rel_tol = if S::is_exact() {
        pol.rel_tol
    } else {
        proto.log2_epsilon().max(-1000.0).exp2().min(pol.rel_tol)
    };
    Policy { rel_tol, ..*pol }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_detection() {
        let q = Rational::from((1, 3));
        assert_eq!(q_exponent(&Rational::from((1, 9)), &q), Some(2));
        assert_eq!(q_exponent(&Rational::from(27), &q), Some(-3));
        assert_eq!(q_exponent(&Rational::from(1), &q), Some(0));
        assert_eq!(q_exponent(&Rational::from((2, 9)), &q), None);
        assert_eq!(q_exponent(&Rational::from((-1, 9)), &q), None);
    }

    #[test]
    fn conv_series_matches_product_of_geometric_sums() {
        // Σ_m Σ_{j+i=m} (1/2)^j (1/3)^i = 1/((1-1/2)(1-1/3)) = 3
        let p = Policy::default();
        let r = conv_series(&0.0, &p, Termination::Adaptive, |_| Ok(1.0), |_| Ok(0.5), |_| Ok(1.0 / 3.0))
            .unwrap();
        assert!((r.value - 3.0).abs() < 1e-11);
    }
}
