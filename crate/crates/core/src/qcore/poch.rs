use rug::Rational;

use super::series::SeriesResult;
use super::QBase;
use crate::error::{QError, QResult};
use crate::policy::Policy;
use crate::scalar::Scalar;

/// `(a;q)_n`.
pub fn poch_finite<S: Scalar>(a: &S, q: &QBase<S>, n: usize) -> S {
    let mut p = a.one();
    let mut t = a.clone();
    for _ in 0..n {
        p = p * &(a.one() - &t);
        t = t * q.q();
    }
    p
}

/// `(a;q)_0, (a;q)_1, ..., (a;q)_n`.
pub fn poch_table<S: Scalar>(a: &S, q: &QBase<S>, n: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = a.one();
    let mut t = a.clone();
    out.push(p.clone());
    for _ in 0..n {
        p = p * &(a.one() - &t);
        t = t * q.q();
        out.push(p.clone());
    }
    out
}

/// Product of several finite Pochhammer symbols sharing the same length.
pub fn poch_many<S: Scalar>(args: &[S], q: &QBase<S>, n: usize) -> S {
    let mut p = q.q().one();
    for a in args {
        p = p * &poch_finite(a, q, n);
    }
    p
}

/// `(a;q)_∞`, truncated once `|a| q^K` falls below the policy cutoff.
pub fn poch_infinite<S: Scalar>(a: &S, q: &QBase<S>, policy: &Policy) -> QResult<SeriesResult<S>> {
    if a.is_zero() {
        return Ok(SeriesResult::exact(a.one(), 0));
    }
    if S::is_exact() {
        return Err(QError::ExactModeUnsupported(format!(
            "the infinite product ({};q)_inf",
            a.render()
        )));
    }
    if !a.is_finite() {
        return Err(QError::domain("infinite product argument is not finite"));
    }
    let cut = policy.product_cutoff_log2(a);
    let mut p = a.one();
    let mut t = a.clone();
    let mut k = 0usize;
    while t.log2_abs() >= cut {
        p = p * &(a.one() - &t);
        if p.is_zero() {
            return Ok(SeriesResult::exact(p, k + 1));
        }
        t = t * q.q();
        k += 1;
        if k > policy.n_max {
            return Err(QError::no_convergence(k, "infinite product cutoff not reached"));
        }
    }
    let lt = t.log2_abs();
    let tail = if lt < -1000.0 {
        0.0
    } else {
        let at = lt.exp2();
        at / ((1.0 - q.q().to_f64()) * (1.0 - at))
    };
    let mag = p.to_f64().abs();
    Ok(SeriesResult {
        tail_estimate: mag * tail,
        converged: true,
        terms_used: k,
        trace: vec![p.to_f64()],
        value: p,
    })
}

/// Value of `(a;q)_∞`.
pub fn pinf<S: Scalar>(a: &S, q: &QBase<S>, policy: &Policy) -> QResult<S> {
    poch_infinite(a, q, policy).map(|r| r.value)
}

/// Product of `(a_i;q)_∞` over a list.
pub fn pinf_many<S: Scalar>(args: &[S], q: &QBase<S>, policy: &Policy) -> QResult<S> {
    let mut p = q.q().one();
    for a in args {
        p = p * &pinf(a, q, policy)?;
    }
    Ok(p)
}

/// `num_∞ / den_∞` with a pole check on the denominator.
pub fn pinf_ratio<S: Scalar>(num: &[S], den: &[S], q: &QBase<S>, policy: &Policy) -> QResult<S> {
    let n = pinf_many(num, q, policy)?;
    let d = pinf_many(den, q, policy)?;
    n.checked_div(&d, "infinite product in a denominator")
}

/// Gaussian binomial coefficient; zero outside `0 <= k <= n`.
pub fn qbinom<S: Scalar>(n: usize, k: i64, q: &QBase<S>) -> S {
    let one = q.q().one();
    if k < 0 || k as usize > n {
        return one.zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut num = one.clone();
    let mut den = one.clone();
    // q^{n-k+i} and q^i, i = 1..=k
    let mut qa = q.pow(n - k + 1);
    let mut qb = q.q().clone();
    for _ in 0..k {
        num = num * &(one.clone() - &qa);
        den = den * &(one.clone() - &qb);
        qa = qa * q.q();
        qb = qb * q.q();
    }
    num / &den
}

/// All `[n k]_q` for `k = 0..=n` via the Pascal rule.
pub fn qbinom_row<S: Scalar>(n: usize, q: &QBase<S>) -> Vec<S> {
    let one = q.q().one();
    let mut row = vec![one.clone()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        next.push(one.clone());
        let mut qk = q.q().clone();
        for k in 1..m {
            next.push(row[k - 1].clone() + &(qk.clone() * &row[k]));
            qk = qk * q.q();
        }
        next.push(one.clone());
        row = next;
    }
    row
}

/// Cauchy polynomial `(x - y)(x - qy)...(x - q^{n-1} y)`.
pub fn cauchy_poly<S: Scalar>(n: usize, x: &S, y: &S, q: &QBase<S>) -> S {
    let mut p = x.one();
    let mut t = y.clone();
    for _ in 0..n {
        p = p * &(x.clone() - &t);
        t = t * q.q();
    }
    p
}

/// Result of checking the splitting and reflection rules for one `(a, n, m)`.
#[derive(Clone, Debug)]
pub struct PochRatioCheck<S> {
    pub split_lhs: S,
    pub split_rhs: S,
    pub reflection: Option<(S, S)>,
}

impl<S: Scalar> PochRatioCheck<S> {
    /// Largest relative residual across the checked rules (zero when exact).
    pub fn max_rel_residual(&self) -> f64 {
        let mut worst = rel_residual(&self.split_lhs, &self.split_rhs);
        if let Some((l, r)) = &self.reflection {
            worst = worst.max(rel_residual(l, r));
        }
        worst
    }

    pub fn holds_exactly(&self) -> bool {
        self.split_lhs == self.split_rhs
            && self.reflection.as_ref().is_none_or(|(l, r)| l == r)
    }
}

fn rel_residual<S: Scalar>(l: &S, r: &S) -> f64 {
    let diff = (l.clone() - r).abs();
    if diff.is_zero() {
        return 0.0;
    }
    let scale = l.log2_abs().max(r.log2_abs());
    (diff.log2_abs() - scale).exp2()
}

/// Evaluate both sides of `(a;q)_{n+m} = (a;q)_n (aq^n;q)_m` and, when `a != 0`,
/// the reflection rule `(q/a;q)_n = (-a)^{-n} q^{C(n+1,2)} (aq^{-n};q)_∞ / (a;q)_∞`.
///
/// In the exact tower the infinite ratio is the finite product `(aq^{-n};q)_n`.
pub fn poch_ratio_identities_check<S: Scalar>(
    a: &S,
    q: &QBase<S>,
    n: usize,
    m: usize,
    policy: &Policy,
    with_reflection: bool,
) -> QResult<PochRatioCheck<S>> {
    let split_lhs = poch_finite(a, q, n + m);
    let aqn = a.clone() * &q.pow(n);
    let split_rhs = poch_finite(a, q, n) * &poch_finite(&aqn, q, m);
    let reflection = if with_reflection {
        if a.is_zero() {
            return Err(QError::domain("reflection rule needs a != 0"));
        }
        let lhs = poch_finite(&q.q().clone().checked_div(a, "q/a")?, q, n);
        let shifted = a.clone().checked_div(&q.pow(n), "a q^-n")?;
        let ratio = if S::is_exact() {
            poch_finite(&shifted, q, n)
        } else {
            pinf(&shifted, q, policy)?.checked_div(&pinf(a, q, policy)?, "(a;q)_inf")?
        };
        let pref = (-a.clone()).powi(-(n as i64))? * &q.pow(n * (n + 1) / 2);
        Some((lhs, pref * &ratio))
    } else {
        None
    };
    Ok(PochRatioCheck {
        split_lhs,
        split_rhs,
        reflection,
    })
}

/// Smallest `m >= 0` with `a = q^{-m}` exactly, if any.
pub fn exact_negative_power(a: &Rational, q: &Rational) -> Option<usize> {
    if *a <= 0 || *q <= 0 || *q >= 1 {
        return None;
    }
    let mut p = Rational::from(1);
    let mut m = 0usize;
    while p <= *a {
        if p == *a {
            return Some(m);
        }
        p /= q;
        m += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::Policy;

    fn rq(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn qb(n: i64, d: i64) -> QBase<Rational> {
        QBase::unchecked(rq(n, d))
    }

    #[test]
    fn finite_examples() {
        let q = qb(1, 2);
        assert_eq!(poch_finite(&rq(0, 1), &q, 5), rq(1, 1));
        assert_eq!(poch_finite(&rq(1, 2), &q, 2), rq(3, 8));
        assert_eq!(poch_finite(&rq(1, 2), &q, 0), rq(1, 1));
    }

    #[test]
    fn finite_q_argument() {
        // (q;q)_4 at q = 1/2
        let q = qb(1, 2);
        assert_eq!(poch_finite(&rq(1, 2), &q, 4), rq(315, 1024));
    }

    #[test]
    fn infinite_examples() {
        let p = Policy::default();
        let q = QBase::unchecked(0.5f64);
        assert_eq!(pinf(&0.0, &q, &p).unwrap(), 1.0);
        let v = pinf(&0.5, &q, &p).unwrap();
        assert!((v - 0.288_788_095_086_602_4).abs() < 1e-12 * v);
        assert_eq!(pinf(&1.0, &q, &p).unwrap(), 0.0);
        let e = poch_infinite(&rq(1, 3), &qb(1, 2), &p);
        assert!(matches!(e, Err(QError::ExactModeUnsupported(_))));
        assert_eq!(poch_infinite(&rq(0, 1), &qb(1, 2), &p).unwrap().value, rq(1, 1));
    }

    #[test]
    fn qbinom_examples() {
        let q = qb(1, 2);
        assert_eq!(qbinom(7, 0, &q), rq(1, 1));
        assert_eq!(qbinom(4, 2, &q), rq(35, 16));
        assert_eq!(qbinom(4, 5, &q), rq(0, 1));
        assert_eq!(qbinom(4, -1, &q), rq(0, 1));
        assert_eq!(qbinom_row(4, &q)[2], rq(35, 16));
    }

    #[test]
    fn cauchy_examples() {
        let q = qb(1, 2);
        assert_eq!(cauchy_poly(0, &rq(5, 1), &rq(3, 1), &q), rq(1, 1));
        assert_eq!(cauchy_poly(2, &rq(2, 1), &rq(1, 1), &q), rq(3, 2));
        assert_eq!(cauchy_poly(3, &rq(1, 1), &rq(0, 1), &q), rq(1, 1));
    }

    #[test]
    fn ratio_checks_exact() {
        let p = Policy::default();
        let c = poch_ratio_identities_check(&rq(1, 3), &qb(1, 2), 2, 3, &p, true).unwrap();
        assert!(c.holds_exactly());
        let c = poch_ratio_identities_check(&rq(1, 2), &qb(2, 3), 3, 0, &p, true).unwrap();
        assert!(c.holds_exactly());
        assert!(poch_ratio_identities_check(&rq(0, 1), &qb(1, 2), 2, 1, &p, true).is_err());
    }

    #[test]
    fn ratio_checks_float() {
        let p = Policy::default();
        let q = QBase::unchecked(0.6f64);
        let c = poch_ratio_identities_check(&-0.7, &q, 4, 3, &p, true).unwrap();
        assert!(c.max_rel_residual() < 1e-12, "{}", c.max_rel_residual());
    }

    #[test]
    fn negative_power_detection() {
        assert_eq!(exact_negative_power(&rq(8, 1), &rq(1, 2)), Some(3));
        assert_eq!(exact_negative_power(&rq(1, 1), &rq(1, 2)), Some(0));
        assert_eq!(exact_negative_power(&rq(6, 1), &rq(1, 2)), None);
        assert_eq!(exact_negative_power(&rq(1, 2), &rq(1, 2)), None);
    }
}
