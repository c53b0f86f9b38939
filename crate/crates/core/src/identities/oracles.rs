//! Closed double-sum functions that solve the first seven-variable
//! q-difference equation. Variables are `(r, f, g, v, w, x, u)`; the
//! remaining parameters are fixed when the function is built.

use super::support::{conv_series, working_policy};
use crate::error::QResult;
use crate::policy::Policy;
use crate::qcore::{pinf_ratio, poch_finite, QBase, Termination};
use crate::qops::SevenPointFunc;
use crate::scalar::Scalar;

/// `c_{m+1}/c_m` for `c_m = (r,f,g;q)_m u^m / (v,w;q)_m`.
fn weight_step<S: Scalar>(p: &[S; 7], q: &QBase<S>, m: usize) -> QResult<S> {
    let one = p[0].one();
    let qm = q.pow(m);
    let mut num = p[6].clone();
    for a in &p[0..3] {
        num = num * &(one.clone() - &(a.clone() * &qm));
    }
    let mut den = one.clone();
    for d in &p[3..5] {
        den = den * &(one.clone() - &(d.clone() * &qm));
    }
    num.checked_div(&den, "(v,w;q)_m")
}

/// `(cx;q)_∞/(bx,x;q)_∞ · Σ_{j,i} (r,f,g)_{j+i} u^{j+i}/((q)_i (v,w)_{j+i}) · (c/b,x)_j b^j/(cx,q)_j`.
pub fn binomial_expansion_fn<'a, S: Scalar + 'a>(
    b: S,
    c: S,
    q: QBase<S>,
    pol: Policy,
) -> SevenPointFunc<'a, S> {
    SevenPointFunc::new("binomial expansion", move |p: &[S; 7]| {
        let x = &p[5];
        let one = x.one();
        let pol = working_policy(x, &pol);
        let pre = pinf_ratio(&[c.clone() * x], &[b.clone() * x, x.clone()], &q, &pol)?;
        let cx = c.clone() * x;
        let s = conv_series(
            &one,
            &pol,
            Termination::Adaptive,
            |m| weight_step(p, &q, m),
            |j| {
                let qj = q.pow(j);
                let num = (b.clone() - &(c.clone() * &qj)) * &(one.clone() - &(x.clone() * &qj));
                let den = (one.clone() - &(cx.clone() * &qj)) * &(one.clone() - &(qj * q.q()));
                num.checked_div(&den, "(cx,q;q)_j")
            },
            |i| one.clone().checked_div(&(one.clone() - &q.pow(i + 1)), "(q;q)_i"),
        )?;
        Ok(pre * &s.value)
    })
}

/// `(-y)^n q^{C(n,2)}/(y;q)_n · (xq^{1-n}/y;q)_∞/(x, qx/y;q)_∞` times
/// `Σ_{i,j} (r,f,g)_{j+i} u^{j+i}/((q)_i (v,w)_{j+i}) · (q^{1-n}/y, qx/y)_j/(xq^{1-n}/y, q)_j (q/y)^i`.
pub fn chu_expansion_fn<'a, S: Scalar + 'a>(
    n: usize,
    y: S,
    q: QBase<S>,
    pol: Policy,
) -> SevenPointFunc<'a, S> {
    SevenPointFunc::new("chu expansion", move |p: &[S; 7]| {
        let x = &p[5];
        let one = x.one();
        let pol = working_policy(x, &pol);
        let qy = q.q().clone().checked_div(&y, "y")?;
        let e1 = q.powi(1 - n as i64) / &y;
        let e2 = qy.clone() * x;
        let e3 = e1.clone() * x;
        let sign = if n % 2 == 0 { one.clone() } else { -one.clone() };
        let lead = (sign * &y.powi(n as i64)? * &q.tri(n)).checked_div(&poch_finite(&y, &q, n), "(y;q)_n")?;
        let pre = pinf_ratio(&[e3.clone()], &[x.clone(), e2.clone()], &q, &pol)?;
        let s = conv_series(
            &one,
            &pol,
            Termination::Adaptive,
            |m| weight_step(p, &q, m),
            |j| {
                let qj = q.pow(j);
                let num = (one.clone() - &(e1.clone() * &qj)) * &(one.clone() - &(e2.clone() * &qj));
                let den = (one.clone() - &(e3.clone() * &qj)) * &(one.clone() - &(qj * q.q()));
                num.checked_div(&den, "(xq^{1-n}/y,q;q)_j")
            },
            |i| qy.clone().checked_div(&(one.clone() - &q.pow(i + 1)), "(q;q)_i"),
        )?;
        Ok(lead * &pre * &s.value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::{diffeq_sides, DiffEq};

    fn point() -> [f64; 7] {
        [0.3, -0.2, 0.15, 0.25, -0.1, 0.2, 0.3]
    }

    #[test]
    fn binomial_expansion_solves_first_equation() {
        let q = QBase::unchecked(0.5);
        let f = binomial_expansion_fn(0.4, -0.3, q.clone(), Policy::default());
        let (l, r) = diffeq_sides(DiffEq::I, &f, &point(), &q).unwrap();
        assert!((l - r).abs() < 1e-12, "{l} vs {r}");
    }

    #[test]
    fn chu_expansion_solves_first_equation() {
        let q = QBase::unchecked(0.5);
        let g = chu_expansion_fn(3, 0.35, q.clone(), Policy::default());
        let (l, r) = diffeq_sides(DiffEq::I, &g, &point(), &q).unwrap();
        assert!((l - r).abs() < 1e-12, "{l} vs {r}");
    }

    #[test]
    fn zero_operator_argument_leaves_the_kernel() {
        let q = QBase::unchecked(0.5);
        let pol = Policy::default();
        let mut p = point();
        p[6] = 0.0;
        let f = binomial_expansion_fn(0.4, -0.3, q.clone(), pol.clone());
        let want = pinf_ratio(&[-0.3 * 0.2], &[0.4 * 0.2, 0.2], &q, &pol).unwrap();
        assert!((f.eval(&p).unwrap() - want).abs() < 1e-14);
    }
}
