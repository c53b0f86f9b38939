//! Jackson q-integral on `[c, d]` and the Andrews–Askey integrand family.

use crate::error::{QError, QResult};
use crate::policy::Policy;
use crate::qcore::{
    phi_rs, pinf_ratio, poch_finite, sum_series, HyperSpec, QBase, SeriesResult, Termination,
};
use crate::scalar::Scalar;

type Eval<'a, S> = dyn Fn(&S) -> QResult<S> + Send + Sync + 'a;

/// A labelled integrand.
pub struct QIntegrand<'a, S> {
    pub label: String,
    eval: Box<Eval<'a, S>>,
}

impl<'a, S: Scalar> QIntegrand<'a, S> {
    pub fn new(label: impl Into<String>, f: impl Fn(&S) -> QResult<S> + Send + Sync + 'a) -> Self {
        QIntegrand {
            label: label.into(),
            eval: Box::new(f),
        }
    }

    pub fn eval(&self, t: &S) -> QResult<S> {
        (self.eval)(t)
    }
}

/// `(1-q) [ d Σ q^n f(dq^n) - c Σ q^n f(cq^n) ]`.
pub fn jackson_integral<S: Scalar>(
    f: &QIntegrand<'_, S>,
    c: &S,
    d: &S,
    q: &QBase<S>,
    policy: &Policy,
) -> QResult<SeriesResult<S>> {
    if S::is_exact() {
        return Err(QError::ExactModeUnsupported("a Jackson integral".into()));
    }
    let lattice = |end: &S| -> QResult<SeriesResult<S>> {
        if end.is_zero() {
            return Ok(SeriesResult::exact(end.zero(), 0));
        }
        let mut qn = end.one();
        let mut t = end.clone();
        sum_series(end, policy, Termination::Adaptive, |n| {
            if n > 0 {
                qn = qn.clone() * q.q();
                t = t.clone() * q.q();
            }
            Ok(qn.clone() * &f.eval(&t)?)
        })
    };
    let upper = lattice(d)?;
    let lower = lattice(c)?;
    let w = d.one() - q.q();
    let value = w.clone() * &(d.clone() * &upper.value - &(c.clone() * &lower.value));
    let wf = w.to_f64().abs();
    let tail = wf * (d.to_f64().abs() * upper.tail_estimate + c.to_f64().abs() * lower.tail_estimate);
    let trace = upper
        .trace
        .iter()
        .map(|s| wf * d.to_f64() * s - wf * c.to_f64() * lower.value.to_f64())
        .collect();
    Ok(SeriesResult {
        value,
        terms_used: upper.terms_used + lower.terms_used,
        tail_estimate: tail,
        converged: true,
        trace,
    })
}

/// The four parameters of the Andrews–Askey kernel.
#[derive(Clone, Debug)]
pub struct AaParams<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

/// Inner-sum weights multiplying the kernel. Every weight terminates: `order`
/// is the `N` or `M` with `r = q^{-order}` (`order = 0` gives `r = 1`).
#[derive(Clone, Debug)]
pub enum AaWeight<S> {
    /// `4Φ2[r, w, c/t, abcd; ac, qwr/v; q, qt/(vbcd)]`
    Hdqd { order: usize, w: S, v: S },
    /// `Σ_k (r, w, c/t, q/(ad);q)_k q^k / (q/(at), qrw/v, q;q)_k`
    Hdqd1 { order: usize, w: S, v: S },
    /// `Σ_k (r,f,g,c/t,abcd;q)_k (qt/(bcd))^k / (v,w,ac,q;q)_k · 3Φ2[rq^k,fq^k,gq^k; vq^k,wq^k; q, q]`
    Gqdqd { order: usize, f: S, g: S, v: S, w: S },
    /// `Σ_k (r,f,g,c/t,q/(ad);q)_k Z^k / (v,w,q/(at),q;q)_k · 3Φ3[rq^k,fq^k,gq^k; vq^k,wq^k,0; q, sign·Z]`
    /// with `Z = vw/(rfg)`; `negated_inner` selects `sign = -1`.
    Vdqd { order: usize, f: S, g: S, v: S, w: S, negated_inner: bool },
}

impl<S: Scalar> AaWeight<S> {
    pub fn order(&self) -> usize {
        match self {
            AaWeight::Hdqd { order, .. }
            | AaWeight::Hdqd1 { order, .. }
            | AaWeight::Gqdqd { order, .. }
            | AaWeight::Vdqd { order, .. } => *order,
        }
    }

    /// Value of the weight at lattice point `t`.
    pub fn eval(&self, t: &S, p: &AaParams<S>, q: &QBase<S>, policy: &Policy) -> QResult<S> {
        let order = self.order();
        let r = q.powi(-(order as i64));
        let one = t.one();
        let ct = p.c.clone().checked_div(t, "c/t")?;
        let abcd = p.a.clone() * &p.b * &p.c * &p.d;
        match self {
            AaWeight::Hdqd { w, v, .. } => {
                let den1 = (q.q().clone() * w * &r).checked_div(v, "v")?;
                let z = (q.q().clone() * t).checked_div(&(v.clone() * &p.b * &p.c * &p.d), "v b c d")?;
                let spec = HyperSpec::new(
                    vec![r.clone(), w.clone(), ct, abcd],
                    vec![p.a.clone() * &p.c, den1],
                    q,
                    z,
                )
                .terminating_at(order);
                Ok(phi_rs(&spec, policy)?.value)
            }
            AaWeight::Hdqd1 { w, v, .. } => {
                let qad = q.q().clone().checked_div(&(p.a.clone() * &p.d), "q/(ad)")?;
                let qat = q.q().clone().checked_div(&(p.a.clone() * t), "q/(at)")?;
                let den2 = (q.q().clone() * &r * w).checked_div(v, "v")?;
                let spec = HyperSpec::new(
                    vec![r.clone(), w.clone(), ct, qad],
                    vec![qat, den2, one.zero()],
                    q,
                    q.q().clone(),
                )
                .terminating_at(order);
                Ok(phi_rs(&spec, policy)?.value)
            }
            AaWeight::Gqdqd { f, g, v, w, .. } => {
                let x = (q.q().clone() * t).checked_div(&(p.b.clone() * &p.c * &p.d), "bcd")?;
                let ac = p.a.clone() * &p.c;
                let mut total = one.zero();
                for k in 0..=order {
                    let num = poch_finite(&r, q, k)
                        * &poch_finite(f, q, k)
                        * &poch_finite(g, q, k)
                        * &poch_finite(&ct, q, k)
                        * &poch_finite(&abcd, q, k);
                    let den = poch_finite(v, q, k)
                        * &poch_finite(w, q, k)
                        * &poch_finite(&ac, q, k)
                        * &poch_finite(q.q(), q, k);
                    let qk = q.pow(k);
                    let inner = HyperSpec::new(
                        vec![r.clone() * &qk, f.clone() * &qk, g.clone() * &qk],
                        vec![v.clone() * &qk, w.clone() * &qk],
                        q,
                        q.q().clone(),
                    )
                    .terminating_at(order - k);
                    let term = num.checked_div(&den, "(v,w,ac,q;q)_k")?
                        * &x.powi(k as i64)?
                        * &phi_rs(&inner, policy)?.value;
                    total = total + &term;
                }
                Ok(total)
            }
            AaWeight::Vdqd {
                f,
                g,
                v,
                w,
                negated_inner,
                ..
            } => {
                let z = (v.clone() * w).checked_div(&(r.clone() * f * g), "rfg")?;
                let inner_z = if *negated_inner { -z.clone() } else { z.clone() };
                let qad = q.q().clone().checked_div(&(p.a.clone() * &p.d), "q/(ad)")?;
                let qat = q.q().clone().checked_div(&(p.a.clone() * t), "q/(at)")?;
                let mut total = one.zero();
                for k in 0..=order {
                    let num = poch_finite(&r, q, k)
                        * &poch_finite(f, q, k)
                        * &poch_finite(g, q, k)
                        * &poch_finite(&ct, q, k)
                        * &poch_finite(&qad, q, k);
                    let den = poch_finite(v, q, k)
                        * &poch_finite(w, q, k)
                        * &poch_finite(&qat, q, k)
                        * &poch_finite(q.q(), q, k);
                    let qk = q.pow(k);
                    let inner = HyperSpec::new(
                        vec![r.clone() * &qk, f.clone() * &qk, g.clone() * &qk],
                        vec![v.clone() * &qk, w.clone() * &qk, one.zero()],
                        q,
                        inner_z.clone(),
                    )
                    .terminating_at(order - k);
                    let term = num.checked_div(&den, "(v,w,q/(at),q;q)_k")?
                        * &z.powi(k as i64)?
                        * &phi_rs(&inner, policy)?.value;
                    total = total + &term;
                }
                Ok(total)
            }
        }
    }
}

/// `(qt/c, qt/d;q)_∞ / (at, bt;q)_∞`, times the weight when one is given.
pub fn aa_integrand<S: Scalar>(
    t: &S,
    p: &AaParams<S>,
    q: &QBase<S>,
    weight: Option<&AaWeight<S>>,
    policy: &Policy,
) -> QResult<S> {
    if p.c.is_zero() || p.d.is_zero() {
        return Err(QError::domain("endpoints c and d must be nonzero"));
    }
    let qt = q.q().clone() * t;
    let base = pinf_ratio(
        &[qt.clone() / &p.c, qt / &p.d],
        &[p.a.clone() * t, p.b.clone() * t],
        q,
        policy,
    )?;
    match weight {
        None => Ok(base),
        Some(w) => Ok(base * &w.eval(t, p, q, policy)?),
    }
}

/// `d(1-q)(q, dq/c, c/d, abcd;q)_∞ / (ac, ad, bc, bd;q)_∞`.
pub fn aa_rhs<S: Scalar>(p: &AaParams<S>, q: &QBase<S>, policy: &Policy) -> QResult<S> {
    if p.c.is_zero() || p.d.is_zero() {
        return Err(QError::domain("endpoints c and d must be nonzero"));
    }
    let pairs = [
        p.a.clone() * &p.c,
        p.a.clone() * &p.d,
        p.b.clone() * &p.c,
        p.b.clone() * &p.d,
    ];
    if let Some(bad) = pairs.iter().find(|x| x.to_f64().abs() >= 1.0) {
        return Err(QError::domain(format!(
            "|{}| must be below 1 in the Andrews–Askey evaluation",
            bad.render()
        )));
    }
    let num = [
        q.q().clone(),
        p.d.clone() * q.q() / &p.c,
        p.c.clone() / &p.d,
        p.a.clone() * &p.b * &p.c * &p.d,
    ];
    let ratio = pinf_ratio(&num, &pairs, q, policy)?;
    Ok(p.d.clone() * &(p.d.one() - q.q()) * &ratio)
}

/// Jackson integral of the (optionally weighted) kernel over `[c, d]`.
pub fn aa_lhs<S: Scalar>(
    p: &AaParams<S>,
    q: &QBase<S>,
    weight: Option<&AaWeight<S>>,
    policy: &Policy,
) -> QResult<SeriesResult<S>> {
    let f = QIntegrand::new("andrews-askey kernel", |t: &S| aa_integrand(t, p, q, weight, policy));
    jackson_integral(&f, &p.c, &p.d, q, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::pinf;

    fn q(v: f64) -> QBase<f64> {
        QBase::unchecked(v)
    }

    #[test]
    fn jackson_examples() {
        let pol = Policy::default();
        let one = QIntegrand::new("1", |_: &f64| Ok(1.0));
        let v = jackson_integral(&one, &0.0, &0.7, &q(0.5), &pol).unwrap().value;
        assert!((v - 0.7).abs() < 1e-11);
        let id = QIntegrand::new("t", |t: &f64| Ok(*t));
        let v = jackson_integral(&id, &0.0, &1.0, &q(0.5), &pol).unwrap().value;
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn jackson_additivity_and_linearity() {
        let pol = Policy::default();
        let sq = QIntegrand::new("t^2", |t: &f64| Ok(t * t));
        let (c, d) = (-0.4, 0.9);
        let whole = jackson_integral(&sq, &c, &d, &q(0.6), &pol).unwrap().value;
        let upper = jackson_integral(&sq, &0.0, &d, &q(0.6), &pol).unwrap().value;
        let lower = jackson_integral(&sq, &0.0, &c, &q(0.6), &pol).unwrap().value;
        assert!((whole - (upper - lower)).abs() < 1e-14);
        let mix = QIntegrand::new("2t^2-3t", |t: &f64| Ok(2.0 * t * t - 3.0 * t));
        let id = QIntegrand::new("t", |t: &f64| Ok(*t));
        let lin = jackson_integral(&mix, &c, &d, &q(0.6), &pol).unwrap().value;
        let parts = 2.0 * whole - 3.0 * jackson_integral(&id, &c, &d, &q(0.6), &pol).unwrap().value;
        assert!((lin - parts).abs() < 1e-13 * lin.abs().max(1.0));
    }

    #[test]
    fn integrand_at_lower_endpoint() {
        let pol = Policy::default();
        let p = AaParams { a: 0.3, b: -0.2, c: 0.5, d: 0.8 };
        let v = aa_integrand(&p.c, &p, &q(0.5), None, &pol).unwrap();
        let expect = pinf(&0.5, &q(0.5), &pol).unwrap() * pinf(&(0.5 * 0.5 / 0.8), &q(0.5), &pol).unwrap()
            / (pinf(&0.15, &q(0.5), &pol).unwrap() * pinf(&-0.1, &q(0.5), &pol).unwrap());
        assert!((v - expect).abs() < 1e-14 * expect.abs());
    }

    #[test]
    fn weight_with_r_one_is_one() {
        let pol = Policy::default();
        let p = AaParams { a: 0.3, b: -0.2, c: 0.5, d: 0.8 };
        let qq = q(0.5);
        for w in [
            AaWeight::Gqdqd { order: 0, f: 0.2, g: -0.3, v: 0.4, w: 0.1 },
            AaWeight::Vdqd { order: 0, f: 0.2, g: -0.3, v: 0.4, w: 0.1, negated_inner: false },
            AaWeight::Hdqd { order: 0, w: 0.2, v: 3.0 },
            AaWeight::Hdqd1 { order: 0, w: 3.0, v: 0.2 },
        ] {
            assert_eq!(w.eval(&0.37, &p, &qq, &pol).unwrap(), 1.0);
        }
    }

    #[test]
    fn andrews_askey_zero_parameters() {
        let pol = Policy::default();
        let p = AaParams { a: 0.0, b: 0.0, c: 1.0 / 3.0, d: 0.5 };
        let qq = q(0.5);
        let rhs = aa_rhs(&p, &qq, &pol).unwrap();
        let expect = 0.5 * 0.5
            * pinf(&0.5, &qq, &pol).unwrap()
            * pinf(&0.75, &qq, &pol).unwrap()
            * pinf(&(2.0 / 3.0), &qq, &pol).unwrap();
        assert!((rhs - expect).abs() < 1e-15 * expect);
        let lhs = aa_lhs(&p, &qq, None, &pol).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-10 * rhs.abs());
    }

    #[test]
    fn degenerate_endpoint_vanishes() {
        let pol = Policy::default();
        let qq = q(0.5);
        let p = AaParams { a: 0.2, b: 0.3, c: 0.5 * 0.6, d: 0.6 };
        assert!(aa_rhs(&p, &qq, &pol).unwrap().abs() < 1e-12);
        assert!(aa_lhs(&p, &qq, None, &pol).unwrap().value.abs() < 1e-12);
    }
}
