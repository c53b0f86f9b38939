//! Generating functions, the q-binomial theorem and the Euler pair.

use super::params::{Args, Params};
use super::support::{product_result, working_policy};
use super::{side, Domain, Draw, IdentityDef, Slot};
use crate::error::QResult;
use crate::policy::Policy;
use crate::qcore::{phi_rs, sum_series, HyperSpec, SeriesResult, Termination};
use crate::scalar::Scalar;

const NOTHING: &[&str] = &[];

/// Adaptive `Σ_n t_n` with `t_0 = 1` and `t_n = t_{n-1} · ratio(n-1)`.
fn ratio_sum<S: Scalar>(
    proto: &S,
    policy: &Policy,
    mut ratio: impl FnMut(usize) -> QResult<S>,
) -> QResult<SeriesResult<S>> {
    let mut t = proto.one();
    sum_series(proto, &working_policy(proto, policy), Termination::Adaptive, |n| {
        if n > 0 {
            t = t.clone() * &ratio(n - 1)?;
        }
        Ok(t.clone())
    })
}

// Σ (a;q)_n z^n / (q;q)_n
pub fn qbinom_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (al, z, q) = (a.s("a"), a.s("z"), a.q());
    let one = z.one();
    ratio_sum(&one, pol, |n| {
        let qn = q.pow(n);
        let num = (one.clone() - &(al.clone() * &qn)) * &z;
        num.checked_div(&(one.clone() - &(qn * q.q())), "(q;q)_n")
    })
}

pub fn qbinom_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (al, z, q) = (a.s("a"), a.s("z"), a.q());
    product_result(&[al * &z], &[z], &q, pol)
}

pub fn euler_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (z, q) = (a.s("z"), a.q());
    let one = z.one();
    ratio_sum(&one, pol, |n| {
        z.clone().checked_div(&(one.clone() - &q.pow(n + 1)), "(q;q)_n")
    })
}

pub fn euler_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (z, q) = (a.s("z"), a.q());
    product_result(&[], &[z], &q, pol)
}

pub fn euler_inv_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (z, q) = (a.s("z"), a.q());
    let one = z.one();
    ratio_sum(&one, pol, |n| {
        (-(z.clone() * &q.pow(n))).checked_div(&(one.clone() - &q.pow(n + 1)), "(q;q)_n")
    })
}

pub fn euler_inv_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (z, q) = (a.s("z"), a.q());
    product_result(&[z], &[], &q, pol)
}

// Σ p_n(x,y) (λ;q)_n t^n / (q;q)_n
pub fn genfun_sa_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (lam, x, y, t, q) = (a.s("lambda"), a.s("x"), a.s("y"), a.s("t"), a.q());
    let one = x.one();
    ratio_sum(&one, pol, |n| {
        let qn = q.pow(n);
        let num = (x.clone() - &(y.clone() * &qn)) * &(one.clone() - &(lam.clone() * &qn)) * &t;
        num.checked_div(&(one.clone() - &(qn * q.q())), "(q;q)_n")
    })
}

pub fn genfun_sa_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (lam, x, y, t, q) = (a.s("lambda"), a.s("x"), a.s("y"), a.s("t"), a.q());
    let yx = y.checked_div(&x, "y/x")?;
    let spec = HyperSpec::new(vec![lam, yx], vec![x.zero()], &q, x * &t);
    phi_rs(&spec, pol)
}

pub fn genfun_cauchy_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (x, y, t, q) = (a.s("x"), a.s("y"), a.s("t"), a.q());
    let one = x.one();
    ratio_sum(&one, pol, |n| {
        let qn = q.pow(n);
        ((x.clone() - &(y.clone() * &qn)) * &t).checked_div(&(one.clone() - &(qn * q.q())), "(q;q)_n")
    })
}

pub fn genfun_cauchy_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (x, y, t, q) = (a.s("x"), a.s("y"), a.s("t"), a.q());
    product_result(&[y * &t], &[x * &t], &q, pol)
}

fn dom_z(d: &mut Domain<'_>) {
    let z = d.r("z");
    d.below_one("z", &z);
}

fn dom_xt(d: &mut Domain<'_>) {
    let xt = d.r("x") * d.r("t");
    d.below_one("xt", &xt);
}

fn dom_sa(d: &mut Domain<'_>) {
    let x = d.r("x");
    d.nonzero("x", &x);
    dom_xt(d);
}

type F64Side = fn(&Args<'_, f64>, &Policy) -> QResult<SeriesResult<f64>>;

/// Precision from `log2(Σ|t_n| / |value|)`. `Σ|t_n|` is bounded by the same
/// series with every parameter given the sign that makes all terms add up.
fn bound_bits(p: &Params, tol: f64, lhs: F64Side, rhs: F64Side, flip: &[(&str, bool)]) -> u32 {
    let pol = Policy::default();
    let mut bound = p.clone();
    for &(name, positive) in flip {
        let v = p.scalar(name).map(|v| v.clone().abs()).unwrap_or_default();
        bound.set_scalar(name, if positive { v } else { -v });
    }
    let mag = lhs(&Args::new(&bound, 0.0), &pol).map(|r| r.value.abs());
    let args = Args::new(p, 0.0);
    let value = [lhs(&args, &pol), rhs(&args, &pol)]
        .into_iter()
        .filter_map(|r| r.ok().map(|r| r.value.abs()))
        .fold(f64::INFINITY, f64::min);
    let loss = match mag {
        Ok(m) if value > 0.0 && m.is_finite() => (m / value).log2().max(0.0),
        _ => 64.0,
    };
    (14.0 + (1.0 / tol).log2() + loss).ceil() as u32
}

fn xt_box(p: &mut Params, _: &mut Draw) -> bool {
    (p.f("x") * p.f("t")).abs() <= 0.8
}

const Z: Slot = Slot::scalar("z", -0.9, 0.9);
const Q: Slot = Slot::scalar("q", 0.05, 0.9);

pub(super) fn defs(anchor: impl Fn(&str) -> &'static str) -> Vec<IdentityDef> {
    let base = |id: &'static str| IdentityDef {
        id,
        anchor: anchor(id),
        slots: vec![],
        exact_capable: false,
        default_tol: 1e-10,
        abs_floor: 0.0,
        notes: NOTHING,
        domain: dom_z,
        precision: |_, _| 53,
        shape: None,
        lhs: side!(qbinom_lhs),
        rhs: side!(qbinom_rhs),
    };
    vec![
        IdentityDef {
            slots: vec![
                Slot::scalar("lambda", -0.9, 0.9),
                Slot::away("x", -0.9, 0.9, 0.01),
                Slot::scalar("y", -0.9, 0.9),
                Slot::scalar("t", -0.9, 0.9),
                Q,
            ],
            domain: dom_sa,
            shape: Some(xt_box),
            lhs: side!(genfun_sa_lhs),
            rhs: side!(genfun_sa_rhs),
            precision: |p, tol| bound_bits(p, tol, genfun_sa_lhs, genfun_sa_rhs, &[("lambda", false), ("x", true), ("y", false), ("t", true)]),
            ..base("GENFUN_SA")
        },
        IdentityDef {
            slots: vec![
                Slot::scalar("x", -0.9, 0.9),
                Slot::scalar("y", -0.9, 0.9),
                Slot::scalar("t", -0.9, 0.9),
                Q,
            ],
            domain: dom_xt,
            shape: Some(xt_box),
            lhs: side!(genfun_cauchy_lhs),
            rhs: side!(genfun_cauchy_rhs),
            precision: |p, tol| bound_bits(p, tol, genfun_cauchy_lhs, genfun_cauchy_rhs, &[("x", true), ("y", false), ("t", true)]),
            ..base("GENFUN_CAUCHY")
        },
        IdentityDef {
            slots: vec![Slot::scalar("a", -0.9, 0.9), Z, Q],
            precision: |p, tol| bound_bits(p, tol, qbinom_lhs, qbinom_rhs, &[("a", false), ("z", true)]),
            ..base("QBINOM_THM")
        },
        IdentityDef {
            slots: vec![Z, Q],
            lhs: side!(euler_lhs),
            rhs: side!(euler_rhs),
            precision: |p, tol| bound_bits(p, tol, euler_lhs, euler_rhs, &[("z", true)]),
            ..base("EULER")
        },
        IdentityDef {
            slots: vec![Z, Q],
            domain: |_| {},
            lhs: side!(euler_inv_lhs),
            rhs: side!(euler_inv_rhs),
            precision: |p, tol| bound_bits(p, tol, euler_inv_lhs, euler_inv_rhs, &[("z", false)]),
            ..base("EULER_INV")
        },
    ]
}
