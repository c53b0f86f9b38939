//! Andrews–Askey integral and its weighted extensions.

use rug::Rational;

use super::params::{Args, Params};
use super::support::working_policy;
use super::{side, Domain, Draw, IdentityDef, Slot};
use crate::error::QResult;
use crate::policy::Policy;
use crate::qcore::{phi_rs, pinf_ratio, HyperSpec, QBase, SeriesResult};
use crate::qintegral::{aa_integrand, aa_lhs, aa_rhs, AaParams, AaWeight};
use crate::scalar::Scalar;

fn kernel<S: Scalar>(a: &Args<'_, S>) -> AaParams<S> {
    AaParams {
        a: a.s("a"),
        b: a.s("b"),
        c: a.s("c"),
        d: a.s("d"),
    }
}

fn order<S: Scalar>(a: &Args<'_, S>, name: &str) -> (usize, S, QBase<S>) {
    let q = a.q();
    let n = a.n(name);
    (n, q.powi(-(n as i64)), q)
}

fn weighted<S: Scalar>(a: &Args<'_, S>, w: AaWeight<S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    aa_lhs(&kernel(a), &a.q(), Some(&w), &working_policy(a.proto(), pol))
}

fn closed<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<S> {
    aa_rhs(&kernel(a), &a.q(), pol)
}

pub fn aa_integral<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    aa_lhs(&kernel(a), &a.q(), None, &working_policy(a.proto(), pol))
}

pub fn aa_closed<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    Ok(SeriesResult::exact(closed(a, pol)?, 0))
}

pub fn prop42a_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let w = AaWeight::Hdqd { order: a.n("N"), w: a.s("w"), v: a.s("v") };
    weighted(a, w, pol)
}

// AA · (qw/v, qr/v)_∞/(qwr/v, q/v)_∞ · 2Φ1[w, r; v; q/(bc)]
pub fn prop42a_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (n, r, q) = order(a, "N");
    let (w, v) = (a.s("w"), a.s("v"));
    let qv = q.q().clone().checked_div(&v, "v")?;
    let ratio = pinf_ratio(
        &[qv.clone() * &w, qv.clone() * &r],
        &[qv.clone() * &w * &r, qv],
        &q,
        pol,
    )?;
    let z = q.q().clone().checked_div(&(a.s("b") * &a.s("c")), "bc")?;
    let phi = phi_rs(&HyperSpec::new(vec![w, r], vec![v], &q, z).terminating_at(n), pol)?;
    Ok(SeriesResult::exact(closed(a, pol)? * &ratio * &phi.value, phi.terms_used))
}

pub fn prop42b_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let w = AaWeight::Hdqd1 { order: a.n("N"), w: a.s("w"), v: a.s("v") };
    weighted(a, w, pol)
}

// AA · (v/(wr), v)_∞/(v/w, v/r)_∞ · 2Φ1[w, r; v; vbc/(wr)]
pub fn prop42b_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (n, r, q) = order(a, "N");
    let (w, v) = (a.s("w"), a.s("v"));
    let vw = v.clone().checked_div(&w, "w")?;
    let vr = v.clone() / &r;
    let ratio = pinf_ratio(&[vw.clone() / &r, v.clone()], &[vw.clone(), vr.clone()], &q, pol)?;
    let z = vw / &r * &a.s("b") * &a.s("c");
    let phi = phi_rs(&HyperSpec::new(vec![w, r], vec![v], &q, z).terminating_at(n), pol)?;
    Ok(SeriesResult::exact(closed(a, pol)? * &ratio * &phi.value, phi.terms_used))
}

fn fgvw<S: Scalar>(a: &Args<'_, S>) -> (S, S, S, S) {
    (a.s("f"), a.s("g"), a.s("v"), a.s("w"))
}

pub fn thm43_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (f, g, v, w) = fgvw(a);
    weighted(a, AaWeight::Gqdqd { order: a.n("M"), f, g, v, w }, pol)
}

// AA · 3Φ2[r,f,g; v,w; q/(bc)]
pub fn thm43_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (m, r, q) = order(a, "M");
    let (f, g, v, w) = fgvw(a);
    let z = q.q().clone().checked_div(&(a.s("b") * &a.s("c")), "bc")?;
    let phi = phi_rs(&HyperSpec::new(vec![r, f, g], vec![v, w], &q, z).terminating_at(m), pol)?;
    Ok(SeriesResult::exact(closed(a, pol)? * &phi.value, phi.terms_used))
}

pub fn thm44_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (f, g, v, w) = fgvw(a);
    let wt = AaWeight::Vdqd { order: a.n("M"), f, g, v, w, negated_inner: false };
    weighted(a, wt, pol)
}

// AA · 3Φ3[r,f,g; v,w,0; vw·bc/(rfg)]
pub fn thm44_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (m, r, q) = order(a, "M");
    let (f, g, v, w) = fgvw(a);
    let big = (v.clone() * &w).checked_div(&(r.clone() * &f * &g), "rfg")?;
    let z = big * &a.s("b") * &a.s("c");
    let zero = f.zero();
    let phi = phi_rs(&HyperSpec::new(vec![r, f, g], vec![v, w, zero], &q, z).terminating_at(m), pol)?;
    Ok(SeriesResult::exact(closed(a, pol)? * &phi.value, phi.terms_used))
}

fn dom_kernel(d: &mut Domain<'_>) {
    let (a, b, c, dd) = (d.r("a"), d.r("b"), d.r("c"), d.r("d"));
    d.nonzero("c", &c);
    d.nonzero("d", &dd);
    for (label, x, y) in [("ac", &a, &c), ("ad", &a, &dd), ("bc", &b, &c), ("bd", &b, &dd)] {
        d.below_one(label, &(x.clone() * y));
    }
}

/// Lattice points where `(q/(at);q)_k` vanishes.
fn dom_at_poles(d: &mut Domain<'_>) {
    let (a, c, dd) = (d.r("a"), d.r("c"), d.r("d"));
    d.nonzero("a", &a);
    if !d.is_clean() {
        return;
    }
    d.not_q_power("ac", &(a.clone() * &c), 1..);
    d.not_q_power("ad", &(a * dd), 1..);
}

fn dom_vw(d: &mut Domain<'_>, len: i64) {
    for name in ["v", "w"] {
        let v = d.r(name);
        d.poch_nonzero(name, &v, Some(len));
    }
}

fn dom_prop42a(d: &mut Domain<'_>) {
    dom_kernel(d);
    let (b, v, w, q) = (d.r("b"), d.r("v"), d.r("w"), d.q());
    let n = d.n("N");
    d.nonzero("b", &b);
    d.nonzero("v", &v);
    if !d.is_clean() {
        return;
    }
    let r = q_pow(&q, -n);
    let qwr = q.clone() * &w * &r / &v;
    d.below_one("q/v", &(q / &v));
    d.below_one("qwr/v", &qwr);
    d.poch_nonzero("v", &v, Some(n));
}

fn dom_prop42b(d: &mut Domain<'_>) {
    dom_kernel(d);
    dom_at_poles(d);
    let (v, w, q) = (d.r("v"), d.r("w"), d.q());
    let n = d.n("N");
    d.nonzero("w", &w);
    if !d.is_clean() {
        return;
    }
    let r = q_pow(&q, -n);
    d.below_one("v/w", &(v.clone() / &w));
    d.below_one("v/r", &(v.clone() / &r));
    d.poch_nonzero("v", &v, Some(n));
    d.poch_nonzero("qrw/v", &(q * &r * &w / &v), Some(n));
}

fn dom_thm43(d: &mut Domain<'_>) {
    dom_kernel(d);
    let (b, q) = (d.r("b"), d.q());
    d.nonzero("b", &b);
    if !d.is_clean() {
        return;
    }
    let bc = b * d.r("c");
    d.below_one("q/(bc)", &(q / bc));
    let m = d.n("M");
    dom_vw(d, m);
}

fn dom_thm44(d: &mut Domain<'_>) {
    dom_kernel(d);
    dom_at_poles(d);
    let (f, g) = (d.r("f"), d.r("g"));
    d.nonzero("f", &f);
    d.nonzero("g", &g);
    let m = d.n("M");
    dom_vw(d, m);
}

fn q_pow(q: &Rational, e: i64) -> Rational {
    let base = if e < 0 { Rational::from(q.recip_ref()) } else { q.clone() };
    let mut out = Rational::from(1);
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    out
}

type Weight = fn(&Args<'_, f64>) -> AaWeight<f64>;
type Rhs = fn(&Args<'_, f64>, &Policy) -> QResult<SeriesResult<f64>>;

/// Bits lost between the two lattice sums and the value they combine to,
/// estimated in `f64`.
fn cancel_bits(p: &Params, weight: Option<Weight>, rhs: Rhs) -> f64 {
    let pol = Policy::default();
    let a = Args::new(p, 0.0f64);
    let (k, q) = (kernel(&a), a.q());
    let w = weight.map(|f| f(&a));
    let mut mag = 0.0;
    for end in [k.c, k.d] {
        let mut t = end;
        let mut qn = 1.0;
        while qn > 1e-18 {
            if let Ok(v) = aa_integrand(&t, &kernel(&a), &q, w.as_ref(), &pol) {
                mag += (end * qn * v).abs();
            }
            t *= q.q();
            qn *= q.q();
        }
    }
    let value = rhs(&a, &pol).map(|r| r.value.abs()).unwrap_or(0.0);
    if !(value > 0.0) || !value.is_finite() || !mag.is_finite() {
        return 64.0;
    }
    (mag * (1.0 - q.q()) / value).log2().max(0.0)
}

fn bits_for(order: usize, p: &Params, tol: f64, weight: Option<Weight>, rhs: Rhs) -> u32 {
    let lq = (1.0 / p.f("q")).log2();
    let n = order as f64;
    let growth = 2.0 * n * n * lq;
    (20.0 + (1.0 / tol).log2() + growth + cancel_bits(p, weight, rhs)).ceil() as u32
}

fn aa_bits(p: &Params, tol: f64) -> u32 {
    bits_for(0, p, tol, None, aa_closed::<f64>)
}

fn prop42a_bits(p: &Params, tol: f64) -> u32 {
    let w: Weight = |a| AaWeight::Hdqd { order: a.n("N"), w: a.s("w"), v: a.s("v") };
    bits_for(p.u("N"), p, tol, Some(w), prop42a_rhs::<f64>)
}

fn prop42b_bits(p: &Params, tol: f64) -> u32 {
    let w: Weight = |a| AaWeight::Hdqd1 { order: a.n("N"), w: a.s("w"), v: a.s("v") };
    bits_for(p.u("N"), p, tol, Some(w), prop42b_rhs::<f64>)
}

fn thm43_bits(p: &Params, tol: f64) -> u32 {
    let w: Weight = |a| {
        let (f, g, v, w) = fgvw(a);
        AaWeight::Gqdqd { order: a.n("M"), f, g, v, w }
    };
    bits_for(p.u("M"), p, tol, Some(w), thm43_rhs::<f64>)
}

fn thm44_bits(p: &Params, tol: f64) -> u32 {
    let w: Weight = |a| {
        let (f, g, v, w) = fgvw(a);
        AaWeight::Vdqd { order: a.n("M"), f, g, v, w, negated_inner: false }
    };
    bits_for(p.u("M"), p, tol, Some(w), thm44_rhs::<f64>)
}

fn ratio(draw: &mut Draw, lo: f64, hi: f64, scale: f64) -> Rational {
    draw.signed(lo, hi) * Rational::from_f64(scale).unwrap_or_default()
}

fn shape_prop42a(p: &mut Params, draw: &mut Draw) -> bool {
    let (q, n) = (p.f("q"), p.u("N"));
    let v = ratio(draw, 1.1, 3.0, q);
    let w = ratio(draw, 0.05, 0.85, v.to_f64().abs() * q.powi(n as i32 - 1));
    p.set_scalar("v", v);
    p.set_scalar("w", w);
    true
}

fn shape_prop42b(p: &mut Params, draw: &mut Draw) -> bool {
    let (q, n) = (p.f("q"), p.u("N"));
    let v = ratio(draw, 0.05, 0.85, q.powi(n as i32));
    let w = ratio(draw, 1.2, 4.0, v.to_f64().abs());
    p.set_scalar("v", v);
    p.set_scalar("w", w);
    true
}

fn shape_thm43(p: &mut Params, draw: &mut Draw) -> bool {
    let q = p.f("q");
    let c = p.f("c").abs();
    if 1.1 * q >= 0.9 {
        return false;
    }
    let b = ratio(draw, 1.1 * q / c, 0.9 / c, 1.0);
    p.set_scalar("b", b);
    true
}

pub(super) fn defs(anchor: impl Fn(&str) -> &'static str) -> Vec<IdentityDef> {
    let kernel_slots = || {
        vec![
            Slot::away("a", -0.9, 0.9, 0.05),
            Slot::scalar("b", -0.9, 0.9),
            Slot::away("c", -1.0, 1.0, 0.2),
            Slot::away("d", -1.0, 1.0, 0.2),
            Slot::scalar("q", 0.2, 0.8),
        ]
    };
    let with = |extra: Vec<Slot>| {
        let mut s = kernel_slots();
        s.extend(extra);
        s
    };
    let base = |id: &'static str| IdentityDef {
        id,
        anchor: anchor(id),
        slots: kernel_slots(),
        exact_capable: false,
        default_tol: 1e-7,
        abs_floor: 1e-12,
        notes: &[],
        domain: dom_kernel,
        precision: aa_bits,
        shape: None,
        lhs: side!(aa_integral),
        rhs: side!(aa_closed),
    };
    let fgvw_slots = || {
        vec![
            Slot::away("f", -0.9, 0.9, 0.1),
            Slot::away("g", -0.9, 0.9, 0.1),
            Slot::scalar("v", -0.9, 0.9),
            Slot::scalar("w", -0.9, 0.9),
            Slot::int("M", (1, 8), (1, 6)),
        ]
    };
    let vw_slots = || {
        vec![
            Slot::scalar("v", -1.0, 1.0),
            Slot::scalar("w", -1.0, 1.0),
            Slot::int("N", (1, 8), (1, 6)),
        ]
    };
    vec![
        IdentityDef { default_tol: 1e-9, ..base("AA") },
        IdentityDef {
            slots: with(vw_slots()),
            domain: dom_prop42a,
            precision: prop42a_bits,
            shape: Some(shape_prop42a),
            lhs: side!(prop42a_lhs),
            rhs: side!(prop42a_rhs),
            ..base("PROP4_2a")
        },
        IdentityDef {
            slots: with(vw_slots()),
            domain: dom_prop42b,
            precision: prop42b_bits,
            shape: Some(shape_prop42b),
            lhs: side!(prop42b_lhs),
            rhs: side!(prop42b_rhs),
            ..base("PROP4_2b")
        },
        IdentityDef {
            slots: {
                let mut s = with(fgvw_slots());
                for slot in &mut s {
                    match slot.name {
                        "q" => *slot = Slot::scalar("q", 0.2, 0.6),
                        "M" => *slot = Slot::int("M", (1, 8), (1, 4)),
                        _ => {}
                    }
                }
                s
            },
            domain: dom_thm43,
            precision: thm43_bits,
            shape: Some(shape_thm43),
            lhs: side!(thm43_lhs),
            rhs: side!(thm43_rhs),
            ..base("THM4_3")
        },
        IdentityDef {
            slots: with(fgvw_slots()),
            domain: dom_thm44,
            notes: &["inner 3Φ3 argument is +vw/(rfg); the negated argument fails"],
            precision: thm44_bits,
            lhs: side!(thm44_lhs),
            rhs: side!(thm44_rhs),
            ..base("THM4_4")
        },
    ]
}
