//! Operator series applied term by term against their closed double sums.

use super::params::{Args, Params};
use super::{side, Domain, IdentityDef, Slot};
use crate::error::QResult;
use crate::policy::Policy;
use crate::qcore::{pinf_ratio, SeriesResult};
use crate::qops::{
    cor14_closed_form, lattice_bits, operator_apply_bruteforce, thm13_closed_form, FuncHandle,
    OpKind, OperatorSpec, Thm13Params,
};
use crate::scalar::Scalar;

fn spec<S: Scalar>(a: &Args<'_, S>, kind: OpKind, y: S) -> OperatorSpec<S> {
    OperatorSpec {
        kind,
        num: [a.s("r"), a.s("f"), a.s("g")],
        den: [a.s("v"), a.s("w")],
        y,
        truncation: a.n("N"),
    }
}

fn thm13_params<S: Scalar>(a: &Args<'_, S>) -> Thm13Params<S> {
    Thm13Params {
        r: a.s("r"),
        f: a.s("f"),
        g: a.s("g"),
        v: a.s("v"),
        w: a.s("w"),
        u: a.s("u"),
        a: a.s("a"),
        s: a.s("s"),
        z: a.s("z"),
        t: a.s("t"),
    }
}

pub fn thm13_t_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (s, z, t, q) = (a.s("s"), a.s("z"), a.s("t"), a.q());
    let kernel = FuncHandle::new("(xs)/(xz,xt)", |x: &S| {
        pinf_ratio(&[x.clone() * &s], &[x.clone() * &z, x.clone() * &t], &q, pol)
    });
    operator_apply_bruteforce(&spec(a, OpKind::T, a.s("u")), &kernel, &a.s("a"), &q, pol)
}

pub fn thm13_t_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    thm13_closed_form(OpKind::T, &thm13_params(a), &a.q(), pol)
}

pub fn thm13_e_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (s, z, t, q) = (a.s("s"), a.s("z"), a.s("t"), a.q());
    let kernel = FuncHandle::new("(xz,xt)/(xs)", |x: &S| {
        pinf_ratio(&[x.clone() * &z, x.clone() * &t], &[x.clone() * &s], &q, pol)
    });
    operator_apply_bruteforce(&spec(a, OpKind::E, a.s("u")), &kernel, &a.s("a"), &q, pol)
}

pub fn thm13_e_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    thm13_closed_form(OpKind::E, &thm13_params(a), &a.q(), pol)
}

pub fn cor14_t_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (x, q) = (a.s("x"), a.q());
    let kernel = FuncHandle::new("1/(xs)", |s: &S| pinf_ratio(&[], &[x.clone() * s], &q, pol));
    operator_apply_bruteforce(&spec(a, OpKind::T, a.s("u")), &kernel, &a.s("s"), &q, pol)
}

pub fn cor14_e_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (x, q) = (a.s("x"), a.q());
    let kernel = FuncHandle::new("(xs)", |s: &S| pinf_ratio(&[x.clone() * s], &[], &q, pol));
    operator_apply_bruteforce(&spec(a, OpKind::E, -a.s("u")), &kernel, &a.s("s"), &q, pol)
}

fn cor14<S: Scalar>(kind: OpKind, a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    cor14_closed_form(
        kind,
        [a.s("r"), a.s("f"), a.s("g")],
        [a.s("v"), a.s("w")],
        &a.s("x"),
        &a.s("s"),
        &a.s("u"),
        &a.q(),
        pol,
    )
}

pub fn cor14_t_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    cor14(OpKind::T, a, pol)
}

pub fn cor14_e_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    cor14(OpKind::E, a, pol)
}

fn dom_common(d: &mut Domain<'_>) {
    for name in ["v", "w"] {
        let v = d.r(name);
        d.poch_nonzero(name, &v, None);
    }
}

fn dom_thm13(d: &mut Domain<'_>, theta: bool) {
    let (a, s, z, t, u) = (d.r("a"), d.r("s"), d.r("z"), d.r("t"), d.r("u"));
    d.nonzero("a", &a);
    for (label, v) in [
        ("az", a.clone() * &z),
        ("as", a.clone() * &s),
        ("at", a.clone() * &t),
        ("ut", u * &t),
    ] {
        d.below_one(label, &v);
    }
    if theta {
        d.nonzero("s", &s);
        d.not_q_power("as", &(a * s), 1..);
    }
    dom_common(d);
}

fn dom_cor14(d: &mut Domain<'_>) {
    let (x, s, u) = (d.r("x"), d.r("s"), d.r("u"));
    d.nonzero("s", &s);
    d.below_one("xs", &(x.clone() * &s));
    d.below_one("xu", &(x * u));
    dom_common(d);
}

fn bits_at(p: &Params, point: &str, tol: f64) -> u32 {
    lattice_bits(p.u("N"), p.f(point).abs(), p.f("u").abs(), p.f("q"), tol * 1e-3)
}

const SMALL: f64 = 0.25;

fn small(name: &'static str) -> Slot {
    Slot::scalar(name, -SMALL, SMALL)
}

pub(super) fn defs(anchor: impl Fn(&str) -> &'static str) -> Vec<IdentityDef> {
    let thm13_slots = || {
        vec![
            small("r"),
            small("f"),
            small("g"),
            small("v"),
            small("w"),
            small("u"),
            Slot::away("a", -SMALL, SMALL, 1.0 / 16.0),
            Slot::away("s", -SMALL, SMALL, 1.0 / 64.0),
            small("z"),
            small("t"),
            Slot::scalar("q", 0.25, 0.75),
            Slot::int("N", (1, 30), (25, 25)),
        ]
    };
    let cor14_slots = || {
        vec![
            small("r"),
            small("f"),
            small("g"),
            small("v"),
            small("w"),
            small("u"),
            small("x"),
            Slot::away("s", -SMALL, SMALL, 1.0 / 16.0),
            Slot::scalar("q", 0.25, 0.75),
            Slot::int("N", (1, 30), (25, 25)),
        ]
    };
    let base = |id: &'static str| IdentityDef {
        id,
        anchor: anchor(id),
        slots: thm13_slots(),
        exact_capable: false,
        default_tol: 1e-6,
        abs_floor: 0.0,
        notes: &[],
        domain: |d| dom_thm13(d, false),
        precision: |p, tol| bits_at(p, "a", tol),
        shape: None,
        lhs: side!(thm13_t_lhs),
        rhs: side!(thm13_t_rhs),
    };
    vec![
        base("THM1_3_T"),
        IdentityDef {
            domain: |d| dom_thm13(d, true),
            lhs: side!(thm13_e_lhs),
            rhs: side!(thm13_e_rhs),
            ..base("THM1_3_E")
        },
        IdentityDef {
            slots: cor14_slots(),
            domain: dom_cor14,
            precision: |p, tol| bits_at(p, "s", tol),
            lhs: side!(cor14_t_lhs),
            rhs: side!(cor14_t_rhs),
            ..base("COR1_4_T")
        },
        IdentityDef {
            slots: cor14_slots(),
            domain: dom_cor14,
            precision: |p, tol| bits_at(p, "s", tol),
            lhs: side!(cor14_e_lhs),
            rhs: side!(cor14_e_rhs),
            ..base("COR1_4_E")
        },
    ]
}
