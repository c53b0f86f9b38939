//! Terminating q-Chu–Vandermonde sums and their extensions.

use super::params::{Args, Params};
use super::support::{chu_amp_bits, conv_series, working_policy};
use super::{side, Domain, IdentityDef, Slot};
use crate::error::QResult;
use crate::policy::Policy;
use crate::qcore::{
    cauchy_poly, phi_rs, poch_finite, qbinom_row, HyperSpec, QBase, SeriesResult, Termination,
};
use crate::scalar::Scalar;

/// `p_n(x,y) / (y;q)_n`.
fn chu_closed<S: Scalar>(n: usize, x: &S, y: &S, q: &QBase<S>) -> QResult<S> {
    cauchy_poly(n, x, y, q).checked_div(&poch_finite(y, q, n), "(y;q)_n")
}

fn terminating_2phi1<S: Scalar>(a: &Args<'_, S>, z: S, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (x, y, q, n) = (a.s("x"), a.s("y"), a.q(), a.n("n"));
    let spec = HyperSpec::new(vec![q.powi(-(n as i64)), x], vec![y], &q, z).terminating_at(n);
    phi_rs(&spec, pol)
}

pub fn chu_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    terminating_2phi1(a, a.s("q"), pol)
}

pub fn chu_rhs<S: Scalar>(a: &Args<'_, S>, _: &Policy) -> QResult<SeriesResult<S>> {
    let (x, y, q, n) = (a.s("x"), a.s("y"), a.q(), a.n("n"));
    Ok(SeriesResult::exact(chu_closed(n, &x, &y, &q)?, n))
}

pub fn thm32_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let q = a.q();
    terminating_2phi1(a, q.pow(1 + a.n("m")), pol)
}

// p_n(x,y)/(y)_n Σ_j [m j] (q^{1-n}/y, qx/y)_{m-j}/(xq^{1-n}/y)_{m-j} (q/y)^j
pub fn thm32_rhs<S: Scalar>(a: &Args<'_, S>, _: &Policy) -> QResult<SeriesResult<S>> {
    let (x, y, q, n, m) = (a.s("x"), a.s("y"), a.q(), a.n("n"), a.n("m"));
    let qy = q.q().clone().checked_div(&y, "q/y")?;
    let e1 = q.powi(1 - n as i64).checked_div(&y, "y")?;
    let e2 = qy.clone() * &x;
    let e3 = e1.clone() * &x;
    let row = qbinom_row(m, &q);
    let mut sum = x.zero();
    for (j, c) in row.iter().enumerate() {
        let l = m - j;
        let num = poch_finite(&e1, &q, l) * &poch_finite(&e2, &q, l);
        let t = num.checked_div(&poch_finite(&e3, &q, l), "(xq^{1-n}/y;q)_{m-j}")?;
        sum = sum + &(c.clone() * &t * &qy.powi(j as i64)?);
    }
    Ok(SeriesResult::exact(chu_closed(n, &x, &y, &q)? * &sum, m + 1))
}

pub fn remark3_lhs<S: Scalar>(a: &Args<'_, S>, _: &Policy) -> QResult<SeriesResult<S>> {
    let (y, q, m) = (a.s("y"), a.q(), a.n("m"));
    let qy = q.q().clone().checked_div(&y, "q/y")?;
    let row = qbinom_row(m, &q);
    let mut sum = y.zero();
    for (j, c) in row.iter().enumerate() {
        sum = sum + &(c.clone() * &poch_finite(&qy, &q, m - j) * &qy.powi(j as i64)?);
    }
    Ok(SeriesResult::exact(sum, m + 1))
}

pub fn remark3_rhs<S: Scalar>(a: &Args<'_, S>, _: &Policy) -> QResult<SeriesResult<S>> {
    Ok(SeriesResult::exact(a.proto().one(), 0))
}

// Σ_k (q^{-n},x;q)_k q^k/(q,y;q)_k 3Φ2(r,f,g;v,w;uq^k)
pub fn thm31_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (x, y, u, q, n) = (a.s("x"), a.s("y"), a.s("u"), a.q(), a.n("n"));
    let inner_pol = working_policy(a.proto(), pol);
    let num = vec![a.s("r"), a.s("f"), a.s("g")];
    let den = vec![a.s("v"), a.s("w")];
    let one = x.one();
    let qmn = q.powi(-(n as i64));
    let mut t = one.clone();
    let mut total = one.zero();
    let mut terms = 0;
    for k in 0..=n {
        if k > 0 {
            let ql = q.pow(k - 1);
            let r = (one.clone() - &(qmn.clone() * &ql)) * &(one.clone() - &(x.clone() * &ql)) * q.q();
            let d = (one.clone() - &(ql.clone() * q.q())) * &(one.clone() - &(y.clone() * &ql));
            t = t * &r.checked_div(&d, "(q,y;q)_k")?;
        }
        let phi = phi_rs(&HyperSpec::new(num.clone(), den.clone(), &q, u.clone() * &q.pow(k)), &inner_pol)?;
        terms += phi.terms_used;
        total = total + &(t.clone() * &phi.value);
    }
    Ok(SeriesResult::exact(total, terms))
}

// p_n(x,y)/(y)_n Σ_{k,j} (r,f,g)_{k+j}/((q)_j (v,w)_{k+j}) (q^{1-n}/y, qx/y)_k/(xq^{1-n}/y, q)_k u^{k+j} (q/y)^j
pub fn thm31_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let (x, y, u, q, n) = (a.s("x"), a.s("y"), a.s("u"), a.q(), a.n("n"));
    let num = [a.s("r"), a.s("f"), a.s("g")];
    let den = [a.s("v"), a.s("w")];
    let one = x.one();
    let qy = q.q().clone().checked_div(&y, "q/y")?;
    let e1 = q.powi(1 - n as i64).checked_div(&y, "y")?;
    let e2 = qy.clone() * &x;
    let e3 = e1.clone() * &x;
    let sum = conv_series(
        &one,
        pol,
        Termination::Adaptive,
        |m| {
            let qm = q.pow(m);
            let mut nn = u.clone();
            for p in &num {
                nn = nn * &(one.clone() - &(p.clone() * &qm));
            }
            let mut dd = one.clone();
            for p in &den {
                dd = dd * &(one.clone() - &(p.clone() * &qm));
            }
            nn.checked_div(&dd, "(v,w;q)_m")
        },
        |k| {
            let qk = q.pow(k);
            let nn = (one.clone() - &(e1.clone() * &qk)) * &(one.clone() - &(e2.clone() * &qk));
            let dd = (one.clone() - &(e3.clone() * &qk)) * &(one.clone() - &(qk * q.q()));
            nn.checked_div(&dd, "(xq^{1-n}/y,q;q)_k")
        },
        |j| qy.clone().checked_div(&(one.clone() - &q.pow(j + 1)), "(q;q)_j"),
    )?;
    Ok(sum.scaled(&chu_closed(n, &x, &y, &q)?))
}

fn dom_chu(d: &mut Domain<'_>) {
    let y = d.r("y");
    let n = d.n("n");
    d.poch_nonzero("y", &y, Some(n));
}

fn dom_thm32(d: &mut Domain<'_>) {
    let (x, y) = (d.r("x"), d.r("y"));
    let (n, m) = (d.n("n"), d.n("m"));
    d.nonzero("y", &y);
    if !d.is_clean() {
        return;
    }
    d.poch_nonzero("y", &y, Some(n));
    if m > 0 {
        d.not_q_power("x/y", &(x / &y), (n - m)..=(n - 1));
    }
}

fn dom_remark3(d: &mut Domain<'_>) {
    let y = d.r("y");
    d.nonzero("y", &y);
}

fn dom_thm31(d: &mut Domain<'_>) {
    let (x, y, u, q) = (d.r("x"), d.r("y"), d.r("u"), d.q());
    let n = d.n("n");
    d.nonzero("y", &y);
    if !d.is_clean() {
        return;
    }
    d.below_one("u", &u);
    d.below_one("uq/y", &(u * q / &y));
    d.poch_nonzero("y", &y, Some(n));
    d.not_q_power("x/y", &(x / &y), ..=(n - 1));
    for name in ["v", "w"] {
        let v = d.r(name);
        d.poch_nonzero(name, &v, None);
    }
}

/// `log2 |p_n(x,y) / (y;q)_n|`, floored so an exact zero stays finite.
fn closed_log2(n: usize, q: f64, x: f64, y: f64) -> f64 {
    (0..n)
        .map(|k| {
            let yk = y * q.powi(k as i32);
            (x - yk).abs().max(1e-300).log2() - (1.0 - yk).abs().max(1e-300).log2()
        })
        .sum()
}

fn chu_bits(p: &Params, tol: f64) -> u32 {
    let (n, q, x, y) = (p.u("n"), p.f("q"), p.f("x"), p.f("y"));
    let amp = chu_amp_bits(n, q, x.abs(), y.abs());
    let small = (-closed_log2(n, q, x, y)).clamp(0.0, 4000.0);
    (64.0 + (1.0 / tol).log2() + amp + small + 40.0).ceil() as u32
}

fn thm32_bits(p: &Params, tol: f64) -> u32 {
    chu_bits(p, tol) + remark_bits(p, tol)
}

/// Size of the largest term of the `m`-sum relative to 1.
fn remark_bits(p: &Params, tol: f64) -> u32 {
    let (q, y, m) = (p.f("q"), p.f("y").abs(), p.u("m"));
    let qy = q / y.max(1e-300);
    let mut worst = 0.0f64;
    for j in 0..=m {
        let mut lg = j as f64 * qy.log2();
        for l in 0..(m - j) {
            lg += (1.0 + qy * q.powi(l as i32)).log2();
        }
        // [m j] <= 1/(q;q)_∞ <= 2^(m) for the q used here
        worst = worst.max(lg + m as f64);
    }
    (64.0 + (1.0 / tol).log2() + worst).ceil() as u32
}

fn thm31_bits(p: &Params, tol: f64) -> u32 {
    let n = p.u("n") as f64;
    let ratio = (p.f("u") / p.f("x")).abs();
    chu_bits(p, tol) + (n * (1.0 + ratio).log2()).ceil() as u32 + 16
}

pub(super) fn defs(anchor: impl Fn(&str) -> &'static str) -> Vec<IdentityDef> {
    let xyq = || {
        vec![
            Slot::scalar("x", -2.0, 2.0),
            Slot::away("y", -2.0, 2.0, 0.05),
            Slot::scalar("q", 0.1, 0.9),
        ]
    };
    let with = |extra: Vec<Slot>| {
        let mut s = xyq();
        s.extend(extra);
        s
    };
    let base = |id: &'static str| IdentityDef {
        id,
        anchor: anchor(id),
        slots: with(vec![Slot::int("n", (0, 200), (0, 30))]),
        exact_capable: true,
        default_tol: 1e-8,
        abs_floor: 0.0,
        notes: &[],
        domain: dom_chu,
        precision: chu_bits,
        shape: None,
        lhs: side!(chu_lhs),
        rhs: side!(chu_rhs),
    };
    let half = |name: &'static str| Slot::scalar(name, -0.5, 0.5);
    vec![
        base("CHU"),
        IdentityDef {
            exact_capable: false,
            slots: vec![
                half("r"),
                half("f"),
                half("g"),
                half("v"),
                half("w"),
                half("u"),
                Slot::away("x", -0.5, 0.5, 0.05),
                Slot::away("y", -0.5, 0.5, 0.25),
                Slot::scalar("q", 0.3, 0.7),
                Slot::int("n", (0, 30), (0, 8)),
            ],
            domain: dom_thm31,
            precision: thm31_bits,
            lhs: side!(thm31_lhs),
            rhs: side!(thm31_rhs),
            ..base("THM3_1")
        },
        IdentityDef {
            slots: with(vec![Slot::int("n", (0, 200), (0, 10)), Slot::int("m", (0, 200), (0, 10))]),
            domain: dom_thm32,
            precision: thm32_bits,
            lhs: side!(thm32_lhs),
            rhs: side!(thm32_rhs),
            ..base("THM3_2")
        },
        IdentityDef {
            slots: vec![
                Slot::away("y", -2.0, 2.0, 0.05),
                Slot::scalar("q", 0.1, 0.9),
                Slot::int("m", (0, 200), (0, 20)),
            ],
            domain: dom_remark3,
            precision: remark_bits,
            lhs: side!(remark3_lhs),
            rhs: side!(remark3_rhs),
            ..base("REMARK3")
        },
    ]
}
