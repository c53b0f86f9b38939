//! Sums generated by the five-parameter operators from the q-binomial
//! theorem: one-variable expansions with an outer `n`-series, and
//! polynomial kernels `p_n(x, y/a)` with a terminating outer sum.
//!
//! Every right side here contains an inner sum `Σ_{k≤n} (q^{-n};q)_k ...`
//! whose terms are of size `q^{-n²/2}` while the total is `O(x^n)`, so the
//! towers are run at a precision that absorbs that cancellation. The double
//! sum `S(k)` under it is truncated to one fixed triangle `j + i ≤ L` for all
//! `k`; the neglected part is then a smooth function of `q^k` and does not
//! feed the cancellation.

use rug::ops::Pow;
use rug::Rational;

use super::params::{Args, Params};
use super::support::{chu_amp_bits, conv_series, product_result};
use super::{side, Domain, Draw, IdentityDef, Slot};
use crate::error::{QError, QResult};
use crate::policy::Policy;
use crate::qcore::{pinf_ratio, sum_series, QBase, SeriesResult, Termination};
use crate::qops::{lattice_bits, operator_apply_bruteforce, FuncHandle, OpKind, OperatorSpec};
use crate::scalar::Scalar;

/// Which statement of the θ-type sums to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// The form that actually holds.
    Corrected,
    /// The statement exactly as typeset, kept for regression tests.
    Printed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    D,
    Theta(Form),
}

/// No convergence region is stated for the one-variable expansions.
const BOX_NOTE: &str = "sampled in the |·| ≤ 0.5 box; the admissible region is not stated";

/// Outer series longer than this are reported as not converging.
const OUTER_LIMIT: usize = 400;
/// Relative size of the neglected inner triangle.
const TRIANGLE_TOL: f64 = 1e-48;

struct Gen<S> {
    num: [S; 3],
    den: [S; 2],
    u: S,
    a: S,
    b: S,
    c: S,
    x: S,
    q: QBase<S>,
}

impl<S: Scalar> Gen<S> {
    fn new(a: &Args<'_, S>) -> Self {
        Gen {
            num: [a.s("r"), a.s("f"), a.s("g")],
            den: [a.s("v"), a.s("w")],
            u: a.s("u"),
            a: a.s("a"),
            b: a.s("b"),
            c: a.s("c"),
            x: a.s("x"),
            q: a.q(),
        }
    }

    fn one(&self) -> S {
        self.x.one()
    }

    /// `c_{m+1}/c_m` for `c_m = (r,f,g;q)_m u^m / (v,w;q)_m`.
    fn w_step(&self, m: usize) -> QResult<S> {
        let one = self.one();
        let qm = self.q.pow(m);
        let mut num = self.u.clone();
        for p in &self.num {
            num = num * &(one.clone() - &(p.clone() * &qm));
        }
        let mut den = one.clone();
        for p in &self.den {
            den = den * &(one.clone() - &(p.clone() * &qm));
        }
        num.checked_div(&den, "(v,w;q)_m")
    }

    /// Double sum under the D-type inner expansion, shifted by `k`.
    fn s_d(&self, k: usize, stop: Termination, pol: &Policy) -> QResult<SeriesResult<S>> {
        let one = self.one();
        let q = &self.q;
        let aqk = self.a.clone() * &q.pow(k);
        let axqk = aqk.clone() * &self.x;
        let cx = self.c.clone() * &self.x;
        conv_series(
            &one,
            pol,
            stop,
            |m| self.w_step(m),
            |j| {
                let qj = q.pow(j);
                let num = (self.b.clone() - &(self.c.clone() * &qj)) * &(one.clone() - &(axqk.clone() * &qj));
                let den = (one.clone() - &(cx.clone() * &qj)) * &(one.clone() - &(qj * q.q()));
                num.checked_div(&den, "(cx,q;q)_j")
            },
            |i| aqk.clone().checked_div(&(one.clone() - &q.pow(i + 1)), "(q;q)_i"),
        )
    }

    /// Double sum under the θ-type inner expansion, shifted by `k`.
    fn s_theta(&self, k: usize, form: Form, stop: Termination, pol: &Policy) -> QResult<SeriesResult<S>> {
        let one = self.one();
        let q = &self.q;
        let ax = self.a.clone() * &self.x;
        let k = k as i64;
        // the printed statement shifts the first argument by one more power
        // and carries the sign on both indices
        let (shift, i_sign) = match form {
            Form::Corrected => (0i64, one.clone()),
            Form::Printed => (1i64, -one.clone()),
        };
        conv_series(
            &one,
            pol,
            stop,
            |m| self.w_step(m),
            |j| {
                let j = j as i64;
                let b_part = one.clone()
                    - &(self.b.clone() * &q.powi(j - k + shift)).checked_div(&self.a, "b/a")?;
                let c_part = self.c.clone() - &q.powi(j + 1).checked_div(&self.x, "q/x")?;
                let den = (one.clone() - &q.powi(1 - k + j).checked_div(&ax, "q/(ax)")?)
                    * &(one.clone() - &q.powi(j + 1));
                (-(b_part * &c_part)).checked_div(&den, "(q^{1-k}/(ax),q;q)_j")
            },
            |i| {
                let num = i_sign.clone() * &q.pow(i) * &self.c;
                num.checked_div(&(one.clone() - &q.pow(i + 1)), "(q;q)_i")
            },
        )
    }

    fn inner(&self, kind: Kind, k: usize, stop: Termination, pol: &Policy) -> QResult<SeriesResult<S>> {
        match kind {
            Kind::D => self.s_d(k, stop, pol),
            Kind::Theta(form) => self.s_theta(k, form, stop, pol),
        }
    }
}

/// `Σ_{k≤n} (q^{-n}, ax;q)_k q^k / (q, y;q)_k s_k`.
fn chu_sum<S: Scalar>(n: usize, ax: &S, y: &S, s: &[S], q: &QBase<S>) -> QResult<S> {
    let one = ax.one();
    let qmn = q.powi(-(n as i64));
    let mut t = one.clone();
    let mut acc = s[0].clone();
    let mut ql = one.clone();
    for sk in s.iter().take(n + 1).skip(1) {
        let num = (one.clone() - &(qmn.clone() * &ql)) * &(one.clone() - &(ax.clone() * &ql)) * q.q();
        let den = (one.clone() - &(ql.clone() * q.q())) * &(one.clone() - &(y.clone() * &ql));
        t = t * &num.checked_div(&den, "(q,y;q)_k")?;
        acc = acc + &(t.clone() * sk);
        ql = ql * q.q();
    }
    Ok(acc)
}

/// Triangle size `L` that makes the neglected part of every `S(k)`,
/// `k ∈ ks`, smaller than [`TRIANGLE_TOL`], probed in `f64`.
fn triangle_len(params: &Params, kind: Kind, ks: &[usize], pol: &Policy) -> QResult<usize> {
    let args = Args::new(params, 0.0f64);
    let g = Gen::new(&args);
    let probe = Policy {
        rel_tol: TRIANGLE_TOL,
        n_max: 2000,
        ..*pol
    };
    let mut len = 0;
    for &k in ks {
        let r = g.inner(kind, k, Termination::Adaptive, &probe)?;
        len = len.max(r.terms_used);
    }
    Ok(len + 4)
}

fn formal_order(p: &Params, kind: Kind) -> Option<usize> {
    match kind {
        Kind::D => None,
        Kind::Theta(_) => Some(p.u("order")),
    }
}

/// Geometric rate of the outer `n`-series.
fn outer_rate(p: &Params, kind: Kind) -> f64 {
    let x = p.f("x").abs();
    match formal_order(p, kind) {
        // the inner sums carry powers of u as well
        None => x.max(p.f("u").abs()),
        Some(m) => x / p.f("q").powi(m as i32),
    }
}

fn outer_cap(p: &Params, kind: Kind) -> usize {
    let rho = outer_rate(p, kind);
    if rho == 0.0 {
        return 2;
    }
    if rho >= 1.0 {
        return usize::MAX;
    }
    ((-64.0 / rho.log2()).ceil() as usize + 8).max(4)
}

/// Bits for evaluating up to `ncap` outer terms without cancellation loss.
fn outer_bits(p: &Params, ncap: usize, tol: f64) -> u32 {
    let q = p.f("q");
    let a = p.f("a").abs().max(1e-300);
    let ax = (p.f("a") * p.f("x")).abs();
    let y = if p.get("y").is_some() { p.f("y").abs() } else { 0.0 };
    let mut worst = 0.0f64;
    let mut pref = 0.0f64;
    for n in 0..=ncap {
        if n > 0 {
            let qn = q.powi(n as i32 - 1);
            pref += (1.0 + a * qn).log2() - a.log2() - (1.0 - qn * q).log2();
        }
        worst = worst.max(pref + chu_amp_bits(n, q, ax, y));
    }
    (96.0 + (1.0 / tol).log2() + worst).ceil().clamp(64.0, 20_000.0) as u32
}

fn thm21_bits(p: &Params, tol: f64, kind: Kind) -> u32 {
    let ncap = outer_cap(p, kind);
    if ncap > OUTER_LIMIT {
        return 64;
    }
    outer_bits(p, ncap, tol)
}

// Σ_n (a;q)_n a^{-n}/(q;q)_n Σ_{k≤n} (q^{-n},ax;q)_k q^k/(q;q)_k S(k)
fn thm21_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy, kind: Kind) -> QResult<SeriesResult<S>> {
    let g = Gen::new(a);
    let q = &g.q;
    let ncap = outer_cap(a.params(), kind);
    if ncap > OUTER_LIMIT {
        return Err(QError::no_convergence(
            OUTER_LIMIT,
            format!("outer series rate {:.3} is too close to 1", outer_rate(a.params(), kind)),
        ));
    }
    let stop = match formal_order(a.params(), kind) {
        Some(m) => Termination::Finite(m),
        None => Termination::Finite(triangle_len(a.params(), kind, &[0, ncap], pol)?),
    };
    let one = g.one();
    let ax = g.a.clone() * &g.x;
    let zero = one.zero();
    let mut svals: Vec<S> = Vec::new();
    let mut pref = one.clone();
    let outer = Policy { n_max: ncap, ..*pol };
    sum_series(&one, &outer, Termination::Adaptive, |n| {
        if n > 0 {
            let qn = q.pow(n - 1);
            let num = one.clone() - &(g.a.clone() * &qn);
            let den = g.a.clone() * &(one.clone() - &(qn * q.q()));
            pref = pref.clone() * &num.checked_div(&den, "a (q;q)_n")?;
        }
        while svals.len() <= n {
            let k = svals.len();
            svals.push(g.inner(kind, k, stop, pol)?.value);
        }
        Ok(pref.clone() * &chu_sum(n, &ax, &zero, &svals, q)?)
    })
}

fn thm21_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy, kind: Kind) -> QResult<SeriesResult<S>> {
    let g = Gen::new(a);
    let q = &g.q;
    let one = g.one();
    let pre = product_result(&[g.a.clone() * &g.x], &[g.x.clone()], q, pol)?;
    let stop = match formal_order(a.params(), kind) {
        Some(m) => Termination::Finite(m),
        None => Termination::Adaptive,
    };
    let i_plain = |i: usize| one.clone().checked_div(&(one.clone() - &q.pow(i + 1)), "(q;q)_i");
    let sum = match kind {
        Kind::D => conv_series(
            &one,
            pol,
            stop,
            |m| g.w_step(m),
            |j| {
                let qj = q.pow(j);
                let num = (g.b.clone() - &(g.c.clone() * &qj)) * &(one.clone() - &(g.x.clone() * &qj));
                let den = (one.clone() - &(g.c.clone() * &g.x * &qj)) * &(one.clone() - &(qj * q.q()));
                num.checked_div(&den, "(cx,q;q)_j")
            },
            i_plain,
        )?,
        Kind::Theta(Form::Corrected) => conv_series(
            &one,
            pol,
            stop,
            |m| g.w_step(m),
            |j| {
                let qj1 = q.pow(j + 1);
                let num = (one.clone() - &(g.b.clone() * &q.pow(j)))
                    * &(g.c.clone() - &qj1.clone().checked_div(&g.x, "q/x")?);
                let den = (one.clone() - &qj1.clone().checked_div(&g.x, "q/x")?) * &(one.clone() - &qj1);
                (-num).checked_div(&den, "(q/x,q;q)_j")
            },
            |i| (q.pow(i) * &g.c).checked_div(&(one.clone() - &q.pow(i + 1)), "(q;q)_i"),
        )?,
        Kind::Theta(Form::Printed) => {
            let bx = g.b.clone() * &g.x;
            conv_series(
                &one,
                pol,
                stop,
                |m| g.w_step(m),
                |j| {
                    let qj1 = q.pow(j + 1);
                    let num = (one.clone() - &qj1.clone().checked_div(&bx, "q/(bx)")?) * &g.b;
                    let den = (one.clone() - &qj1.clone().checked_div(&g.x, "q/x")?) * &(one.clone() - &qj1);
                    (-num).checked_div(&den, "(q/x,q;q)_j")
                },
                |i| (-(q.pow(i) * &g.b)).checked_div(&(one.clone() - &q.pow(i + 1)), "(q;q)_i"),
            )?
        }
    };
    Ok(sum.scaled(&pre.value))
}

pub fn thm21a_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    thm21_lhs(a, pol, Kind::D)
}

pub fn thm21a_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    thm21_rhs(a, pol, Kind::D)
}

pub fn thm21b_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    thm21_lhs(a, pol, Kind::Theta(Form::Corrected))
}

pub fn thm21b_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    thm21_rhs(a, pol, Kind::Theta(Form::Corrected))
}

/// Both sides of the second (θ-type) one-variable expansion in either form.
pub fn thm21b_sides<S: Scalar>(
    a: &Args<'_, S>,
    pol: &Policy,
    form: Form,
) -> QResult<(SeriesResult<S>, SeriesResult<S>)> {
    let kind = Kind::Theta(form);
    Ok((thm21_lhs(a, pol, kind)?, thm21_rhs(a, pol, kind)?))
}

/// The same outer series summed literally over all `(j, i)` instead of as a
/// truncated power series in `u`.
pub fn thm21b_literal_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    let g = Gen::new(a);
    let q = &g.q;
    let one = g.one();
    let ax = g.a.clone() * &g.x;
    let zero = one.zero();
    let mut svals: Vec<S> = Vec::new();
    let mut pref = one.clone();
    let total = sum_series(&one, pol, Termination::Adaptive, |n| {
        if n > 0 {
            let qn = q.pow(n - 1);
            let num = one.clone() - &(g.a.clone() * &qn);
            let den = g.a.clone() * &(one.clone() - &(qn * q.q()));
            pref = pref.clone() * &num.checked_div(&den, "a (q;q)_n")?;
        }
        while svals.len() <= n {
            let k = svals.len();
            svals.push(g.s_theta(k, Form::Corrected, Termination::Adaptive, pol)?.value);
        }
        let term = pref.clone() * &chu_sum(n, &ax, &zero, &svals, q)?;
        if !term.is_finite() {
            return Err(QError::no_convergence(n, "terms overflow the working exponent range"));
        }
        Ok(term)
    })?;
    if !total.value.is_finite() {
        return Err(QError::no_convergence(total.terms_used, "partial sums overflow the working exponent range"));
    }
    Ok(total)
}

/// `p_n(x, y/a)` times the product part of the kernel.
fn kernel<S: Scalar>(x: &S, g: &Gen<S>, y: &S, n: usize, theta: bool, pol: &Policy) -> QResult<S> {
    let q = &g.q;
    let ya = y.clone().checked_div(&g.a, "y/a")?;
    let mut p = x.one();
    let mut t = ya;
    for _ in 0..n {
        p = p * &(x.clone() - &t);
        t = t * q.q();
    }
    let (ax, bx, cx) = (g.a.clone() * x, g.b.clone() * x, g.c.clone() * x);
    let prod = if theta {
        pinf_ratio(&[bx, cx], &[ax], q, pol)?
    } else {
        pinf_ratio(&[cx], &[ax, bx], q, pol)?
    };
    Ok(p * &prod)
}

fn y_of<S: Scalar>(a: &Args<'_, S>) -> S {
    if a.params().get("y").is_some() {
        a.s("y")
    } else {
        a.proto().zero()
    }
}

fn poly_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy, theta: bool) -> QResult<SeriesResult<S>> {
    let g = Gen::new(a);
    let y = y_of(a);
    let n = a.n("n");
    let f = FuncHandle::new("p_n(x,y/a) kernel", |x: &S| kernel(x, &g, &y, n, theta, pol));
    let spec = OperatorSpec {
        kind: if theta { OpKind::E } else { OpKind::T },
        num: g.num.clone(),
        den: g.den.clone(),
        y: g.u.clone(),
        truncation: a.n("N"),
    };
    operator_apply_bruteforce(&spec, &f, &g.x, &g.q, pol)
}

fn poly_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy, kind: Kind) -> QResult<SeriesResult<S>> {
    let g = Gen::new(a);
    let q = &g.q;
    let y = y_of(a);
    let n = a.n("n");
    let stop = Termination::Finite(triangle_len(a.params(), kind, &[0, n], pol)?);
    let mut svals = Vec::with_capacity(n + 1);
    for k in 0..=n {
        svals.push(g.inner(kind, k, stop, pol)?.value);
    }
    let ax = g.a.clone() * &g.x;
    let sum = chu_sum(n, &ax, &y, &svals, q)?;
    let (bx, cx) = (g.b.clone() * &g.x, g.c.clone() * &g.x);
    let pre = match kind {
        Kind::D => product_result(&[cx], &[ax, bx], q, pol)?,
        Kind::Theta(_) => product_result(&[bx, cx], &[ax], q, pol)?,
    };
    // (y;q)_n / a^n
    let mut yn = g.one();
    let mut yq = y.clone();
    for _ in 0..n {
        yn = yn * &(g.one() - &yq);
        yq = yq * q.q();
    }
    let scale = yn.checked_div(&g.a.powi(n as i64)?, "a^n")? * &pre.value;
    Ok(SeriesResult::exact(sum, n + 1).scaled(&scale))
}

pub fn poly_d_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    poly_lhs(a, pol, false)
}

pub fn poly_d_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    poly_rhs(a, pol, Kind::D)
}

pub fn poly_theta_lhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    poly_lhs(a, pol, true)
}

pub fn poly_theta_rhs<S: Scalar>(a: &Args<'_, S>, pol: &Policy) -> QResult<SeriesResult<S>> {
    poly_rhs(a, pol, Kind::Theta(Form::Corrected))
}

/// Right side of the θ-type polynomial-kernel sum in either form.
pub fn poly_theta_rhs_form<S: Scalar>(a: &Args<'_, S>, pol: &Policy, form: Form) -> QResult<SeriesResult<S>> {
    poly_rhs(a, pol, Kind::Theta(form))
}

fn poly_bits(p: &Params, tol: f64) -> u32 {
    let lattice = lattice_bits(p.u("N"), p.f("x").abs(), p.f("u").abs(), p.f("q"), tol * 1e-3);
    lattice.max(outer_bits(p, p.u("n"), tol))
}

fn dom_vw(d: &mut Domain<'_>) {
    for name in ["v", "w"] {
        let v = d.r(name);
        d.poch_nonzero(name, &v, None);
    }
}

fn dom_thm21a(d: &mut Domain<'_>) {
    let (a, c, x) = (d.r("a"), d.r("c"), d.r("x"));
    d.nonzero("a", &a);
    d.below_one("x", &x);
    d.below_one("ax", &(a * &x));
    d.below_one("cx", &(c * x));
    dom_vw(d);
}

fn dom_thm21b(d: &mut Domain<'_>) {
    let (a, x, q) = (d.r("a"), d.r("x"), d.q());
    let m = d.n("order");
    d.nonzero("a", &a);
    d.nonzero("x", &x);
    if !d.is_clean() {
        return;
    }
    let bound = Rational::from(q.pow(m as u32));
    d.below("x", &x, &bound);
    d.not_q_power("ax", &(a * &x), 1..);
    d.not_q_power("x", &x, 1..);
    dom_vw(d);
}

fn dom_poly(d: &mut Domain<'_>, theta: bool, with_y: bool) {
    let (a, b, c, x, u) = (d.r("a"), d.r("b"), d.r("c"), d.r("x"), d.r("u"));
    d.nonzero("a", &a);
    d.nonzero("x", &x);
    for (label, v) in [
        ("ax", a.clone() * &x),
        ("bx", b * &x),
        ("cx", c.clone() * &x),
        ("cu", c * u),
    ] {
        d.below_one(label, &v);
    }
    if theta && x != 0 {
        d.not_q_power("ax", &(a * &x), 1..);
    }
    if with_y {
        let y = d.r("y");
        d.poch_nonzero("y", &y, Some(d.n("n")));
    }
    dom_vw(d);
}

fn half(name: &'static str) -> Slot {
    Slot::scalar(name, -0.5, 0.5)
}

/// `|x| <= q^order / 2` so the truncated series in `u` converges in `n`.
fn shape_formal(p: &mut Params, draw: &mut Draw) -> bool {
    let q = p.scalar("q").cloned().unwrap_or_default();
    let m = p.u("order") as u32;
    let x = draw.signed(0.1, 0.5) * Rational::from(q.pow(m));
    p.set_scalar("x", x);
    true
}

pub(super) fn defs(anchor: impl Fn(&str) -> &'static str) -> Vec<IdentityDef> {
    let core = || {
        vec![
            half("r"),
            half("f"),
            half("g"),
            half("v"),
            half("w"),
            half("u"),
            Slot::away("a", -0.5, 0.5, 0.1),
            half("b"),
            half("c"),
            Slot::away("x", -0.5, 0.5, 0.05),
            Slot::scalar("q", 0.4, 0.7),
        ]
    };
    let with = |extra: Vec<Slot>| {
        let mut s = core();
        s.extend(extra);
        s
    };
    let poly = |y: bool| {
        let mut extra = vec![Slot::int("n", (0, 12), (0, 6)), Slot::int("N", (1, 60), (40, 40))];
        if y {
            extra.push(half("y"));
        }
        with(extra)
    };
    let base = |id: &'static str| IdentityDef {
        id,
        anchor: anchor(id),
        slots: core(),
        exact_capable: false,
        default_tol: 1e-8,
        abs_floor: 0.0,
        notes: &[BOX_NOTE],
        domain: dom_thm21a,
        precision: |p, tol| thm21_bits(p, tol, Kind::D),
        shape: None,
        lhs: side!(thm21a_lhs),
        rhs: side!(thm21a_rhs),
    };
    vec![
        base("THM2_1a"),
        IdentityDef {
            slots: with(vec![Slot::int("order", (0, 6), (3, 3))]),
            notes: &[
                "inner factor uses (-1)^j and (bq^{-k}/a;q)_j",
                "right side uses (b, q/(cx);q)_j/(q/x,q;q)_j (uc)^{j+i}",
                "checked as a power series in u truncated at total degree `order`",
                BOX_NOTE,
            ],
            domain: dom_thm21b,
            precision: |p, tol| thm21_bits(p, tol, Kind::Theta(Form::Corrected)),
            shape: Some(shape_formal),
            lhs: side!(thm21b_lhs),
            rhs: side!(thm21b_rhs),
            ..base("THM2_1b")
        },
        IdentityDef {
            slots: poly(true),
            notes: &[],
            domain: |d| dom_poly(d, false, true),
            precision: poly_bits,
            lhs: side!(poly_d_lhs),
            rhs: side!(poly_d_rhs),
            ..base("THM2_2a")
        },
        IdentityDef {
            slots: poly(true),
            notes: &[
                "right side carries the k-sum with (q^{-n},ax;q)_k q^k/(y,q;q)_k",
                "inner factor uses (-1)^j and (bq^{-k}/a;q)_j",
            ],
            domain: |d| dom_poly(d, true, true),
            precision: poly_bits,
            lhs: side!(poly_theta_lhs),
            rhs: side!(poly_theta_rhs),
            ..base("THM2_2b")
        },
        IdentityDef {
            slots: poly(false),
            notes: &[],
            domain: |d| dom_poly(d, false, false),
            precision: poly_bits,
            lhs: side!(poly_d_lhs),
            rhs: side!(poly_d_rhs),
            ..base("COR2_3a")
        },
        IdentityDef {
            slots: poly(false),
            notes: &["inner factor uses (-1)^j and (bq^{-k}/a;q)_j"],
            domain: |d| dom_poly(d, true, false),
            precision: poly_bits,
            lhs: side!(poly_theta_lhs),
            rhs: side!(poly_theta_rhs),
            ..base("COR2_3b")
        },
    ]
}
