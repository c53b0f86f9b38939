use super::{qdiff_ladder, DiffKind, FuncHandle};
use crate::error::{QError, QResult};
use crate::policy::Policy;
use crate::qcore::{
    cauchy_poly, phi_rs, pinf_ratio, poch_finite, sum_series, HyperSpec, QBase, SeriesResult,
    Termination,
};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    /// `Σ (a,b,c;q)_n / (q,d,e;q)_n (y D)^n`
    T,
    /// `Σ (-1)^n q^{C(n,2)} (a,b,c;q)_n / (q,d,e;q)_n (y θ)^n`
    E,
}

/// A truncated five-parameter operator series.
#[derive(Clone, Debug)]
pub struct OperatorSpec<S> {
    pub kind: OpKind,
    pub num: [S; 3],
    pub den: [S; 2],
    pub y: S,
    pub truncation: usize,
}

/// Working precision (bits) for iterated lattice differences of order `n` at
/// a point of modulus `x_abs`, applied with operator argument `y_abs`.
pub fn lattice_bits(n: usize, x_abs: f64, y_abs: f64, q: f64, tol: f64) -> u32 {
    let lq = (1.0 / q).log2();
    let lx = (1.0 / x_abs.max(1e-300)).log2().max(0.0);
    let ly = y_abs.max(1e-300).log2();
    let mut worst = 0.0f64;
    for m in 0..=n {
        let m = m as f64;
        worst = worst.max(m * (lx + ly + 2.0) + m * m * lq);
    }
    (64.0 + (1.0 / tol).log2() + worst).ceil().clamp(64.0, 20_000.0) as u32
}

/// Apply the operator term by term: `Σ_{n≤N} coeff_n y^n L^n f(x)`.
pub fn operator_apply_bruteforce<S: Scalar>(
    op: &OperatorSpec<S>,
    f: &FuncHandle<'_, S>,
    x: &S,
    q: &QBase<S>,
    policy: &Policy,
) -> QResult<SeriesResult<S>> {
    let n_max = op.truncation;
    let kind = match op.kind {
        OpKind::T => DiffKind::D,
        OpKind::E => DiffKind::Theta,
    };
    let ladder = qdiff_ladder(kind, f, x, q, n_max)?;
    let one = x.one();
    let mut coeff = one.clone();
    let mut qn = one.clone();
    let mut terms = Vec::with_capacity(n_max + 1);
    for (n, l) in ladder.iter().enumerate() {
        if n > 0 {
            // advance coeff_{n-1} -> coeff_n with q^{n-1} in `qn`
            let mut num = op.y.clone();
            for a in &op.num {
                num = num * &(one.clone() - &(a.clone() * &qn));
            }
            let mut den = one.clone() - &(qn.clone() * q.q());
            for d in &op.den {
                den = den * &(one.clone() - &(d.clone() * &qn));
            }
            if op.kind == OpKind::E {
                num = -num * &qn;
            }
            coeff = coeff * &num.checked_div(&den, "operator denominator (d,e;q)_n")?;
            qn = qn * q.q();
        }
        terms.push(coeff.clone() * l);
    }
    let r = sum_series(&one, policy, Termination::Finite(n_max), |n| Ok(terms[n].clone()))?;
    // the last three terms must already be negligible
    let scale = r.value.log2_abs();
    let log_tol = policy.rel_tol.log2();
    let tail_ok = terms
        .iter()
        .rev()
        .take(3)
        .all(|t| t.is_zero() || t.log2_abs() <= scale + log_tol);
    let last = terms.last().map(|t| t.log2_abs()).unwrap_or(f64::NEG_INFINITY);
    if !tail_ok {
        return Err(QError::no_convergence(
            n_max + 1,
            format!(
                "operator series terms still at 2^{:.1} relative to the sum at order {n_max}",
                last - scale
            ),
        ));
    }
    Ok(SeriesResult {
        tail_estimate: if last.is_finite() { last.exp2() } else { 0.0 },
        ..r
    })
}

/// Parameters of the double-sum closed forms for the operators acting on
/// product kernels in the variable `a`.
#[derive(Clone, Debug)]
pub struct Thm13Params<S> {
    pub r: S,
    pub f: S,
    pub g: S,
    pub v: S,
    pub w: S,
    pub u: S,
    pub a: S,
    pub s: S,
    pub z: S,
    pub t: S,
}

/// Closed form of `T(r,f,g,v,w,uD_a){(as)_∞/(az,at)_∞}` (`OpKind::T`) or
/// `E(r,f,g,v,w,uθ_a){(az,at)_∞/(as)_∞}` (`OpKind::E`).
pub fn thm13_closed_form<S: Scalar>(
    side: OpKind,
    p: &Thm13Params<S>,
    q: &QBase<S>,
    policy: &Policy,
) -> QResult<SeriesResult<S>> {
    let one = p.a.one();
    let disc = policy.disc();
    for (name, v) in [
        ("az", p.a.clone() * &p.z),
        ("as", p.a.clone() * &p.s),
        ("at", p.a.clone() * &p.t),
        ("ut", p.u.clone() * &p.t),
    ] {
        if v.to_f64().abs() > disc {
            return Err(QError::domain(format!("|{name}| must be below {disc}")));
        }
    }
    let az = p.a.clone() * &p.z;
    let as_ = p.a.clone() * &p.s;
    let at = p.a.clone() * &p.t;
    let ut = p.u.clone() * &p.t;
    let rfg = [p.r.clone(), p.f.clone(), p.g.clone()];
    let vw = [p.v.clone(), p.w.clone()];
    let shifted = |k: usize, xs: &[S]| -> Vec<S> {
        let qk = q.pow(k);
        xs.iter().map(|x| x.clone() * &qk).collect()
    };
    match side {
        OpKind::T => {
            let pre = pinf_ratio(&[as_.clone()], &[az, at.clone()], q, policy)?;
            let sum = sum_series(&one, policy, Termination::Adaptive, |k| {
                let mut num = cauchy_poly(k, &p.z, &p.s, q) * &poch_finite(&at, q, k);
                for x in &rfg {
                    num = num * &poch_finite(x, q, k);
                }
                let mut den = poch_finite(&as_, q, k) * &poch_finite(q.q(), q, k);
                for x in &vw {
                    den = den * &poch_finite(x, q, k);
                }
                let inner = phi_rs(&HyperSpec::new(shifted(k, &rfg), shifted(k, &vw), q, ut.clone()), policy)?;
                Ok(num.checked_div(&den, "(v,w,as,q;q)_k")? * &p.u.powi(k as i64)? * &inner.value)
            })?;
            Ok(sum.scaled(&pre))
        }
        OpKind::E => {
            if p.a.is_zero() || p.s.is_zero() {
                return Err(QError::domain("the θ closed form needs a != 0 and s != 0"));
            }
            let pre = pinf_ratio(&[az, at.clone()], &[as_.clone()], q, policy)?;
            let zs = p.z.clone() / &p.s;
            let qat = q.q().clone().checked_div(&at, "q/(at)")?;
            let qas = q.q().clone() / &as_;
            let sum = sum_series(&one, policy, Termination::Adaptive, |k| {
                let mut num = poch_finite(&zs, q, k) * &poch_finite(&qat, q, k);
                for x in &rfg {
                    num = num * &poch_finite(x, q, k);
                }
                let mut den = poch_finite(&qas, q, k) * &poch_finite(q.q(), q, k);
                for x in &vw {
                    den = den * &poch_finite(x, q, k);
                }
                let mut dk = shifted(k, &vw);
                dk.push(one.zero());
                let inner = phi_rs(&HyperSpec::new(shifted(k, &rfg), dk, q, -ut.clone()), policy)?;
                Ok(num.checked_div(&den, "(v,w,q/(as),q;q)_k")?
                    * &(-ut.clone()).powi(k as i64)?
                    * &inner.value)
            })?;
            Ok(sum.scaled(&pre))
        }
    }
}

/// `T(r,f,g,v,w,uD_s){1/(xs)_∞} = 3Φ2(xu)/(xs)_∞` and
/// `E(r,f,g,v,w,-uθ_s){(xs)_∞} = (xs)_∞ 3Φ3(xu)`.
pub fn cor14_closed_form<S: Scalar>(
    side: OpKind,
    rfg: [S; 3],
    vw: [S; 2],
    x: &S,
    s: &S,
    u: &S,
    q: &QBase<S>,
    policy: &Policy,
) -> QResult<SeriesResult<S>> {
    let xs = x.clone() * s;
    let xu = x.clone() * u;
    let disc = policy.disc();
    if xs.to_f64().abs() > disc || xu.to_f64().abs() > disc {
        return Err(QError::domain(format!("|xs| and |xu| must be below {disc}")));
    }
    match side {
        OpKind::T => {
            let pre = pinf_ratio(&[], &[xs], q, policy)?;
            let spec = HyperSpec::new(rfg.to_vec(), vw.to_vec(), q, xu);
            Ok(phi_rs(&spec, policy)?.scaled(&pre))
        }
        OpKind::E => {
            let pre = pinf_ratio(&[xs], &[], q, policy)?;
            let mut den = vw.to_vec();
            den.push(x.zero());
            let spec = HyperSpec::new(rfg.to_vec(), den, q, xu);
            Ok(phi_rs(&spec, policy)?.scaled(&pre))
        }
    }
}
