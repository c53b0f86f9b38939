//! q-difference operators on the geometric lattice, their Leibniz rules, the
//! five-parameter operator series and closed forms for their actions.

mod diffeq;
mod lemma;
mod operator;

pub use diffeq::{diffeq_residual, diffeq_sides, DiffEq, SevenPointFunc};
pub use lemma::{lemma_closed_form, LemmaId, LemmaParams};
pub use operator::{
    cor14_closed_form, lattice_bits, operator_apply_bruteforce, thm13_closed_form, OpKind,
    OperatorSpec, Thm13Params,
};

use crate::error::{QError, QResult};
use crate::qcore::{qbinom_row, QBase};
use crate::scalar::Scalar;

/// Which two-point difference is iterated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffKind {
    /// `D f(a) = (f(a) - f(qa)) / a`
    D,
    /// `θ f(a) = (f(a/q) - f(a)) / (a/q)`
    Theta,
}

type Eval<'a, S> = dyn Fn(&S) -> QResult<S> + Send + Sync + 'a;

/// A labelled single-variable function queried on q-lattices.
pub struct FuncHandle<'a, S> {
    pub label: String,
    eval: Box<Eval<'a, S>>,
}

impl<'a, S: Scalar> FuncHandle<'a, S> {
    pub fn new(label: impl Into<String>, f: impl Fn(&S) -> QResult<S> + Send + Sync + 'a) -> Self {
        FuncHandle {
            label: label.into(),
            eval: Box::new(f),
        }
    }

    pub fn eval(&self, x: &S) -> QResult<S> {
        (self.eval)(x)
    }

    /// `x ↦ f(c x)`.
    pub fn dilated<'b>(&'b self, c: S) -> FuncHandle<'b, S>
    where
        'a: 'b,
    {
        let label = format!("{}(({})·)", self.label, c.render());
        FuncHandle::new(label, move |x: &S| self.eval(&(c.clone() * x)))
    }
}

/// `[L^0 f(a), L^1 f(a), ..., L^n f(a)]` for `L = D` or `θ`, computed from the
/// `n + 1` lattice values by repeated divided differences.
pub fn qdiff_ladder<S: Scalar>(
    kind: DiffKind,
    f: &FuncHandle<'_, S>,
    a: &S,
    q: &QBase<S>,
    n: usize,
) -> QResult<Vec<S>> {
    if a.is_zero() {
        return Err(QError::domain("q-difference at a = 0"));
    }
    // lattice points b_j = a q^{±j}
    let step = match kind {
        DiffKind::D => q.q().clone(),
        DiffKind::Theta => q.q().one() / q.q(),
    };
    let mut pts = Vec::with_capacity(n + 1);
    let mut b = a.clone();
    for _ in 0..=n {
        pts.push(b.clone());
        b = b * &step;
    }
    let mut vals = pts.iter().map(|p| f.eval(p)).collect::<QResult<Vec<S>>>()?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(vals[0].clone());
    for _ in 0..n {
        let next: Vec<S> = match kind {
            DiffKind::D => (0..vals.len() - 1)
                .map(|j| (vals[j].clone() - &vals[j + 1]) / &pts[j])
                .collect(),
            DiffKind::Theta => (0..vals.len() - 1)
                .map(|j| (vals[j + 1].clone() - &vals[j]) / &pts[j + 1])
                .collect(),
        };
        vals = next;
        out.push(vals[0].clone());
    }
    Ok(out)
}

/// `L^n f(a)`; `n = 0` returns `f(a)`.
pub fn qdiff_apply<S: Scalar>(
    kind: DiffKind,
    f: &FuncHandle<'_, S>,
    a: &S,
    q: &QBase<S>,
    n: usize,
) -> QResult<S> {
    if n == 0 {
        if a.is_zero() {
            return Err(QError::domain("q-difference at a = 0"));
        }
        return f.eval(a);
    }
    Ok(qdiff_ladder(kind, f, a, q, n)?.pop().expect("ladder has n+1 entries"))
}

/// Right side of the q-Leibniz rule for `L^n {f g}(a)`.
pub fn leibniz_apply<S: Scalar>(
    kind: DiffKind,
    f: &FuncHandle<'_, S>,
    g: &FuncHandle<'_, S>,
    a: &S,
    q: &QBase<S>,
    n: usize,
) -> QResult<S> {
    let fl = qdiff_ladder(kind, f, a, q, n)?;
    let binom = qbinom_row(n, q);
    let mut total = a.zero();
    for k in 0..=n {
        let (shift, weight) = match kind {
            DiffKind::D => (q.pow(k), q.powi((k as i64) * (k as i64 - n as i64))),
            DiffKind::Theta => (q.powi(-(k as i64)), a.one()),
        };
        let gk = g.dilated(shift);
        let gd = qdiff_apply(kind, &gk, a, q, n - k)?;
        total = total + &(binom[k].clone() * &weight * &fl[k] * &gd);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn rq(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn square<'a>() -> FuncHandle<'a, Rational> {
        FuncHandle::new("a^2", |x: &Rational| Ok(x.clone() * x))
    }

    #[test]
    fn definitions_on_a_square() {
        let q = QBase::unchecked(rq(1, 2));
        let a = rq(3, 5);
        let d = qdiff_apply(DiffKind::D, &square(), &a, &q, 1).unwrap();
        assert_eq!(d, a.clone() * (rq(1, 1) - rq(1, 4)));
        let t = qdiff_apply(DiffKind::Theta, &square(), &a, &q, 1).unwrap();
        assert_eq!(t, a.clone() * (rq(2, 1) - rq(1, 2)));
        assert_eq!(qdiff_apply(DiffKind::D, &square(), &a, &q, 0).unwrap(), rq(9, 25));
        assert!(qdiff_apply(DiffKind::D, &square(), &rq(0, 1), &q, 1).is_err());
    }

    #[test]
    fn leibniz_examples() {
        let q = QBase::unchecked(rq(1, 2));
        let id = FuncHandle::new("a", |x: &Rational| Ok(x.clone()));
        let one = rq(1, 1);
        let d = leibniz_apply(DiffKind::D, &id, &id, &one, &q, 1).unwrap();
        assert_eq!(d, rq(3, 4));
        let t = leibniz_apply(DiffKind::Theta, &id, &id, &one, &q, 1).unwrap();
        assert_eq!(t, rq(3, 2));
        let c = FuncHandle::new("1", |x: &Rational| Ok(x.clone() * 0u32 + 1u32));
        for n in 0..5 {
            let l = leibniz_apply(DiffKind::D, &square(), &c, &rq(2, 3), &q, n).unwrap();
            let r = qdiff_apply(DiffKind::D, &square(), &rq(2, 3), &q, n).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn theta_is_conjugated_d() {
        let q = QBase::unchecked(rq(2, 3));
        let f = FuncHandle::new("cubic", |x: &Rational| Ok(x.clone() * x * x - x.clone() * 3u32));
        let a = rq(5, 7);
        let t = qdiff_apply(DiffKind::Theta, &f, &a, &q, 1).unwrap();
        let d = qdiff_apply(DiffKind::D, &f, &(a.clone() * rq(3, 2)), &q, 1).unwrap();
        assert_eq!(t, d);
    }
}
