use crate::error::QResult;
use crate::qcore::QBase;
use crate::scalar::Scalar;

/// The two seven-variable q-difference equations characterising functions
/// of the form `T{f(..., x, 0)}` (equation I) and `E{f(..., x, 0)}` (equation II).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffEq {
    I,
    II,
}

type Eval7<'a, S> = dyn Fn(&[S; 7]) -> QResult<S> + Send + Sync + 'a;

/// A function of `(a, b, c, d, e, x, y)`.
pub struct SevenPointFunc<'a, S> {
    pub label: String,
    eval: Box<Eval7<'a, S>>,
}

impl<'a, S: Scalar> SevenPointFunc<'a, S> {
    pub fn new(label: impl Into<String>, f: impl Fn(&[S; 7]) -> QResult<S> + Send + Sync + 'a) -> Self {
        SevenPointFunc {
            label: label.into(),
            eval: Box::new(f),
        }
    }

    pub fn eval(&self, pt: &[S; 7]) -> QResult<S> {
        (self.eval)(pt)
    }

    /// Evaluate at `(x q^i, y q^j)` with the five parameters of `pt`.
    fn at(&self, pt: &[S; 7], q: &QBase<S>, i: usize, j: usize) -> QResult<S> {
        let mut p = pt.clone();
        p[5] = p[5].clone() * &q.pow(i);
        p[6] = p[6].clone() * &q.pow(j);
        (self.eval)(&p)
    }
}

/// Both sides of the chosen equation at `pt = (a, b, c, d, e, x, y)`.
pub fn diffeq_sides<S: Scalar>(
    which: DiffEq,
    f: &SevenPointFunc<'_, S>,
    pt: &[S; 7],
    q: &QBase<S>,
) -> QResult<(S, S)> {
    let [a, b, c, d, e, x, y] = pt.clone();
    let qq = q.q().clone();
    let de1 = (d.clone() + &e) / &qq;
    let de2 = d.clone() * &e / &(qq.clone() * &qq);
    let e1 = a.clone() + &b + &c;
    let e2 = a.clone() * &b + &(a.clone() * &c) + &(b.clone() * &c);
    let e3 = a.clone() * &b * &c;
    // x-shift of the left block and the two x-shifts compared on the right
    let (lx, rx_hi, rx_lo, y0) = match which {
        DiffEq::I => (0usize, 0usize, 1usize, 0usize),
        DiffEq::II => (1, 1, 0, 1),
    };
    let l = |j: usize| f.at(pt, q, lx, j);
    let lhs = x.clone()
        * &((l(0)? - &l(1)?) - &(de1 * &(l(1)? - &l(2)?)) + &(de2 * &(l(2)? - &l(3)?)));
    let r = |j: usize| -> QResult<S> { Ok(f.at(pt, q, rx_hi, j + y0)? - &f.at(pt, q, rx_lo, j + y0)?) };
    let rhs = y.clone() * &(r(0)? - &(e1 * &r(1)?) + &(e2 * &r(2)?) - &(e3 * &r(3)?));
    Ok((lhs, rhs))
}

/// `|LHS - RHS|` of the chosen equation.
pub fn diffeq_residual<S: Scalar>(
    which: DiffEq,
    f: &SevenPointFunc<'_, S>,
    pt: &[S; 7],
    q: &QBase<S>,
) -> QResult<S> {
    let (l, r) = diffeq_sides(which, f, pt, q)?;
    Ok((l - &r).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn y_independent_function_solves_equation_one() {
        let q = QBase::unchecked(Rational::from((1, 3)));
        let f = SevenPointFunc::new("const in y", |p: &[Rational; 7]| Ok(Rational::from(0u32) * &p[6] + 7u32));
        let pt: [Rational; 7] = std::array::from_fn(|i| Rational::from((i as i64 + 1, 9)));
        assert_eq!(diffeq_residual(DiffEq::I, &f, &pt, &q).unwrap(), Rational::new());
    }
}
