use super::poch::exact_negative_power;
use super::series::{sum_series, SeriesResult, Termination};
use super::QBase;
use crate::error::{QError, QResult};
use crate::policy::Policy;
use crate::scalar::Scalar;

/// A basic hypergeometric series `rΦs[num; den; q, z]`.
#[derive(Clone, Debug)]
pub struct HyperSpec<S> {
    pub num: Vec<S>,
    pub den: Vec<S>,
    pub q: QBase<S>,
    pub z: S,
    /// Explicit termination order, required for terminating sums in float towers.
    pub terminating: Option<usize>,
}

impl<S: Scalar> HyperSpec<S> {
    pub fn new(num: Vec<S>, den: Vec<S>, q: &QBase<S>, z: S) -> Self {
        HyperSpec {
            num,
            den,
            q: q.clone(),
            z,
            terminating: None,
        }
    }

    pub fn terminating_at(mut self, n: usize) -> Self {
        self.terminating = Some(n);
        self
    }

    /// `1 + s - r`, the power of `(-1)^n q^{C(n,2)}` carried by each term.
    pub fn balance(&self) -> i64 {
        1 + self.den.len() as i64 - self.num.len() as i64
    }

    /// Last index with a nonzero term when the series terminates.
    pub fn termination_order(&self) -> Option<usize> {
        let mut order = self.terminating;
        if S::is_exact() {
            let q = self.q.q().to_rational()?;
            for a in &self.num {
                if let Some(m) = a.to_rational().and_then(|a| exact_negative_power(&a, &q)) {
                    order = Some(order.map_or(m, |o| o.min(m)));
                }
            }
        }
        order
    }
}

/// Sum `Σ_n [(-1)^n q^{C(n,2)}]^{1+s-r} (num;q)_n / (den;q)_n · z^n / (q;q)_n`.
pub fn phi_rs<S: Scalar>(spec: &HyperSpec<S>, policy: &Policy) -> QResult<SeriesResult<S>> {
    let one = spec.z.one();
    if spec.z.is_zero() {
        return Ok(SeriesResult::exact(one, 1));
    }
    let e = spec.balance();
    let stop = match spec.termination_order() {
        Some(n) => Termination::Finite(n),
        None => {
            if S::is_exact() {
                return Err(QError::ExactModeUnsupported(
                    "a nonterminating basic hypergeometric series".into(),
                ));
            }
            if e < 0 {
                return Err(QError::domain(
                    "nonterminating series with more than s+1 numerator parameters diverges",
                ));
            }
            if e == 0 && spec.z.to_f64().abs() > policy.disc() {
                return Err(QError::domain(format!(
                    "|z| = {} exceeds 1 - margin for a balanced series",
                    spec.z.render()
                )));
            }
            Termination::Adaptive
        }
    };
    let q = spec.q.q().clone();
    let tiny = 16.0 * spec.z.epsilon();
    let mut num_t: Vec<S> = spec.num.clone();
    let mut den_t: Vec<S> = spec.den.clone();
    let mut qn = one.clone();
    let mut term = one.clone();
    sum_series(&one, policy, stop, |n| {
        if n == 0 {
            return Ok(term.clone());
        }
        // advance from term n-1 to term n using parameters at q^{n-1}
        let mut ratio = spec.z.clone();
        for a in &num_t {
            ratio = ratio * &(one.clone() - a);
        }
        for (b0, b) in spec.den.iter().zip(&den_t) {
            let f = one.clone() - b;
            if f.is_zero() || (tiny > 0.0 && f.to_f64().abs() <= tiny) {
                return Err(QError::pole(format!(
                    "denominator parameter {} meets q^-{}",
                    b0.render(),
                    n - 1
                )));
            }
            ratio = ratio / &f;
        }
        let qn1 = qn.clone() * &q;
        ratio = ratio.checked_div(&(one.clone() - &qn1), "(q;q)_n")?;
        if e != 0 {
            let sq = -qn.clone();
            ratio = ratio * &sq.powi(e)?;
        }
        term = term.clone() * &ratio;
        for a in num_t.iter_mut() {
            *a = a.clone() * &q;
        }
        for b in den_t.iter_mut() {
            *b = b.clone() * &q;
        }
        qn = qn1;
        Ok(term.clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::poch::pinf;
    use rug::Rational;

    fn rq(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn one_phi_zero_is_euler() {
        let p = Policy::default();
        let q = QBase::unchecked(0.5f64);
        let s = HyperSpec::new(vec![0.0], vec![], &q, 0.5);
        let v = phi_rs(&s, &p).unwrap().value;
        let oracle = 1.0 / pinf(&0.5, &q, &p).unwrap();
        assert!((v - oracle).abs() < 1e-10 * oracle);
        assert!((v - 3.462_746_619).abs() < 1e-8);
    }

    #[test]
    fn terminating_chu_example_is_exact() {
        let p = Policy::default();
        let q = QBase::unchecked(rq(1, 2));
        let s = HyperSpec::new(vec![rq(2, 1), rq(1, 3)], vec![rq(1, 5)], &q, rq(1, 2));
        let r = phi_rs(&s, &p).unwrap();
        assert_eq!(r.value, rq(1, 6));
        assert_eq!(r.terms_used, 2);
        assert_eq!(r.tail_estimate, 0.0);
    }

    #[test]
    fn zero_argument() {
        let p = Policy::default();
        let q = QBase::unchecked(rq(1, 2));
        let s = HyperSpec::new(vec![rq(3, 7)], vec![], &q, rq(0, 1));
        assert_eq!(phi_rs(&s, &p).unwrap().value, rq(1, 1));
    }

    #[test]
    fn errors() {
        let p = Policy::default();
        let q = QBase::unchecked(rq(1, 2));
        let s = HyperSpec::new(vec![rq(1, 3)], vec![], &q, rq(1, 2));
        assert!(matches!(phi_rs(&s, &p), Err(QError::ExactModeUnsupported(_))));
        let qf = QBase::unchecked(0.5f64);
        let s = HyperSpec::new(vec![0.3, 0.2], vec![0.1], &qf, 0.97);
        assert!(matches!(phi_rs(&s, &p), Err(QError::Domain(_))));
        let s = HyperSpec::new(vec![rq(8, 1), rq(1, 3)], vec![rq(4, 1)], &q, rq(1, 2));
        assert!(matches!(phi_rs(&s, &p), Err(QError::DenominatorPole(_))));
    }

    #[test]
    fn float_termination_must_be_explicit() {
        let p = Policy::default();
        let q = QBase::unchecked(0.5f64);
        let s = HyperSpec::new(vec![2.0, 1.0 / 3.0], vec![0.2], &q, 0.5).terminating_at(1);
        let v = phi_rs(&s, &p).unwrap().value;
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
    }
}
