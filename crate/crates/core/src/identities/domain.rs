use std::ops::RangeBounds;

use rug::Rational;

use super::params::Params;
use super::support::q_exponent;
use super::Mode;
use crate::policy::Policy;

/// Collects violated clauses. Float mode tightens every `|v| < bound` to
/// `|v| <= (1 - margin) * bound`.
pub struct Domain<'a> {
    pub params: &'a Params,
    pub mode: Mode,
    q_max: f64,
    disc: f64,
    out: Vec<String>,
}

impl<'a> Domain<'a> {
    pub fn new(params: &'a Params, mode: Mode, policy: &Policy) -> Self {
        Domain {
            params,
            mode,
            q_max: policy.q_max,
            disc: policy.disc(),
            out: Vec::new(),
        }
    }

    pub fn r(&self, name: &str) -> Rational {
        self.params.scalar(name).cloned().unwrap_or_default()
    }

    pub fn n(&self, name: &str) -> i64 {
        self.params.int(name).unwrap_or(0)
    }

    pub fn q(&self) -> Rational {
        self.r("q")
    }

    pub fn push(&mut self, msg: impl Into<String>) {
        self.out.push(msg.into());
    }

    pub fn is_clean(&self) -> bool {
        self.out.is_empty()
    }

    pub fn into_violations(self) -> Vec<String> {
        self.out
    }

    pub(super) fn base_q(&mut self) {
        let q = self.q();
        if q <= 0 || q >= 1 {
            self.push(format!("0<q<1 (got q = {q})"));
        } else if self.mode == Mode::Float && q.to_f64() > self.q_max {
            self.push(format!("q<=q_max={} (got q = {q})", self.q_max));
        }
    }

    /// `|v| < bound`.
    pub fn below(&mut self, label: &str, v: &Rational, bound: &Rational) {
        let ok = match self.mode {
            Mode::Exact => Rational::from(v.abs_ref()) < *bound,
            Mode::Float => v.to_f64().abs() <= self.disc * bound.to_f64(),
        };
        if !ok {
            self.push(format!("|{label}|<{bound} (got {:.6})", v.to_f64().abs()));
        }
    }

    /// `|v| < 1`.
    pub fn below_one(&mut self, label: &str, v: &Rational) {
        self.below(label, v, &Rational::from(1));
    }

    /// `|x| < 1` for every named scalar.
    pub fn each_below_one(&mut self, names: &[&str]) {
        for n in names {
            let v = self.r(n);
            self.below_one(n, &v);
        }
    }

    pub fn nonzero(&mut self, label: &str, v: &Rational) {
        if *v == 0 {
            self.push(format!("{label} ≠ 0"));
        }
    }

    /// `v != q^m` for every integer `m` in `range`.
    pub fn not_q_power(&mut self, label: &str, v: &Rational, range: impl RangeBounds<i64>) {
        if let Some(m) = q_exponent(v, &self.q()) {
            if range.contains(&m) {
                self.push(format!("{label} != q^{m} (pole)"));
            }
        }
    }

    /// Denominator `(v;q)_k` never vanishes: `v != q^{-j}` for `0 <= j < len`.
    pub fn poch_nonzero(&mut self, label: &str, v: &Rational, len: Option<i64>) {
        let lo = match len {
            Some(l) => -(l - 1),
            None => i64::MIN,
        };
        if let Some(m) = q_exponent(v, &self.q()) {
            if m <= 0 && m >= lo {
                self.push(format!("({label};q)_k ≠ 0 ({label} = q^{m})"));
            }
        }
    }
}
