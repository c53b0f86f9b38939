use rug::ops::Pow;
use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;
use serde::{Serialize, Serializer};

use crate::error::{QError, QResult};
use crate::qcore::QBase;
use crate::scalar::Scalar;

/// A parameter value: every scalar is carried as an exact rational so the
/// same assignment can be evaluated in any tower.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Scalar(Rational),
    Int(i64),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Scalar(r) => write!(f, "{r}"),
            ParamValue::Int(i) => write!(f, "{i}"),
        }
    }
}

impl Serialize for ParamValue {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An ordered name → value assignment.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Params(BTreeMap<String, ParamValue>);

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn set_scalar(&mut self, name: &str, v: Rational) -> &mut Self {
        self.0.insert(name.to_string(), ParamValue::Scalar(v));
        self
    }

    pub fn set_int(&mut self, name: &str, v: i64) -> &mut Self {
        self.0.insert(name.to_string(), ParamValue::Int(v));
        self
    }

    pub fn with_scalar(mut self, name: &str, v: Rational) -> Self {
        self.set_scalar(name, v);
        self
    }

    pub fn with_int(mut self, name: &str, v: i64) -> Self {
        self.set_int(name, v);
        self
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.0.get(name)
    }

    pub fn scalar(&self, name: &str) -> QResult<&Rational> {
        match self.0.get(name) {
            Some(ParamValue::Scalar(r)) => Ok(r),
            Some(ParamValue::Int(_)) => Err(QError::InvalidParams(format!("`{name}` must be a scalar"))),
            None => Err(QError::InvalidParams(format!("missing parameter `{name}`"))),
        }
    }

    pub fn int(&self, name: &str) -> QResult<i64> {
        match self.0.get(name) {
            Some(ParamValue::Int(i)) => Ok(*i),
            Some(ParamValue::Scalar(_)) => Err(QError::InvalidParams(format!("`{name}` must be an integer"))),
            None => Err(QError::InvalidParams(format!("missing parameter `{name}`"))),
        }
    }

    /// Scalar as `f64`, for domain checks and precision estimates.
    pub fn f(&self, name: &str) -> f64 {
        self.scalar(name).map(|r| r.to_f64()).unwrap_or(f64::NAN)
    }

    /// Integer slot as `usize` (negative values clamp to 0; schemas reject them first).
    pub fn u(&self, name: &str) -> usize {
        self.int(name).map(|i| i.max(0) as usize).unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ParamValue)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `name=value` pairs in name order.
    pub fn rendered(&self) -> Vec<(String, String)> {
        self.0.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
    }
}

/// Parse `3`, `-2/7`, `0.125` or `1.5e-3` into an exact rational.
pub fn parse_rational(text: &str) -> QResult<Rational> {
    let t = text.trim();
    let bad = || QError::InvalidParams(format!("cannot read `{t}` as a number"));
    if t.is_empty() {
        return Err(bad());
    }
    if t.contains('/') {
        return Rational::parse(t).map(Rational::from).map_err(|_| bad());
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num = rug::Integer::parse(if digits.is_empty() { "0" } else { &digits })
        .map(rug::Integer::from)
        .map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = rug::Integer::from(10);
    let mut r = Rational::from(num);
    if scale >= 0 {
        r *= Rational::from(ten.pow(scale as u32));
    } else {
        r /= Rational::from(ten.pow((-scale) as u32));
    }
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Parameters lifted into one scalar tower.
pub struct Args<'p, S> {
    params: &'p Params,
    proto: S,
}

impl<'p, S: Scalar> Args<'p, S> {
    pub fn new(params: &'p Params, proto: S) -> Self {
        Args { params, proto }
    }

    pub fn params(&self) -> &Params {
        self.params
    }

    pub fn proto(&self) -> &S {
        &self.proto
    }

    /// Scalar slot (the schema was validated before evaluation).
    pub fn s(&self, name: &str) -> S {
        let r = self
            .params
            .scalar(name)
            .unwrap_or_else(|e| panic!("schema-checked parameter unavailable: {e}"));
        self.proto.lift(r)
    }

    pub fn n(&self, name: &str) -> usize {
        self.params.u(name)
    }

    pub fn q(&self) -> QBase<S> {
        QBase::unchecked(self.s("q"))
    }

    pub fn int(&self, v: i64) -> S {
        self.proto.int(v)
    }

    pub fn rat(&self, num: i64, den: i64) -> S {
        self.proto.lift(&Rational::from((num, den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_numbers() {
        assert_eq!(parse_rational("1/3").unwrap(), Rational::from((1, 3)));
        assert_eq!(parse_rational("-2/6").unwrap(), Rational::from((-1, 3)));
        assert_eq!(parse_rational("0.125").unwrap(), Rational::from((1, 8)));
        assert_eq!(parse_rational("-1.5e-3").unwrap(), Rational::from((-3, 2000)));
        assert_eq!(parse_rational("2E2").unwrap(), Rational::from(200));
        assert_eq!(parse_rational(".5").unwrap(), Rational::from((1, 2)));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn params_render_in_name_order() {
        let p = Params::new()
            .with_scalar("q", Rational::from((1, 2)))
            .with_int("n", 3)
            .with_scalar("a", Rational::from((-1, 4)));
        let names: Vec<_> = p.rendered().into_iter().map(|(k, _)| k).collect();
        assert_eq!(names, ["a", "n", "q"]);
    }
}
