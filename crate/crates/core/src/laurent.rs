//! Exact Laurent polynomials in one variable with half-integer exponents.
//!
//! Exponents are stored doubled (`t^(k/2)` is stored under key `k`), so
//! `t^(1/2)` needs no rational arithmetic. Coefficients are arbitrary
//! precision integers and zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt(doubled)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer value, if this is an integer.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn scale(self, k: i64) -> Self {
        HalfInt(self.0 * k)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for HalfInt {
    type Err = String;

    /// Accepts `k` or `k/2`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("not a half-integer: {s:?}");
        match s.strip_suffix("/2") {
            Some(num) => {
                let k: i64 = num.trim().parse().map_err(|_| bad())?;
                if k % 2 == 0 {
                    return Err(bad());
                }
                Ok(HalfInt(k))
            }
            None => Ok(HalfInt::from_int(s.parse().map_err(|_| bad())?)),
        }
    }
}

// integers serialize as numbers, halves as "k/2"
impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self.to_int() {
            Some(n) => ser.serialize_i64(n),
            None => ser.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(de)? {
            Repr::Int(n) => Ok(HalfInt::from_int(n)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("malformed polynomial {text:?}: {reason}")]
    Malformed { text: String, reason: String },
    #[error("exponents of mixed parity; not a Jones polynomial")]
    MixedParity,
    #[error("polynomial is not divisible by q + q^-1")]
    NotDivisible,
    #[error("the zero polynomial has no degrees")]
    ZeroPolynomial,
    #[error("unexpected half-integer exponent")]
    HalfIntegerExponent,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, HalfInt::ZERO)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: HalfInt) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// Builds a polynomial from `(coefficient, integer exponent)` pairs.
    pub fn from_int_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (c, e) in terms {
            p.add_term(HalfInt::from_int(e), BigInt::from(c));
        }
        p
    }

    /// Builds a polynomial from `(coefficient, doubled exponent)` pairs.
    pub fn from_doubled_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (c, e) in terms {
            p.add_term(HalfInt::from_doubled(e), BigInt::from(c));
        }
        p
    }

    pub fn add_term(&mut self, exp: HalfInt, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp.doubled()).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp.doubled());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: HalfInt) -> BigInt {
        self.terms.get(&exp.doubled()).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (HalfInt, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (HalfInt::from_doubled(e), c))
    }

    pub fn min_deg(&self) -> Option<HalfInt> {
        self.terms.keys().next().map(|&e| HalfInt::from_doubled(e))
    }

    pub fn max_deg(&self) -> Option<HalfInt> {
        self.terms.keys().next_back().map(|&e| HalfInt::from_doubled(e))
    }

    /// Coefficient of the highest-degree term.
    pub fn lead_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// Applies `e -> f(e)` to every (doubled) exponent and multiplies each
    /// coefficient by `sign(e)`.
    pub fn map_terms(&self, f: impl Fn(i64) -> i64, sign: impl Fn(i64) -> bool) -> Self {
        let mut out = Self::zero();
        for (&e, c) in &self.terms {
            let c = if sign(e) { -c.clone() } else { c.clone() };
            out.add_term(HalfInt::from_doubled(f(e)), c);
        }
        out
    }

    /// `p(x) -> p(x^-1)`.
    pub fn invert_variable(&self) -> Self {
        self.map_terms(|e| -e, |_| false)
    }

    /// `p(x) -> x^shift * p(x)`.
    pub fn shift(&self, by: HalfInt) -> Self {
        self.map_terms(|e| e + by.doubled(), |_| false)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        if k.is_zero() {
            return out;
        }
        for (&e, c) in &self.terms {
            out.terms.insert(e, c * k);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates a polynomial with integer exponents at an integer, provided
    /// the result is an integer (negative exponents need `x = ±1`).
    pub fn eval_int(&self, x: i64) -> Option<BigInt> {
        let mut total = BigInt::zero();
        for (&e, c) in &self.terms {
            if e % 2 != 0 {
                return None;
            }
            let k = e / 2;
            let term = if k >= 0 {
                num_traits::pow(BigInt::from(x), k as usize)
            } else if x == 1 || x == -1 {
                num_traits::pow(BigInt::from(x), (-k) as usize)
            } else {
                return None;
            };
            total += c * term;
        }
        Some(total)
    }

    /// Exact quotient by `x + x^-1`.
    pub fn div_by_q_plus_inv(&self) -> Result<Self, PolyError> {
        if !self.has_integer_exponents() {
            return Err(PolyError::HalfIntegerExponent);
        }
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let floor = match self.min_deg() {
            Some(m) => m.doubled(),
            None => return Ok(quot),
        };
        while let Some(top) = rem.max_deg() {
            // quotient exponents lie in [min + 1, max - 1]
            if top.doubled() < floor + 4 {
                return Err(PolyError::NotDivisible);
            }
            let c = rem.coeff(top);
            let e = top.doubled() - 2;
            quot.add_term(HalfInt::from_doubled(e), c.clone());
            rem.add_term(top, -c.clone());
            rem.add_term(HalfInt::from_doubled(e - 2), -c);
        }
        Ok(quot)
    }

    /// Canonical text form in variable `var`, ascending exponents.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if e == 0 {
                out.push_str(&mag.to_string());
                continue;
            }
            if !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(var);
            if e % 2 != 0 {
                out.push_str(&format!("^({e}/2)"));
            } else if e != 2 {
                out.push_str(&format!("^{}", e / 2));
            }
        }
        out
    }

    /// Parses the text form in variable `var`. Accepts `^k`, `^-k`, `^(k)`,
    /// `^{k}` and half-integer `^(k/2)`, optional `*` between coefficient and
    /// variable, and arbitrary whitespace.
    pub fn parse(text: &str, var: char) -> Result<Self, PolyError> {
        let err = |reason: &str| PolyError::Malformed { text: text.to_string(), reason: reason.to_string() };
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err("empty input"));
        }
        let mut pos = 0;
        let mut poly = Self::zero();
        let mut first = true;
        while pos < chars.len() {
            let mut sign = BigInt::one();
            if chars[pos] == '+' || chars[pos] == '-' {
                if chars[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            } else if !first {
                return Err(err("expected '+' or '-' between terms"));
            }
            first = false;
            let start = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff: Option<BigInt> = if pos > start {
                let s: String = chars[start..pos].iter().collect();
                Some(s.parse().map_err(|_| err("bad coefficient"))?)
            } else {
                None
            };
            if pos < chars.len() && chars[pos] == '*' {
                if coeff.is_none() {
                    return Err(err("'*' without coefficient"));
                }
                pos += 1;
            }
            let mut exp = 0i64;
            if pos < chars.len() && chars[pos] == var {
                pos += 1;
                exp = 2;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let (e, next) = parse_exponent(&chars, pos).map_err(|r| err(&r))?;
                    exp = e;
                    pos = next;
                }
            } else if coeff.is_none() {
                return Err(err("expected coefficient or variable"));
            }
            let c = coeff.unwrap_or_else(BigInt::one) * sign;
            poly.add_term(HalfInt::from_doubled(exp), c);
        }
        Ok(poly)
    }
}

/// Parses an exponent at `pos`; returns the doubled exponent and new position.
fn parse_exponent(chars: &[char], mut pos: usize) -> Result<(i64, usize), String> {
    let close = match chars.get(pos) {
        Some('(') => Some(')'),
        Some('{') => Some('}'),
        _ => None,
    };
    if close.is_some() {
        pos += 1;
    }
    let read_int = |pos: &mut usize| -> Result<i64, String> {
        let start = *pos;
        if matches!(chars.get(*pos), Some('-') | Some('+')) {
            *pos += 1;
        }
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        let s: String = chars[start..*pos].iter().collect();
        s.parse::<i64>().map_err(|_| format!("bad exponent {s:?}"))
    };
    let num = read_int(&mut pos)?;
    let mut doubled = 2 * num;
    if let Some(close) = close {
        if chars.get(pos) == Some(&'/') {
            pos += 1;
            let den = read_int(&mut pos)?;
            if den != 2 {
                return Err("only halves are allowed as fractional exponents".into());
            }
            doubled = num;
        }
        if chars.get(pos) != Some(&close) {
            return Err(format!("missing '{close}'"));
        }
        pos += 1;
    }
    Ok((doubled, pos))
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(HalfInt::from_doubled(e), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(HalfInt::from_doubled(e), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(HalfInt::from_doubled(e1 + e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.map_terms(|e| e, |_| true)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("t"))
    }
}

/// Serialized as its text form in `t`.
impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text("t"))
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        LaurentPoly::parse(&s, 't').map_err(serde::de::Error::custom)
    }
}

/// Converts a small coefficient to `i64`, for reporting.
pub fn small(c: &BigInt) -> i64 {
    c.to_i64().expect("coefficient exceeds i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, 't').unwrap()
    }

    #[test]
    fn half_int_text_and_serde() {
        assert_eq!("5/2".parse::<HalfInt>(), Ok(HalfInt::from_doubled(5)));
        assert_eq!("-3".parse::<HalfInt>(), Ok(HalfInt::from_int(-3)));
        assert!("4/2".parse::<HalfInt>().is_err());
        assert_eq!(serde_json::to_string(&HalfInt::from_doubled(-1)).unwrap(), "\"-1/2\"");
        assert_eq!(serde_json::to_string(&HalfInt::from_int(12)).unwrap(), "12");
        assert_eq!(serde_json::from_str::<HalfInt>("\"7/2\"").unwrap(), HalfInt::from_doubled(7));
        assert_eq!(serde_json::from_str::<HalfInt>("4").unwrap(), HalfInt::from_int(4));
    }

    #[test]
    fn prints_canonical_form() {
        let v = LaurentPoly::from_int_terms([(1, 1), (-2, 2), (3, 3)]);
        assert_eq!(v.to_text("t"), "t - 2t^2 + 3t^3");
        let h = LaurentPoly::from_doubled_terms([(-1, 1), (-1, 5)]);
        assert_eq!(h.to_text("t"), "-t^(1/2) - t^(5/2)");
        assert_eq!(LaurentPoly::from_int_terms([(4, -1), (-7, 0), (4, 1)]).to_text("t"), "4t^-1 - 7 + 4t");
        assert_eq!(LaurentPoly::zero().to_text("z"), "0");
    }

    #[test]
    fn parses_knotinfo_style() {
        let v = p("t^3+t^5-t^6+t^7-t^8+t^9-t^10");
        assert_eq!(v.min_deg(), Some(HalfInt::from_int(3)));
        assert_eq!(v.max_deg(), Some(HalfInt::from_int(10)));
        assert_eq!(p("4*t^(-1) - 7 + 4 t^{1}"), LaurentPoly::from_int_terms([(4, -1), (-7, 0), (4, 1)]));
        assert_eq!(p("-t^(1/2)-t^(5/2)"), LaurentPoly::from_doubled_terms([(-1, 1), (-1, 5)]));
    }

    #[test]
    fn rejects_garbage() {
        assert!(LaurentPoly::parse("", 't').is_err());
        assert!(LaurentPoly::parse("t^", 't').is_err());
        assert!(LaurentPoly::parse("t t", 't').is_err());
        assert!(LaurentPoly::parse("t^(1/3)", 't').is_err());
        assert!(LaurentPoly::parse("x", 't').is_err());
    }

    #[test]
    fn division_by_q_plus_inverse() {
        let j = LaurentPoly::from_int_terms([(1, 1), (-1, 3), (1, 5), (1, 7), (1, 9), (1, 11), (-1, 13), (-1, 17)]);
        let quot = j.div_by_q_plus_inv().unwrap();
        let back = &quot * &LaurentPoly::from_int_terms([(1, 1), (1, -1)]);
        assert_eq!(back, j);
        assert_eq!(LaurentPoly::from_int_terms([(1, 1)]).div_by_q_plus_inv(), Err(PolyError::NotDivisible));
        assert_eq!(LaurentPoly::from_int_terms([(1, 3), (2, 1)]).div_by_q_plus_inv(), Err(PolyError::NotDivisible));
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-50i64..50, -12i64..12), 0..8)
            .prop_map(LaurentPoly::from_doubled_terms)
    }

    proptest! {
        #[test]
        fn text_round_trip(poly in arb_poly()) {
            let text = poly.to_text("t");
            if !poly.is_zero() {
                prop_assert_eq!(LaurentPoly::parse(&text, 't').unwrap(), poly.clone());
            }
            prop_assert_eq!(LaurentPoly::parse(&poly.to_text("q"), 'q').map(|x| x.to_text("q")).unwrap_or_else(|_| "0".into()), poly.to_text("q"));
        }

        #[test]
        fn multiplication_by_q_plus_inv_is_invertible(poly in arb_poly()) {
            let poly = poly.map_terms(|e| 2 * e, |_| false);
            let qq = LaurentPoly::from_int_terms([(1, 1), (1, -1)]);
            prop_assert_eq!((&poly * &qq).div_by_q_plus_inv().unwrap(), poly);
        }
    }
}
