//! Khovanov polynomials in the Knot-Atlas style: `a t^i q^j` is `Z^a` at
//! `(i, j)`, and a trailing `T^2` makes it `Z_2^a`. Coefficients may be
//! polynomials in `t`, as in `(1+t)q^3`.

use std::collections::BTreeMap;

use super::{BigradedGroups, KhError};

pub fn print(kh: &BigradedGroups) -> String {
    let mut rows: Vec<(i64, i64, String)> = Vec::new();
    for ((i, j), g) in kh.iter() {
        if g.free > 0 {
            rows.push((j, i, monomial(g.free, i, j, None)));
        }
        let mut orders: BTreeMap<u64, u64> = BTreeMap::new();
        for &t in &g.torsion {
            *orders.entry(t).or_default() += 1;
        }
        for (t, n) in orders {
            rows.push((j, i, monomial(n, i, j, Some(t))));
        }
    }
    if rows.is_empty() {
        return "0".to_string();
    }
    rows.sort_by_key(|a| (a.0, a.1));
    rows.into_iter().map(|r| r.2).collect::<Vec<_>>().join(" + ")
}

fn monomial(coeff: u64, i: i64, j: i64, torsion: Option<u64>) -> String {
    let mut s = String::new();
    if coeff != 1 {
        s.push_str(&coeff.to_string());
    }
    if i != 0 {
        s.push_str(&format!("t^{i}"));
    }
    s.push_str(&format!("q^{j}"));
    if let Some(t) = torsion {
        s.push_str(&format!("T^{t}"));
    }
    s
}

pub fn parse_kh_polynomial(text: &str) -> Result<BigradedGroups, KhError> {
    let mut p = Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, text };
    let mut out = BigradedGroups::new();
    if p.chars == ['0'] {
        return Ok(out);
    }
    loop {
        p.term(&mut out)?;
        match p.peek() {
            None => break,
            Some('+') => p.pos += 1,
            Some(_) => return Err(p.err("expected '+' between terms")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> KhError {
        KhError::MalformedKhPolynomial(format!("{what} at offset {} in {:?}", self.pos, self.text))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn uint(&mut self) -> Option<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (start != self.pos).then(|| self.chars[start..self.pos].iter().collect::<String>().parse().ok()).flatten()
    }

    /// `^k`, `^-k`, `^{k}` or `^(k)`; exponent 1 when absent.
    fn exponent(&mut self) -> Result<i64, KhError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let close = match self.peek() {
            Some('{') => Some('}'),
            Some('(') => Some(')'),
            _ => None,
        };
        if close.is_some() {
            self.pos += 1;
        }
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        let v = self.uint().ok_or_else(|| self.err("expected an exponent"))? as i64;
        if let Some(c) = close {
            if self.peek() != Some(c) {
                return Err(self.err(&format!("expected '{c}'")));
            }
            self.pos += 1;
        }
        Ok(if neg { -v } else { v })
    }

    /// A polynomial in `t` with nonnegative coefficients, inside parentheses.
    fn t_poly(&mut self) -> Result<BTreeMap<i64, u64>, KhError> {
        let mut poly = BTreeMap::new();
        loop {
            let coeff = self.uint();
            let exp = if self.peek() == Some('t') {
                self.pos += 1;
                self.exponent()?
            } else if coeff.is_some() {
                0
            } else {
                return Err(self.err("expected a monomial in t"));
            };
            *poly.entry(exp).or_default() += coeff.unwrap_or(1);
            match self.peek() {
                Some('+') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(poly);
                }
                _ => return Err(self.err("expected '+' or ')'")),
            }
        }
    }

    fn term(&mut self, out: &mut BigradedGroups) -> Result<(), KhError> {
        let start = self.pos;
        let mut t_part: BTreeMap<i64, u64> = BTreeMap::from([(0, self.uint().unwrap_or(1))]);
        let mut q_exp: Option<i64> = None;
        let mut torsion: Option<i64> = None;
        loop {
            match self.peek() {
                Some('*') => self.pos += 1,
                Some('t') => {
                    self.pos += 1;
                    let e = self.exponent()?;
                    t_part = t_part.into_iter().map(|(k, v)| (k + e, v)).collect();
                }
                Some('q') => {
                    self.pos += 1;
                    let e = self.exponent()?;
                    q_exp = Some(q_exp.unwrap_or(0) + e);
                }
                Some('T') => {
                    self.pos += 1;
                    if torsion.is_some() {
                        return Err(self.err("repeated T"));
                    }
                    torsion = Some(self.exponent()?);
                }
                Some('(') => {
                    self.pos += 1;
                    let factor = self.t_poly()?;
                    let mut product = BTreeMap::new();
                    for (a, x) in &t_part {
                        for (b, y) in &factor {
                            *product.entry(a + b).or_insert(0u64) += x * y;
                        }
                    }
                    t_part = product;
                }
                _ => break,
            }
        }
        if self.pos == start {
            return Err(self.err("expected a term"));
        }
        let j = q_exp.ok_or_else(|| self.err("term has no q power"))?;
        match torsion {
            None => t_part.into_iter().for_each(|(i, a)| out.add_free(i, j, a)),
            Some(2) => t_part.into_iter().for_each(|(i, a)| out.add_torsion(i, j, 2, a)),
            Some(k) => return Err(KhError::UnsupportedTorsionExponent(k)),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn simple_terms() {
        let g = parse_kh_polynomial("(1+t)q^3").unwrap();
        assert_eq!(g.get(0, 3).unwrap().free, 1);
        assert_eq!(g.get(1, 3).unwrap().free, 1);
        assert_eq!(g.len(), 2);
        let g = parse_kh_polynomial("t^2 q^5 T^2").unwrap();
        assert_eq!(g.get(2, 5).unwrap().torsion, vec![2]);
        assert_eq!(g.get(2, 5).unwrap().free, 0);
        let g = parse_kh_polynomial("q^{-1} + q + 2t^{-3}q^{-7}T^{2}").unwrap();
        assert_eq!(g.get(0, -1).unwrap().free, 1);
        assert_eq!(g.get(0, 1).unwrap().free, 1);
        assert_eq!(g.get(-3, -7).unwrap().torsion, vec![2, 2]);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "t^2", "q^3 - t q^5", "q^", "(1+t q^3", "q^3 +", "x q^2", "q^3 T^2 T^2"] {
            assert!(matches!(parse_kh_polynomial(bad), Err(KhError::MalformedKhPolynomial(_))), "{bad}");
        }
        assert_eq!(parse_kh_polynomial("t q^3 T^3"), Err(KhError::UnsupportedTorsionExponent(3)));
        assert_eq!(parse_kh_polynomial("t q^3 T"), Err(KhError::UnsupportedTorsionExponent(1)));
    }

    #[test]
    fn printer_order_and_zero() {
        let g = parse_kh_polynomial("t^3q^9 + q^1 + t^3q^7T^2 + t^2q^5 + q^3").unwrap();
        assert_eq!(print(&g), "q^1 + q^3 + t^2q^5 + t^3q^7T^2 + t^3q^9");
        assert_eq!(print(&BigradedGroups::new()), "0");
        assert_eq!(parse_kh_polynomial("0").unwrap(), BigradedGroups::new());
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(terms in proptest::collection::vec((-6i64..6, -12i64..12, 0u64..3, 0u64..3), 0..8)) {
            let mut g = BigradedGroups::new();
            for (i, j, free, tors) in terms {
                g.add_free(i, j, free);
                g.add_torsion(i, j, 2, tors);
            }
            let text = print(&g);
            let back = parse_kh_polynomial(&text).unwrap();
            prop_assert_eq!(print(&back), text);
            prop_assert_eq!(back, g);
        }
    }
}
