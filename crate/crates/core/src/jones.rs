//! Kauffman bracket, Jones polynomial and the unnormalized (Khovanov-side)
//! Jones polynomial.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{circle_count, Diagram, DiagramError, OrientedDiagram};
use crate::laurent::{HalfInt, LaurentPoly, PolyError};

/// Default crossing count above which the bracket logs a cost warning.
pub const DEFAULT_BRACKET_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JonesError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("diagram is not positive")]
    NotPositiveDiagram,
    #[error("state sum over {crossings} crossings exceeds the 63-crossing limit")]
    TooManyCrossings { crossings: usize },
}

/// Kauffman bracket in the variable `A`, normalized so a crossingless
/// circle has bracket 1.
pub fn kauffman_bracket(d: &Diagram) -> Result<LaurentPoly, JonesError> {
    kauffman_bracket_capped(d, DEFAULT_BRACKET_CAP)
}

pub fn kauffman_bracket_capped(d: &Diagram, warn_above: usize) -> Result<LaurentPoly, JonesError> {
    let c = d.crossing_count();
    if c > 63 {
        return Err(JonesError::TooManyCrossings { crossings: c });
    }
    if c > warn_above {
        log::warn!("bracket state sum over {c} crossings enumerates 2^{c} states");
    }
    let delta = LaurentPoly::from_int_terms([(-1, 2), (-1, -2)]);
    let free = d.free_circles();
    if c == 0 {
        return Ok(delta.pow(free as u32 - 1));
    }
    let xs = d.crossings();
    // a split diagram can have one extra circle per piece
    let max_circles = 2 * c;
    // counts[b][k]: states with b B-smoothings and k circles
    let counts = (0..1u64 << c)
        .into_par_iter()
        .fold(
            || vec![vec![0u64; max_circles + 1]; c + 1],
            |mut acc, bits| {
                let circles = circle_count(xs, bits);
                acc[bits.count_ones() as usize][circles] += 1;
                acc
            },
        )
        .reduce(
            || vec![vec![0u64; max_circles + 1]; c + 1],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );
    let mut total = LaurentPoly::zero();
    for (b, row) in counts.iter().enumerate() {
        for (k, &n) in row.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let circles = k + free;
            let a_exp = c as i64 - 2 * b as i64;
            let term = LaurentPoly::monomial(BigInt::from(n), HalfInt::from_int(a_exp));
            total = total + &term * &delta.pow(circles as u32 - 1);
        }
    }
    Ok(total)
}

/// Jones polynomial V(t) = (-A^3)^(-w) <D> with A^-4 = t.
pub fn jones_polynomial(d: &Diagram) -> Result<LaurentPoly, JonesError> {
    jones_polynomial_capped(d, DEFAULT_BRACKET_CAP)
}

pub fn jones_polynomial_capped(d: &Diagram, warn_above: usize) -> Result<LaurentPoly, JonesError> {
    let w = d.writhe()?;
    let bracket = kauffman_bracket_capped(d, warn_above)?;
    Ok(bracket_to_jones(&bracket, w))
}

pub fn jones_polynomial_oriented(d: &OrientedDiagram) -> Result<LaurentPoly, JonesError> {
    let bracket = kauffman_bracket(&Diagram::new(d.arcs(), d.free_circles())?)?;
    Ok(bracket_to_jones(&bracket, d.writhe()))
}

fn bracket_to_jones(bracket: &LaurentPoly, writhe: i64) -> LaurentPoly {
    // A^k -> t^(-k/4); the doubled t-exponent is -k/2
    let sign_flip = writhe.rem_euclid(2) == 1;
    bracket.map_terms(
        |e| {
            let k = e / 2 - 3 * writhe;
            debug_assert!(k % 2 == 0, "bracket exponents are even after normalization");
            -k / 2
        },
        |_| sign_flip,
    )
}

/// `(q + q^-1) V(t)` with `t^(1/2) = -q`.
pub fn v_to_unnormalized(v: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    let parities: Vec<i64> = v.terms().map(|(e, _)| e.doubled().rem_euclid(2)).collect();
    if parities.windows(2).any(|w| w[0] != w[1]) {
        return Err(PolyError::MixedParity);
    }
    // t^(k/2) -> (-1)^k q^k, stored doubled as 2k
    let in_q = v.map_terms(|k| 2 * k, |k| k.rem_euclid(2) == 1);
    Ok(&in_q * &LaurentPoly::from_int_terms([(1, 1), (1, -1)]))
}

/// Inverse of [`v_to_unnormalized`]: exact division by `q + q^-1`, then
/// `q = -t^(1/2)`.
pub fn unnormalized_to_v(j: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    let quot = j.div_by_q_plus_inv()?;
    // q^m (doubled 2m) -> (-1)^m t^(m/2) (doubled m)
    Ok(quot.map_terms(|e| e / 2, |e| (e / 2).rem_euclid(2) == 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JonesSummary {
    pub min_deg: HalfInt,
    pub max_deg: HalfInt,
    /// Coefficient of `t^(min_deg + 1)`, zero when that power is absent.
    pub second_coeff: i64,
    /// |second_coeff|.
    pub p1: u64,
}

pub fn jones_summary(v: &LaurentPoly) -> Result<JonesSummary, PolyError> {
    let min_deg = v.min_deg().ok_or(PolyError::ZeroPolynomial)?;
    let max_deg = v.max_deg().ok_or(PolyError::ZeroPolynomial)?;
    let second = crate::laurent::small(&v.coeff(min_deg + HalfInt::from_int(1)));
    Ok(JonesSummary { min_deg, max_deg, second_coeff: second, p1: second.unsigned_abs() })
}

/// For a positive diagram: the exact minimum degree
/// `(c - |s_A| + 1)/2` and the upper bound `(2c + |s_B| - 1)/2` on the
/// maximum degree of V.
pub fn lickorish_bounds(d: &Diagram) -> Result<(HalfInt, HalfInt), JonesError> {
    if !d.is_positive()? {
        return Err(JonesError::NotPositiveDiagram);
    }
    let c = d.crossing_count() as i64;
    let sa = d.a_state_circles() as i64;
    let sb = d.b_state_circles() as i64;
    Ok((HalfInt::from_doubled(c - sa + 1), HalfInt::from_doubled(2 * c + sb - 1)))
}
