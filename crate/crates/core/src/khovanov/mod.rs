//! Integral Khovanov homology: bigraded groups, the cube-of-resolutions
//! complex, extreme quantum gradings, and the t/q/T text grammar.

mod complex;
mod text;

pub use complex::{chain_complex, khovanov_homology, khovanov_homology_capped, ChainSlice, DEFAULT_KH_CAP};
pub use text::parse_kh_polynomial;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::laurent::{HalfInt, LaurentPoly};
use crate::snf::SnfError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KhError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Snf(#[from] SnfError),
    #[error("{crossings} crossings exceeds the Khovanov cap of {cap}")]
    CrossingCapExceeded { crossings: usize, cap: usize },
    #[error("Khovanov homology is empty")]
    EmptyHomology,
    #[error("malformed Khovanov polynomial: {0}")]
    MalformedKhPolynomial(String),
    #[error("torsion marker T^{0} is not supported, only T^2")]
    UnsupportedTorsionExponent(i64),
}

/// One group `Z^free + sum Z/t` for `t` in `torsion` (ascending).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KhGroup {
    pub free: u64,
    pub torsion: Vec<u64>,
}

impl KhGroup {
    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhEntry {
    pub i: i64,
    pub j: i64,
    pub free: u64,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

/// `Kh^{i,j}` keyed by `(i, j)`; zero groups are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<KhEntry>", from = "Vec<KhEntry>")]
pub struct BigradedGroups {
    entries: BTreeMap<(i64, i64), KhGroup>,
}

impl BigradedGroups {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_free(&mut self, i: i64, j: i64, rank: u64) {
        if rank > 0 {
            self.entries.entry((i, j)).or_default().free += rank;
        }
    }

    pub fn add_torsion(&mut self, i: i64, j: i64, order: u64, count: u64) {
        if count == 0 || order < 2 {
            return;
        }
        let g = self.entries.entry((i, j)).or_default();
        g.torsion.extend(std::iter::repeat_n(order, count as usize));
        g.torsion.sort_unstable();
    }

    pub fn get(&self, i: i64, j: i64) -> Option<&KhGroup> {
        self.entries.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &KhGroup)> + '_ {
        self.entries.iter().map(|(k, g)| (*k, g))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Smallest and largest quantum grading carrying a nonzero group.
    pub fn j_range(&self) -> Option<(i64, i64)> {
        let js = self.entries.keys().map(|&(_, j)| j);
        Some((js.clone().min()?, js.max()?))
    }

    /// Groups of the mirror image: free parts move to `(-i, -j)`, torsion to
    /// `(1 - i, -j)`.
    pub fn mirror(&self) -> Self {
        let mut out = BigradedGroups::new();
        for ((i, j), g) in self.iter() {
            out.add_free(-i, -j, g.free);
            for &t in &g.torsion {
                out.add_torsion(1 - i, -j, t, 1);
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        text::print(self)
    }
}

impl From<BigradedGroups> for Vec<KhEntry> {
    fn from(g: BigradedGroups) -> Self {
        g.entries.into_iter().map(|((i, j), e)| KhEntry { i, j, free: e.free, torsion: e.torsion }).collect()
    }
}

impl From<Vec<KhEntry>> for BigradedGroups {
    fn from(v: Vec<KhEntry>) -> Self {
        let mut g = BigradedGroups::new();
        for e in v {
            g.add_free(e.i, e.j, e.free);
            for t in e.torsion {
                g.add_torsion(e.i, e.j, t, 1);
            }
        }
        g
    }
}

impl fmt::Display for BigradedGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `sum (-1)^i rank Kh^{i,j} q^j`.
pub fn euler_characteristic(kh: &BigradedGroups) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for ((i, j), g) in kh.iter() {
        let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        out.add_term(HalfInt::from_int(j), BigInt::from(sign) * BigInt::from(g.free));
    }
    out
}

/// Total free rank in homological grading 1.
pub fn kh1_rank(kh: &BigradedGroups) -> u64 {
    kh.iter().filter(|((i, _), _)| *i == 1).map(|(_, g)| g.free).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingSummary {
    pub j_lower: i64,
    pub j_upper: i64,
    pub j_min_potential: i64,
    pub j_max_potential: i64,
}

/// `(c - 3q - |s_A|, -c + 3p + |s_B|)`.
pub fn potential_gradings(d: &Diagram) -> Result<(i64, i64), DiagramError> {
    let signs = d.crossing_signs()?;
    let c = d.crossing_count() as i64;
    let p = signs.positive() as i64;
    let q = signs.negative() as i64;
    Ok((c - 3 * q - d.a_state_circles() as i64, -c + 3 * p + d.b_state_circles() as i64))
}

pub fn extreme_gradings(kh: &BigradedGroups, d: &Diagram) -> Result<GradingSummary, KhError> {
    let (j_lower, j_upper) = kh.j_range().ok_or(KhError::EmptyHomology)?;
    let (j_min_potential, j_max_potential) = potential_gradings(d)?;
    Ok(GradingSummary { j_lower, j_upper, j_min_potential, j_max_potential })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_bookkeeping() {
        let mut g = BigradedGroups::new();
        g.add_free(0, 1, 1);
        g.add_free(0, 1, 0);
        g.add_torsion(3, 7, 2, 2);
        g.add_torsion(3, 7, 1, 5);
        assert_eq!(g.len(), 2);
        assert_eq!(g.get(3, 7).unwrap().torsion, vec![2, 2]);
        assert_eq!(g.j_range(), Some((1, 7)));
        assert_eq!(kh1_rank(&g), 0);
        assert_eq!(BigradedGroups::new().j_range(), None);
    }

    #[test]
    fn euler_characteristic_ignores_torsion() {
        let mut g = BigradedGroups::new();
        g.add_free(0, 1, 1);
        g.add_free(0, 3, 1);
        g.add_free(2, 5, 1);
        g.add_torsion(3, 7, 2, 1);
        g.add_free(3, 9, 1);
        assert_eq!(euler_characteristic(&g), LaurentPoly::parse("q + q^3 + q^5 - q^9", 'q').unwrap());
    }

    #[test]
    fn mirror_is_an_involution() {
        let mut g = BigradedGroups::new();
        g.add_free(0, 1, 1);
        g.add_free(3, 9, 1);
        g.add_torsion(3, 7, 2, 1);
        let m = g.mirror();
        assert_eq!(m.get(-2, -7).unwrap().torsion, vec![2]);
        assert_eq!(m.mirror(), g);
    }

    #[test]
    fn serde_round_trip() {
        let mut g = BigradedGroups::new();
        g.add_free(2, 5, 1);
        g.add_torsion(2, 5, 2, 2);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"[{"i":2,"j":5,"free":1,"torsion":[2,2]}]"#);
        assert_eq!(serde_json::from_str::<BigradedGroups>(&s).unwrap(), g);
    }
}
