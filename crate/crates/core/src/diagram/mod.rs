//! Link diagrams as planar-diagram (PD) codes.
//!
//! A crossing `X[a,b,c,d]` lists its four arc labels clockwise, starting at
//! the incoming under-strand, so the under-strand runs `a -> c`. The crossing
//! is positive when the over-strand runs `b -> d` and negative when it runs
//! `d -> b`. Under this reading `PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]` is the
//! positive trefoil.
//!
//! The A-smoothing of `X[a,b,c,d]` joins `a` with `d` and `b` with `c`; the
//! B-smoothing joins `a` with `b` and `c` with `d`. At a positive crossing the
//! A-smoothing is the oriented one.

mod braid;
mod oriented;
mod pd;

pub use braid::{braid_closure, parse_braid, BraidWord};
pub use oriented::{OrientedCrossing, OrientedDiagram};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Arc = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed PD code: {0}")]
    MalformedPd(String),
    #[error("crossing {index} has {found} entries, expected 4")]
    Arity { index: usize, found: usize },
    #[error("arc label {label} appears {count} times, expected exactly twice")]
    ArcMultiplicity { label: Arc, count: usize },
    #[error("malformed braid word: {0}")]
    MalformedBraid(String),
    #[error("braid letter 0 is not a generator")]
    ZeroLetter,
    #[error("generator {letter} out of range for {strands} strands")]
    GeneratorOutOfRange { letter: i32, strands: usize },
    #[error("a diagram needs at least one crossing or free circle")]
    EmptyDiagram,
    #[error("arc labels cannot be consistently oriented along component containing arc {arc}")]
    OrientationInconsistent { arc: Arc },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// Per-crossing signs of an oriented diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingSigns(pub Vec<Sign>);

impl CrossingSigns {
    /// p(D): number of positive crossings.
    pub fn positive(&self) -> usize {
        self.0.iter().filter(|s| **s == Sign::Positive).count()
    }

    /// q(D): number of negative crossings.
    pub fn negative(&self) -> usize {
        self.0.len() - self.positive()
    }

    pub fn writhe(&self) -> i64 {
        self.0.iter().map(|s| s.value()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Smoothing {
    A,
    B,
}

/// A choice of smoothing at every crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State(pub Vec<Smoothing>);

impl State {
    pub fn all_a(crossings: usize) -> Self {
        State(vec![Smoothing::A; crossings])
    }

    pub fn all_b(crossings: usize) -> Self {
        State(vec![Smoothing::B; crossings])
    }

    /// Bit `k` set means crossing `k` is B-smoothed.
    pub fn from_bits(bits: u64, crossings: usize) -> Self {
        State((0..crossings).map(|k| if bits >> k & 1 == 1 { Smoothing::B } else { Smoothing::A }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A validated PD code plus any crossingless circles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    crossings: Vec<[Arc; 4]>,
    free_circles: usize,
}

impl Diagram {
    pub fn new(crossings: Vec<[Arc; 4]>, free_circles: usize) -> Result<Self, DiagramError> {
        if crossings.is_empty() && free_circles == 0 {
            return Err(DiagramError::EmptyDiagram);
        }
        let arc_count = 2 * crossings.len();
        let mut counts = vec![0usize; arc_count + 1];
        for x in &crossings {
            for &l in x {
                if l == 0 || l as usize > arc_count {
                    return Err(DiagramError::ArcMultiplicity { label: l, count: 1 });
                }
                counts[l as usize] += 1;
            }
        }
        if let Some((label, &count)) = counts.iter().enumerate().skip(1).find(|(_, c)| **c != 2) {
            return Err(DiagramError::ArcMultiplicity { label: label as Arc, count });
        }
        Ok(Diagram { crossings, free_circles })
    }

    pub fn unknot() -> Self {
        Diagram { crossings: vec![], free_circles: 1 }
    }

    /// `n` disjoint crossingless circles.
    pub fn unlink(n: usize) -> Self {
        Diagram { crossings: vec![], free_circles: n }
    }

    pub fn crossings(&self) -> &[[Arc; 4]] {
        &self.crossings
    }

    /// c(D).
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    /// Infers the orientation of every component and the crossing signs.
    pub fn orient(&self) -> Result<OrientedDiagram, DiagramError> {
        OrientedDiagram::infer(self)
    }

    pub fn crossing_signs(&self) -> Result<CrossingSigns, DiagramError> {
        Ok(self.orient()?.signs())
    }

    pub fn writhe(&self) -> Result<i64, DiagramError> {
        Ok(self.crossing_signs()?.writhe())
    }

    /// True iff every crossing is positive. A `false` says nothing about the
    /// link itself.
    pub fn is_positive(&self) -> Result<bool, DiagramError> {
        Ok(self.crossing_signs()?.negative() == 0)
    }

    /// Number of link components, including free circles.
    pub fn components(&self) -> usize {
        let occ = occurrences(&self.crossings);
        let mut seen = vec![false; self.arc_count() + 1];
        let mut count = 0;
        for start in 1..=self.arc_count() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut arc = start as Arc;
            // walk towards the first occurrence of the starting arc
            let mut slot = occ[start][0];
            loop {
                seen[arc as usize] = true;
                let (k, p) = slot;
                let out = (k, (p + 2) % 4);
                arc = self.crossings[out.0][out.1];
                slot = other_occurrence(&occ, arc, out);
                if arc as usize == start {
                    break;
                }
            }
        }
        count + self.free_circles
    }

    /// Number of circles after smoothing every crossing per `state`.
    pub fn state_circles(&self, state: &State) -> usize {
        assert_eq!(state.len(), self.crossings.len(), "state length must equal crossing count");
        let bits = state
            .0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, s)| if *s == Smoothing::B { acc | 1 << k } else { acc });
        circle_count(&self.crossings, bits) + self.free_circles
    }

    /// |s_A(D)|.
    pub fn a_state_circles(&self) -> usize {
        self.state_circles(&State::all_a(self.crossings.len()))
    }

    /// |s_B(D)|.
    pub fn b_state_circles(&self) -> usize {
        self.state_circles(&State::all_b(self.crossings.len()))
    }

    /// Removes nugatory crossings until none remain.
    pub fn reduce_nugatory(&self) -> Result<Diagram, DiagramError> {
        Ok(self.orient()?.reduce_nugatory().to_diagram())
    }

    /// True when the underlying 4-valent graph (plus free circles) is
    /// disconnected, which forces the link to be split.
    pub fn is_visibly_split(&self) -> bool {
        let pieces = graph_pieces(&self.crossings);
        pieces + self.free_circles > 1
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PD[")?;
        let mut first = true;
        for x in &self.crossings {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "X[{},{},{},{}]", x[0], x[1], x[2], x[3])?;
        }
        for _ in 0..self.free_circles {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            f.write_str("O[]")?;
        }
        f.write_str("]")
    }
}

/// Parses a PD code such as `PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]`.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    pd::parse(text)
}

pub(crate) type Slot = (usize, usize);

/// For each arc label, the two slots where it occurs.
pub(crate) fn occurrences(crossings: &[[Arc; 4]]) -> Vec<[Slot; 2]> {
    let mut occ = vec![[(usize::MAX, 0); 2]; 2 * crossings.len() + 1];
    for (k, x) in crossings.iter().enumerate() {
        for (p, &l) in x.iter().enumerate() {
            let e = &mut occ[l as usize];
            if e[0].0 == usize::MAX {
                e[0] = (k, p);
            } else {
                e[1] = (k, p);
            }
        }
    }
    occ
}

pub(crate) fn other_occurrence(occ: &[[Slot; 2]], arc: Arc, here: Slot) -> Slot {
    let e = occ[arc as usize];
    if e[0] == here {
        e[1]
    } else {
        e[0]
    }
}

/// Minimal union-find over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Arc pairs joined at crossing `x` by the given smoothing.
pub(crate) fn smoothing_pairs(x: &[Arc; 4], b_smoothing: bool) -> [(Arc, Arc); 2] {
    if b_smoothing {
        [(x[0], x[1]), (x[2], x[3])]
    } else {
        [(x[0], x[3]), (x[1], x[2])]
    }
}

/// Circle labels per arc (index 0 unused) for the state given by `bits`
/// (bit k set = B-smoothing at crossing k), and the circle count.
pub(crate) fn state_circle_map(crossings: &[[Arc; 4]], bits: u64) -> (Vec<u32>, usize) {
    let n = 2 * crossings.len();
    let mut uf = UnionFind::new(n + 1);
    for (k, x) in crossings.iter().enumerate() {
        for (u, v) in smoothing_pairs(x, bits >> k & 1 == 1) {
            uf.union(u as usize, v as usize);
        }
    }
    let mut label = vec![u32::MAX; n + 1];
    let mut next = 0u32;
    for arc in 1..=n {
        let r = uf.find(arc);
        if label[r] == u32::MAX {
            label[r] = next;
            next += 1;
        }
        label[arc] = label[r];
    }
    label[0] = u32::MAX;
    (label, next as usize)
}

pub(crate) fn circle_count(crossings: &[[Arc; 4]], bits: u64) -> usize {
    let n = 2 * crossings.len();
    let mut uf = UnionFind::new(n + 1);
    let mut circles = n;
    for (k, x) in crossings.iter().enumerate() {
        for (u, v) in smoothing_pairs(x, bits >> k & 1 == 1) {
            if uf.union(u as usize, v as usize) {
                circles -= 1;
            }
        }
    }
    circles
}

/// Connected pieces of the 4-valent graph (crossings joined by arcs).
pub(crate) fn graph_pieces(crossings: &[[Arc; 4]]) -> usize {
    if crossings.is_empty() {
        return 0;
    }
    let occ = occurrences(crossings);
    let mut uf = UnionFind::new(crossings.len());
    let mut pieces = crossings.len();
    for e in occ.iter().skip(1) {
        if uf.union(e[0].0, e[1].0) {
            pieces -= 1;
        }
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";
    const MIRROR_TREFOIL: &str = "PD[X[4,2,5,1],X[6,4,1,3],X[2,6,3,5]]";

    #[test]
    fn trefoil_basics() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.components(), 1);
        assert_eq!(d.crossing_signs().unwrap().0, vec![Sign::Positive; 3]);
        assert_eq!(d.writhe().unwrap(), 3);
        assert!(d.is_positive().unwrap());
        assert_eq!(d.a_state_circles(), 2);
        assert_eq!(d.b_state_circles(), 3);
    }

    #[test]
    fn mirror_trefoil_is_negative() {
        let d = parse_pd(MIRROR_TREFOIL).unwrap();
        assert_eq!(d.crossing_signs().unwrap().0, vec![Sign::Negative; 3]);
        assert!(!d.is_positive().unwrap());
        assert_eq!(d.a_state_circles(), 3);
        assert_eq!(d.b_state_circles(), 2);
    }

    #[test]
    fn crossingless_unknot() {
        let d = Diagram::unknot();
        assert_eq!(d.crossing_signs().unwrap().0, vec![]);
        assert_eq!(d.writhe().unwrap(), 0);
        assert!(d.is_positive().unwrap());
        assert_eq!(d.components(), 1);
        assert_eq!(d.state_circles(&State(vec![])), 1);
        assert_eq!(d.reduce_nugatory().unwrap(), d);
    }

    #[test]
    fn rejects_bad_labels() {
        assert_eq!(
            Diagram::new(vec![[1, 2, 3, 3]], 0),
            Err(DiagramError::ArcMultiplicity { label: 3, count: 1 })
        );
        assert!(matches!(Diagram::new(vec![[1, 2, 2, 7]], 0), Err(DiagramError::ArcMultiplicity { label: 7, .. })));
    }

    #[test]
    fn inconsistent_orientation_is_reported() {
        // the under-strands force opposite directions along the only component
        let d = Diagram::new(vec![[1, 4, 2, 3], [1, 3, 2, 4]], 0).unwrap();
        assert!(matches!(d.orient(), Err(DiagramError::OrientationInconsistent { .. })));
    }

    #[test]
    fn flipping_one_smoothing_changes_circles_by_one() {
        let d = parse_pd(TREFOIL).unwrap();
        for bits in 0..8u64 {
            let base = d.state_circles(&State::from_bits(bits, 3)) as i64;
            for k in 0..3 {
                let other = d.state_circles(&State::from_bits(bits ^ 1 << k, 3)) as i64;
                assert_eq!((base - other).abs(), 1);
            }
        }
    }

    #[test]
    fn display_round_trips() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.to_string(), TREFOIL);
        assert_eq!(parse_pd(&Diagram::unlink(2).to_string()).unwrap(), Diagram::unlink(2));
    }
}
