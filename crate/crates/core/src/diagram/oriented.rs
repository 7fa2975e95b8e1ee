//! Diagrams with explicit crossing signs, and the local moves used by the
//! skein recursion and nugatory reduction.
//!
//! Arc labels are always `1..=2c`, each appearing once as an incoming and
//! once as an outgoing slot. The incoming slots of a crossing are `a` (under)
//! and `b` (positive) or `d` (negative).

use super::{
    graph_pieces, occurrences, other_occurrence, Arc, CrossingSigns, Diagram, DiagramError, Sign,
    Slot, UnionFind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedCrossing {
    pub arcs: [Arc; 4],
    pub sign: Sign,
}

impl OrientedCrossing {
    pub fn over_in(&self) -> usize {
        match self.sign {
            Sign::Positive => 1,
            Sign::Negative => 3,
        }
    }

    pub fn is_incoming(&self, pos: usize) -> bool {
        pos == 0 || pos == self.over_in()
    }

    /// The same crossing with the strands' over/under exchanged.
    pub fn switched(&self) -> Self {
        let [a, b, c, d] = self.arcs;
        match self.sign {
            Sign::Positive => OrientedCrossing { arcs: [b, c, d, a], sign: Sign::Negative },
            Sign::Negative => OrientedCrossing { arcs: [d, a, b, c], sign: Sign::Positive },
        }
    }

    /// The crossing as seen after turning its neighbourhood over.
    fn flipped(&self) -> Self {
        let [a, b, c, d] = self.arcs;
        let arcs = match self.sign {
            Sign::Positive => [b, a, d, c],
            Sign::Negative => [d, c, b, a],
        };
        OrientedCrossing { arcs, sign: self.sign }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedDiagram {
    crossings: Vec<OrientedCrossing>,
    free_circles: usize,
}

impl OrientedDiagram {
    /// Builds from crossings whose labels already satisfy the type invariant.
    pub fn from_crossings(crossings: Vec<OrientedCrossing>, free_circles: usize) -> Self {
        let d = OrientedDiagram { crossings, free_circles };
        debug_assert!(d.check_labels(), "labels must be 1..=2c, once in and once out");
        d
    }

    fn check_labels(&self) -> bool {
        let n = self.arc_count();
        let mut ins = vec![0u8; n + 1];
        let mut outs = vec![0u8; n + 1];
        for x in &self.crossings {
            for (p, &l) in x.arcs.iter().enumerate() {
                if l == 0 || l as usize > n {
                    return false;
                }
                if x.is_incoming(p) {
                    ins[l as usize] += 1;
                } else {
                    outs[l as usize] += 1;
                }
            }
        }
        (1..=n).all(|l| ins[l] == 1 && outs[l] == 1)
    }

    /// Orientation inference. A component's direction is forced by its
    /// under-passages (`a -> c`); a component that only passes over follows
    /// increasing labels, with ties going to the direction in which the
    /// labels increase at its lowest-indexed crossing.
    pub(super) fn infer(d: &Diagram) -> Result<Self, DiagramError> {
        let xs = d.crossings();
        let n = d.arc_count();
        let occ = occurrences(xs);
        let mut visited = vec![false; n + 1];
        let mut signs: Vec<Option<Sign>> = vec![None; xs.len()];
        for start in 1..=n {
            if visited[start] {
                continue;
            }
            // passages (crossing, entry position, arc in, arc out) in one direction
            let mut passages = Vec::new();
            let mut arc = start as Arc;
            let mut slot = occ[start][0];
            loop {
                visited[arc as usize] = true;
                let (k, p) = slot;
                let out_arc = xs[k][(p + 2) % 4];
                passages.push((k, p, arc, out_arc));
                arc = out_arc;
                slot = other_occurrence(&occ, arc, (k, (p + 2) % 4));
                if arc as usize == start {
                    break;
                }
            }
            let forward_votes = passages.iter().filter(|p| p.1 == 0).count();
            let backward_votes = passages.iter().filter(|p| p.1 == 2).count();
            let forward = match (forward_votes, backward_votes) {
                (0, 0) => {
                    let fwd = passages.iter().filter(|p| p.3 == p.2 + 1).count();
                    let bwd = passages.iter().filter(|p| p.2 == p.3 + 1).count();
                    if fwd != bwd {
                        fwd > bwd
                    } else {
                        let lowest = passages.iter().min_by_key(|p| p.0).expect("nonempty");
                        lowest.3 == lowest.2 + 1 || lowest.2 != lowest.3 + 1
                    }
                }
                (_, 0) => true,
                (0, _) => false,
                _ => return Err(DiagramError::OrientationInconsistent { arc: start as Arc }),
            };
            for &(k, p, _, _) in &passages {
                let entry = if forward { p } else { (p + 2) % 4 };
                match entry {
                    1 => signs[k] = Some(Sign::Positive),
                    3 => signs[k] = Some(Sign::Negative),
                    _ => {}
                }
            }
        }
        let crossings = xs
            .iter()
            .zip(signs)
            .map(|(&arcs, s)| OrientedCrossing { arcs, sign: s.expect("every crossing has an over-passage") })
            .collect();
        Ok(OrientedDiagram { crossings, free_circles: d.free_circles() })
    }

    pub fn crossings(&self) -> &[OrientedCrossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    pub fn arcs(&self) -> Vec<[Arc; 4]> {
        self.crossings.iter().map(|x| x.arcs).collect()
    }

    pub fn signs(&self) -> CrossingSigns {
        CrossingSigns(self.crossings.iter().map(|x| x.sign).collect())
    }

    pub fn writhe(&self) -> i64 {
        self.signs().writhe()
    }

    /// (tail, head) slot of every arc; index 0 unused.
    fn arc_ends(&self) -> Vec<(Slot, Slot)> {
        let mut ends = vec![((usize::MAX, 0), (usize::MAX, 0)); self.arc_count() + 1];
        for (k, x) in self.crossings.iter().enumerate() {
            for (p, &l) in x.arcs.iter().enumerate() {
                if x.is_incoming(p) {
                    ends[l as usize].1 = (k, p);
                } else {
                    ends[l as usize].0 = (k, p);
                }
            }
        }
        ends
    }

    /// The arc following `arc` along its component.
    fn successor(&self, ends: &[(Slot, Slot)], arc: Arc) -> Arc {
        let (k, p) = ends[arc as usize].1;
        self.crossings[k].arcs[(p + 2) % 4]
    }

    pub fn components(&self) -> usize {
        let ends = self.arc_ends();
        let mut seen = vec![false; self.arc_count() + 1];
        let mut count = self.free_circles;
        for s in 1..=self.arc_count() as Arc {
            if seen[s as usize] {
                continue;
            }
            count += 1;
            let mut a = s;
            loop {
                seen[a as usize] = true;
                a = self.successor(&ends, a);
                if a == s {
                    break;
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        let pieces = graph_pieces(&self.arcs());
        pieces + self.free_circles == 1
    }

    /// Relabels arcs consecutively along each component. Components are
    /// taken in order of their lowest-indexed crossing and start at the arc
    /// entering it, so orientation inference on the result recovers the
    /// signs exactly.
    pub fn relabeled(&self) -> Self {
        let ends = self.arc_ends();
        let n = self.arc_count();
        let mut label = vec![0 as Arc; n + 1];
        let mut next: Arc = 1;
        for x in &self.crossings {
            for pos in [0, x.over_in()] {
                let start = x.arcs[pos];
                if label[start as usize] != 0 {
                    continue;
                }
                let mut a = start;
                loop {
                    label[a as usize] = next;
                    next += 1;
                    a = self.successor(&ends, a);
                    if a == start {
                        break;
                    }
                }
            }
        }
        self.apply_labels(&label)
    }

    fn apply_labels(&self, label: &[Arc]) -> Self {
        let crossings = self
            .crossings
            .iter()
            .map(|x| OrientedCrossing { arcs: x.arcs.map(|l| label[l as usize]), sign: x.sign })
            .collect();
        OrientedDiagram { crossings, free_circles: self.free_circles }
    }

    pub fn to_diagram(&self) -> Diagram {
        let r = self.relabeled();
        Diagram::new(r.arcs(), r.free_circles).expect("relabeled diagram is valid")
    }

    pub fn switch(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.crossings[k] = self.crossings[k].switched();
        out
    }

    pub fn mirror(&self) -> Self {
        OrientedDiagram {
            crossings: self.crossings.iter().map(|x| x.switched()).collect(),
            free_circles: self.free_circles,
        }
    }

    /// Oriented smoothing of crossing `k` (the L0 of a skein triple).
    pub fn resolve(&self, k: usize) -> Self {
        let [a, b, c, d] = self.crossings[k].arcs;
        let joins = match self.crossings[k].sign {
            Sign::Positive => [(a, d), (b, c)],
            Sign::Negative => [(a, b), (d, c)],
        };
        let rest: Vec<_> = self.crossings.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, x)| *x).collect();
        Self::join_arcs(rest, self.arc_count(), &joins, self.free_circles)
    }

    /// Removes crossings, merging the given arc pairs; loops left without
    /// crossings become free circles.
    pub(crate) fn join_arcs(rest: Vec<OrientedCrossing>, old_arcs: usize, joins: &[(Arc, Arc)], free: usize) -> Self {
        let mut uf = UnionFind::new(old_arcs + 1);
        for &(u, v) in joins {
            uf.union(u as usize, v as usize);
        }
        let mut used = vec![false; old_arcs + 1];
        for x in &rest {
            for &l in &x.arcs {
                used[uf.find(l as usize)] = true;
            }
        }
        let mut compact = vec![0 as Arc; old_arcs + 1];
        let mut next: Arc = 1;
        let mut new_free = free;
        for l in 1..=old_arcs {
            if uf.find(l) != l {
                continue;
            }
            if used[l] {
                compact[l] = next;
                next += 1;
            } else {
                new_free += 1;
            }
        }
        let crossings = rest
            .iter()
            .map(|x| OrientedCrossing { arcs: x.arcs.map(|l| compact[uf.find(l as usize)]), sign: x.sign })
            .collect();
        OrientedDiagram::from_crossings(crossings, new_free).relabeled()
    }

    /// Finds a nugatory crossing: a cut vertex of the diagram graph. Returns
    /// the crossing and the crossings on the smaller side.
    fn find_nugatory(&self) -> Option<(usize, Vec<usize>)> {
        let arcs = self.arcs();
        let occ = occurrences(&arcs);
        let c = self.crossings.len();
        for k in 0..c {
            let mut uf = UnionFind::new(4 + c);
            let node = |(j, p): Slot| if j == k { p } else { 4 + j };
            for e in occ.iter().skip(1) {
                uf.union(node(e[0]), node(e[1]));
            }
            let root0 = uf.find(0);
            let Some(other) = (1..4).find(|&p| uf.find(p) != root0) else {
                continue;
            };
            let root1 = uf.find(other);
            let side = |uf: &mut UnionFind, r: usize| -> Vec<usize> {
                (0..c).filter(|&j| j != k && uf.find(4 + j) == r).collect()
            };
            let s0 = side(&mut uf, root0);
            let s1 = side(&mut uf, root1);
            return Some((k, if s0.len() <= s1.len() { s0 } else { s1 }));
        }
        None
    }

    pub fn has_nugatory(&self) -> bool {
        self.find_nugatory().is_some()
    }

    /// Untwists nugatory crossings one at a time until none remain.
    pub fn reduce_nugatory(&self) -> Self {
        let mut cur = self.clone();
        while let Some((k, flip)) = cur.find_nugatory() {
            let [a, b, c, d] = cur.crossings[k].arcs;
            let mut rest = Vec::with_capacity(cur.crossings.len() - 1);
            for (j, x) in cur.crossings.iter().enumerate() {
                if j == k {
                    continue;
                }
                rest.push(if flip.contains(&j) { x.flipped() } else { *x });
            }
            cur = Self::join_arcs(rest, cur.arc_count(), &[(a, c), (b, d)], cur.free_circles);
        }
        cur
    }

    /// Key invariant under relabeling: the lexicographically least encoding
    /// over all choices of starting arc. `None` for disconnected diagrams.
    pub fn canonical_key(&self) -> Option<Vec<(OrientedCrossing, u8)>> {
        if !self.is_connected() {
            return None;
        }
        let n = self.arc_count();
        let ends = self.arc_ends();
        let mut best: Option<Vec<(OrientedCrossing, u8)>> = None;
        for start in 1..=n as Arc {
            let labels = self.labels_from(&ends, start);
            let mut enc: Vec<(OrientedCrossing, u8)> =
                self.apply_labels(&labels).crossings.into_iter().map(|x| (x, 0u8)).collect();
            enc.sort_unstable();
            enc.push((OrientedCrossing { arcs: [0; 4], sign: Sign::Positive }, self.free_circles as u8));
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
        best
    }

    /// Labels the component of `start` first, then further components by a
    /// rule that only looks at labels already assigned.
    fn labels_from(&self, ends: &[(Slot, Slot)], start: Arc) -> Vec<Arc> {
        let n = self.arc_count();
        let mut label = vec![0 as Arc; n + 1];
        let mut next: Arc = 1;
        let mut s = start;
        loop {
            let mut a = s;
            loop {
                label[a as usize] = next;
                next += 1;
                a = self.successor(ends, a);
                if a == s {
                    break;
                }
            }
            if next as usize > n {
                break;
            }
            let mut pick: Option<((Arc, bool), Arc)> = None;
            for x in &self.crossings {
                let labeled: Vec<(usize, Arc)> =
                    x.arcs.iter().enumerate().filter(|(_, l)| label[**l as usize] != 0).map(|(p, l)| (p, *l)).collect();
                if labeled.is_empty() || labeled.len() == 4 {
                    continue;
                }
                let (p_min, l_min) = labeled.iter().min_by_key(|(_, l)| label[*l as usize]).copied().expect("nonempty");
                let key = (label[l_min as usize], !x.is_incoming(p_min));
                let entering = (0..4)
                    .find(|&p| x.is_incoming(p) && label[x.arcs[p] as usize] == 0)
                    .map(|p| x.arcs[p])
                    .expect("an unlabeled strand passes through");
                if pick.is_none_or(|(k, _)| key < k) {
                    pick = Some((key, entering));
                }
            }
            s = pick.expect("diagram is connected").1;
        }
        label
    }

    /// First crossing (in walking order: components by least label, each
    /// from its least label) whose first visit is an under-passage, or
    /// `None` if the diagram is descending.
    pub fn first_descent_defect(&self) -> Option<usize> {
        let ends = self.arc_ends();
        let n = self.arc_count();
        let mut walked = vec![false; n + 1];
        let mut visited = vec![false; self.crossings.len()];
        for s in 1..=n as Arc {
            if walked[s as usize] {
                continue;
            }
            let mut a = s;
            loop {
                walked[a as usize] = true;
                let (k, p) = ends[a as usize].1;
                if !visited[k] {
                    visited[k] = true;
                    if p == 0 {
                        return Some(k);
                    }
                }
                a = self.successor(&ends, a);
                if a == s {
                    break;
                }
            }
        }
        None
    }

    /// Number of faces of the embedded diagram graph.
    pub fn face_count(&self) -> usize {
        let arcs = self.arcs();
        let occ = occurrences(&arcs);
        let c = arcs.len();
        let mut seen = vec![false; 4 * c];
        let mut faces = 0;
        for start in 0..4 * c {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut dart = start;
            while !seen[dart] {
                seen[dart] = true;
                let (k, p) = (dart / 4, dart % 4);
                let (k2, p2) = other_occurrence(&occ, arcs[k][p], (k, p));
                dart = 4 * k2 + (p2 + 1) % 4;
            }
        }
        faces
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, parse_braid, parse_pd};

    fn closure(s: &str) -> OrientedDiagram {
        braid_closure(&parse_braid(s).unwrap()).orient().unwrap()
    }

    #[test]
    fn switch_and_resolve_trefoil() {
        let t = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap().orient().unwrap();
        let s = t.switch(0);
        assert_eq!(s.signs().positive(), 2);
        assert_eq!(s.switch(0), t);
        let r = t.resolve(0);
        assert_eq!(r.crossing_count(), 2);
        assert_eq!(r.components(), 2);
        assert_eq!(r.signs().positive(), 2);
        assert_eq!(r.face_count(), 4);
    }

    #[test]
    fn relabeling_preserves_inferred_signs() {
        for w in ["strands=3; 1 -2 1 -2", "strands=4; 1 2 3 -1 2 -3 2", "strands=3; 1 1 2 2", "strands=2; -1 -1"] {
            let d = closure(w);
            let back = d.to_diagram().orient().unwrap();
            assert_eq!(back.signs(), d.signs(), "{w}");
        }
    }

    #[test]
    fn nugatory_kink_is_removed() {
        let d = closure("strands=2; 1");
        assert!(d.has_nugatory());
        let r = d.reduce_nugatory();
        assert_eq!(r.crossing_count(), 0);
        assert_eq!(r.free_circles(), 1);
    }

    #[test]
    fn canonical_key_ignores_labels() {
        let a = closure("strands=3; 1 -2 1 -2");
        let b = closure("strands=3; -2 1 -2 1");
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_ne!(a.canonical_key(), closure("strands=3; 1 2 1 2").canonical_key());
    }

    #[test]
    fn descending_detection() {
        // the positive trefoil is not descending from any basepoint
        let t = closure("strands=2; 1 1 1");
        assert!(t.first_descent_defect().is_some());
        let mut u = closure("strands=3; 1 -2 1 -2 1 2");
        let mut switches = 0;
        while let Some(k) = u.first_descent_defect() {
            u = u.switch(k);
            switches += 1;
        }
        assert!(switches <= u.crossing_count());
    }
}
