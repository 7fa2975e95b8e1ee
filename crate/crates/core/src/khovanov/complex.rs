//! Bar-Natan's cube of resolutions over the integers, split by quantum
//! grading. The 0-smoothing is the A-smoothing; a generator is a state plus
//! a bitmask of circles labelled `v-`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{BigradedGroups, KhError};
use crate::diagram::{state_circle_map, Arc, Diagram};
use crate::snf::{smith_form, SparseMatrix};

pub const DEFAULT_KH_CAP: usize = 16;

/// The summand of the complex in one quantum grading. `dims[r]` counts
/// generators with `r` B-smoothings; `differentials[r]` maps degree `r` to
/// `r + 1`. Homological grading is `r - shift`.
#[derive(Clone, Debug)]
pub struct ChainSlice {
    pub j: i64,
    pub shift: i64,
    pub dims: Vec<usize>,
    pub differentials: Vec<SparseMatrix>,
}

struct StateData {
    /// arc -> circle, free circles appended after the state circles
    circle_of: Vec<u32>,
    circles: usize,
    /// one arc on each state circle
    reps: Vec<Arc>,
}

pub fn khovanov_homology(d: &Diagram) -> Result<BigradedGroups, KhError> {
    khovanov_homology_capped(d, DEFAULT_KH_CAP)
}

pub fn khovanov_homology_capped(d: &Diagram, cap: usize) -> Result<BigradedGroups, KhError> {
    let slices = chain_complex_capped(d, cap)?;
    let per_slice: Vec<Result<BigradedGroups, KhError>> = slices.par_iter().map(slice_homology).collect();
    let mut out = BigradedGroups::new();
    for part in per_slice {
        for ((i, j), g) in part?.iter() {
            out.add_free(i, j, g.free);
            for &t in &g.torsion {
                out.add_torsion(i, j, t, 1);
            }
        }
    }
    Ok(out)
}

fn slice_homology(s: &ChainSlice) -> Result<BigradedGroups, KhError> {
    let forms = s.differentials.iter().map(smith_form).collect::<Result<Vec<_>, _>>()?;
    let mut out = BigradedGroups::new();
    for (r, &n) in s.dims.iter().enumerate() {
        let rank_out = forms.get(r).map_or(0, |f| f.rank);
        let (rank_in, torsion) = if r > 0 { (forms[r - 1].rank, forms[r - 1].torsion.as_slice()) } else { (0, &[][..]) };
        let i = r as i64 - s.shift;
        out.add_free(i, s.j, (n - rank_out - rank_in) as u64);
        for &t in torsion {
            out.add_torsion(i, s.j, t, 1);
        }
    }
    Ok(out)
}

pub fn chain_complex(d: &Diagram) -> Result<Vec<ChainSlice>, KhError> {
    chain_complex_capped(d, DEFAULT_KH_CAP)
}

fn chain_complex_capped(d: &Diagram, cap: usize) -> Result<Vec<ChainSlice>, KhError> {
    let c = d.crossing_count();
    if c > cap {
        return Err(KhError::CrossingCapExceeded { crossings: c, cap });
    }
    let signs = d.crossing_signs()?;
    let (p, q) = (signs.positive() as i64, signs.negative() as i64);
    let xs = d.crossings();
    let free = d.free_circles();
    let states: Vec<StateData> = (0..1u64 << c)
        .map(|bits| {
            let (circle_of, k) = state_circle_map(xs, bits);
            let mut reps = vec![0; k];
            for arc in (1..circle_of.len()).rev() {
                reps[circle_of[arc] as usize] = arc as Arc;
            }
            StateData { circle_of, circles: k + free, reps }
        })
        .collect();

    // generators grouped by quantum grading, then by number of B-smoothings
    let mut slices: BTreeMap<i64, Vec<Vec<(u64, u64)>>> = BTreeMap::new();
    for (bits, st) in states.iter().enumerate() {
        let r = bits.count_ones() as i64;
        for mask in 0..1u64 << st.circles {
            let minus = mask.count_ones() as i64;
            let j = (st.circles as i64 - 2 * minus) + r + p - 2 * q;
            slices.entry(j).or_insert_with(|| vec![Vec::new(); c + 1])[r as usize].push((bits as u64, mask));
        }
    }

    let slices: Vec<ChainSlice> = slices
        .into_par_iter()
        .map(|(j, gens)| {
            let index: Vec<HashMap<(u64, u64), usize>> =
                gens.iter().map(|g| g.iter().enumerate().map(|(n, &key)| (key, n)).collect()).collect();
            let mut differentials = Vec::with_capacity(c);
            for r in 0..c {
                let mut m = SparseMatrix::new(gens[r + 1].len(), gens[r].len());
                for (col, &(bits, mask)) in gens[r].iter().enumerate() {
                    for k in 0..c {
                        if bits >> k & 1 == 1 {
                            continue;
                        }
                        let sign = if (bits & ((1u64 << k) - 1)).count_ones().is_multiple_of(2) { 1 } else { -1 };
                        let target = bits | 1 << k;
                        for out_mask in edge_image(xs[k], &states[bits as usize], &states[target as usize], mask) {
                            let row = index[r + 1][&(target, out_mask)];
                            m.add(row, col, sign);
                        }
                    }
                }
                differentials.push(m);
            }
            ChainSlice { j, shift: q, dims: gens.iter().map(|g| g.len()).collect(), differentials }
        })
        .collect();
    Ok(slices)
}

/// Images of the generator `mask` of `from` under the merge or split map
/// changing the smoothing at crossing `x` from A to B.
fn edge_image(x: [Arc; 4], from: &StateData, to: &StateData, mask: u64) -> Vec<u64> {
    let [a, b, c, _] = x;
    let state_circles_from = from.reps.len();
    let state_circles_to = to.reps.len();
    let ca = from.circle_of[a as usize] as usize;
    let cb = from.circle_of[b as usize] as usize;
    let mut base = 0u64;
    for circle in 0..from.circles {
        if circle == ca || circle == cb || mask >> circle & 1 == 0 {
            continue;
        }
        let target = if circle < state_circles_from {
            to.circle_of[from.reps[circle] as usize] as usize
        } else {
            circle - state_circles_from + state_circles_to
        };
        base |= 1 << target;
    }
    let minus_a = mask >> ca & 1 == 1;
    if ca != cb {
        let minus_b = mask >> cb & 1 == 1;
        let merged = to.circle_of[a as usize];
        match (minus_a, minus_b) {
            (false, false) => vec![base],
            (true, true) => vec![],
            _ => vec![base | 1 << merged],
        }
    } else {
        let n1 = to.circle_of[a as usize];
        let n2 = to.circle_of[c as usize];
        if minus_a {
            vec![base | 1 << n1 | 1 << n2]
        } else {
            vec![base | 1 << n1, base | 1 << n2]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, parse_braid, parse_pd};
    use crate::jones::{jones_polynomial, v_to_unnormalized};
    use crate::khovanov::{euler_characteristic, kh1_rank};
    use crate::snf::rank_mod_p;

    fn closure(s: &str) -> Diagram {
        braid_closure(&parse_braid(s).unwrap())
    }

    fn expect(kh: &BigradedGroups, free: &[(i64, i64, u64)], torsion: &[(i64, i64, &[u64])]) {
        let mut want = BigradedGroups::new();
        for &(i, j, r) in free {
            want.add_free(i, j, r);
        }
        for &(i, j, t) in torsion {
            for &o in t {
                want.add_torsion(i, j, o, 1);
            }
        }
        assert_eq!(kh, &want);
    }

    #[test]
    fn unknot_diagrams() {
        let want: &[(i64, i64, u64)] = &[(0, -1, 1), (0, 1, 1)];
        expect(&khovanov_homology(&Diagram::unknot()).unwrap(), want, &[]);
        expect(&khovanov_homology(&closure("strands=2; 1")).unwrap(), want, &[]);
        expect(&khovanov_homology(&closure("strands=2; -1")).unwrap(), want, &[]);
        expect(&khovanov_homology(&closure("strands=3; 1 -2")).unwrap(), want, &[]);
    }

    #[test]
    fn two_component_unlink() {
        expect(&khovanov_homology(&Diagram::unlink(2)).unwrap(), &[(0, -2, 1), (0, 0, 2), (0, 2, 1)], &[]);
    }

    #[test]
    fn trefoil_and_mirror() {
        let d = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        let kh = khovanov_homology(&d).unwrap();
        expect(&kh, &[(0, 1, 1), (0, 3, 1), (2, 5, 1), (3, 9, 1)], &[(3, 7, &[2])]);
        assert_eq!(kh1_rank(&kh), 0);
        let m = parse_pd("PD[X[4,2,5,1],X[6,4,1,3],X[2,6,3,5]]").unwrap();
        assert_eq!(khovanov_homology(&m).unwrap(), kh.mirror());
    }

    #[test]
    fn hopf_link() {
        expect(&khovanov_homology(&closure("strands=2; 1 1")).unwrap(), &[(0, 0, 1), (0, 2, 1), (2, 4, 1), (2, 6, 1)], &[]);
    }

    #[test]
    fn cap_is_enforced() {
        let d = closure("strands=2; 1 1 1");
        assert_eq!(khovanov_homology_capped(&d, 2), Err(KhError::CrossingCapExceeded { crossings: 3, cap: 2 }));
    }

    #[test]
    fn differential_squares_to_zero() {
        for w in ["strands=2; 1 1 1", "strands=3; 1 -2 1 -2", "strands=3; 1 1 2 -1 2", "strands=4; 1 2 3 -1 2"] {
            for s in chain_complex(&closure(w)).unwrap() {
                for pair in s.differentials.windows(2) {
                    assert!(pair[1].mul(&pair[0]).unwrap().is_zero(), "{w} j={}", s.j);
                }
            }
        }
    }

    #[test]
    fn euler_characteristic_matches_jones() {
        for w in ["strands=2; 1 1 1 1", "strands=3; 1 -2 1 -2", "strands=3; 1 1 2 2 1", "strands=3; -1 2 2 -1 2", "strands=4; 1 2 3 1 2 3"] {
            let d = closure(w);
            let kh = khovanov_homology(&d).unwrap();
            assert_eq!(euler_characteristic(&kh), v_to_unnormalized(&jones_polynomial(&d).unwrap()).unwrap(), "{w}");
        }
    }

    #[test]
    fn universal_coefficients_mod_p() {
        // dim H^r(C; F_p) = free_r + t_p(r) + t_p(r + 1), where t_p(r) counts
        // torsion summands of H^r of order divisible by p
        for w in ["strands=3; 1 -2 1 -2", "strands=2; 1 1 1 1 1", "strands=3; 1 1 2 1 1 2"] {
            let d = closure(w);
            let kh = khovanov_homology(&d).unwrap();
            for s in chain_complex(&d).unwrap() {
                for p in [2, 3, 5] {
                    let ranks: Vec<usize> = s.differentials.iter().map(|m| rank_mod_p(m, p)).collect();
                    for (r, &n) in s.dims.iter().enumerate() {
                        let field_dim = n - ranks.get(r).copied().unwrap_or(0) - if r > 0 { ranks[r - 1] } else { 0 };
                        let i = r as i64 - s.shift;
                        let tp = |i: i64| {
                            kh.get(i, s.j).map_or(0, |g| g.torsion.iter().filter(|&&t| t % p as u64 == 0).count())
                        };
                        let free = kh.get(i, s.j).map_or(0, |g| g.free as usize);
                        assert_eq!(field_dim, free + tp(i) + tp(i + 1), "{w} p={p} i={i} j={}", s.j);
                    }
                }
            }
        }
    }
}
