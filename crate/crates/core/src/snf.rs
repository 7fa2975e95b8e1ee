//! Integer Smith normal form for sparse matrices: unit pivots are eliminated
//! sparsely first, whatever is left is diagonalized densely.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnfError {
    #[error("integer overflow during Smith normal form")]
    Overflow,
}

/// Row-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.add(r, c, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) outside {}x{}", self.rows, self.cols);
        let e = self.data[r].entry(c).or_insert(0);
        *e += v;
        if *e == 0 {
            self.data[r].remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r].get(&c).copied().unwrap_or(0)
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.data[r].iter().map(|(&c, &v)| (c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// `self * other`, with i64 overflow reported.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, SnfError> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for r in 0..self.rows {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (k, v) in self.row(r) {
                for (c, w) in other.row(k) {
                    let e = acc.entry(c).or_insert(0);
                    *e = v.checked_mul(w).and_then(|p| e.checked_add(p)).ok_or(SnfError::Overflow)?;
                }
            }
            acc.retain(|_, v| *v != 0);
            out.data[r] = acc;
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }
}

/// Rank over the integers and the invariant factors greater than 1,
/// ascending, each dividing the next.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SmithForm {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

pub fn smith_form(m: &SparseMatrix) -> Result<SmithForm, SnfError> {
    let mut rows = m.data.clone();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            col_rows[c].insert(r);
        }
    }
    let mut rank = 0;
    let mut row_alive = vec![true; m.rows];
    loop {
        let mut progressed = false;
        let mut order: Vec<usize> = (0..m.cols).filter(|&c| !col_rows[c].is_empty()).collect();
        order.sort_by_key(|&c| col_rows[c].len());
        for c in order {
            let pivot = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| rows[r][&c].abs() == 1)
                .min_by_key(|&r| rows[r].len());
            let Some(pr) = pivot else { continue };
            let u = rows[pr][&c];
            let prow: Vec<(usize, i64)> = rows[pr].iter().map(|(&k, &v)| (k, v)).collect();
            let targets: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != pr).collect();
            for r in targets {
                let f = rows[r][&c] * u;
                for &(k, v) in &prow {
                    let cur = rows[r].get(&k).copied().unwrap_or(0);
                    let new = v.checked_mul(f).and_then(|p| cur.checked_sub(p)).ok_or(SnfError::Overflow)?;
                    if new == 0 {
                        rows[r].remove(&k);
                        col_rows[k].remove(&r);
                    } else {
                        if cur == 0 {
                            col_rows[k].insert(r);
                        }
                        rows[r].insert(k, new);
                    }
                }
            }
            // the pivot row and column now only meet each other
            for &(k, _) in &prow {
                col_rows[k].remove(&pr);
            }
            rows[pr].clear();
            row_alive[pr] = false;
            rank += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| row_alive[r] && !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| !col_rows[c].is_empty()).collect();
    if live_rows.is_empty() {
        return Ok(SmithForm { rank, torsion: vec![] });
    }
    let col_index: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense = vec![vec![0i64; live_cols.len()]; live_rows.len()];
    for (i, &r) in live_rows.iter().enumerate() {
        for (&c, &v) in &rows[r] {
            dense[i][col_index[&c]] = v;
        }
    }
    let diag = dense_diagonal(dense)?;
    rank += diag.len();
    Ok(SmithForm { rank, torsion: invariant_factors(diag)?.into_iter().filter(|&d| d > 1).collect() })
}

/// Diagonalizes by unimodular operations, returning the nonzero diagonal
/// magnitudes (not yet in divisibility order).
fn dense_diagonal(mut a: Vec<Vec<i64>>) -> Result<Vec<u64>, SnfError> {
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..nr.min(nc) {
        loop {
            let Some((pr, pc)) = smallest_entry(&a, t) else {
                return Ok(diag);
            };
            a.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
            let p = a[t][t];
            let mut clean = true;
            for r in t + 1..nr {
                let q = a[r][t].div_euclid(p);
                if q != 0 {
                    for c in t..nc {
                        a[r][c] = a[t][c].checked_mul(q).and_then(|x| a[r][c].checked_sub(x)).ok_or(SnfError::Overflow)?;
                    }
                }
                clean &= a[r][t] == 0;
            }
            for c in t + 1..nc {
                let q = a[t][c].div_euclid(p);
                if q != 0 {
                    for r in t..nr {
                        a[r][c] = a[r][t].checked_mul(q).and_then(|x| a[r][c].checked_sub(x)).ok_or(SnfError::Overflow)?;
                    }
                }
                clean &= a[t][c] == 0;
            }
            if clean {
                diag.push(p.unsigned_abs());
                break;
            }
        }
    }
    Ok(diag)
}

fn smallest_entry(a: &[Vec<i64>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(u64, usize, usize)> = None;
    for (r, row) in a.iter().enumerate().skip(t) {
        for (c, &v) in row.iter().enumerate().skip(t) {
            if v != 0 && best.is_none_or(|(m, _, _)| v.unsigned_abs() < m) {
                best = Some((v.unsigned_abs(), r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// Turns any diagonal into the Smith diagonal by replacing pairs with their
/// gcd and lcm.
fn invariant_factors(mut d: Vec<u64>) -> Result<Vec<u64>, SnfError> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = (d[i] / g).checked_mul(d[j]).ok_or(SnfError::Overflow)?;
            d[i] = g;
            d[j] = l;
        }
    }
    Ok(d)
}

/// Rank over the field with `p` elements.
pub fn rank_mod_p(m: &SparseMatrix, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m.to_dense().into_iter().map(|r| r.into_iter().map(|v| v.rem_euclid(p)).collect()).collect();
    let nc = m.cols;
    let mut rank = 0;
    for c in 0..nc {
        let Some(pr) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, pr);
        let inv = mod_inverse(a[rank][c], p);
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..nc {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(x: i64, p: i64) -> i64 {
    let e = i64::extended_gcd(&x, &p);
    e.x.rem_euclid(p)
}
