//! Exact linear algebra over ℚ.
//!
//! Two engines, both fraction-exact:
//!
//! * dense reduced row echelon form ([`rref`]) with rank and kernel-basis
//!   extraction — used where whole matrices are materialized anyway
//!   (divergence matrices, cochain differentials);
//! * an incremental sparse eliminator ([`SparseRows`]) that keeps a set of
//!   normalized pivot rows — used for the large equivariance systems where
//!   rows are generated on the fly and only rank / membership matters.

use crate::scalar::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// In-place reduced row echelon form.  Returns the pivot columns in
/// increasing order.  Zero rows sink to the bottom.
pub fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let cols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        // find a row at or below r with a nonzero entry in column c
        let Some(pr) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        // normalize pivot row
        let lead = rows[r][c].clone();
        if !lead.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &lead;
                }
            }
        }
        // clear the column everywhere else
        for i in 0..m {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..cols {
                let delta = &rows[r][j] * &f;
                rows[i][j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    pivots
}

/// Rank of a dense matrix (consumes a copy).
pub fn rank_dense(mut rows: Vec<Vec<Rat>>) -> usize {
    rref(&mut rows).len()
}

/// Basis of the right null space of the matrix, one vector per free
/// column, in increasing free-column order.  `cols` must match row width.
pub fn kernel_basis(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut work: Vec<Vec<Rat>> = rows.to_vec();
    debug_assert!(work.iter().all(|r| r.len() == cols));
    let pivots = rref(&mut work);
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; cols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_set[f] {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -work[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve A·x = b for one solution if consistent (A dense), returning
/// `None` when the system is inconsistent.  Free variables are set to 0.
pub fn solve_dense(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // inconsistent iff some pivot lands in the augmented column
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Incremental sparse row eliminator.
///
/// Maintains a triangular set of pivot rows (lead coefficient 1, keyed by
/// lead column).  Rows are sorted `(column, coeff)` lists with no zero
/// coefficients.  Pivot rows are *not* back-substituted against each other
/// (plain echelon, not reduced) — enough for rank, nullity, and membership.
#[derive(Clone, Debug)]
pub struct SparseRows {
    cols: usize,
    pivots: BTreeMap<usize, Vec<(usize, Rat)>>,
}

/// row ← row − f·pivot, both sorted sparse rows.
fn sparse_axpy(row: &[(usize, Rat)], pivot: &[(usize, Rat)], f: &Rat) -> Vec<(usize, Rat)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < row.len() && j < pivot.len() {
        match row[i].0.cmp(&pivot[j].0) {
            std::cmp::Ordering::Less => {
                out.push(row[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let v = -(&pivot[j].1 * f);
                if !v.is_zero() {
                    out.push((pivot[j].0, v));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &row[i].1 - &(&pivot[j].1 * f);
                if !v.is_zero() {
                    out.push((row[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&row[i..]);
    for (c, v) in &pivot[j..] {
        let v = -(v * f);
        if !v.is_zero() {
            out.push((*c, v));
        }
    }
    out
}

impl SparseRows {
    pub fn new(cols: usize) -> Self {
        SparseRows {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Eliminate `row` against the current pivots; the residual has no
    /// lead column in common with any pivot (empty ⟺ row ∈ row span).
    pub fn reduce(&self, mut row: Vec<(usize, Rat)>) -> Vec<(usize, Rat)> {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                return row;
            };
            debug_assert!(lead < self.cols);
            let Some(pivot) = self.pivots.get(&lead) else {
                return row;
            };
            row = sparse_axpy(&row, pivot, &coeff);
        }
    }

    /// Insert a row; returns true when it was independent (rank grew).
    pub fn insert_row(&mut self, row: Vec<(usize, Rat)>) -> bool {
        let red = self.reduce(row);
        let Some((lead, coeff)) = red.first().cloned() else {
            return false;
        };
        // normalize to lead coefficient 1
        let normalized: Vec<(usize, Rat)> = red
            .into_iter()
            .map(|(c, v)| (c, v / &coeff))
            .collect();
        self.pivots.insert(lead, normalized);
        true
    }

    /// Insert a dense row (convenience).
    pub fn insert_dense(&mut self, row: &[Rat]) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        let sparse: Vec<(usize, Rat)> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        self.insert_row(sparse)
    }
}
