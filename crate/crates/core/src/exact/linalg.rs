//! Rational row reduction, kernels and incrementally maintained spans.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduces `rows` to reduced row echelon form, pivoting only in the first
/// `pivot_cols` columns. Zero rows are moved to the bottom. Returns the pivot
/// columns and the rank.
pub fn rref_in_place(rows: &mut [Vec<BigRational>], pivot_cols: usize) -> (Vec<usize>, usize) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][col];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (pivots, r)
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut work = rows.to_vec();
    let cols = work[0].len();
    rref_in_place(&mut work, cols).1
}

/// Basis of `{x ∈ Q^ncols : rows · x = 0}`, one vector per free column, in
/// increasing order of the free column.
pub fn kernel(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut work = rows.to_vec();
    let (pivots, rank) = rref_in_place(&mut work, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &p) in work.iter().take(rank).zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Left kernel: rows `y` with `y · M = 0`, where `M` has the given rows.
pub fn left_kernel(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let transposed: Vec<Vec<BigRational>> = (0..ncols)
        .map(|j| rows.iter().map(|row| row[j].clone()).collect())
        .collect();
    kernel(&transposed, rows.len())
}

/// A subspace of `Q^len` kept in reduced row echelon form.
///
/// The stored basis is the unique RREF basis of the subspace, so two spans
/// of the same subspace always expose identical bases regardless of the
/// order in which vectors were inserted.
#[derive(Clone, Debug, Default)]
pub struct Span {
    len: usize,
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(len: usize, vectors: impl IntoIterator<Item = &'a Vec<BigRational>>) -> Self {
        let mut span = Self::new(len);
        for v in vectors {
            span.insert(v);
        }
        span
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after eliminating every stored pivot.
    pub fn reduce(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.len, "vector length must match span");
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (x, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &factor * r;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Inserts `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        let mut rem = self.reduce(v);
        let Some(pivot) = rem.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = BigRational::one() / &rem[pivot];
        for x in rem.iter_mut() {
            *x = &*x * &inv;
        }
        for row in self.rows.iter_mut() {
            if row[pivot].is_zero() {
                continue;
            }
            let factor = row[pivot].clone();
            for (x, r) in row.iter_mut().zip(&rem) {
                if !r.is_zero() {
                    *x = &*x - &factor * r;
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, rem);
        true
    }
}
