use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg;
use super::{ExactError, Scalar};

/// Square matrix stored row-major. Values are immutable once built: every
/// operation returns a fresh matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

pub type IntMatrix = SquareMatrix<BigInt>;
pub type RatMatrix = SquareMatrix<BigRational>;

impl<T: Scalar> SquareMatrix<T> {
    pub fn new(dim: usize, entries: Vec<T>) -> Result<Self, ExactError> {
        if dim == 0 {
            return Err(ExactError::EmptyMatrix);
        }
        if entries.len() != dim * dim {
            return Err(ExactError::EntryCount {
                dim,
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, ExactError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(ExactError::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::new(dim, entries)
    }

    /// Convenience constructor for literals in tests and fixtures.
    pub fn from_i64<const N: usize>(rows: [[i64; N]; N]) -> Self {
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| T::from_int(&BigInt::from(v))))
            .collect();
        Self::new(N, entries).expect("literal matrix has positive dimension")
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| T::zero())
    }

    /// Elementary matrix unit `E_{ij}` (zero-based indices).
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        Self::from_fn(dim, |a, b| if a == i && b == j { T::one() } else { T::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Upper triangular with every diagonal entry equal to one.
    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.dim).all(|i| {
            self.get(i, i).is_one() && (0..i).all(|j| self.get(i, j).is_zero())
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc.add_ref(self.get(i, i)))
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.mul_ref(factor)).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
            })
            .collect()
    }

    fn check_same_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "matrix dimension mismatch: {} vs {}",
            self.dim, other.dim
        );
    }

    pub fn pow(&self, exponent: u64) -> Self {
        self.pow_big(&BigUint::from(exponent))
    }

    pub fn pow_big(&self, exponent: &BigUint) -> Self {
        let mut result = Self::identity(self.dim);
        for bit in (0..exponent.bits()).rev() {
            result = &result * &result;
            if exponent.bit(bit) {
                result = &result * self;
            }
        }
        result
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> T {
        let n = self.dim;
        let mut a = self.rows();
        let mut sign_negative = false;
        let mut prev = T::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign_negative = !sign_negative;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j]
                        .mul_ref(&a[k][k])
                        .sub_ref(&a[i][k].mul_ref(&a[k][j]));
                    a[i][j] = v.exact_div_ref(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if sign_negative {
            det.neg_ref()
        } else {
            det
        }
    }

    /// `k`-th compound matrix: entries are the `k × k` minors, rows and
    /// columns indexed by `k`-subsets in lexicographic order. Degree 0 gives
    /// `[1]`.
    pub fn exterior_power(&self, k: usize) -> Result<Self, ExactError> {
        if k > self.dim {
            return Err(ExactError::DegreeOutOfRange { k, dim: self.dim });
        }
        if k == 0 {
            return Ok(Self::identity(1));
        }
        let subsets = k_subsets(self.dim, k);
        let size = subsets.len();
        let mut entries = Vec::with_capacity(size * size);
        for rows in &subsets {
            for cols in &subsets {
                let minor = Self::from_fn(k, |a, b| self.get(rows[a], cols[b]).clone());
                entries.push(minor.det());
            }
        }
        Self::new(size, entries)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let m = other.dim;
        Self::from_fn(self.dim * m, |i, j| {
            self.get(i / m, j / m).mul_ref(other.get(i % m, j % m))
        })
    }

    pub fn block_diag(blocks: &[Self]) -> Self {
        let dim: usize = blocks.iter().map(|b| b.dim).sum();
        let mut out = Self::zero(dim);
        let mut offset = 0;
        for block in blocks {
            for i in 0..block.dim {
                for j in 0..block.dim {
                    out.entries[(offset + i) * dim + offset + j] = block.get(i, j).clone();
                }
            }
            offset += block.dim;
        }
        out
    }

    /// Max absolute row sum, the operator norm induced by the sup norm.
    pub fn max_row_sum_norm(&self) -> T
    where
        T: PartialOrd,
    {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(T::zero(), |acc, e| acc.add_ref(&e.abs_ref()))
            })
            .fold(T::zero(), |best, s| if s > best { s } else { best })
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Scalar::is_integral)
    }
}

impl IntMatrix {
    pub fn to_rational(&self) -> RatMatrix {
        self.map(|e| BigRational::from_integer(e.clone()))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix, which is again integral.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, ExactError> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(ExactError::NotUnimodular { det });
        }
        let inv = self.to_rational().inverse()?;
        Ok(inv.map(|e| e.to_integer()))
    }
}

impl RatMatrix {
    /// Converts back to an integer matrix when every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.is_integral() {
            Some(self.map(|e| e.to_integer()))
        } else {
            None
        }
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix, ExactError> {
        let n = self.dim;
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        let (pivots, _) = linalg::rref_in_place(&mut aug, n);
        if pivots.len() < n {
            return Err(ExactError::Singular);
        }
        let rows = aug.into_iter().map(|row| row[n..].to_vec()).collect();
        RatMatrix::from_rows(rows)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows())
    }

    /// Basis of the right kernel `{x : self · x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        linalg::kernel(&self.rows(), self.dim)
    }

    /// Row-major flattening, used to treat matrices as vectors of length `dim²`.
    pub fn flatten(&self) -> Vec<BigRational> {
        self.entries.clone()
    }

    pub fn from_flat(dim: usize, flat: Vec<BigRational>) -> RatMatrix {
        RatMatrix::new(dim, flat).expect("flat vector has dim² entries")
    }

    pub fn bracket(&self, other: &RatMatrix) -> RatMatrix {
        &(self * other) - &(other * self)
    }
}

impl<'a, T: Scalar> Mul<&'a SquareMatrix<T>> for &'a SquareMatrix<T> {
    type Output = SquareMatrix<T>;

    fn mul(self, rhs: &'a SquareMatrix<T>) -> SquareMatrix<T> {
        self.check_same_dim(rhs);
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            let row = self.row(i);
            for j in 0..n {
                let mut acc = T::zero();
                for (k, a) in row.iter().enumerate() {
                    let b = rhs.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add_ref(&a.mul_ref(b));
                    }
                }
                entries.push(acc);
            }
        }
        SquareMatrix { dim: n, entries }
    }
}

impl<'a, T: Scalar> Add<&'a SquareMatrix<T>> for &'a SquareMatrix<T> {
    type Output = SquareMatrix<T>;

    fn add(self, rhs: &'a SquareMatrix<T>) -> SquareMatrix<T> {
        self.check_same_dim(rhs);
        SquareMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }
}

impl<'a, T: Scalar> Sub<&'a SquareMatrix<T>> for &'a SquareMatrix<T> {
    type Output = SquareMatrix<T>;

    fn sub(self, rhs: &'a SquareMatrix<T>) -> SquareMatrix<T> {
        self.check_same_dim(rhs);
        SquareMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        }
    }
}

impl<T: Scalar> Neg for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;

    fn neg(self) -> SquareMatrix<T> {
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(Scalar::neg_ref).collect(),
        }
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - k + i {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compound_of_diagonal() {
        let m = IntMatrix::from_i64([[2, 0, 0], [0, 3, 0], [0, 0, 5]]);
        let l2 = m.exterior_power(2).unwrap();
        assert_eq!(l2, IntMatrix::from_i64([[6, 0, 0], [0, 10, 0], [0, 0, 15]]));
    }

    #[test]
    fn compound_extremes() {
        let m = IntMatrix::from_i64([[2, 1, 4], [0, 3, 1], [7, 0, 5]]);
        assert_eq!(m.exterior_power(1).unwrap(), m);
        let top = m.exterior_power(3).unwrap();
        assert_eq!(top.dim(), 1);
        assert_eq!(top.get(0, 0), &m.det());
        assert_eq!(m.exterior_power(0).unwrap(), IntMatrix::identity(1));
        assert!(matches!(
            m.exterior_power(4),
            Err(ExactError::DegreeOutOfRange { k: 4, dim: 3 })
        ));
    }

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        if m.is_empty() {
            return 1;
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| [&row[..j], &row[j + 1..]].concat())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let rows = [[0, 2, 1, 7], [3, -1, 4, 0], [5, 6, 0, -2], [1, 1, 1, 1]];
        let m = IntMatrix::from_i64(rows);
        let expected = cofactor_det(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
        assert_eq!(m.det(), BigInt::from(expected));
    }

    #[test]
    fn unimodular_inverse_is_integral() {
        let m = IntMatrix::from_i64([[2, 1], [1, 1]]);
        let inv = m.inverse_unimodular().unwrap();
        assert!((&m * &inv).is_identity());
        let singular = IntMatrix::from_i64([[2, 0], [0, 1]]);
        assert!(matches!(
            singular.inverse_unimodular(),
            Err(ExactError::NotUnimodular { .. })
        ));
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            k_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(k_subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = IntMatrix::from_i64([[1, 1], [1, 0]]);
        let mut acc = IntMatrix::identity(2);
        for _ in 0..13 {
            acc = &acc * &m;
        }
        assert_eq!(m.pow(13), acc);
        assert!(m.pow(0).is_identity());
    }
}
