use num_rational::BigRational;
use serde::Serialize;

use super::SeriesError;
use crate::exact::linalg::Span;
use crate::exact::RatMatrix;
use crate::report::ser_matrices;

/// A Lie algebra of nilpotent matrices, stored by the reduced echelon basis
/// of its span in `Q^{dim²}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotentLieAlgebra {
    pub ambient_dim: usize,
    #[serde(serialize_with = "ser_matrices")]
    pub basis: Vec<RatMatrix>,
    /// `structure[i][j]` holds the coordinates of `[b_i, b_j]`.
    #[serde(skip)]
    pub structure: Vec<Vec<Vec<BigRational>>>,
}

fn span_of(dim: usize, elements: impl IntoIterator<Item = RatMatrix>) -> Span {
    let mut span = Span::new(dim * dim);
    for e in elements {
        span.insert(&e.flatten());
    }
    span
}

fn matrices(dim: usize, span: &Span) -> Vec<RatMatrix> {
    span.basis()
        .iter()
        .map(|v| RatMatrix::from_flat(dim, v.clone()))
        .collect()
}

/// Span of all `[x, y]` with `x ∈ a`, `y ∈ b`.
fn bracket_span(dim: usize, a: &[RatMatrix], b: &[RatMatrix]) -> Vec<RatMatrix> {
    let span = span_of(dim, a.iter().flat_map(|x| b.iter().map(move |y| x.bracket(y))));
    matrices(dim, &span)
}

impl NilpotentLieAlgebra {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            structure: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimensions of `L = L^(0) ⊋ L^(1) ⊋ … ⊋ 0`.
    pub fn derived_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.dim()];
        let mut current = self.basis.clone();
        while !current.is_empty() {
            current = bracket_span(self.ambient_dim, &current, &current);
            assert!(current.len() < *dims.last().unwrap(), "derived series stalled");
            dims.push(current.len());
        }
        dims
    }

    /// Dimensions of `L = L_(0) ⊋ L_(1) ⊋ … ⊋ 0`.
    pub fn lcs_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.dim()];
        let mut current = self.basis.clone();
        while !current.is_empty() {
            current = bracket_span(self.ambient_dim, &current, &self.basis);
            assert!(current.len() < *dims.last().unwrap(), "lower central series stalled");
            dims.push(current.len());
        }
        dims
    }

    /// Structure constants are consistent with the basis and every basis
    /// element is nilpotent.
    pub fn validate(&self) -> bool {
        let span = span_of(self.ambient_dim, self.basis.iter().cloned());
        span.dim() == self.basis.len()
            && self.basis.iter().all(|b| b.pow(self.ambient_dim as u64).is_zero())
            && self.basis.iter().enumerate().all(|(i, x)| {
                self.basis.iter().enumerate().all(|(j, y)| {
                    let coords = &self.structure[i][j];
                    let combo = coords
                        .iter()
                        .zip(&self.basis)
                        .fold(RatMatrix::zero(self.ambient_dim), |acc, (c, b)| &acc + &b.scale(c));
                    combo == x.bracket(y)
                })
            })
    }
}

/// Smallest bracket-closed subspace containing `seeds`.
pub fn lie_closure(ambient_dim: usize, seeds: &[RatMatrix]) -> Result<NilpotentLieAlgebra, SeriesError> {
    for (index, s) in seeds.iter().enumerate() {
        if s.dim() != ambient_dim || !s.pow(ambient_dim as u64).is_zero() {
            return Err(SeriesError::NotNilpotent { index });
        }
    }
    let mut span = Span::new(ambient_dim * ambient_dim);
    let mut elements: Vec<RatMatrix> = Vec::new();
    for s in seeds {
        if span.insert(&s.flatten()) {
            elements.push(s.clone());
        }
    }
    let mut i = 0;
    while i < elements.len() {
        for j in 0..i {
            let b = elements[i].bracket(&elements[j]);
            if span.insert(&b.flatten()) {
                elements.push(b);
            }
        }
        i += 1;
    }
    let basis = matrices(ambient_dim, &span);
    if basis.iter().any(|b| !b.pow(ambient_dim as u64).is_zero()) {
        return Err(SeriesError::ClosureNotNilpotent);
    }
    let structure = basis
        .iter()
        .map(|x| {
            basis
                .iter()
                .map(|y| {
                    span.coordinates(&x.bracket(y).flatten())
                        .expect("closure contains every bracket")
                })
                .collect()
        })
        .collect();
    Ok(NilpotentLieAlgebra {
        ambient_dim,
        basis,
        structure,
    })
}

/// Least `l` with `L^(l) = 0`, and the dimensions along the way.
pub fn derived_length(l: &NilpotentLieAlgebra) -> (usize, Vec<usize>) {
    let dims = l.derived_dims();
    (dims.len() - 1, dims)
}

/// Least `c` with `L_(c) = 0`, and the dimensions along the way.
pub fn nilpotency_class(l: &NilpotentLieAlgebra) -> (usize, Vec<usize>) {
    let dims = l.lcs_dims();
    (dims.len() - 1, dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize, j: usize) -> RatMatrix {
        RatMatrix::unit(n, i, j)
    }

    fn strictly_upper(n: usize) -> NilpotentLieAlgebra {
        let seeds: Vec<RatMatrix> = (0..n - 1).map(|i| e(n, i, i + 1)).collect();
        lie_closure(n, &seeds).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(lie_closure(3, &[e(3, 0, 1)]).unwrap().dim(), 1);
        let heis = lie_closure(3, &[e(3, 0, 1), e(3, 1, 2)]).unwrap();
        assert_eq!(heis.dim(), 3);
        assert!(heis.validate());
        let zero = lie_closure(3, &[]).unwrap();
        assert_eq!(derived_length(&zero), (0, vec![0]));
        assert_eq!(nilpotency_class(&zero).0, 0);
    }

    #[test]
    fn heisenberg_lengths() {
        let heis = lie_closure(3, &[e(3, 0, 1), e(3, 1, 2)]).unwrap();
        assert_eq!(derived_length(&heis), (2, vec![3, 1, 0]));
        assert_eq!(nilpotency_class(&heis), (2, vec![3, 1, 0]));
    }

    #[test]
    fn strictly_upper_lengths() {
        assert_eq!(derived_length(&strictly_upper(4)).0, 2);
        assert_eq!(nilpotency_class(&strictly_upper(5)).0, 4);
        assert_eq!(strictly_upper(5).dim(), 10);
    }

    #[test]
    fn non_nilpotent_seed_rejected() {
        assert_eq!(
            lie_closure(2, &[RatMatrix::identity(2)]),
            Err(SeriesError::NotNilpotent { index: 0 })
        );
        assert_eq!(
            lie_closure(2, &[e(2, 0, 1), e(2, 1, 0)]),
            Err(SeriesError::ClosureNotNilpotent)
        );
    }
}
