use std::collections::{HashSet, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::word::{Letter, Word};
use super::{is_unipotent, UnipotentError};
use crate::exact::linalg::{self, Span};
use crate::exact::{char_poly, RatMatrix, RatPoly};
use crate::report::{ser_display, ser_matrix};

pub const DEFAULT_WORD_BUDGET: usize = 8;
const WORD_SEARCH_CAP: usize = 10_000;

/// Columns of `basis_change` are adapted to the invariant flag whose
/// dimensions are `flag_dims`; conjugating any generator by it gives an
/// upper unitriangular matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularizationCertificate {
    #[serde(serialize_with = "ser_matrix")]
    pub basis_change: RatMatrix,
    pub flag_dims: Vec<usize>,
}

impl TriangularizationCertificate {
    pub fn validate(&self, gens: &[RatMatrix]) -> bool {
        let Ok(inv) = self.basis_change.inverse() else {
            return false;
        };
        let increasing = self.flag_dims.windows(2).all(|w| w[0] < w[1]);
        let complete = self.flag_dims.last() == Some(&self.basis_change.dim());
        increasing
            && complete
            && gens
                .iter()
                .all(|g| (&(&inv * g) * &self.basis_change).is_upper_unitriangular())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// The product is not nilpotent, so the algebra holds a non-nilpotent
    /// element.
    NonNilpotentElement,
    /// A nonzero product of `dim` nilpotent parts, so the algebra is not
    /// nilpotent of index `dim`.
    NonzeroProduct,
}

/// A product `N_{i_1} ⋯ N_{i_k}` of nilpotent parts `N_i = g_i − I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraWitness {
    pub factors: Vec<usize>,
    #[serde(serialize_with = "ser_matrix")]
    pub element: RatMatrix,
    pub kind: WitnessKind,
}

impl AlgebraWitness {
    pub fn validate(&self, gens: &[RatMatrix]) -> bool {
        let Some(first) = gens.first() else {
            return false;
        };
        let dim = first.dim();
        let id = RatMatrix::identity(dim);
        let mut product = id.clone();
        for &i in &self.factors {
            let Some(g) = gens.get(i) else {
                return false;
            };
            product = &product * &(g - &id);
        }
        if product != self.element {
            return false;
        }
        match self.kind {
            WitnessKind::NonNilpotentElement => !product.pow(dim as u64).is_zero(),
            WitnessKind::NonzeroProduct => self.factors.len() >= dim && !product.is_zero(),
        }
    }
}

/// A group word whose matrix has an eigenvalue other than one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupWitness {
    pub word: Word,
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: RatMatrix,
    #[serde(serialize_with = "ser_display")]
    pub char_poly: RatPoly,
}

impl GroupWitness {
    pub fn validate(&self, gens: &[RatMatrix]) -> bool {
        let Ok(m) = self.word.evaluate(gens) else {
            return false;
        };
        let dim = m.dim();
        let unipotent_poly = RatPoly::linear(BigRational::from_integer(1.into())).pow(dim as u32);
        m == self.matrix && char_poly(&m) == self.char_poly && self.char_poly != unipotent_poly
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UnipotenceVerdict {
    Certified(TriangularizationCertificate),
    NotUnipotent {
        algebra_witness: AlgebraWitness,
        group_witness: Option<GroupWitness>,
        word_budget: usize,
    },
}

impl UnipotenceVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, UnipotenceVerdict::Certified(_))
    }

    pub fn validate(&self, gens: &[RatMatrix]) -> bool {
        match self {
            UnipotenceVerdict::Certified(cert) => cert.validate(gens),
            UnipotenceVerdict::NotUnipotent {
                algebra_witness,
                group_witness,
                ..
            } => {
                algebra_witness.validate(gens)
                    && group_witness.as_ref().is_none_or(|w| w.validate(gens))
            }
        }
    }
}

fn check_generators(gens: &[RatMatrix]) -> Result<usize, UnipotentError> {
    let dim = gens.first().map_or(0, RatMatrix::dim);
    for (index, g) in gens.iter().enumerate() {
        if g.dim() != dim {
            return Err(UnipotentError::DimensionMismatch {
                index,
                expected: dim,
                got: g.dim(),
            });
        }
        if g.det().is_zero() {
            return Err(UnipotentError::Singular { index });
        }
    }
    Ok(dim)
}

/// Monomials in the nilpotent parts spanning all products of one fixed
/// length.
struct Layer {
    monomials: Vec<(Vec<usize>, RatMatrix)>,
}

fn next_layer(nil: &[RatMatrix], layer: &Layer, dim: usize) -> Layer {
    let mut span = Span::new(dim * dim);
    let mut monomials = Vec::new();
    for (i, n) in nil.iter().enumerate() {
        for (factors, m) in &layer.monomials {
            let product = n * m;
            if span.insert(&product.flatten()) {
                let mut f = vec![i];
                f.extend(factors);
                monomials.push((f, product));
            }
        }
    }
    Layer { monomials }
}

/// Decides whether `⟨gens⟩` is unipotent.
///
/// On success the certificate's flag is the kernel chain
/// `W_1 = ⋂ ker N_i`, `W_{j+1} = {x : N_i x ∈ W_j}`, with each step extended
/// by the reduced echelon basis of the next space. Generators that are
/// already upper unitriangular get the identity and the standard flag. On
/// failure, words of length at most `word_budget` are searched for a
/// non-unipotent element.
pub fn certify_unipotent_group(gens: &[RatMatrix], word_budget: usize) -> Result<UnipotenceVerdict, UnipotentError> {
    let dim = check_generators(gens)?;
    if gens.is_empty() {
        return Ok(UnipotenceVerdict::Certified(TriangularizationCertificate {
            basis_change: RatMatrix::identity(0),
            flag_dims: Vec::new(),
        }));
    }
    let id = RatMatrix::identity(dim);
    let nil: Vec<RatMatrix> = gens.iter().map(|g| g - &id).collect();

    let mut layer = Layer {
        monomials: vec![(Vec::new(), id.clone())],
    };
    for _ in 0..dim {
        layer = next_layer(&nil, &layer, dim);
        if layer.monomials.is_empty() {
            return Ok(UnipotenceVerdict::Certified(build_flag(gens, &nil, dim)));
        }
    }
    let algebra_witness = algebra_witness(&nil, layer, dim);
    let group_witness = search_group_witness(gens, word_budget)?;
    Ok(UnipotenceVerdict::NotUnipotent {
        algebra_witness,
        group_witness,
        word_budget,
    })
}

fn build_flag(gens: &[RatMatrix], nil: &[RatMatrix], dim: usize) -> TriangularizationCertificate {
    if gens.iter().all(RatMatrix::is_upper_unitriangular) {
        return TriangularizationCertificate {
            basis_change: RatMatrix::identity(dim),
            flag_dims: (1..=dim).collect(),
        };
    }
    let mut chosen: Vec<Vec<BigRational>> = Vec::new();
    let mut current = Span::new(dim);
    let mut flag_dims = Vec::new();
    while current.dim() < dim {
        let annihilator = linalg::kernel(current.basis(), dim);
        let conditions: Vec<Vec<BigRational>> = nil
            .iter()
            .flat_map(|n| {
                annihilator
                    .iter()
                    .map(|y| (0..dim).map(|j| crate::exact::dot(y, &n.column(j))).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .collect();
        let next_basis = linalg::kernel(&conditions, dim);
        let next = Span::from_vectors(dim, &next_basis);
        assert!(next.dim() > current.dim(), "kernel chain stalled on a nilpotent algebra");
        for v in next.basis() {
            if current.insert(v) {
                chosen.push(v.clone());
            }
        }
        flag_dims.push(current.dim());
    }
    let basis_change = RatMatrix::from_fn(dim, |i, j| chosen[j][i].clone());
    TriangularizationCertificate {
        basis_change,
        flag_dims,
    }
}

/// Looks for a non-nilpotent monomial among spanning monomials of further
/// layers; falls back to a nonzero product of length `dim`.
fn algebra_witness(nil: &[RatMatrix], layer: Layer, dim: usize) -> AlgebraWitness {
    let fallback = layer.monomials[0].clone();
    let mut current = layer;
    for _ in 0..=dim * dim {
        for (factors, m) in &current.monomials {
            if !m.pow(dim as u64).is_zero() {
                return AlgebraWitness {
                    factors: factors.clone(),
                    element: m.clone(),
                    kind: WitnessKind::NonNilpotentElement,
                };
            }
        }
        current = next_layer(nil, &current, dim);
        if current.monomials.is_empty() {
            break;
        }
    }
    AlgebraWitness {
        factors: fallback.0,
        element: fallback.1,
        kind: WitnessKind::NonzeroProduct,
    }
}

/// Breadth-first search over words in the generators and their inverses,
/// deduplicated by matrix.
fn search_group_witness(gens: &[RatMatrix], budget: usize) -> Result<Option<GroupWitness>, UnipotentError> {
    let mut letters = Vec::with_capacity(2 * gens.len());
    for (i, g) in gens.iter().enumerate() {
        letters.push((Letter { generator: i, inverse: false }, g.clone()));
        letters.push((Letter { generator: i, inverse: true }, g.inverse()?));
    }
    let dim = gens[0].dim();
    let mut seen: HashSet<RatMatrix> = HashSet::from([RatMatrix::identity(dim)]);
    let mut queue = VecDeque::from([(Word::default(), RatMatrix::identity(dim))]);
    while let Some((word, m)) = queue.pop_front() {
        if word.len() >= budget {
            continue;
        }
        for (letter, g) in &letters {
            let next = &m * g;
            if !seen.insert(next.clone()) {
                continue;
            }
            let mut w = word.clone();
            w.0.push(*letter);
            if !is_unipotent(&next) {
                let char_poly = char_poly(&next);
                return Ok(Some(GroupWitness {
                    word: w,
                    matrix: next,
                    char_poly,
                }));
            }
            if seen.len() < WORD_SEARCH_CAP {
                queue.push_back((w, next));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMatrix;

    fn rat(rows: &[&[i64]]) -> RatMatrix {
        let n = rows.len();
        RatMatrix::from_fn(n, |i, j| BigRational::from_integer(rows[i][j].into()))
    }

    #[test]
    fn heisenberg_is_certified() {
        let a = rat(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let b = rat(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]);
        let verdict = certify_unipotent_group(&[a.clone(), b.clone()], 8).unwrap();
        let UnipotenceVerdict::Certified(cert) = &verdict else {
            panic!("expected certificate");
        };
        assert_eq!(cert.flag_dims, vec![1, 2, 3]);
        assert!(verdict.validate(&[a, b]));
    }

    #[test]
    fn opposite_shears_rejected() {
        let a = rat(&[&[1, 1], &[0, 1]]);
        let b = rat(&[&[1, 0], &[1, 1]]);
        let gens = [a, b];
        let verdict = certify_unipotent_group(&gens, 8).unwrap();
        let UnipotenceVerdict::NotUnipotent {
            algebra_witness,
            group_witness,
            ..
        } = &verdict
        else {
            panic!("expected rejection");
        };
        assert_eq!(algebra_witness.kind, WitnessKind::NonNilpotentElement);
        let w = group_witness.as_ref().expect("short word exists");
        assert_eq!(w.word.len(), 2);
        assert!(verdict.validate(&gens));
    }

    #[test]
    fn unitriangular_generator_gets_identity() {
        let g = rat(&[&[1, 2, 3], &[0, 1, 4], &[0, 0, 1]]);
        let verdict = certify_unipotent_group(&[g], 8).unwrap();
        let UnipotenceVerdict::Certified(cert) = verdict else {
            panic!("expected certificate");
        };
        assert_eq!(cert.basis_change, RatMatrix::identity(3));
    }

    #[test]
    fn conjugated_group_gets_kernel_flag() {
        let u = IntMatrix::from_i64([[1, 2, 0], [0, 1, 0], [1, 3, 1]]);
        let u_inv = u.inverse_unimodular().unwrap();
        let conj = |g: IntMatrix| (&(&u_inv * &g) * &u).to_rational();
        let a = conj(IntMatrix::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 1]]));
        let b = conj(IntMatrix::from_i64([[1, 0, 0], [0, 1, 1], [0, 0, 1]]));
        let gens = [a, b];
        let verdict = certify_unipotent_group(&gens, 8).unwrap();
        let UnipotenceVerdict::Certified(cert) = &verdict else {
            panic!("expected certificate");
        };
        assert_eq!(cert.flag_dims, vec![1, 2, 3]);
        assert!(verdict.validate(&gens));
    }

    #[test]
    fn rejects_bad_generators() {
        let a = RatMatrix::identity(2);
        let b = RatMatrix::identity(3);
        assert!(matches!(
            certify_unipotent_group(&[a.clone(), b], 8),
            Err(UnipotentError::DimensionMismatch { index: 1, .. })
        ));
        assert!(matches!(
            certify_unipotent_group(&[RatMatrix::zero(2)], 8),
            Err(UnipotentError::Singular { index: 0 })
        ));
    }
}
