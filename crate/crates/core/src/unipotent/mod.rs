//! Unipotent matrix groups.
//!
//! A group generated by `g_1, …, g_s` is unipotent exactly when the
//! associative algebra generated by the nilpotent parts `N_i = g_i − I` is
//! nilpotent. That algebra is finite dimensional, so the test terminates and
//! its kernel chain gives a common invariant flag.

mod kolchin;
mod pipeline;
mod word;

pub use kolchin::{
    certify_unipotent_group, AlgebraWitness, GroupWitness, TriangularizationCertificate,
    UnipotenceVerdict, WitnessKind, DEFAULT_WORD_BUDGET,
};
pub use pipeline::{unipotent_pipeline, PipelineStatus, UnipotentPipelineReport};
pub use word::{Letter, Word};

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{ExactError, Scalar, SquareMatrix};
use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnipotentError {
    #[error("generator {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("generator {index} is singular")]
    Singular { index: usize },
    #[error("power must be positive")]
    ZeroPower,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `(g − I)^dim = 0`.
pub fn is_unipotent<T: Scalar>(g: &SquareMatrix<T>) -> bool {
    let n = g.dim();
    let nil = g - &SquareMatrix::identity(n);
    nil.pow(n as u64).entries().iter().all(Zero::is_zero)
}

/// Replaces every generator by its `m`-th power.
pub fn power_replacement<T: Scalar>(gens: &[SquareMatrix<T>], m: u64) -> Result<Vec<SquareMatrix<T>>, UnipotentError> {
    if m == 0 {
        return Err(UnipotentError::ZeroPower);
    }
    Ok(gens.iter().map(|g| g.pow(m)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMatrix;

    #[test]
    fn unipotent_examples() {
        assert!(is_unipotent(&IntMatrix::identity(3)));
        assert!(is_unipotent(&IntMatrix::from_i64([[1, 5], [0, 1]])));
        assert!(!is_unipotent(&IntMatrix::from_i64([[0, -1], [1, 0]])));
    }

    #[test]
    fn power_replacement_examples() {
        let rot = IntMatrix::from_i64([[0, -1], [1, 0]]);
        let shear = IntMatrix::from_i64([[1, 1], [0, 1]]);
        assert_eq!(power_replacement(std::slice::from_ref(&rot), 1).unwrap(), vec![rot.clone()]);
        assert_eq!(power_replacement(&[rot], 4).unwrap(), vec![IntMatrix::identity(2)]);
        assert_eq!(
            power_replacement(&[shear], 3).unwrap(),
            vec![IntMatrix::from_i64([[1, 3], [0, 1]])]
        );
        assert_eq!(
            power_replacement::<num_bigint::BigInt>(&[], 0),
            Err(UnipotentError::ZeroPower)
        );
    }
}
