//! Derived length and nilpotency class of unipotent groups.
//!
//! For a unipotent group the logarithms of the generators generate a
//! nilpotent Lie algebra whose derived series and lower central series have
//! the same lengths as the group's. Those lengths are computed on the Lie
//! side by exact linear algebra and cross-checked from below by explicit
//! iterated commutators `[a, b] = a⁻¹ b⁻¹ a b` of group words.

mod bounds;
mod lie;
mod search;

pub use bounds::{
    corollary_chain_check, essential_length, group_series_report, robinson_check, ChainReport,
    DegreeLength, EssentialLengthReport, RobinsonVerdict, SeriesOptions, SeriesReport,
};
pub use lie::{derived_length, lie_closure, nilpotency_class, NilpotentLieAlgebra};
pub use search::{word_search_lower_bound, WordSearch, DEFAULT_SEARCH_BUDGET};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::exact::RatMatrix;
use crate::unipotent::{is_unipotent, UnipotentError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("generated group is not unipotent")]
    GroupNotUnipotent,
    #[error("seed {index} is not nilpotent")]
    NotNilpotent { index: usize },
    #[error("Lie closure contains a non-nilpotent element")]
    ClosureNotNilpotent,
    #[error("word search found {bound} nontrivial derived levels but the Lie algebra has derived length {ell}")]
    WordSearchExceeded { bound: usize, ell: usize },
    #[error("nilpotency class 0 with derived length {ell}")]
    DegenerateClass { ell: usize },
    #[error("kernel is not flagged abelian")]
    NonAbelianKernel,
    #[error("degree {k}: {reason}")]
    GradingMismatch { k: usize, reason: String },
    #[error("{0}")]
    Pipeline(String),
    #[error(transparent)]
    Unipotent(#[from] UnipotentError),
}

fn nilpotent_power_series(x: &RatMatrix, coeff: impl Fn(usize) -> BigRational) -> RatMatrix {
    let n = x.dim();
    let mut acc = RatMatrix::identity(n).scale(&coeff(0));
    let mut power = RatMatrix::identity(n);
    for j in 1..n {
        power = &power * x;
        if power.is_zero() {
            break;
        }
        acc = &acc + &power.scale(&coeff(j));
    }
    acc
}

/// `log g = Σ_{j ≥ 1} (−1)^{j+1} (g − I)^j / j`, a finite sum for unipotent
/// `g`. The result is checked by exponentiating back.
pub fn matrix_log_unipotent(g: &RatMatrix) -> Result<RatMatrix, SeriesError> {
    if !is_unipotent(g) {
        return Err(SeriesError::NotUnipotent);
    }
    let nil = g - &RatMatrix::identity(g.dim());
    let log = nilpotent_power_series(&nil, |j| {
        if j == 0 {
            BigRational::from_integer(0.into())
        } else {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            BigRational::new(sign.into(), BigInt::from(j))
        }
    });
    assert_eq!(&matrix_exp_nilpotent(&log), g, "exp(log g) must return g");
    Ok(log)
}

/// `exp x = Σ_{j ≥ 0} x^j / j!` for nilpotent `x`.
pub fn matrix_exp_nilpotent(x: &RatMatrix) -> RatMatrix {
    nilpotent_power_series(x, |j| {
        let factorial: BigInt = (1..=j as u64).map(BigInt::from).product();
        BigRational::new(1.into(), factorial)
    })
}
