//! Entropy of unimodular integer matrices.
//!
//! A unimodular `g` has zero entropy exactly when its characteristic
//! polynomial is a product of cyclotomic polynomials. Classification strips
//! cyclotomic factors exactly; anything left over has a root off the unit
//! circle, whose modulus is then isolated in a [`RealInterval`].
//!
//! [`RealInterval`]: crate::exact::RealInterval

mod cyclotomic;
mod degrees;
mod entropy;
mod radius;

pub use cyclotomic::{
    cyclotomic_polynomial, euler_phi, lcm_of_orders, reconstruct, strip_cyclotomic_factors,
    totient_search_bound, uniform_exponent, CyclotomicProfile, UniformExponent,
};
pub use degrees::{
    check_degree_inequalities, dynamical_degrees, DegreeCheck, DegreeReport, GradedRepresentation,
};
pub use entropy::{
    classify_entropy, spectral_radius, uniform_power_certificate, EntropyClassification,
    EntropyKind,
};
pub use radius::{pairwise_product_poly, spectral_radius_of_poly};

use num_bigint::BigInt;
use thiserror::Error;

use crate::exact::ExactError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("{what} must be positive")]
    NonPositive { what: &'static str },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("constant term {constant} is not a unit")]
    ConstantTermNotUnit { constant: BigInt },
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },
    #[error("inconsistent grading: {0}")]
    InconsistentGrading(String),
    #[error("grading is not a homomorphism: {0}")]
    HomomorphyViolation(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
