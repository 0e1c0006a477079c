//! Exact integer and rational linear algebra.
//!
//! Everything downstream (cyclotomic stripping, unipotence certificates, Lie
//! closures, cone dualization) runs on these types, so nothing in here ever
//! rounds. [`RealInterval`] is the only approximate carrier and it always
//! brackets the true value with rational endpoints.

mod interval;
pub mod linalg;
mod matrix;
mod poly;

pub use interval::{width_from_bits, RealInterval, Verdict};
pub use matrix::{IntMatrix, RatMatrix, SquareMatrix};
pub use poly::{char_poly, minimal_poly, poly_gcd_and_squarefree, IntPoly, Poly, RatPoly, SturmSequence};

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix of dimension {dim} needs {expected} entries, got {got}")]
    EntryCount { dim: usize, expected: usize, got: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("exterior power degree {k} out of range 0..={dim}")]
    DegreeOutOfRange { k: usize, dim: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("matrix dimension must be positive")]
    EmptyMatrix,
}

/// Ring elements usable as matrix and polynomial entries.
///
/// Only `BigInt` and `BigRational` implement this. The by-reference methods
/// exist so generic code does not have to spell out higher-ranked operator
/// bounds.
pub trait Scalar: Clone + Debug + PartialEq + Eq + Hash + Zero + One + Send + Sync {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Division that is known to be exact (Bareiss steps, monic division).
    fn exact_div_ref(&self, other: &Self) -> Self;
    fn abs_ref(&self) -> Self;
    fn from_int(value: &BigInt) -> Self;
    fn is_integral(&self) -> bool;
}

macro_rules! impl_scalar {
    ($t:ty, $from:expr, $integral:expr) => {
        impl Scalar for $t {
            fn add_ref(&self, other: &Self) -> Self {
                self + other
            }
            fn sub_ref(&self, other: &Self) -> Self {
                self - other
            }
            fn mul_ref(&self, other: &Self) -> Self {
                self * other
            }
            fn neg_ref(&self) -> Self {
                -self
            }
            fn exact_div_ref(&self, other: &Self) -> Self {
                self / other
            }
            fn abs_ref(&self) -> Self {
                self.abs()
            }
            fn from_int(value: &BigInt) -> Self {
                ($from)(value)
            }
            fn is_integral(&self) -> bool {
                ($integral)(self)
            }
        }
    };
}

impl_scalar!(BigInt, |v: &BigInt| v.clone(), |_: &BigInt| true);
impl_scalar!(
    BigRational,
    |v: &BigInt| BigRational::from_integer(v.clone()),
    |v: &BigRational| v.is_integer()
);

/// Parses `"p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Nearest `f64`, for display only.
pub fn approx_f64(value: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_vec(values: &[i64]) -> Vec<BigRational> {
    values
        .iter()
        .map(|&v| BigRational::from_integer(BigInt::from(v)))
        .collect()
}

/// Scales a nonzero rational vector by a positive factor so that its entries
/// are coprime integers. Direction is preserved.
pub fn primitive_direction(v: &[BigRational]) -> Vec<BigRational> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| BigRational::from_integer(x / &g))
        .collect()
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}
