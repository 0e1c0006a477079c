use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::lp::{strict_feasibility, StrictFeasibility};
use super::polyhedral::PolyhedralCone;
use super::ConeError;
use crate::exact::{char_poly, dot, minimal_poly, primitive_direction, RatMatrix, RatPoly};
use crate::report::{ser_opt_rat_vec, ser_rational};
use crate::spectral::strip_cyclotomic_factors;

fn check_map(f: &RatMatrix, cone: &PolyhedralCone) -> Result<RatMatrix, ConeError> {
    if f.dim() != cone.dim {
        return Err(ConeError::DimensionMismatch {
            map: f.dim(),
            cone: cone.dim,
        });
    }
    f.inverse().map_err(|_| ConeError::Singular)
}

/// `f(C) = C`: both `f` and `f⁻¹` send every extreme ray into the cone.
pub fn preserves_cone(f: &RatMatrix, cone: &PolyhedralCone) -> Result<bool, ConeError> {
    let inv = check_map(f, cone)?;
    Ok(cone
        .rays
        .iter()
        .all(|r| cone.contains(&f.mul_vec(r)) && cone.contains(&inv.mul_vec(r))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FixedVector {
    /// `f x = q x` with every facet strictly positive at `x`.
    Found {
        #[serde(serialize_with = "crate::report::ser_rat_vec")]
        vector: Vec<BigRational>,
    },
    /// `q` is not an eigenvalue.
    NoEigenvector,
    /// Weights `y ≥ 0`, `Σ y = 1`, with `Σ y_i F_i` vanishing on the
    /// eigenspace, so no eigenvector is strictly positive on every facet
    /// `F_i`.
    Infeasible {
        #[serde(serialize_with = "crate::report::ser_rat_vec")]
        farkas: Vec<BigRational>,
    },
}

impl FixedVector {
    pub fn vector(&self) -> Option<&[BigRational]> {
        match self {
            FixedVector::Found { vector } => Some(vector),
            _ => None,
        }
    }
}

/// Interior eigenvector of `f` for the eigenvalue `q`, decided exactly by a
/// kernel computation and a strict feasibility program on the kernel.
pub fn interior_fixed_vector(f: &RatMatrix, q: &BigRational, cone: &PolyhedralCone) -> Result<FixedVector, ConeError> {
    if !q.is_positive() {
        return Err(ConeError::NonPositiveQ);
    }
    check_map(f, cone)?;
    let shifted = f - &RatMatrix::identity(f.dim()).scale(q);
    let kernel = shifted.kernel();
    if kernel.is_empty() {
        return Ok(FixedVector::NoEigenvector);
    }
    let m: Vec<Vec<BigRational>> = cone
        .facets
        .iter()
        .map(|facet| kernel.iter().map(|k| dot(facet, k)).collect())
        .collect();
    Ok(match strict_feasibility(&m, kernel.len()) {
        StrictFeasibility::Feasible(c) => {
            let x: Vec<BigRational> = (0..f.dim())
                .map(|i| {
                    kernel
                        .iter()
                        .zip(&c)
                        .fold(BigRational::zero(), |acc, (k, cj)| acc + &k[i] * cj)
                })
                .collect();
            FixedVector::Found {
                vector: primitive_direction(&x),
            }
        }
        StrictFeasibility::Infeasible(farkas) => FixedVector::Infeasible { farkas },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusRoute {
    /// Integer map with `q = 1`: cyclotomic stripping.
    Kronecker,
    /// Rational data: Sturm count of the trace polynomial on `(−2, 2)`.
    UnitCircleCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerBoundedness {
    /// `sup_i ‖f^i‖ / q^i < ∞` over all integers `i`.
    pub bounded: bool,
    pub diagonalizable: bool,
    pub eigen_moduli_all_q: bool,
    pub route: ModulusRoute,
}

/// `f/q` generates a bounded group exactly when it is diagonalizable with
/// every eigenvalue on the unit circle.
pub fn power_bounded_exact(f: &RatMatrix, q: &BigRational) -> Result<PowerBoundedness, ConeError> {
    if !q.is_positive() {
        return Err(ConeError::NonPositiveQ);
    }
    if f.det().is_zero() {
        return Err(ConeError::Singular);
    }
    let p = minimal_poly(f);
    let diagonalizable = p.gcd(&p.derivative()).degree() == Some(0);
    let (route, on_circle) = match f.to_integer() {
        Some(int) if q.is_one() => {
            let f_int = char_poly(&int);
            let on_circle = f_int.coeff(0).abs().is_one()
                && strip_cyclotomic_factors(&f_int).is_ok_and(|(_, residual)| residual.is_constant());
            (ModulusRoute::Kronecker, on_circle)
        }
        _ => (
            ModulusRoute::UnitCircleCount,
            all_roots_on_unit_circle(&char_poly(f).rescale_roots(q)),
        ),
    };
    Ok(PowerBoundedness {
        bounded: diagonalizable && on_circle,
        diagonalizable,
        eigen_moduli_all_q: on_circle,
        route,
    })
}

/// Whether every complex root of a nonzero rational polynomial has modulus
/// one.
///
/// After removing `x ± 1` from the squarefree part `h`, all roots lie on the
/// circle only if `h` is palindromic of even degree `2k`; then
/// `x^{-k} h(x) = T(x + 1/x)` and the roots of `h` are on the circle exactly
/// when `T` has `k` distinct roots in `(−2, 2)`.
pub fn all_roots_on_unit_circle(f: &RatPoly) -> bool {
    let mut h = f.squarefree_part().make_monic();
    for root in [BigRational::one(), -BigRational::one()] {
        let linear = RatPoly::linear(root);
        let (quotient, rem) = h.div_rem(&linear);
        if rem.is_zero() {
            h = quotient;
        }
    }
    let deg = h.degree().unwrap_or(0);
    if deg == 0 {
        return true;
    }
    if deg % 2 == 1 || h.coeffs().iter().ne(h.coeffs().iter().rev()) {
        return false;
    }
    let k = deg / 2;
    let u = RatPoly::monomial(1);
    let two = RatPoly::constant(BigRational::from_integer(BigInt::from(2)));
    let mut d_prev = two.clone();
    let mut d_cur = u.clone();
    let mut t = RatPoly::constant(h.coeff(k));
    for j in 1..=k {
        t = t.add(&d_cur.scale(&h.coeff(k + j)));
        let next = u.mul(&d_cur).sub(&d_prev);
        d_prev = d_cur;
        d_cur = next;
    }
    let bound = BigRational::from_integer(BigInt::from(2));
    t.sturm_sequence().count_in(&-&bound, &bound) == k
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeMapAnalysis {
    pub preserves: bool,
    #[serde(serialize_with = "ser_rational")]
    pub q: BigRational,
    #[serde(serialize_with = "ser_opt_rat_vec")]
    pub interior_fixed: Option<Vec<BigRational>>,
    pub fixed_vector: FixedVector,
    pub power_bounded_exact: bool,
    pub diagonalizable: bool,
    pub eigen_moduli_all_q: bool,
    pub route: ModulusRoute,
    /// `max_{|i| ≤ sample_range} ‖f^i‖ / q^i` in the max-row-sum norm.
    #[serde(serialize_with = "ser_rational")]
    pub numeric_iterate_bound: BigRational,
    /// `max(‖f^R‖ / q^R, ‖f^{−R}‖ q^R)` at `R = sample_range`.
    #[serde(serialize_with = "ser_rational")]
    pub ratio_at_range: BigRational,
    pub sample_range: u32,
    /// Both criteria gave the same verdict.
    pub agreement: bool,
    /// Unbounded, yet the sampled ratio at the range end is at most
    /// [`SLOW_GROWTH_THRESHOLD`].
    pub slow_growth: bool,
}

pub const DEFAULT_SAMPLE_RANGE: u32 = 40;
pub const SLOW_GROWTH_THRESHOLD: i64 = 1000;

/// Evaluates both sides of the equivalence between an interior eigenvector
/// for `q` and boundedness of `f^i / q^i`, plus a sampled norm witness.
pub fn meng_zhang_report(
    f: &RatMatrix,
    q: &BigRational,
    cone: &PolyhedralCone,
    sample_range: u32,
) -> Result<ConeMapAnalysis, ConeError> {
    if !q.is_positive() {
        return Err(ConeError::NonPositiveQ);
    }
    if !preserves_cone(f, cone)? {
        return Err(ConeError::NotPreserved);
    }
    let fixed_vector = interior_fixed_vector(f, q, cone)?;
    let exact = power_bounded_exact(f, q)?;
    let inv = f.inverse().map_err(|_| ConeError::Singular)?;
    let q_inv = BigRational::one() / q;
    let mut forward = RatMatrix::identity(f.dim());
    let mut backward = RatMatrix::identity(f.dim());
    let mut q_pow = BigRational::one();
    let mut q_inv_pow = BigRational::one();
    let mut bound = BigRational::one();
    let mut at_range = BigRational::one();
    for _ in 0..sample_range {
        forward = &forward * f;
        backward = &backward * &inv;
        q_pow *= q;
        q_inv_pow *= &q_inv;
        let a = forward.max_row_sum_norm() / &q_pow;
        let b = backward.max_row_sum_norm() / &q_inv_pow;
        at_range = if a > b { a } else { b };
        if at_range > bound {
            bound = at_range.clone();
        }
    }
    let criterion_one = fixed_vector.vector().is_some();
    let slow_growth =
        !exact.bounded && at_range <= BigRational::from_integer(BigInt::from(SLOW_GROWTH_THRESHOLD));
    Ok(ConeMapAnalysis {
        preserves: true,
        q: q.clone(),
        interior_fixed: fixed_vector.vector().map(<[_]>::to_vec),
        fixed_vector,
        power_bounded_exact: exact.bounded,
        diagonalizable: exact.diagonalizable,
        eigen_moduli_all_q: exact.eigen_moduli_all_q,
        route: exact.route,
        numeric_iterate_bound: bound,
        ratio_at_range: at_range,
        sample_range,
        agreement: criterion_one == exact.bounded,
        slow_growth,
    })
}
