//! Rigorous enclosure of the largest root modulus of a monic integer
//! polynomial.
//!
//! The dominant root may be complex, so sign changes of `f` itself are not
//! enough. Instead we form the polynomial `P` whose roots are all pairwise
//! products `λ_i λ_j`. Since roots come in conjugate pairs, `|λ|² = λ·λ̄` is
//! a root of `P`, and every root of `P` has modulus at most `ρ²`. Hence `ρ²`
//! is the largest real root of `P`, which Sturm sequences isolate exactly.
//! `P` is built from power sums: `p_k(P) = p_k(f)²`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::SpectralError;
use crate::exact::{poly_gcd_and_squarefree, IntPoly, RatPoly, RealInterval};

/// Power sums `p_1..=p_count` of the roots of a monic polynomial.
fn power_sums(f: &IntPoly, count: usize) -> Vec<BigInt> {
    let n = f.degree().unwrap_or(0);
    // f = x^n + c_1 x^{n-1} + ... + c_n
    let c = |i: usize| f.coeff(n - i);
    let mut sums: Vec<BigInt> = Vec::with_capacity(count + 1);
    sums.push(BigInt::from(n));
    for k in 1..=count {
        let mut s = BigInt::zero();
        for i in 1..=n.min(k) {
            let weight = if i == k { BigInt::from(k) } else { sums[k - i].clone() };
            s -= c(i) * weight;
        }
        sums.push(s);
    }
    sums
}

/// Monic polynomial of degree `deg` from its power sums (Newton's identities).
fn from_power_sums(sums: &[BigInt], deg: usize) -> IntPoly {
    // elementary symmetric e_k
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=deg {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &sums[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        debug_assert!((&acc % BigInt::from(k)).is_zero());
        e.push(acc / BigInt::from(k));
    }
    let coeffs = (0..=deg)
        .map(|j| {
            // coefficient of y^j is (-1)^{deg-j} e_{deg-j}
            let k = deg - j;
            if k % 2 == 0 {
                e[k].clone()
            } else {
                -e[k].clone()
            }
        })
        .collect();
    IntPoly::new(coeffs)
}

/// Polynomial whose roots are `λ_i λ_j` over all ordered pairs of roots.
pub fn pairwise_product_poly(f: &IntPoly) -> IntPoly {
    let n = f.degree().unwrap_or(0);
    let big_n = n * n;
    let sums = power_sums(f, big_n);
    let squared: Vec<BigInt> = sums.iter().map(|s| s * s).collect();
    from_power_sums(&squared, big_n)
}

/// Cauchy bound: every root satisfies `|λ| < 1 + max |c_i|` for monic `f`.
fn cauchy_bound(f: &IntPoly) -> BigRational {
    let n = f.degree().unwrap_or(0);
    let max = (0..n)
        .map(|i| f.coeff(i).abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    BigRational::from_integer(max + 1)
}

/// Encloses `max |λ|` over the roots of monic `f` in an interval of width at
/// most `width`. If the bisection lands exactly on the radius, a point
/// interval is returned.
pub fn spectral_radius_of_poly(f: &IntPoly, width: &BigRational) -> Result<RealInterval, SpectralError> {
    if !f.is_monic() {
        return Err(SpectralError::NotMonic);
    }
    if !width.is_positive() {
        return Err(SpectralError::NonPositive { what: "width" });
    }
    if f.degree().unwrap_or(0) == 0 {
        return Ok(RealInterval::point(BigRational::zero()));
    }
    let (_, squarefree) = poly_gcd_and_squarefree(f)?;
    let product = pairwise_product_poly(&squarefree).to_rational();
    let sturm = product.sturm_sequence();
    let sq = |t: &BigRational| t * t;
    let above = |t: &BigRational| sturm.count_above(&sq(t)) > 0;

    let mut lo = BigRational::zero();
    if !above(&lo) {
        return Ok(RealInterval::point(BigRational::zero()));
    }
    let mut hi = cauchy_bound(f);
    debug_assert!(!above(&hi));
    let two = BigRational::from_integer(BigInt::from(2));
    let reduced: &RatPoly = sturm.polynomial();
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        if above(&mid) {
            lo = mid;
        } else {
            if reduced.eval(&sq(&mid)).is_zero() {
                return Ok(RealInterval::point(mid));
            }
            hi = mid;
        }
    }
    Ok(RealInterval::new(lo, hi))
}
