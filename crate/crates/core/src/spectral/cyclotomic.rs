//! Euler's totient, cyclotomic polynomials and the uniform exponent.
//!
//! Enumeration of `{d : φ(d) ≤ r}` relies on the elementary bound
//! `φ(d) ≥ √(d/2)`, which gives `d ≤ 2φ(d)² ≤ 2r²`. Every search below runs
//! over `1..=2r²` and is therefore exhaustive.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use super::SpectralError;
use crate::exact::IntPoly;

pub fn euler_phi(d: u64) -> Result<u64, SpectralError> {
    if d == 0 {
        return Err(SpectralError::NonPositive { what: "d" });
    }
    let mut n = d;
    let mut phi = d;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    Ok(phi)
}

/// The orders `d` a root of unity can have as an eigenvalue of an integer
/// matrix of rank `r`, together with two exponents that kill all of them:
/// their product and their least common multiple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformExponent {
    pub rank: u64,
    pub d_list: Vec<u64>,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub m_paper: BigUint,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub m_lcm: BigUint,
}

impl UniformExponent {
    /// `m_lcm` as a machine integer; fails only for absurdly large ranks.
    pub fn m_lcm_u64(&self) -> u64 {
        u64::try_from(&self.m_lcm).expect("uniform exponent fits in u64 for supported ranks")
    }
}

/// Search bound `2r²` for `{d : φ(d) ≤ r}`.
pub fn totient_search_bound(r: u64) -> u64 {
    2 * r * r
}

pub fn uniform_exponent(r: u64) -> Result<UniformExponent, SpectralError> {
    if r == 0 {
        return Err(SpectralError::NonPositive { what: "r" });
    }
    let mut d_list = Vec::new();
    for d in 1..=totient_search_bound(r) {
        if euler_phi(d)? <= r {
            d_list.push(d);
        }
    }
    let mut m_paper = BigUint::one();
    let mut m_lcm = BigUint::one();
    for &d in &d_list {
        let d = BigUint::from(d);
        m_paper *= &d;
        m_lcm = m_lcm.lcm(&d);
    }
    Ok(UniformExponent {
        rank: r,
        d_list,
        m_paper,
        m_lcm,
    })
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `Φ_d = (x^d − 1) / ∏_{e | d, e < d} Φ_e`, by exact division.
pub fn cyclotomic_polynomial(d: u64) -> Result<IntPoly, SpectralError> {
    if d == 0 {
        return Err(SpectralError::NonPositive { what: "d" });
    }
    let mut table = CyclotomicTable::default();
    Ok(table.get(d).clone())
}

/// Memo of cyclotomic polynomials, filled on demand.
#[derive(Default)]
pub(crate) struct CyclotomicTable {
    polys: BTreeMap<u64, IntPoly>,
}

impl CyclotomicTable {
    pub(crate) fn get(&mut self, d: u64) -> &IntPoly {
        if !self.polys.contains_key(&d) {
            let mut acc = IntPoly::monomial(d as usize).sub(&IntPoly::one());
            for e in divisors(d).into_iter().filter(|&e| e < d) {
                let phi_e = self.get(e).clone();
                acc = acc
                    .exact_div_monic(&phi_e)
                    .expect("cyclotomic factors divide x^d - 1");
            }
            self.polys.insert(d, acc);
        }
        &self.polys[&d]
    }
}

/// Multiset of cyclotomic factors `Φ_d^mult`, sorted by `d`.
pub type CyclotomicProfile = Vec<(u64, u32)>;

/// Divides out every `Φ_d` with `φ(d) ≤ deg f` to maximal multiplicity.
///
/// For a monic integer `f` with `|f(0)| = 1` the residual is constant exactly
/// when every root of `f` is a root of unity (Kronecker); otherwise the
/// residual carries a root of modulus greater than one.
pub fn strip_cyclotomic_factors(f: &IntPoly) -> Result<(CyclotomicProfile, IntPoly), SpectralError> {
    if !f.is_monic() {
        return Err(SpectralError::NotMonic);
    }
    let constant = f.coeff(0);
    if !constant.abs().is_one() {
        return Err(SpectralError::ConstantTermNotUnit { constant });
    }
    let deg = f.degree().unwrap_or(0) as u64;
    let mut profile = Vec::new();
    let mut residual = f.clone();
    if deg == 0 {
        return Ok((profile, residual));
    }
    let mut table = CyclotomicTable::default();
    for d in 1..=totient_search_bound(deg) {
        if euler_phi(d)? > deg {
            continue;
        }
        let phi_d = table.get(d).clone();
        let mut mult = 0u32;
        while residual.degree().unwrap_or(0) >= phi_d.degree().unwrap_or(0) {
            match residual.exact_div_monic(&phi_d) {
                Some(q) => {
                    residual = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            profile.push((d, mult));
        }
        if residual.is_constant() {
            break;
        }
    }
    Ok((profile, residual))
}

/// Reassembles `∏ Φ_d^mult · residual`.
pub fn reconstruct(profile: &CyclotomicProfile, residual: &IntPoly) -> IntPoly {
    let mut table = CyclotomicTable::default();
    profile.iter().fold(residual.clone(), |acc, &(d, mult)| {
        acc.mul(&table.get(d).pow(mult))
    })
}

pub fn lcm_of_orders(profile: &CyclotomicProfile) -> u64 {
    profile.iter().fold(1u64, |acc, &(d, _)| acc.lcm(&d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(6).unwrap(), 2);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn phi_matches_coprime_count() {
        for d in 1..=300u64 {
            let count = (1..=d).filter(|j| j.gcd(&d) == 1).count() as u64;
            assert_eq!(euler_phi(d).unwrap(), count, "d = {d}");
        }
    }

    #[test]
    fn uniform_exponent_small_ranks() {
        let u1 = uniform_exponent(1).unwrap();
        assert_eq!(u1.d_list, vec![1, 2]);
        assert_eq!(u1.m_paper, BigUint::from(2u32));
        assert_eq!(u1.m_lcm, BigUint::from(2u32));
        let u2 = uniform_exponent(2).unwrap();
        assert_eq!(u2.d_list, vec![1, 2, 3, 4, 6]);
        assert_eq!(u2.m_paper, BigUint::from(144u32));
        assert_eq!(u2.m_lcm, BigUint::from(12u32));
        let u4 = uniform_exponent(4).unwrap();
        assert_eq!(u4.d_list, vec![1, 2, 3, 4, 5, 6, 8, 10, 12]);
        assert_eq!(u4.m_lcm, BigUint::from(120u32));
        assert!(uniform_exponent(0).is_err());
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), ip(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4).unwrap(), ip(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6).unwrap(), ip(&[1, -1, 1]));
        assert!(cyclotomic_polynomial(0).is_err());
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        let mut table = CyclotomicTable::default();
        for d in 1..=200u64 {
            assert_eq!(
                table.get(d).degree().unwrap() as u64,
                euler_phi(d).unwrap(),
                "d = {d}"
            );
        }
    }

    #[test]
    fn strip_examples() {
        let f = ip(&[-1, 1]).pow(2).mul(&ip(&[1, 0, 1]));
        let (profile, residual) = strip_cyclotomic_factors(&f).unwrap();
        assert_eq!(profile, vec![(1, 2), (4, 1)]);
        assert_eq!(residual, IntPoly::one());

        let golden = ip(&[-1, -1, 1]);
        let (profile, residual) = strip_cyclotomic_factors(&golden).unwrap();
        assert!(profile.is_empty());
        assert_eq!(residual, golden);

        let (profile, residual) = strip_cyclotomic_factors(&ip(&[-1, 1])).unwrap();
        assert_eq!(profile, vec![(1, 1)]);
        assert_eq!(residual, IntPoly::one());
    }

    #[test]
    fn strip_rejects_bad_input() {
        assert_eq!(
            strip_cyclotomic_factors(&ip(&[1, 0, 2])),
            Err(SpectralError::NotMonic)
        );
        assert!(matches!(
            strip_cyclotomic_factors(&ip(&[2, 0, 1])),
            Err(SpectralError::ConstantTermNotUnit { .. })
        ));
    }

    #[test]
    fn strip_reconstructs() {
        // (x^2 - 3x + 1) Φ_3 Φ_12 Φ_1^2
        let f = ip(&[1, -3, 1])
            .mul(&ip(&[1, 1, 1]))
            .mul(&cyclotomic_polynomial(12).unwrap())
            .mul(&ip(&[-1, 1]).pow(2));
        let (profile, residual) = strip_cyclotomic_factors(&f).unwrap();
        assert_eq!(profile, vec![(1, 2), (3, 1), (12, 1)]);
        assert_eq!(residual, ip(&[1, -3, 1]));
        assert_eq!(reconstruct(&profile, &residual), f);
        assert_eq!(lcm_of_orders(&profile), 12);
    }
}
