use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::cyclotomic::{lcm_of_orders, strip_cyclotomic_factors, uniform_exponent, CyclotomicProfile};
use super::radius::spectral_radius_of_poly;
use super::SpectralError;
use crate::exact::{char_poly, IntMatrix, IntPoly, RealInterval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EntropyKind {
    Unipotent,
    QuasiUnipotent,
    PositiveEntropy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntropyClassification {
    pub kind: EntropyKind,
    /// Least `q` with `g^q` unipotent; absent for positive entropy.
    pub quasi_order: Option<u64>,
    /// Enclosure of the spectral radius; present only for positive entropy.
    pub spectral_radius: Option<RealInterval>,
    pub cyclotomic_profile: CyclotomicProfile,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub residual: IntPoly,
}

/// Classifies a unimodular matrix by stripping cyclotomic factors from its
/// characteristic polynomial.
///
/// For zero entropy the identity `(g^q − I)^dim = 0` is checked exactly
/// before returning; a failure there would mean the factorization is wrong,
/// so it panics.
pub fn classify_entropy(g: &IntMatrix, width: &BigRational) -> Result<EntropyClassification, SpectralError> {
    if !g.is_unimodular() {
        return Err(SpectralError::NotUnimodular { det: g.det() });
    }
    let f = char_poly(g);
    let (profile, residual) = strip_cyclotomic_factors(&f)?;
    if residual.is_constant() {
        let dim = g.dim() as u32;
        let kind = if profile == vec![(1, dim)] {
            EntropyKind::Unipotent
        } else {
            EntropyKind::QuasiUnipotent
        };
        let q = lcm_of_orders(&profile);
        assert!(
            power_minus_identity_nilpotent(g, &BigUint::from(q)),
            "cyclotomic profile of {g} disagrees with (g^{q} - I)^{dim} = 0"
        );
        Ok(EntropyClassification {
            kind,
            quasi_order: Some(q),
            spectral_radius: None,
            cyclotomic_profile: profile,
            residual,
        })
    } else {
        let rho = spectral_radius_of_poly(&residual, width)?;
        Ok(EntropyClassification {
            kind: EntropyKind::PositiveEntropy,
            quasi_order: None,
            spectral_radius: Some(rho),
            cyclotomic_profile: profile,
            residual,
        })
    }
}

/// Spectral radius of a unimodular matrix: exactly 1 when every eigenvalue
/// is a root of unity, otherwise an enclosure from the residual factor.
pub fn spectral_radius(g: &IntMatrix, width: &BigRational) -> Result<RealInterval, SpectralError> {
    if !g.is_unimodular() {
        return Err(SpectralError::NotUnimodular { det: g.det() });
    }
    let (_, residual) = strip_cyclotomic_factors(&char_poly(g))?;
    if residual.is_constant() {
        Ok(RealInterval::one())
    } else {
        spectral_radius_of_poly(&residual, width)
    }
}

/// Zero entropy via the uniform exponent alone: `(g^m − I)^dim = 0` with
/// `m = m_lcm(dim)`. Shares no code with the cyclotomic route beyond the
/// exponent itself.
pub fn uniform_power_certificate(g: &IntMatrix) -> Result<bool, SpectralError> {
    if !g.is_unimodular() {
        return Err(SpectralError::NotUnimodular { det: g.det() });
    }
    let m = uniform_exponent(g.dim() as u64)?.m_lcm;
    Ok(power_minus_identity_nilpotent(g, &m))
}

const PRIME: u64 = (1 << 61) - 1;

fn reduce(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(PRIME)).to_u64().expect("residue below prime")
}

fn mod_mul(a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k] as u128;
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let acc = out[i * n + j] as u128 + aik * b[k * n + j] as u128;
                out[i * n + j] = (acc % PRIME as u128) as u64;
            }
        }
    }
    out
}

fn mod_pow(a: &[u64], n: usize, exponent: &BigUint) -> Vec<u64> {
    let mut result: Vec<u64> = (0..n * n).map(|i| u64::from(i / n == i % n)).collect();
    for bit in (0..exponent.bits()).rev() {
        result = mod_mul(&result, &result, n);
        if exponent.bit(bit) {
            result = mod_mul(&result, a, n);
        }
    }
    result
}

/// Decides `(g^m − I)^dim = 0`. A nonzero residue modulo a 61-bit prime
/// proves the matrix nonzero; otherwise the exact computation decides.
fn power_minus_identity_nilpotent(g: &IntMatrix, m: &BigUint) -> bool {
    let n = g.dim();
    let residues: Vec<u64> = g.entries().iter().map(reduce).collect();
    let mut shifted = mod_pow(&residues, n, m);
    for i in 0..n {
        shifted[i * n + i] = (shifted[i * n + i] + PRIME - 1) % PRIME;
    }
    if mod_pow(&shifted, n, &BigUint::from(n)).iter().any(|&x| x != 0) {
        return false;
    }
    let nil = &g.pow_big(m) - &IntMatrix::identity(n);
    nil.pow(n as u64).entries().iter().all(Zero::is_zero)
}
