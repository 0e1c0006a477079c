//! Seeded random cone maps for exercising the boundedness equivalence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dynamics::{meng_zhang_report, ConeMapAnalysis};
use super::polyhedral::PolyhedralCone;
use super::ConeError;
use crate::exact::{IntMatrix, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    /// Ray permutation of a simplicial cone.
    Permutation,
    /// `c` times a ray permutation, analysed at `q = c` or at another `q`.
    ScaledPermutation,
    /// Ray permutation composed with positive ray scalings.
    RayScaling,
    /// Signed permutation of the base of a cone over a cube or a
    /// cross-polytope.
    FiniteOrderConjugate,
    /// `I + t E_ij`, which preserves no salient full-dimensional
    /// polyhedral cone.
    Shear,
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub kind: InstanceKind,
    pub rays: Vec<Vec<BigRational>>,
    pub map: RatMatrix,
    pub q: BigRational,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Product of random elementary matrices and a random signed permutation.
pub fn random_unimodular(rng: &mut impl Rng, dim: usize) -> IntMatrix {
    let mut m = signed_permutation(rng, dim, true);
    for _ in 0..2 * dim {
        let i = rng.gen_range(0..dim);
        let j = rng.gen_range(0..dim);
        if i != j {
            let t = rng.gen_range(-2i64..=2);
            let e = &IntMatrix::identity(dim) + &IntMatrix::unit(dim, i, j).scale(&BigInt::from(t));
            m = &m * &e;
        }
    }
    m
}

fn signed_permutation(rng: &mut impl Rng, dim: usize, signs: bool) -> IntMatrix {
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let sign: Vec<i64> = (0..dim)
        .map(|_| if signs && rng.gen_bool(0.5) { -1 } else { 1 })
        .collect();
    IntMatrix::from_fn(dim, |i, j| {
        if perm[j] == i {
            BigInt::from(sign[j])
        } else {
            BigInt::zero()
        }
    })
}

fn conjugate(u: &IntMatrix, f: &RatMatrix) -> RatMatrix {
    let u_inv = u.inverse_unimodular().expect("unimodular").to_rational();
    &(&u.to_rational() * f) * &u_inv
}

fn columns(u: &IntMatrix) -> Vec<Vec<BigRational>> {
    let r = u.to_rational();
    (0..u.dim()).map(|j| r.column(j)).collect()
}

fn random_positive(rng: &mut impl Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(1i64..=4)), BigInt::from(rng.gen_range(1i64..=4)))
}

/// One instance in dimension `dim` (2 to 5).
pub fn random_instance(rng: &mut impl Rng, dim: usize) -> RandomInstance {
    let kind = match rng.gen_range(0..5) {
        0 => InstanceKind::Permutation,
        1 => InstanceKind::ScaledPermutation,
        2 => InstanceKind::RayScaling,
        3 => InstanceKind::FiniteOrderConjugate,
        _ => InstanceKind::Shear,
    };
    let u = random_unimodular(rng, dim);
    let rays = columns(&u);
    let perm = signed_permutation(rng, dim, false).to_rational();
    match kind {
        InstanceKind::Permutation => RandomInstance {
            kind,
            rays,
            map: conjugate(&u, &perm),
            q: BigRational::one(),
        },
        InstanceKind::ScaledPermutation => {
            let c = random_positive(rng);
            let q = if rng.gen_bool(0.5) { c.clone() } else { random_positive(rng) };
            RandomInstance {
                kind,
                rays,
                map: conjugate(&u, &perm.scale(&c)),
                q,
            }
        }
        InstanceKind::RayScaling => {
            let scales: Vec<BigRational> = (0..dim).map(|_| random_positive(rng)).collect();
            let d = RatMatrix::from_fn(dim, |i, j| if i == j { scales[i].clone() } else { BigRational::zero() });
            RandomInstance {
                kind,
                rays,
                map: conjugate(&u, &(&d * &perm)),
                q: BigRational::one(),
            }
        }
        InstanceKind::FiniteOrderConjugate => {
            // cone over a cube (rays (±1,…,±1,1)) or a cross-polytope
            // (rays (±e_i, 1)) in the first dim−1 coordinates
            let base = dim - 1;
            let cube = base <= 3 && rng.gen_bool(0.5);
            let mut base_rays: Vec<Vec<BigRational>> = Vec::new();
            if cube {
                for mask in 0..1usize << base {
                    let mut r: Vec<BigRational> = (0..base).map(|i| int(if mask >> i & 1 == 1 { -1 } else { 1 })).collect();
                    r.push(int(1));
                    base_rays.push(r);
                }
            } else {
                for i in 0..base {
                    for s in [1, -1] {
                        let mut r = vec![int(0); dim];
                        r[i] = int(s);
                        r[base] = int(1);
                        base_rays.push(r);
                    }
                }
            }
            let s = signed_permutation(rng, base, true);
            let symmetry = IntMatrix::block_diag(&[s, IntMatrix::identity(1)]).to_rational();
            let ur = u.to_rational();
            RandomInstance {
                kind,
                rays: base_rays.iter().map(|r| ur.mul_vec(r)).collect(),
                map: conjugate(&u, &symmetry),
                q: BigRational::one(),
            }
        }
        InstanceKind::Shear => {
            let i = rng.gen_range(0..dim);
            let j = (i + rng.gen_range(1..dim)) % dim;
            let shear = &RatMatrix::identity(dim) + &RatMatrix::unit(dim, i, j);
            RandomInstance {
                kind,
                rays,
                map: conjugate(&u, &shear),
                q: BigRational::one(),
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum InstanceOutcome {
    Analyzed(Box<ConeMapAnalysis>),
    /// The map does not preserve the cone, so the equivalence does not
    /// apply.
    NotPreserved,
}

impl RandomInstance {
    pub fn cone(&self) -> PolyhedralCone {
        PolyhedralCone::from_rays(&self.rays).expect("generated cones are salient and full-dimensional")
    }

    pub fn analyze(&self, sample_range: u32) -> InstanceOutcome {
        match meng_zhang_report(&self.map, &self.q, &self.cone(), sample_range) {
            Ok(a) => InstanceOutcome::Analyzed(Box::new(a)),
            Err(ConeError::NotPreserved) => InstanceOutcome::NotPreserved,
            Err(e) => panic!("generated instance rejected: {e}"),
        }
    }
}

/// `count` instances with dimensions drawn from 2 to 5.
pub fn random_family(seed: u64, count: usize) -> Vec<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dim = rng.gen_range(2..=5);
            random_instance(&mut rng, dim)
        })
        .collect()
}
