use std::collections::{HashSet, VecDeque};

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::dynamics::{interior_fixed_vector, power_bounded_exact, preserves_cone, FixedVector};
use super::polyhedral::PolyhedralCone;
use super::ConeError;
use crate::exact::{width_from_bits, IntMatrix};
use crate::report::ser_opt_rat_vec;
use crate::spectral::{classify_entropy, uniform_exponent};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct FlOptions {
    pub group_cap: usize,
    pub width: BigRational,
}

impl Default for FlOptions {
    fn default() -> Self {
        Self {
            group_cap: DEFAULT_GROUP_CAP,
            width: width_from_bits(32),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlStep {
    pub passed: bool,
    pub reason: String,
}

impl FlStep {
    fn pass(reason: impl Into<String>) -> Self {
        Self {
            passed: true,
            reason: reason.into(),
        }
    }

    fn fail(reason: impl Into<String>) -> Self {
        Self {
            passed: false,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSteps {
    pub generator: usize,
    pub preserves_cone: FlStep,
    /// `g B = B` with `B` interior to the cone.
    pub fixed_big_class: FlStep,
    /// `g^i` bounded over all integers `i`.
    pub power_bounded: FlStep,
    /// Interior fixed vector of `g^{-T}` in the dual cone.
    pub dual_fixed: FlStep,
    #[serde(serialize_with = "ser_opt_rat_vec")]
    pub dual_fixed_vector: Option<Vec<BigRational>>,
    /// `g^m = I` for `m = m_lcm(r)`.
    pub finite_order: FlStep,
    pub quasi_order: Option<u64>,
}

impl GeneratorSteps {
    pub fn passed(&self) -> bool {
        [
            &self.preserves_cone,
            &self.fixed_big_class,
            &self.power_bounded,
            &self.dual_fixed,
            &self.finite_order,
        ]
        .iter()
        .all(|s| s.passed)
    }

    /// First failing step, named as in the report.
    pub fn first_failure(&self) -> Option<(&'static str, &FlStep)> {
        [
            ("preserves_cone", &self.preserves_cone),
            ("fixed_big_class", &self.fixed_big_class),
            ("power_bounded", &self.power_bounded),
            ("dual_fixed", &self.dual_fixed),
            ("finite_order", &self.finite_order),
        ]
        .into_iter()
        .find(|(_, s)| !s.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlReport {
    pub rank: usize,
    pub m_lcm: u64,
    pub generators: Vec<GeneratorSteps>,
    pub group_cap: usize,
    pub image_order: Option<usize>,
    pub closure: FlStep,
    pub success: bool,
    pub conclusion: String,
}

pub const FL_CONCLUSION: &str =
    "kernel acts trivially on the lattice; virtually-in-Aut0 conclusion holds at the lattice level";

fn generator_steps(
    index: usize,
    g: &IntMatrix,
    class: &[BigRational],
    cone: &PolyhedralCone,
    dual: &PolyhedralCone,
    m: u64,
    width: &BigRational,
) -> Result<GeneratorSteps, ConeError> {
    let rat = g.to_rational();
    let preserves = if preserves_cone(&rat, cone)? {
        FlStep::pass("g and g^-1 map every extreme ray into the cone")
    } else {
        FlStep::fail("some extreme ray leaves the cone under g or g^-1")
    };

    let fixed_big_class = if class.len() != cone.dim {
        FlStep::fail(format!("class has length {}, expected {}", class.len(), cone.dim))
    } else if rat.mul_vec(class) != class {
        FlStep::fail("g B differs from B")
    } else if !cone.contains_interior(class) {
        FlStep::fail("B is fixed but lies on the boundary of the cone")
    } else {
        FlStep::pass("g B = B with B interior")
    };

    let bounded = power_bounded_exact(&rat, &BigRational::one())?;
    let power_bounded = match (bounded.diagonalizable, bounded.eigen_moduli_all_q) {
        (true, true) => FlStep::pass("diagonalizable with every eigenvalue of modulus 1"),
        (false, true) => FlStep::fail("minimal polynomial has a repeated root, so g^i grows polynomially"),
        (true, false) => FlStep::fail("an eigenvalue has modulus different from 1, so g^i grows exponentially"),
        (false, false) => FlStep::fail("not diagonalizable and an eigenvalue has modulus different from 1"),
    };

    let nef_action = rat.inverse().map_err(|_| ConeError::Singular)?.transpose();
    let dual_vector = interior_fixed_vector(&nef_action, &BigRational::one(), dual)?;
    let dual_fixed = match &dual_vector {
        FixedVector::Found { .. } => FlStep::pass("g^-T fixes an interior point of the dual cone"),
        FixedVector::NoEigenvector => FlStep::fail("g^-T has no eigenvalue 1"),
        FixedVector::Infeasible { .. } => {
            FlStep::fail("every fixed vector of g^-T lies outside the dual interior (Farkas certificate)")
        }
    };

    let finite_order = if g.pow(m).is_identity() {
        FlStep::pass(format!("g^{m} = I"))
    } else {
        FlStep::fail(format!("g^{m} differs from I"))
    };
    let quasi_order = classify_entropy(g, width).ok().and_then(|c| c.quasi_order);

    Ok(GeneratorSteps {
        generator: index,
        preserves_cone: preserves,
        fixed_big_class,
        power_bounded,
        dual_fixed,
        dual_fixed_vector: dual_vector.vector().map(<[_]>::to_vec),
        finite_order,
        quasi_order,
    })
}

/// Order of the group generated by `gens`, or `None` past `cap` elements.
pub fn group_closure_order(gens: &[IntMatrix], cap: usize) -> Option<usize> {
    let Some(first) = gens.first() else {
        return Some(1);
    };
    let identity = IntMatrix::identity(first.dim());
    let mut seen: HashSet<IntMatrix> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.len())
}

/// Lattice-level finiteness of a group preserving a cone and fixing a big
/// class per generator. Each per-generator step is evaluated independently;
/// the closure runs only once all of them pass.
pub fn fujiki_lieberman_check(
    gens: &[IntMatrix],
    cone: &PolyhedralCone,
    fixed_classes: &[Vec<BigRational>],
    options: &FlOptions,
) -> Result<FlReport, ConeError> {
    if fixed_classes.len() != gens.len() {
        return Err(ConeError::ClassCount {
            expected: gens.len(),
            got: fixed_classes.len(),
        });
    }
    for (index, g) in gens.iter().enumerate() {
        if g.dim() != cone.dim {
            return Err(ConeError::DimensionMismatch {
                map: g.dim(),
                cone: cone.dim,
            });
        }
        if !g.is_unimodular() {
            return Err(ConeError::NotUnimodular {
                index,
                det: g.det().to_string(),
            });
        }
    }
    let rank = cone.dim;
    let m = uniform_exponent(rank as u64)
        .expect("rank is positive")
        .m_lcm_u64();
    let dual = cone.dual();
    let generators = gens
        .iter()
        .zip(fixed_classes)
        .enumerate()
        .map(|(i, (g, b))| generator_steps(i, g, b, cone, &dual, m, &options.width))
        .collect::<Result<Vec<_>, _>>()?;

    let (image_order, closure) = match generators.iter().find_map(|s| s.first_failure().map(|f| (s.generator, f))) {
        Some((index, (name, step))) => (
            None,
            FlStep::fail(format!("skipped: generator {index} failed {name}: {}", step.reason)),
        ),
        None => match group_closure_order(gens, options.group_cap) {
            Some(order) => (Some(order), FlStep::pass(format!("image has order {order}"))),
            None => (
                None,
                FlStep::fail(format!("image not certified finite within cap {}", options.group_cap)),
            ),
        },
    };
    let success = closure.passed;
    Ok(FlReport {
        rank,
        m_lcm: m,
        generators,
        group_cap: options.group_cap,
        image_order,
        closure,
        success,
        conclusion: if success {
            FL_CONCLUSION.to_string()
        } else {
            "not established".to_string()
        },
    })
}
