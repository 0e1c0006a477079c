use num_rational::BigRational;
use serde::Serialize;

use super::kolchin::{certify_unipotent_group, UnipotenceVerdict};
use super::{power_replacement, UnipotentError};
use crate::exact::IntMatrix;
use crate::report::ser_matrices;
use crate::spectral::{classify_entropy, uniform_exponent, EntropyClassification, EntropyKind, UniformExponent};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineStatus {
    /// `⟨g_i^m⟩` is unipotent.
    Certified,
    /// `⟨g_i^m⟩` is not unipotent. This does not contradict anything: the
    /// finite-index unipotent subgroup need not be generated by these powers.
    NotUnipotent,
    /// Some generator has positive entropy.
    Inapplicable { positive_entropy_generators: Vec<usize> },
}

#[derive(Clone, Debug, Serialize)]
pub struct UnipotentPipelineReport {
    pub classifications: Vec<EntropyClassification>,
    pub exponent: UniformExponent,
    /// lcm of the generators' quasi-orders, when all have zero entropy.
    pub quasi_order_lcm: Option<u64>,
    /// Exponent actually applied: `1` if every generator is unipotent,
    /// otherwise `m_lcm(r)`.
    pub m_used: Option<u64>,
    #[serde(serialize_with = "ser_matrices")]
    pub powered_generators: Vec<IntMatrix>,
    pub verdict: Option<UnipotenceVerdict>,
    pub status: PipelineStatus,
    pub statement: String,
}

impl UnipotentPipelineReport {
    pub fn is_certified(&self) -> bool {
        self.status == PipelineStatus::Certified
    }
}

/// Classify every generator, raise to the uniform exponent, certify the
/// subgroup generated by the powers.
pub fn unipotent_pipeline(
    gens: &[IntMatrix],
    rank: u64,
    width: &BigRational,
    word_budget: usize,
) -> Result<UnipotentPipelineReport, UnipotentError> {
    let exponent = uniform_exponent(rank)?;
    let classifications: Vec<EntropyClassification> = gens
        .iter()
        .map(|g| classify_entropy(g, width))
        .collect::<Result<_, _>>()?;
    let positive: Vec<usize> = classifications
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == EntropyKind::PositiveEntropy)
        .map(|(i, _)| i)
        .collect();
    if !positive.is_empty() {
        let statement = format!(
            "generators {positive:?} have positive entropy; no power of them is unipotent"
        );
        return Ok(UnipotentPipelineReport {
            classifications,
            exponent,
            quasi_order_lcm: None,
            m_used: None,
            powered_generators: Vec::new(),
            verdict: None,
            status: PipelineStatus::Inapplicable {
                positive_entropy_generators: positive,
            },
            statement,
        });
    }
    let quasi_order_lcm = classifications
        .iter()
        .filter_map(|c| c.quasi_order)
        .fold(1u64, num_integer::lcm);
    let all_unipotent = classifications.iter().all(|c| c.kind == EntropyKind::Unipotent);
    let m = if all_unipotent { 1 } else { exponent.m_lcm_u64() };
    let powered = power_replacement(gens, m)?;
    let rational: Vec<_> = powered.iter().map(IntMatrix::to_rational).collect();
    let verdict = certify_unipotent_group(&rational, word_budget)?;
    let (status, statement) = if verdict.is_certified() {
        (
            PipelineStatus::Certified,
            format!("image of the finite-index candidate subgroup generated by {m}-th powers is unipotent"),
        )
    } else {
        (
            PipelineStatus::NotUnipotent,
            format!(
                "the subgroup generated by {m}-th powers is not unipotent; it is not known to be the finite-index unipotent subgroup"
            ),
        )
    };
    Ok(UnipotentPipelineReport {
        classifications,
        exponent,
        quasi_order_lcm: Some(quasi_order_lcm),
        m_used: Some(m),
        powered_generators: powered,
        verdict: Some(verdict),
        status,
        statement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::width_from_bits;

    fn run(gens: &[IntMatrix], r: u64) -> UnipotentPipelineReport {
        unipotent_pipeline(gens, r, &width_from_bits(20), 8).unwrap()
    }

    #[test]
    fn heisenberg_uses_exponent_one() {
        let a = IntMatrix::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let b = IntMatrix::from_i64([[1, 0, 0], [0, 1, 1], [0, 0, 1]]);
        let report = run(&[a, b], 3);
        assert_eq!(report.m_used, Some(1));
        assert!(report.is_certified());
    }

    #[test]
    fn rotation_becomes_trivial() {
        let rot = IntMatrix::from_i64([[0, -1], [1, 0]]);
        let report = run(&[rot], 2);
        assert_eq!(report.m_used, Some(12));
        assert_eq!(report.powered_generators, vec![IntMatrix::identity(2)]);
        assert_eq!(report.quasi_order_lcm, Some(4));
        assert!(report.is_certified());
    }

    #[test]
    fn positive_entropy_is_inapplicable() {
        let g = IntMatrix::from_i64([[0, -1], [1, 3]]);
        let report = run(&[IntMatrix::identity(2), g], 2);
        assert_eq!(
            report.status,
            PipelineStatus::Inapplicable {
                positive_entropy_generators: vec![1]
            }
        );
        assert_eq!(report.classifications.len(), 2);
    }

    #[test]
    fn cyclotomic_block_plus_unipotent_block() {
        // Φ_3 companion ⊕ Jordan block, conjugated by a unimodular matrix
        let block = IntMatrix::block_diag(&[
            IntMatrix::from_i64([[0, -1], [1, -1]]),
            IntMatrix::from_i64([[1, 1], [0, 1]]),
        ]);
        let u = IntMatrix::from_i64([[1, 1, 0, 0], [0, 1, 2, 0], [0, 0, 1, 0], [1, 0, 0, 1]]);
        let g = &(&u.inverse_unimodular().unwrap() * &block) * &u;
        let report = run(&[g], 4);
        assert_eq!(report.classifications[0].kind, EntropyKind::QuasiUnipotent);
        assert_eq!(report.classifications[0].quasi_order, Some(3));
        assert_eq!(report.m_used, Some(120));
        assert!(report.is_certified());
    }
}
