use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use super::lie::{derived_length, lie_closure, nilpotency_class};
use super::search::{word_search_lower_bound, WordSearch, DEFAULT_SEARCH_BUDGET};
use super::{matrix_log_unipotent, SeriesError};
use crate::exact::{width_from_bits, IntMatrix};
use crate::unipotent::{certify_unipotent_group, power_replacement, unipotent_pipeline, DEFAULT_WORD_BUDGET};

#[derive(Clone, Debug)]
pub struct SeriesOptions {
    /// Cost budget of the commutator search; `None` skips it.
    pub search_budget: Option<usize>,
    /// Word length for non-unipotence witnesses.
    pub witness_budget: usize,
    pub width: BigRational,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            search_budget: Some(DEFAULT_SEARCH_BUDGET),
            witness_budget: DEFAULT_WORD_BUDGET,
            width: width_from_bits(32),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub derived_length: usize,
    pub nilpotency_class: usize,
    pub derived_dims: Vec<usize>,
    pub lcs_dims: Vec<usize>,
    pub word_search: Option<WordSearch>,
}

impl SeriesReport {
    fn trivial() -> Self {
        Self {
            derived_length: 0,
            nilpotency_class: 0,
            derived_dims: vec![0],
            lcs_dims: vec![0],
            word_search: None,
        }
    }

    pub fn word_search_lower_bound(&self) -> Option<usize> {
        self.word_search.as_ref().map(|s| s.lower_bound)
    }
}

/// Derived length and nilpotency class of a unipotent group, computed on the
/// Lie algebra generated by the logarithms of the generators.
pub fn group_series_report(gens: &[IntMatrix], options: &SeriesOptions) -> Result<SeriesReport, SeriesError> {
    let Some(first) = gens.first() else {
        return Ok(SeriesReport::trivial());
    };
    let dim = first.dim();
    let rational: Vec<_> = gens.iter().map(IntMatrix::to_rational).collect();
    if !certify_unipotent_group(&rational, options.witness_budget)?.is_certified() {
        return Err(SeriesError::GroupNotUnipotent);
    }
    let logs = rational
        .iter()
        .map(matrix_log_unipotent)
        .collect::<Result<Vec<_>, _>>()?;
    let algebra = lie_closure(dim, &logs)?;
    let (ell, derived_dims) = derived_length(&algebra);
    let (class, lcs_dims) = nilpotency_class(&algebra);
    let word_search = match options.search_budget {
        Some(budget) => {
            let search = word_search_lower_bound(gens, budget)?;
            if search.lower_bound > ell {
                return Err(SeriesError::WordSearchExceeded {
                    bound: search.lower_bound,
                    ell,
                });
            }
            Some(search)
        }
        None => None,
    };
    Ok(SeriesReport {
        derived_length: ell,
        nilpotency_class: class,
        derived_dims,
        lcs_dims,
        word_search,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RobinsonVerdict {
    pub derived_length: usize,
    pub nilpotency_class: usize,
    /// `2^{ℓ−1} ≤ 𝔠`, i.e. `ℓ ≤ log₂ 𝔠 + 1`.
    pub holds: bool,
}

/// `ℓ ≤ log₂ 𝔠 + 1`, evaluated as `2^{ℓ−1} ≤ 𝔠`. The trivial group
/// (`ℓ = 𝔠 = 0`) satisfies it.
pub fn robinson_check(ell: usize, class: usize) -> Result<RobinsonVerdict, SeriesError> {
    if class == 0 && ell > 0 {
        return Err(SeriesError::DegenerateClass { ell });
    }
    let holds = ell == 0 || (ell - 1 < usize::BITS as usize && (1usize << (ell - 1)) <= class);
    Ok(RobinsonVerdict {
        derived_length: ell,
        nilpotency_class: class,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLength {
    pub k: usize,
    pub derived_length: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EssentialLengthReport {
    pub n: usize,
    pub m_used: u64,
    pub ell_ess: usize,
    pub series: SeriesReport,
    /// Derived lengths of the powered images in supplied degrees `1 < k < n`.
    pub degree_lengths: Vec<DegreeLength>,
    pub degrees_agree: bool,
    /// `ℓ_ess ≤ n − 1`.
    pub bound_holds: bool,
    pub robinson: RobinsonVerdict,
}

/// Derived length of the unipotent image obtained from the pipeline, with
/// the bound `ℓ_ess ≤ n − 1` and, when gradings are given, the lengths in
/// the other degrees.
pub fn essential_length(
    gens: &[IntMatrix],
    n: usize,
    rank: u64,
    gradings: &BTreeMap<usize, Vec<IntMatrix>>,
    options: &SeriesOptions,
) -> Result<EssentialLengthReport, SeriesError> {
    if n == 0 {
        return Err(SeriesError::Pipeline("ambient dimension must be positive".into()));
    }
    let pipeline = unipotent_pipeline(gens, rank, &options.width, options.witness_budget)?;
    if !pipeline.is_certified() {
        return Err(SeriesError::Pipeline(pipeline.statement));
    }
    let m = pipeline.m_used.expect("certified pipeline records its exponent");
    let series = group_series_report(&pipeline.powered_generators, options)?;
    let ell = series.derived_length;

    let mut degree_lengths = Vec::new();
    let lie_only = SeriesOptions {
        search_budget: None,
        ..options.clone()
    };
    for (&k, mats) in gradings.range(2..n) {
        if mats.len() != gens.len() {
            return Err(SeriesError::GradingMismatch {
                k,
                reason: format!("{} matrices for {} generators", mats.len(), gens.len()),
            });
        }
        let powered = power_replacement(mats, m)?;
        let report = group_series_report(&powered, &lie_only).map_err(|e| SeriesError::GradingMismatch {
            k,
            reason: e.to_string(),
        })?;
        degree_lengths.push(DegreeLength {
            k,
            derived_length: report.derived_length,
        });
    }
    let degrees_agree = degree_lengths.iter().all(|d| d.derived_length == ell);
    let robinson = robinson_check(ell, series.nilpotency_class)?;
    Ok(EssentialLengthReport {
        n,
        m_used: m,
        ell_ess: ell,
        bound_holds: ell < n,
        series,
        degree_lengths,
        degrees_agree,
        robinson,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub ell_image: usize,
    /// `ℓ(image) + 1`, which also bounds the derived length of any extension
    /// of the image by an abelian kernel.
    pub chain_value: usize,
    pub n: usize,
    pub holds: bool,
    pub note: &'static str,
}

/// `ℓ(image) + 1 ≤ n` for a group that is an extension of the unipotent
/// image by an abelian kernel.
pub fn corollary_chain_check(ell_image: usize, n: usize, kernel_abelian: bool) -> Result<ChainReport, SeriesError> {
    if !kernel_abelian {
        return Err(SeriesError::NonAbelianKernel);
    }
    Ok(ChainReport {
        ell_image,
        chain_value: ell_image + 1,
        n,
        holds: ell_image < n,
        note: "finite-index subgroups of a unipotent group share its derived length, so the image length stands in for the minimum over finite-index subgroups",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg() -> Vec<IntMatrix> {
        vec![
            IntMatrix::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
            IntMatrix::from_i64([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
        ]
    }

    fn upper(n: usize) -> Vec<IntMatrix> {
        (0..n - 1)
            .map(|i| &IntMatrix::identity(n) + &IntMatrix::unit(n, i, i + 1))
            .collect()
    }

    #[test]
    fn series_examples() {
        let opts = SeriesOptions::default();
        let abelian = vec![
            IntMatrix::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
            IntMatrix::from_i64([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
        ];
        let r = group_series_report(&abelian, &opts).unwrap();
        assert_eq!((r.derived_length, r.nilpotency_class), (1, 1));
        let r = group_series_report(&heisenberg(), &opts).unwrap();
        assert_eq!((r.derived_length, r.nilpotency_class), (2, 2));
        assert_eq!(r.word_search_lower_bound(), Some(2));
        let r = group_series_report(&upper(5), &opts).unwrap();
        assert_eq!((r.derived_length, r.nilpotency_class), (3, 4));
        assert_eq!(r.word_search_lower_bound(), Some(3));
        let r = group_series_report(&[], &opts).unwrap();
        assert_eq!((r.derived_length, r.nilpotency_class), (0, 0));
    }

    #[test]
    fn non_unipotent_group_rejected() {
        let gens = vec![
            IntMatrix::from_i64([[1, 1], [0, 1]]),
            IntMatrix::from_i64([[1, 0], [1, 1]]),
        ];
        assert_eq!(
            group_series_report(&gens, &SeriesOptions::default()),
            Err(SeriesError::GroupNotUnipotent)
        );
    }

    #[test]
    fn robinson_examples() {
        assert!(robinson_check(1, 1).unwrap().holds);
        assert!(robinson_check(2, 2).unwrap().holds);
        assert!(!robinson_check(4, 4).unwrap().holds);
        assert!(robinson_check(0, 0).unwrap().holds);
        assert!(robinson_check(1, 0).is_err());
    }

    #[test]
    fn essential_length_examples() {
        let opts = SeriesOptions::default();
        let none = BTreeMap::new();
        let heis = essential_length(&heisenberg(), 3, 3, &none, &opts).unwrap();
        assert_eq!(heis.ell_ess, 2);
        assert!(heis.bound_holds);
        let abelian = vec![IntMatrix::from_i64([[1, 1], [0, 1]])];
        let ab = essential_length(&abelian, 2, 2, &none, &opts).unwrap();
        assert_eq!(ab.ell_ess, 1);
        assert!(ab.bound_holds);
        let trivial = essential_length(&[IntMatrix::identity(2)], 1, 2, &none, &opts).unwrap();
        assert_eq!(trivial.ell_ess, 0);
        assert!(trivial.bound_holds);
        let too_small = essential_length(&heisenberg(), 2, 3, &none, &opts).unwrap();
        assert!(!too_small.bound_holds);
    }

    #[test]
    fn graded_heisenberg_degrees_agree() {
        let gens = heisenberg();
        let mut gradings = BTreeMap::new();
        gradings.insert(2, gens.iter().map(|g| g.exterior_power(2).unwrap()).collect());
        let report = essential_length(&gens, 3, 3, &gradings, &SeriesOptions::default()).unwrap();
        assert_eq!(report.degree_lengths, vec![DegreeLength { k: 2, derived_length: 2 }]);
        assert!(report.degrees_agree);
    }

    #[test]
    fn chain_examples() {
        assert_eq!(corollary_chain_check(2, 3, true).unwrap().chain_value, 3);
        assert!(corollary_chain_check(2, 3, true).unwrap().holds);
        assert!(corollary_chain_check(0, 1, true).unwrap().holds);
        assert!(corollary_chain_check(1, 2, true).unwrap().holds);
        assert_eq!(corollary_chain_check(1, 2, false), Err(SeriesError::NonAbelianKernel));
    }
}
