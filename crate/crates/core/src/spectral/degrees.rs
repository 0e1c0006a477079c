//! Graded actions and dynamical degrees.
//!
//! Without user data the action in degree `k` is modeled by the compound
//! matrix `Λ^k g`. Degree `0` is the trivial action and, for `n ≥ 2`, degree
//! `n` is the `1×1` matrix `[det g]`. When `n = 1`, degree `1` is also the top
//! degree and carries the generators themselves.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::BigRational;
use serde::Serialize;

use super::entropy::{classify_entropy, spectral_radius, EntropyKind};
use super::SpectralError;
use crate::exact::{IntMatrix, RealInterval, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRepresentation {
    n: usize,
    /// `degrees[k][i]` is the degree-`k` matrix of generator `i`.
    degrees: Vec<Vec<IntMatrix>>,
}

fn model_degree(g: &IntMatrix, k: usize, n: usize) -> Result<IntMatrix, SpectralError> {
    if k == 0 {
        return Ok(IntMatrix::identity(1));
    }
    if k == n && n >= 2 {
        return Ok(IntMatrix::from_fn(1, |_, _| g.det()));
    }
    if k > g.dim() {
        return Err(SpectralError::InconsistentGrading(format!(
            "degree {k} has no exterior-power model on rank {}",
            g.dim()
        )));
    }
    Ok(g.exterior_power(k)?)
}

impl GradedRepresentation {
    /// The `Λ^k` model in every degree.
    pub fn exterior_model(gens: &[IntMatrix], n: usize) -> Result<Self, SpectralError> {
        Self::with_gradings(gens, n, &BTreeMap::new())
    }

    /// `supplied` overrides the model degree by degree. Degree `1` must equal
    /// the generators, every degree must have one unimodular matrix per
    /// generator, and all matrices in one degree must share a size.
    pub fn with_gradings(
        gens: &[IntMatrix],
        n: usize,
        supplied: &BTreeMap<usize, Vec<IntMatrix>>,
    ) -> Result<Self, SpectralError> {
        if n == 0 {
            return Err(SpectralError::NonPositive { what: "n" });
        }
        for g in gens {
            if !g.is_unimodular() {
                return Err(SpectralError::NotUnimodular { det: g.det() });
            }
        }
        let mut degrees = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let level = match supplied.get(&k) {
                Some(mats) => {
                    validate_supplied(k, gens, mats)?;
                    mats.clone()
                }
                None if k == 1 => gens.to_vec(),
                None => gens
                    .iter()
                    .map(|g| model_degree(g, k, n))
                    .collect::<Result<_, _>>()?,
            };
            degrees.push(level);
        }
        if let Some(&k) = supplied.keys().find(|&&k| k > n) {
            return Err(SpectralError::InconsistentGrading(format!(
                "degree {k} exceeds n = {n}"
            )));
        }
        Ok(Self { n, degrees })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generator_count(&self) -> usize {
        self.degrees[0].len()
    }

    pub fn degree(&self, k: usize) -> &[IntMatrix] {
        &self.degrees[k]
    }

    /// Spot check that each degree is a homomorphic image of degree 1: over
    /// all words of length at most `max_len` in the generators and their
    /// inverses, words with equal degree-1 matrices must have equal
    /// degree-`k` matrices. Returns the number of products formed.
    pub fn check_homomorphy(&self, max_len: usize) -> Result<usize, SpectralError> {
        let count = self.generator_count();
        let mut letters: Vec<Vec<IntMatrix>> = Vec::with_capacity(2 * count);
        for i in 0..count {
            letters.push(self.degrees.iter().map(|d| d[i].clone()).collect());
            letters.push(
                self.degrees
                    .iter()
                    .map(|d| d[i].inverse_unimodular())
                    .collect::<Result<_, _>>()?,
            );
        }
        let identity: Vec<IntMatrix> = self
            .degrees
            .iter()
            .map(|d| IntMatrix::identity(d.first().map_or(1, IntMatrix::dim)))
            .collect();
        let mut seen: HashMap<IntMatrix, Vec<IntMatrix>> = HashMap::new();
        seen.insert(identity[1].clone(), identity.clone());
        let mut queue = VecDeque::from([(identity, 0usize)]);
        let mut checked = 0;
        while let Some((word, len)) = queue.pop_front() {
            if len == max_len {
                continue;
            }
            for letter in &letters {
                let next: Vec<IntMatrix> = word.iter().zip(letter).map(|(a, b)| a * b).collect();
                checked += 1;
                match seen.get(&next[1]) {
                    Some(prev) if prev != &next => {
                        let k = (0..next.len()).find(|&k| prev[k] != next[k]).unwrap_or(0);
                        return Err(SpectralError::HomomorphyViolation(format!(
                            "two words with equal degree-1 image differ in degree {k}"
                        )));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(next[1].clone(), next.clone());
                        queue.push_back((next, len + 1));
                    }
                }
            }
        }
        Ok(checked)
    }
}

fn validate_supplied(k: usize, gens: &[IntMatrix], mats: &[IntMatrix]) -> Result<(), SpectralError> {
    if mats.len() != gens.len() {
        return Err(SpectralError::InconsistentGrading(format!(
            "degree {k} lists {} matrices for {} generators",
            mats.len(),
            gens.len()
        )));
    }
    if k == 1 && mats != gens {
        return Err(SpectralError::InconsistentGrading(
            "degree 1 must equal the generators".into(),
        ));
    }
    if let Some(first) = mats.first() {
        if let Some(bad) = mats.iter().find(|m| m.dim() != first.dim()) {
            return Err(SpectralError::InconsistentGrading(format!(
                "degree {k} mixes sizes {} and {}",
                first.dim(),
                bad.dim()
            )));
        }
    }
    if k == 0 && mats.iter().any(|m| m.dim() != 1) {
        return Err(SpectralError::InconsistentGrading("degree 0 must be 1x1".into()));
    }
    for m in mats {
        if !m.is_unimodular() {
            return Err(SpectralError::InconsistentGrading(format!(
                "degree {k} matrix has determinant {}",
                m.det()
            )));
        }
    }
    Ok(())
}

/// `d_0, …, d_n` for one generator: spectral radii of its graded matrices.
pub fn dynamical_degrees(
    rep: &GradedRepresentation,
    generator: usize,
    width: &BigRational,
) -> Result<Vec<RealInterval>, SpectralError> {
    rep.degrees
        .iter()
        .map(|level| spectral_radius(&level[generator], width))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCheck {
    pub generator: usize,
    pub zero_entropy: bool,
    pub degrees: Vec<RealInterval>,
    /// `(k, d_k ≤ d_1^k)` for `2 ≤ k ≤ n`.
    pub power_bounds: Vec<(usize, Verdict)>,
    /// `(k, d_k² ≥ d_{k−1} d_{k+1})` for `1 ≤ k ≤ n − 1`.
    pub log_concavity: Vec<(usize, Verdict)>,
    /// `(k, d_k ≤ 1)`, only for zero-entropy generators.
    pub unit_bounds: Vec<(usize, Verdict)>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub n: usize,
    pub generators: Vec<DegreeCheck>,
    pub verdict: Verdict,
}

pub fn check_degree_inequalities(
    rep: &GradedRepresentation,
    width: &BigRational,
) -> Result<DegreeReport, SpectralError> {
    let n = rep.n;
    let mut generators = Vec::new();
    for gen in 0..rep.generator_count() {
        let d = dynamical_degrees(rep, gen, width)?;
        let zero_entropy =
            classify_entropy(&rep.degrees[1][gen], width)?.kind != EntropyKind::PositiveEntropy;
        let power_bounds: Vec<(usize, Verdict)> = (2..=n)
            .map(|k| (k, d[k].le(&d[1].pow_nonneg(k as u32))))
            .collect();
        let log_concavity: Vec<(usize, Verdict)> = (1..n)
            .map(|k| (k, d[k].mul_nonneg(&d[k]).ge(&d[k - 1].mul_nonneg(&d[k + 1]))))
            .collect();
        let unit_bounds: Vec<(usize, Verdict)> = if zero_entropy {
            (0..=n).map(|k| (k, d[k].le(&RealInterval::one()))).collect()
        } else {
            Vec::new()
        };
        let verdict = power_bounds
            .iter()
            .chain(&log_concavity)
            .chain(&unit_bounds)
            .fold(Verdict::Holds, |acc, (_, v)| acc.and(*v));
        generators.push(DegreeCheck {
            generator: gen,
            zero_entropy,
            degrees: d,
            power_bounds,
            log_concavity,
            unit_bounds,
            verdict,
        });
    }
    let verdict = generators
        .iter()
        .fold(Verdict::Holds, |acc, c| acc.and(c.verdict));
    Ok(DegreeReport {
        n,
        generators,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rational, width_from_bits};

    fn w() -> BigRational {
        width_from_bits(24)
    }

    #[test]
    fn identity_degrees_are_one() {
        let rep = GradedRepresentation::exterior_model(&[IntMatrix::identity(3)], 3).unwrap();
        let d = dynamical_degrees(&rep, 0, &w()).unwrap();
        assert_eq!(d, vec![RealInterval::one(); 4]);
        let report = check_degree_inequalities(&rep, &w()).unwrap();
        assert_eq!(report.verdict, Verdict::Holds);
    }

    #[test]
    fn non_unimodular_generator_rejected() {
        let g = IntMatrix::from_i64([[2, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(GradedRepresentation::exterior_model(&[g], 2).is_err());
    }

    #[test]
    fn golden_companion_degrees() {
        let g = IntMatrix::from_i64([[0, -1], [1, 3]]);
        let rep = GradedRepresentation::exterior_model(&[g], 2).unwrap();
        let d = dynamical_degrees(&rep, 0, &rational(1, 1_000_000)).unwrap();
        assert_eq!(d[0], RealInterval::one());
        assert!(d[1].lo() >= &rational(2618, 1000) && d[1].hi() <= &rational(2619, 1000));
        assert_eq!(d[2], RealInterval::one());
        let report = check_degree_inequalities(&rep, &w()).unwrap();
        assert_eq!(report.generators[0].log_concavity, vec![(1, Verdict::Holds)]);
        assert_eq!(report.verdict, Verdict::Holds);
    }

    #[test]
    fn quasi_unipotent_degrees_hold() {
        let rot = IntMatrix::from_i64([[0, -1, 0], [1, 0, 0], [0, 0, 1]]);
        let shear = IntMatrix::from_i64([[1, 1, 0], [0, 1, 1], [0, 0, 1]]);
        let rep = GradedRepresentation::exterior_model(&[rot, shear], 3).unwrap();
        let report = check_degree_inequalities(&rep, &w()).unwrap();
        for check in &report.generators {
            assert!(check.zero_entropy);
            assert!(check.degrees.iter().all(|d| *d == RealInterval::one()));
        }
        assert_eq!(report.verdict, Verdict::Holds);
    }

    #[test]
    fn supplied_grading_dimension_checked() {
        let g = IntMatrix::from_i64([[1, 1], [0, 1]]);
        let mut supplied = BTreeMap::new();
        supplied.insert(2, vec![IntMatrix::identity(1), IntMatrix::identity(2)]);
        assert!(GradedRepresentation::with_gradings(&[g.clone(), g], 3, &supplied).is_err());
    }

    #[test]
    fn exterior_model_is_homomorphic() {
        let a = IntMatrix::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let b = IntMatrix::from_i64([[1, 0, 0], [0, 1, 1], [0, 0, 1]]);
        let rep = GradedRepresentation::exterior_model(&[a, b], 3).unwrap();
        assert!(rep.check_homomorphy(4).unwrap() > 0);
    }

    #[test]
    fn broken_grading_detected() {
        // degree 2 sends the commuting pair to non-commuting matrices
        let a = IntMatrix::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let b = IntMatrix::from_i64([[1, 0, 1], [0, 1, 0], [0, 0, 1]]);
        let mut supplied = BTreeMap::new();
        supplied.insert(
            2,
            vec![
                IntMatrix::from_i64([[1, 1], [0, 1]]),
                IntMatrix::from_i64([[1, 0], [1, 1]]),
            ],
        );
        let rep = GradedRepresentation::with_gradings(&[a, b], 3, &supplied).unwrap();
        assert!(matches!(
            rep.check_homomorphy(3),
            Err(SpectralError::HomomorphyViolation(_))
        ));
    }
}
