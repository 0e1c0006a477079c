//! Whole-document analysis and corpus runs.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cone::{fujiki_lieberman_check, meng_zhang_report, ConeMapAnalysis, FlOptions, FlReport, DEFAULT_GROUP_CAP, DEFAULT_SAMPLE_RANGE};
use crate::exact::{width_from_bits, RatMatrix, Verdict};
use crate::series::{
    corollary_chain_check, essential_length, group_series_report, robinson_check, ChainReport, EssentialLengthReport,
    RobinsonVerdict, SeriesOptions, SeriesReport, DEFAULT_SEARCH_BUDGET,
};
use crate::spec::MatrixGroupSpec;
use crate::spectral::{
    check_degree_inequalities, classify_entropy, uniform_power_certificate, DegreeReport, EntropyClassification,
    EntropyKind, GradedRepresentation,
};
use crate::unipotent::{unipotent_pipeline, PipelineStatus, UnipotentPipelineReport, DEFAULT_WORD_BUDGET};

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub precision_bits: u32,
    pub word_budget: usize,
    pub search_budget: Option<usize>,
    pub group_cap: usize,
    pub sample_range: u32,
    pub seed: u64,
    /// Wall-clock stage timings make reports differ between runs, so they
    /// are off unless asked for.
    pub timings: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            precision_bits: 32,
            word_budget: DEFAULT_WORD_BUDGET,
            search_budget: Some(DEFAULT_SEARCH_BUDGET),
            group_cap: DEFAULT_GROUP_CAP,
            sample_range: DEFAULT_SAMPLE_RANGE,
            seed: 0,
            timings: false,
        }
    }
}

impl AnalysisOptions {
    pub fn width(&self) -> BigRational {
        width_from_bits(self.precision_bits)
    }

    fn series_options(&self) -> SeriesOptions {
        SeriesOptions {
            search_budget: self.search_budget,
            witness_budget: self.word_budget,
            width: self.width(),
        }
    }
}

/// Outcome of one independent stage.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage<T> {
    Done(T),
    Skipped(String),
    Failed(String),
}

impl<T> Stage<T> {
    fn from_result<E: Display>(r: Result<T, E>) -> Self {
        match r {
            Ok(v) => Stage::Done(v),
            Err(e) => Stage::Failed(e.to_string()),
        }
    }

    pub fn done(&self) -> Option<&T> {
        match self {
            Stage::Done(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, Stage::Failed(_))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UnipotentSection {
    pub pipeline: UnipotentPipelineReport,
    /// SHA-256 of the serialized verdict.
    pub certificate_digest: Option<String>,
    pub certificate_valid: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum SeriesSection {
    Essential(Box<EssentialLengthReport>),
    Image(SeriesReport),
}

impl SeriesSection {
    pub fn series(&self) -> &SeriesReport {
        match self {
            SeriesSection::Essential(e) => &e.series,
            SeriesSection::Image(s) => s,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeSection {
    pub analyses: Vec<Stage<ConeMapAnalysis>>,
    pub fujiki_lieberman: Option<Stage<FlReport>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictLine {
    pub check: &'static str,
    /// The statement this verdict instantiates.
    pub anchor: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// A violation in a document that declares one.
    ExpectedViolation,
    Violation,
    /// A document declaring a violation passed every check.
    UnexpectedPass,
}

impl Status {
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::ExpectedViolation)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub n: Option<usize>,
    pub r: usize,
    pub seed: u64,
    pub classifications: Vec<Stage<EntropyClassification>>,
    pub unipotent: Stage<UnipotentSection>,
    pub series: Stage<SeriesSection>,
    pub robinson: Stage<RobinsonVerdict>,
    pub chain: Stage<ChainReport>,
    pub degrees: Stage<DegreeReport>,
    pub cone: Stage<ConeSection>,
    pub verdicts: Vec<VerdictLine>,
    pub expect_violation: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<&'static str, f64>>,
}

impl AnalysisReport {
    pub fn ell_ess(&self) -> Option<usize> {
        match self.series.done()? {
            SeriesSection::Essential(e) => Some(e.ell_ess),
            SeriesSection::Image(_) => None,
        }
    }

    pub fn series_report(&self) -> Option<&SeriesReport> {
        self.series.done().map(SeriesSection::series)
    }

    pub fn nilpotency_class(&self) -> Option<usize> {
        self.series_report().map(|s| s.nilpotency_class)
    }

    pub fn verdict(&self, check: &str) -> Option<&VerdictLine> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub mod anchors {
    pub const ESSENTIAL_BOUND: &str = "ℓ_ess(G) ≤ n − 1";
    pub const ROBINSON: &str = "ℓ ≤ log₂ 𝔠 + 1, i.e. 2^(ℓ−1) ≤ 𝔠";
    pub const CHAIN: &str = "ℓ(G|N¹) + 1 ≤ n when the kernel is abelian";
    pub const DEGREE_AGREEMENT: &str = "ℓ(G|Nᵏ) = ℓ(G|N¹) for 1 < k < n";
    pub const DEGREE_INEQUALITIES: &str = "d_k ≤ d_1ᵏ and d_k² ≥ d_(k−1) d_(k+1)";
    pub const UNIFORM_POWER: &str = "(g^m − I)^r = 0 for quasi-unipotent g, m = m_lcm(r)";
    pub const KOLCHIN: &str = "unipotent group ⇒ P⁻¹ G P upper unitriangular";
    pub const MENG_ZHANG: &str = "f x = q x for some x ∈ C° ⇔ sup_i ‖fⁱ‖/qⁱ < ∞";
    pub const FUJIKI_LIEBERMAN: &str = "G|N¹ finite when G fixes a big class and preserves the cone";
    pub const STAGE: &str = "every stage completes on valid input";
}

fn digest(value: &impl Serialize) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable");
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct Timer {
    enabled: bool,
    map: BTreeMap<&'static str, f64>,
}

impl Timer {
    fn run<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.map.insert(stage, start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }
}

/// Runs every stage on one document. A failing stage is recorded and does
/// not stop the stages after it.
pub fn run_analyze(spec: &MatrixGroupSpec, options: &AnalysisOptions) -> AnalysisReport {
    let width = options.width();
    let mut timer = Timer {
        enabled: options.timings,
        map: BTreeMap::new(),
    };
    let gens = &spec.generators;
    let rat_gens: Vec<RatMatrix> = gens.iter().map(|g| g.to_rational()).collect();
    let mut verdicts = Vec::new();

    let classifications: Vec<_> = timer.run("classify", || {
        gens.iter()
            .map(|g| Stage::from_result(classify_entropy(g, &width)))
            .collect()
    });
    for (i, (g, c)) in gens.iter().zip(&classifications).enumerate() {
        if let Stage::Done(c) = c {
            if c.kind != EntropyKind::PositiveEntropy {
                let holds = uniform_power_certificate(g).unwrap_or(false);
                verdicts.push(VerdictLine {
                    check: "uniform_power",
                    anchor: anchors::UNIFORM_POWER,
                    holds,
                    detail: format!("generator {i}"),
                });
            }
        }
    }

    let unipotent = timer.run("unipotent", || {
        Stage::from_result(
            unipotent_pipeline(gens, spec.r as u64, &width, options.word_budget).map(|pipeline| {
                let (certificate_digest, certificate_valid) = match &pipeline.verdict {
                    Some(v) => {
                        let powered: Vec<RatMatrix> = pipeline.powered_generators.iter().map(|g| g.to_rational()).collect();
                        (Some(digest(v)), Some(v.validate(&powered)))
                    }
                    None => (None, None),
                };
                UnipotentSection {
                    pipeline,
                    certificate_digest,
                    certificate_valid,
                }
            }),
        )
    });
    if let Some(valid) = unipotent.done().and_then(|u| u.certificate_valid) {
        verdicts.push(VerdictLine {
            check: "kolchin_certificate",
            anchor: anchors::KOLCHIN,
            holds: valid,
            detail: "verdict re-validated entry by entry".into(),
        });
    }
    let status = unipotent.done().map(|u| u.pipeline.status.clone());

    let series_opts = options.series_options();
    let series: Stage<SeriesSection> = timer.run("series", || match (&status, spec.n) {
        (Some(PipelineStatus::Inapplicable { .. }), _) => {
            Stage::Skipped("a generator has positive entropy, so no finite-index subgroup has unipotent image".into())
        }
        (Some(PipelineStatus::NotUnipotent), _) => Stage::Skipped("the powered group is not unipotent".into()),
        (None, _) => Stage::Skipped("unipotent pipeline failed".into()),
        (Some(PipelineStatus::Certified), Some(n)) => Stage::from_result(
            essential_length(gens, n, spec.r as u64, &spec.gradings, &series_opts)
                .map(|e| SeriesSection::Essential(Box::new(e))),
        ),
        (Some(PipelineStatus::Certified), None) => {
            let powered = &unipotent.done().expect("certified").pipeline.powered_generators;
            Stage::from_result(group_series_report(powered, &series_opts).map(SeriesSection::Image))
        }
    });
    let robinson = match series.done() {
        Some(s) => {
            let s = s.series();
            Stage::from_result(robinson_check(s.derived_length, s.nilpotency_class))
        }
        None => Stage::Skipped("no series".into()),
    };
    if let Stage::Done(SeriesSection::Essential(e)) = &series {
        verdicts.push(VerdictLine {
            check: "essential_length_bound",
            anchor: anchors::ESSENTIAL_BOUND,
            holds: e.bound_holds,
            detail: format!("ℓ_ess = {}, n − 1 = {}", e.ell_ess, e.n - 1),
        });
        if !e.degree_lengths.is_empty() {
            let lengths: Vec<String> = e
                .degree_lengths
                .iter()
                .map(|d| format!("k={}: {}", d.k, d.derived_length))
                .collect();
            verdicts.push(VerdictLine {
                check: "degree_agreement",
                anchor: anchors::DEGREE_AGREEMENT,
                holds: e.degrees_agree,
                detail: format!("k=1: {}; {}", e.ell_ess, lengths.join("; ")),
            });
        }
    }
    if let Stage::Done(r) = &robinson {
        verdicts.push(VerdictLine {
            check: "robinson",
            anchor: anchors::ROBINSON,
            holds: r.holds,
            detail: format!("ℓ = {}, 𝔠 = {}", r.derived_length, r.nilpotency_class),
        });
    }

    let chain = match (spec.kernel_abelian, spec.n, series.done()) {
        (Some(true), Some(n), Some(s)) => Stage::from_result(corollary_chain_check(s.series().derived_length, n, true)),
        (Some(false), _, _) => Stage::Skipped("kernel not declared abelian".into()),
        (None, _, _) => Stage::Skipped("no kernel declaration".into()),
        (_, None, _) => Stage::Skipped("no ambient dimension".into()),
        (_, _, None) => Stage::Skipped("no series".into()),
    };
    if let Stage::Done(c) = &chain {
        verdicts.push(VerdictLine {
            check: "corollary_chain",
            anchor: anchors::CHAIN,
            holds: c.holds,
            detail: format!("ℓ + 1 = {}, n = {}", c.chain_value, c.n),
        });
    }

    let degrees = timer.run("degrees", || match spec.n {
        Some(n) if !gens.is_empty() => Stage::from_result(
            GradedRepresentation::with_gradings(gens, n, &spec.gradings)
                .and_then(|rep| check_degree_inequalities(&rep, &width)),
        ),
        Some(_) => Stage::Skipped("no generators".into()),
        None => Stage::Skipped("no ambient dimension".into()),
    });
    if let Stage::Done(d) = &degrees {
        verdicts.push(VerdictLine {
            check: "degree_inequalities",
            anchor: anchors::DEGREE_INEQUALITIES,
            holds: d.verdict != Verdict::Fails,
            detail: format!("{:?}", d.verdict),
        });
    }

    let cone = timer.run("cone", || match spec.cone() {
        None => Stage::Skipped("no cone".into()),
        Some(c) => {
            let analyses: Vec<Stage<ConeMapAnalysis>> = rat_gens
                .iter()
                .map(|g| Stage::from_result(meng_zhang_report(g, &BigRational::one(), &c, options.sample_range)))
                .collect();
            let fujiki_lieberman = spec.fixed_classes.as_ref().map(|classes| {
                let fl = FlOptions {
                    group_cap: options.group_cap,
                    width: width.clone(),
                };
                Stage::from_result(fujiki_lieberman_check(gens, &c, classes, &fl))
            });
            Stage::Done(ConeSection {
                analyses,
                fujiki_lieberman,
            })
        }
    });
    if let Stage::Done(section) = &cone {
        for (i, a) in section.analyses.iter().enumerate() {
            let (holds, detail) = match a {
                Stage::Done(a) => (
                    a.agreement,
                    format!("interior fixed: {}, bounded: {}", a.interior_fixed.is_some(), a.power_bounded_exact),
                ),
                Stage::Failed(e) => (false, e.clone()),
                Stage::Skipped(s) => (true, s.clone()),
            };
            verdicts.push(VerdictLine {
                check: "meng_zhang",
                anchor: anchors::MENG_ZHANG,
                holds,
                detail: format!("generator {i}: {detail}"),
            });
        }
        if let Some(fl) = &section.fujiki_lieberman {
            let (holds, detail) = match fl {
                Stage::Done(r) => (
                    r.success,
                    match r.image_order {
                        Some(order) => format!("image order {order}"),
                        None => r.closure.reason.clone(),
                    },
                ),
                Stage::Failed(e) | Stage::Skipped(e) => (false, e.clone()),
            };
            verdicts.push(VerdictLine {
                check: "fujiki_lieberman",
                anchor: anchors::FUJIKI_LIEBERMAN,
                holds,
                detail,
            });
        }
    }

    let failed_stages: Vec<&str> = [
        ("unipotent", unipotent.is_failed()),
        ("series", series.is_failed()),
        ("robinson", robinson.is_failed()),
        ("chain", chain.is_failed()),
        ("degrees", degrees.is_failed()),
        ("cone", cone.is_failed()),
    ]
    .into_iter()
    .chain(classifications.iter().map(|c| ("classify", c.is_failed())))
    .filter_map(|(name, failed)| failed.then_some(name))
    .collect();
    if !failed_stages.is_empty() {
        verdicts.push(VerdictLine {
            check: "stages",
            anchor: anchors::STAGE,
            holds: false,
            detail: format!("failed: {}", failed_stages.join(", ")),
        });
    }

    let violated = verdicts.iter().any(|v| !v.holds);
    let status = match (violated, spec.expect_violation) {
        (false, false) => Status::Pass,
        (true, true) => Status::ExpectedViolation,
        (true, false) => Status::Violation,
        (false, true) => Status::UnexpectedPass,
    };
    AnalysisReport {
        name: spec.name.clone(),
        n: spec.n,
        r: spec.r,
        seed: options.seed,
        classifications,
        unipotent,
        series,
        robinson,
        chain,
        degrees,
        cone,
        verdicts,
        expect_violation: spec.expect_violation,
        status,
        timings_ms: options.timings.then_some(timer.map),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<AnalysisReport>,
}

impl CorpusEntry {
    pub fn status(&self) -> Option<Status> {
        self.report.as_ref().map(|r| r.status)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub n: usize,
    pub entries: usize,
    pub max_class: Option<usize>,
    pub max_ell_ess: Option<usize>,
    pub n_minus_1: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCount {
    pub holds: usize,
    pub fails: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSummary {
    pub entries: Vec<CorpusEntry>,
    /// Largest nilpotency class and essential length per ambient dimension,
    /// leaving out documents that declare a violation.
    pub class_table: Vec<ClassRow>,
    pub verdict_counts: BTreeMap<&'static str, VerdictCount>,
    pub status_counts: BTreeMap<String, usize>,
    pub input_errors: usize,
    pub exit_code: i32,
}

fn status_name(s: Status) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Exit code for a set of statuses: `2` if any input failed to load,
/// otherwise `1` if any status is not ok, otherwise `0`.
pub fn exit_code(input_errors: usize, statuses: impl IntoIterator<Item = Status>) -> i32 {
    if input_errors > 0 {
        2
    } else if statuses.into_iter().all(Status::is_ok) {
        0
    } else {
        1
    }
}

pub fn summarize(entries: Vec<CorpusEntry>) -> CorpusSummary {
    let mut rows: BTreeMap<usize, ClassRow> = BTreeMap::new();
    let mut verdict_counts: BTreeMap<&'static str, VerdictCount> = BTreeMap::new();
    let mut status_counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in entries.iter().filter_map(|e| e.report.as_ref()) {
        *status_counts.entry(status_name(r.status)).or_default() += 1;
        for v in &r.verdicts {
            let c = verdict_counts.entry(v.check).or_default();
            if v.holds {
                c.holds += 1;
            } else {
                c.fails += 1;
            }
        }
        if let Some(n) = r.n.filter(|_| !r.expect_violation) {
            let row = rows.entry(n).or_insert(ClassRow {
                n,
                entries: 0,
                max_class: None,
                max_ell_ess: None,
                n_minus_1: n - 1,
            });
            row.entries += 1;
            row.max_class = row.max_class.max(r.nilpotency_class());
            row.max_ell_ess = row.max_ell_ess.max(r.ell_ess());
        }
    }
    let input_errors = entries.iter().filter(|e| e.input_error.is_some()).count();
    let exit = exit_code(input_errors, entries.iter().filter_map(CorpusEntry::status));
    CorpusSummary {
        entries,
        class_table: rows.into_values().collect(),
        verdict_counts,
        status_counts,
        input_errors,
        exit_code: exit,
    }
}

/// Loads and analyses one file.
pub fn analyze_file(path: &Path, options: &AnalysisOptions) -> CorpusEntry {
    let file = path
        .file_name()
        .map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
    let loaded = std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|text| MatrixGroupSpec::parse(&text).map_err(|e| e.to_string()));
    match loaded {
        Ok(spec) => CorpusEntry {
            file,
            input_error: None,
            report: Some(run_analyze(&spec, options)),
        },
        Err(e) => CorpusEntry {
            file,
            input_error: Some(e),
            report: None,
        },
    }
}

/// Every `*.json` file in `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Analyses every document in `dir` in parallel. Output order follows the
/// sorted file names.
pub fn run_corpus(dir: &Path, options: &AnalysisOptions) -> std::io::Result<CorpusSummary> {
    let files = corpus_files(dir)?;
    let entries: Vec<CorpusEntry> = files.par_iter().map(|p| analyze_file(p, options)).collect();
    Ok(summarize(entries))
}
