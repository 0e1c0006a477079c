use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use unidyn::analysis::{analyze_file, run_analyze, run_corpus, AnalysisOptions, AnalysisReport, CorpusSummary, Stage};
use unidyn::cone::random::{random_family, InstanceOutcome};
use unidyn::cone::{fujiki_lieberman_check, FlOptions, DEFAULT_GROUP_CAP, DEFAULT_SAMPLE_RANGE, SLOW_GROWTH_THRESHOLD};
use unidyn::exact::{approx_f64, format_rational};
use unidyn::series::DEFAULT_SEARCH_BUDGET;
use unidyn::spec::MatrixGroupSpec;
use unidyn::spectral::uniform_exponent;
use unidyn::unipotent::DEFAULT_WORD_BUDGET;

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "unidyn", version, about = "Exact analysis of groups of unimodular integer matrices")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Spectral radii are isolated to width 2^-bits.
    #[arg(long, global = true, default_value_t = 32)]
    precision_bits: u32,
    /// Longest word searched for a non-unipotence witness.
    #[arg(long, global = true, default_value_t = DEFAULT_WORD_BUDGET)]
    word_budget: usize,
    /// Largest finite image enumerated before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
    /// Seed for randomized families; recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cost budget of the commutator word search (0 disables it).
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET)]
    search_budget: usize,
    /// Include wall-clock stage timings (reports then differ between runs).
    #[arg(long, global = true)]
    timings: bool,
}

impl Global {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            precision_bits: self.precision_bits,
            word_budget: self.word_budget,
            search_budget: (self.search_budget > 0).then_some(self.search_budget),
            group_cap: self.group_cap,
            seed: self.seed,
            timings: self.timings,
            ..AnalysisOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one group document.
    Analyze { file: PathBuf },
    /// Analyse every *.json document in a directory.
    Corpus { dir: PathBuf },
    /// Print the uniform exponents for ranks 1 to MAX_RANK.
    Exponent {
        #[arg(long, default_value_t = 6)]
        max_rank: u64,
    },
    /// Check the boundedness equivalence on a seeded random family.
    ConeCheck {
        #[arg(long, default_value_t = 120)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_RANGE)]
        sample_range: u32,
    },
    /// Run the finite-image pipeline on a document with cone data.
    FlPipeline { file: PathBuf },
    /// Derived length, nilpotency class and bounds for one document.
    Series { file: PathBuf },
}

fn load(path: &Path) -> Result<MatrixGroupSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    MatrixGroupSpec::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| format!("{cell}{}", " ".repeat(widths[c] - cell.chars().count())))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn print_report(r: &AnalysisReport) {
    println!("{} (n = {}, r = {}): {:?}", r.name, opt(r.n), r.r, r.status);
    let mut rows = vec![vec!["generator".into(), "kind".into(), "quasi order".into(), "spectral radius".into()]];
    for (i, c) in r.classifications.iter().enumerate() {
        rows.push(match c {
            Stage::Done(c) => vec![
                i.to_string(),
                format!("{:?}", c.kind),
                opt(c.quasi_order),
                c.spectral_radius.as_ref().map_or("1".into(), ToString::to_string),
            ],
            Stage::Failed(e) | Stage::Skipped(e) => vec![i.to_string(), e.clone()],
        });
    }
    print!("{}", table(&rows));
    if let Some(s) = r.series_report() {
        println!(
            "derived length {}, nilpotency class {}, word search bound {}",
            s.derived_length,
            s.nilpotency_class,
            opt(s.word_search_lower_bound())
        );
    }
    let mut rows = vec![vec!["check".into(), "holds".into(), "detail".into(), "statement".into()]];
    rows.extend(r.verdicts.iter().map(|v| {
        vec![
            v.check.to_string(),
            v.holds.to_string(),
            v.detail.clone(),
            v.anchor.to_string(),
        ]
    }));
    print!("{}", table(&rows));
}

fn print_summary(s: &CorpusSummary) {
    let mut rows = vec![vec!["file".into(), "status".into(), "n".into(), "ℓ_ess".into(), "𝔠".into()]];
    for e in &s.entries {
        rows.push(match (&e.report, &e.input_error) {
            (Some(r), _) => vec![
                e.file.clone(),
                format!("{:?}", r.status),
                opt(r.n),
                opt(r.ell_ess()),
                opt(r.nilpotency_class()),
            ],
            (None, err) => vec![e.file.clone(), format!("input error: {}", opt(err.as_deref()))],
        });
    }
    print!("{}", table(&rows));
    println!();
    let mut rows = vec![vec!["n".into(), "entries".into(), "max 𝔠".into(), "max ℓ_ess".into(), "n − 1".into()]];
    rows.extend(s.class_table.iter().map(|c| {
        vec![
            c.n.to_string(),
            c.entries.to_string(),
            opt(c.max_class),
            opt(c.max_ell_ess),
            c.n_minus_1.to_string(),
        ]
    }));
    print!("{}", table(&rows));
    println!();
    let mut rows = vec![vec!["check".into(), "holds".into(), "fails".into()]];
    rows.extend(
        s.verdict_counts
            .iter()
            .map(|(k, c)| vec![k.to_string(), c.holds.to_string(), c.fails.to_string()]),
    );
    print!("{}", table(&rows));
    println!("exit {}", s.exit_code);
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(u8::try_from(code).unwrap_or(EXIT_VIOLATION))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let options = cli.global.options();
    let json_out = cli.global.json;
    match cli.command {
        Command::Analyze { file } => {
            let spec = load(&file)?;
            let report = run_analyze(&spec, &options);
            if json_out {
                println!("{}", report.to_json());
            } else {
                print_report(&report);
            }
            Ok(if report.status.is_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            })
        }
        Command::Corpus { dir } => {
            let summary = run_corpus(&dir, &options).map_err(|e| format!("{}: {e}", dir.display()))?;
            if json_out {
                println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
            } else {
                print_summary(&summary);
            }
            Ok(exit(summary.exit_code))
        }
        Command::Exponent { max_rank } => {
            let table_rows: Vec<_> = (1..=max_rank)
                .map(|r| uniform_exponent(r).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            if json_out {
                println!("{}", serde_json::to_string_pretty(&table_rows).expect("serializable"));
            } else {
                let mut rows = vec![vec!["r".into(), "d with φ(d) ≤ r".into(), "m_paper".into(), "m_lcm".into()]];
                rows.extend(table_rows.iter().map(|u| {
                    let ds: Vec<String> = u.d_list.iter().map(ToString::to_string).collect();
                    vec![u.rank.to_string(), ds.join(","), u.m_paper.to_string(), u.m_lcm.to_string()]
                }));
                print!("{}", table(&rows));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ConeCheck { count, sample_range } => {
            let family = random_family(cli.global.seed, count);
            let mut rows = vec![vec![
                "#".into(),
                "kind".into(),
                "dim".into(),
                "q".into(),
                "interior fixed".into(),
                "bounded".into(),
                "agree".into(),
                "ratio at range".into(),
            ]];
            let mut records = Vec::new();
            let (mut analysed, mut disagreements, mut slow) = (0usize, 0usize, 0usize);
            for (i, inst) in family.iter().enumerate() {
                match inst.analyze(sample_range) {
                    InstanceOutcome::Analyzed(a) => {
                        analysed += 1;
                        if !a.agreement {
                            disagreements += 1;
                        }
                        if a.slow_growth {
                            slow += 1;
                        }
                        rows.push(vec![
                            i.to_string(),
                            format!("{:?}", inst.kind),
                            inst.map.dim().to_string(),
                            format_rational(&inst.q),
                            a.interior_fixed.is_some().to_string(),
                            a.power_bounded_exact.to_string(),
                            a.agreement.to_string(),
                            format!("{:.3e}", approx_f64(&a.ratio_at_range)),
                        ]);
                        records.push(json!({"index": i, "kind": inst.kind, "analysis": a}));
                    }
                    InstanceOutcome::NotPreserved => {
                        rows.push(vec![i.to_string(), format!("{:?}", inst.kind), inst.map.dim().to_string(), "-".into(), "not preserved".into()]);
                        records.push(json!({"index": i, "kind": inst.kind, "analysis": null, "note": "map does not preserve the cone"}));
                    }
                }
            }
            let ok = disagreements == 0;
            if json_out {
                let out = json!({
                    "seed": cli.global.seed.to_string(),
                    "count": count,
                    "analysed": analysed,
                    "disagreements": disagreements,
                    "slow_growth_flagged": slow,
                    "slow_growth_threshold": SLOW_GROWTH_THRESHOLD.to_string(),
                    "instances": records,
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            } else {
                print!("{}", table(&rows));
                println!(
                    "seed {}: {analysed} analysed, {} not preserved, {disagreements} disagreements, {slow} unbounded with ratio at most {SLOW_GROWTH_THRESHOLD} (flagged)",
                    cli.global.seed,
                    count - analysed
                );
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VIOLATION) })
        }
        Command::FlPipeline { file } => {
            let spec = load(&file)?;
            let (Some(cone), Some(classes)) = (spec.cone(), spec.fixed_classes.as_ref()) else {
                return Err(format!("{}: document has no cone or no fixed classes", file.display()));
            };
            let fl = FlOptions {
                group_cap: options.group_cap,
                width: options.width(),
            };
            let report = fujiki_lieberman_check(&spec.generators, &cone, classes, &fl).map_err(|e| e.to_string())?;
            if json_out {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                let mut rows = vec![vec!["generator".into(), "step".into(), "passed".into(), "reason".into()]];
                for g in &report.generators {
                    for (name, step) in [
                        ("cone preserved", &g.preserves_cone),
                        ("(i) fixed big class", &g.fixed_big_class),
                        ("(ii) bounded powers", &g.power_bounded),
                        ("(iii) dual fixed vector", &g.dual_fixed),
                        ("(iv) g^m = I", &g.finite_order),
                    ] {
                        rows.push(vec![g.generator.to_string(), name.into(), step.passed.to_string(), step.reason.clone()]);
                    }
                }
                rows.push(vec!["-".into(), "(v) closure".into(), report.closure.passed.to_string(), report.closure.reason.clone()]);
                print!("{}", table(&rows));
                println!("m_lcm({}) = {}; {}", report.rank, report.m_lcm, report.conclusion);
            }
            Ok(if report.success == !spec.expect_violation {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            })
        }
        Command::Series { file } => {
            let entry = analyze_file(&file, &options);
            let Some(report) = entry.report else {
                return Err(entry.input_error.unwrap_or_default());
            };
            if json_out {
                let out = json!({
                    "name": report.name,
                    "series": report.series,
                    "robinson": report.robinson,
                    "chain": report.chain,
                    "verdicts": report.verdicts,
                    "status": report.status,
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            } else {
                match &report.series {
                    Stage::Done(_) => {
                        let s = report.series_report().expect("done");
                        let mut rows = vec![vec!["quantity".into(), "value".into()]];
                        rows.push(vec!["derived length".into(), s.derived_length.to_string()]);
                        rows.push(vec!["nilpotency class".into(), s.nilpotency_class.to_string()]);
                        rows.push(vec!["derived dims".into(), format!("{:?}", s.derived_dims)]);
                        rows.push(vec!["lower central dims".into(), format!("{:?}", s.lcs_dims)]);
                        rows.push(vec!["word search bound".into(), opt(s.word_search_lower_bound())]);
                        rows.push(vec!["ℓ_ess".into(), opt(report.ell_ess())]);
                        print!("{}", table(&rows));
                    }
                    Stage::Skipped(why) => println!("series skipped: {why}"),
                    Stage::Failed(why) => println!("series failed: {why}"),
                }
                for v in report.verdicts.iter().filter(|v| {
                    ["essential_length_bound", "robinson", "corollary_chain", "degree_agreement"].contains(&v.check)
                }) {
                    println!("{}: {} ({}) [{}]", v.check, v.holds, v.detail, v.anchor);
                }
            }
            Ok(if report.status.is_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
