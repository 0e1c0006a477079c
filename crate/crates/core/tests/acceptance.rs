//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unidyn::analysis::{run_analyze, AnalysisOptions, Status};
use unidyn::cone::random::{random_family, random_unimodular, InstanceOutcome};
use unidyn::cone::{fujiki_lieberman_check, FlOptions, SLOW_GROWTH_THRESHOLD};
use unidyn::exact::{IntMatrix, IntPoly, RatMatrix};
use unidyn::series::{
    essential_length, group_series_report, robinson_check, word_search_lower_bound, SeriesOptions,
};
use unidyn::spec::MatrixGroupSpec;
use unidyn::spectral::{classify_entropy, uniform_exponent, EntropyKind};
use unidyn::unipotent::{certify_unipotent_group, unipotent_pipeline, UnipotenceVerdict, DEFAULT_WORD_BUDGET};

type Outcome = Result<String, String>;

fn corpus() -> Vec<(String, MatrixGroupSpec)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let spec = MatrixGroupSpec::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, spec)
        })
        .collect()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- 1

/// φ by counting residues coprime to `d`.
fn phi_by_count(d: u64) -> u64 {
    (1..=d).filter(|k| k.gcd(&d) == 1).count() as u64
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for r in 1..=6u64 {
        let u = uniform_exponent(r).map_err(|e| e.to_string())?;
        let oracle: Vec<u64> = (1..=2 * r * r).filter(|&d| phi_by_count(d) <= r).collect();
        ensure(u.d_list == oracle, || format!("r={r}: {:?} vs oracle {oracle:?}", u.d_list))?;
        // nothing beyond the search bound either
        let beyond = (2 * r * r + 1..=20 * r * r).find(|&d| phi_by_count(d) <= r);
        ensure(beyond.is_none(), || format!("r={r}: φ({beyond:?}) ≤ r past the bound"))?;
        let product: BigUint = oracle.iter().map(|&d| BigUint::from(d)).product();
        let lcm = oracle.iter().fold(BigUint::one(), |acc, &d| acc.lcm(&BigUint::from(d)));
        ensure(u.m_paper == product, || format!("r={r}: m_paper {} vs {product}", u.m_paper))?;
        ensure(u.m_lcm == lcm, || format!("r={r}: m_lcm {} vs {lcm}", u.m_lcm))?;
    }
    ensure(uniform_exponent(1).unwrap().d_list == [1, 2], || "r=1 list".into())?;
    let two = uniform_exponent(2).unwrap();
    ensure(two.d_list == [1, 2, 3, 4, 6], || "r=2 list".into())?;
    ensure(two.m_paper == BigUint::from(144u32), || "m_paper(2) ≠ 144".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("r = 1..6 match the brute-force oracle in {:?}", start.elapsed()))
}

// ---------------------------------------------------------------- 2

fn companion(p: &IntPoly) -> IntMatrix {
    let d = p.degree().unwrap();
    IntMatrix::from_fn(d, |i, j| {
        if j == d - 1 {
            -p.coeff(i)
        } else if i == j + 1 {
            BigInt::one()
        } else {
            BigInt::from(0)
        }
    })
}

/// Cyclotomic polynomials written out by hand, lowest coefficient first.
fn cyclotomic_blocks() -> Vec<IntPoly> {
    [
        &[-1, 1][..],
        &[1, 1],
        &[1, 1, 1],
        &[1, 0, 1],
        &[1, 1, 1, 1, 1],
        &[1, -1, 1],
        &[1, 1, 1, 1, 1, 1, 1],
        &[1, 0, 0, 0, 1],
        &[1, 0, 0, 1, 0, 0, 1],
        &[1, -1, 1, -1, 1],
        &[1, 0, -1, 0, 1],
    ]
    .iter()
    .map(|c| IntPoly::from_i64(c))
    .collect()
}

fn non_cyclotomic_blocks() -> Vec<IntPoly> {
    [&[1, -3, 1][..], &[-1, -1, 1], &[-1, -1, 0, 1], &[1, -4, 1]]
        .iter()
        .map(|c| IntPoly::from_i64(c))
        .collect()
}

fn random_block_sum(rng: &mut ChaCha8Rng, with_bad: bool) -> (IntMatrix, bool) {
    let target = rng.gen_range(2..=8usize);
    let good = cyclotomic_blocks();
    let bad = non_cyclotomic_blocks();
    let mut blocks: Vec<IntMatrix> = Vec::new();
    let mut size = 0;
    if with_bad {
        let b = companion(bad.choose(rng).unwrap());
        size += b.dim();
        blocks.push(b);
    }
    while size < target {
        let room = target - size;
        let choices: Vec<&IntPoly> = good.iter().filter(|p| p.degree().unwrap() <= room).collect();
        let b = if room >= 2 && rng.gen_bool(0.2) {
            IntMatrix::from_i64([[1, 1], [0, 1]])
        } else {
            companion(choices.choose(rng).unwrap())
        };
        size += b.dim();
        blocks.push(b);
    }
    blocks.shuffle(rng);
    let g = IntMatrix::block_diag(&blocks);
    let u = random_unimodular(rng, g.dim());
    let conj = &(&u * &g) * &u.inverse_unimodular().unwrap();
    (conj, !with_bad)
}

/// `(g^m − I)^dim = 0` by plain exact arithmetic.
fn power_route(g: &IntMatrix) -> bool {
    let m = uniform_exponent(g.dim() as u64).unwrap().m_lcm_u64();
    let shifted = &g.pow(m) - &IntMatrix::identity(g.dim());
    shifted.pow(g.dim() as u64).is_zero()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let width = unidyn::exact::width_from_bits(16);
    let mut agree = 0;
    for i in 0..400 {
        let (g, quasi_unipotent) = random_block_sum(&mut rng, i >= 200);
        let c = classify_entropy(&g, &width).map_err(|e| format!("instance {i}: {e}"))?;
        let kronecker = c.kind != EntropyKind::PositiveEntropy;
        let power = power_route(&g);
        ensure(kronecker == power, || format!("instance {i}: classification {:?}, power route {power}", c.kind))?;
        ensure(kronecker == quasi_unipotent, || format!("instance {i}: construction says {quasi_unipotent}"))?;
        agree += 1;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{agree}/400 agree in {:?}", start.elapsed()))
}

// ---------------------------------------------------------------- 3

fn conjugated_unitriangular(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<RatMatrix> {
    let u = random_unimodular(rng, dim);
    let u_inv = u.inverse_unimodular().unwrap();
    (0..count)
        .map(|_| {
            let t = IntMatrix::from_fn(dim, |i, j| {
                if i == j {
                    BigInt::one()
                } else if i < j {
                    BigInt::from(rng.gen_range(-2i64..=2))
                } else {
                    BigInt::from(0)
                }
            });
            (&(&u * &t) * &u_inv).to_rational()
        })
        .collect()
}

/// `P⁻¹ g P` upper unitriangular, checked entry by entry.
fn check_certificate(verdict: &UnipotenceVerdict, gens: &[RatMatrix]) -> Result<(), String> {
    let UnipotenceVerdict::Certified(cert) = verdict else {
        return Err("not certified".into());
    };
    let p = &cert.basis_change;
    let p_inv = p.inverse().map_err(|_| "singular basis change".to_string())?;
    for (k, g) in gens.iter().enumerate() {
        let t = &(&p_inv * g) * p;
        for i in 0..t.dim() {
            for j in 0..=i {
                let want = if i == j { BigRational::one() } else { BigRational::from_integer(0.into()) };
                ensure(*t.get(i, j) == want, || format!("generator {k}: entry ({i},{j}) is {}", t.get(i, j)))?;
            }
        }
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut certified = 0;
    for (name, spec) in corpus() {
        let Ok(p) = unipotent_pipeline(&spec.generators, spec.r as u64, &unidyn::exact::width_from_bits(16), DEFAULT_WORD_BUDGET) else {
            continue;
        };
        if let Some(v) = &p.verdict {
            if v.is_certified() {
                let powered: Vec<RatMatrix> = p.powered_generators.iter().map(IntMatrix::to_rational).collect();
                check_certificate(v, &powered).map_err(|e| format!("{name}: {e}"))?;
                certified += 1;
            }
        }
    }
    for trial in 0..60 {
        let dim = rng.gen_range(1..=6);
        let count = rng.gen_range(1..=3);
        let gens = conjugated_unitriangular(&mut rng, dim, count);
        let v = certify_unipotent_group(&gens, DEFAULT_WORD_BUDGET).map_err(|e| e.to_string())?;
        check_certificate(&v, &gens).map_err(|e| format!("random trial {trial}: {e}"))?;
        certified += 1;
    }
    let pair = vec![
        IntMatrix::from_i64([[1, 1], [0, 1]]).to_rational(),
        IntMatrix::from_i64([[1, 0], [1, 1]]).to_rational(),
    ];
    let v = certify_unipotent_group(&pair, DEFAULT_WORD_BUDGET).map_err(|e| e.to_string())?;
    let UnipotenceVerdict::NotUnipotent { group_witness, .. } = &v else {
        return Err("opposite shears were certified".into());
    };
    ensure(v.validate(&pair), || "witness does not validate".into())?;
    let w = group_witness.as_ref().ok_or("no group witness")?;
    ensure(w.word.evaluate(&pair).as_ref() == Ok(&w.matrix), || "witness word does not evaluate to its matrix".into())?;
    ensure(w.matrix.trace() != BigRational::from_integer(2.into()), || {
        "witness has trace 2, so char poly could be (x−1)²".into()
    })?;
    Ok(format!(
        "{certified} certificates unitriangular entry by entry; shear pair rejected by word {} with trace {}",
        w.word,
        w.matrix.trace()
    ))
}

// ---------------------------------------------------------------- 4

/// Derived length and class of the strictly upper triangular algebra,
/// computed on index pairs: `[E_ij, E_kl] = δ_jk E_il − δ_li E_kj`.
fn strictly_upper_oracle(n: usize) -> (usize, usize) {
    type Basis = BTreeSet<(usize, usize)>;
    let bracket = |a: &Basis, b: &Basis| -> Basis {
        let mut out = Basis::new();
        for &(i, j) in a {
            for &(k, l) in b {
                if j == k {
                    out.insert((i, l));
                }
                if l == i {
                    out.insert((k, j));
                }
            }
        }
        out
    };
    let full: Basis = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut derived = full.clone();
    let mut ell = 0;
    while !derived.is_empty() {
        derived = bracket(&derived, &derived);
        ell += 1;
    }
    let mut lower = full.clone();
    let mut class = 0;
    while !lower.is_empty() {
        lower = bracket(&lower, &full);
        class += 1;
    }
    (ell, class)
}

fn upper(n: usize) -> Vec<IntMatrix> {
    (0..n - 1)
        .map(|i| &IntMatrix::identity(n) + &IntMatrix::unit(n, i, i + 1))
        .collect()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let lie_only = SeriesOptions {
        search_budget: None,
        ..SeriesOptions::default()
    };
    let mut checked = Vec::new();
    for (name, spec) in corpus() {
        if spec.r > 6 {
            continue;
        }
        let width = unidyn::exact::width_from_bits(16);
        let Ok(p) = unipotent_pipeline(&spec.generators, spec.r as u64, &width, DEFAULT_WORD_BUDGET) else {
            continue;
        };
        if !p.is_certified() {
            continue;
        }
        let report = group_series_report(&p.powered_generators, &lie_only).map_err(|e| format!("{name}: {e}"))?;
        let search = word_search_lower_bound(&p.powered_generators, 10).map_err(|e| format!("{name}: {e}"))?;
        ensure(search.lower_bound == report.derived_length, || {
            format!("{name}: word search {} vs ℓ {}", search.lower_bound, report.derived_length)
        })?;
        if let Some(c) = spec.expected_value("nilpotency_class") {
            ensure(c == report.nilpotency_class.to_string(), || format!("{name}: 𝔠 annotation {c}"))?;
        }
        checked.push(name);
    }
    for n in 2..=7usize {
        let report = group_series_report(&upper(n), &lie_only).map_err(|e| e.to_string())?;
        let (ell, class) = strictly_upper_oracle(n);
        let log_ceil = (usize::BITS - (n - 1).leading_zeros()) as usize;
        ensure(report.derived_length == ell && ell == log_ceil, || {
            format!("U_{n}: ℓ {} vs oracle {ell}, ⌈log₂ n⌉ {log_ceil}", report.derived_length)
        })?;
        ensure(report.nilpotency_class == class && class == n - 1, || {
            format!("U_{n}: 𝔠 {} vs oracle {class}", report.nilpotency_class)
        })?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "word search equals ℓ on {} corpus groups; U_2..U_7 match the index-pair oracle ({:?})",
        checked.len(),
        start.elapsed()
    ))
}

// ---------------------------------------------------------------- 5 and 6

fn criterion_5() -> Outcome {
    let opts = SeriesOptions::default();
    let mut holds = 0;
    let mut maximal = BTreeMap::new();
    let mut flagged = Vec::new();
    for (name, spec) in corpus() {
        let Some(n) = spec.n else { continue };
        let Ok(report) = essential_length(&spec.generators, n, spec.r as u64, &spec.gradings, &opts) else {
            continue;
        };
        if let Some(e) = spec.expected_value("ell_ess") {
            ensure(e == report.ell_ess.to_string(), || format!("{name}: ℓ_ess {} vs annotation {e}", report.ell_ess))?;
        }
        if !report.bound_holds {
            // only documents that declare a violation may exceed the bound
            ensure(spec.expect_violation, || format!("{name}: ℓ_ess {} > n − 1 = {}", report.ell_ess, n - 1))?;
            flagged.push(name);
            continue;
        }
        if report.ell_ess == n - 1 {
            maximal.entry(n).or_insert_with(Vec::new).push(name.clone());
        }
        holds += 1;
    }
    ensure(!flagged.is_empty(), || "violation fixture not detected".into())?;
    ensure(maximal.get(&2).is_some_and(|v| v.iter().any(|s| s == "abelian_unipotent")), || "no maximal n = 2 case".into())?;
    ensure(maximal.get(&3).is_some_and(|v| v.iter().any(|s| s == "heisenberg")), || "no maximal n = 3 case".into())?;
    Ok(format!(
        "bound holds on {holds} entries, maximal at n = 2, 3; violation fixture(s) {flagged:?} detected"
    ))
}

fn criterion_6() -> Outcome {
    let lie_only = SeriesOptions {
        search_budget: None,
        ..SeriesOptions::default()
    };
    let mut count = 0;
    for (name, spec) in corpus() {
        let Ok(p) = unipotent_pipeline(&spec.generators, spec.r as u64, &unidyn::exact::width_from_bits(16), DEFAULT_WORD_BUDGET) else {
            continue;
        };
        if !p.is_certified() {
            continue;
        }
        let s = group_series_report(&p.powered_generators, &lie_only).map_err(|e| format!("{name}: {e}"))?;
        let r = robinson_check(s.derived_length, s.nilpotency_class).map_err(|e| format!("{name}: {e}"))?;
        // independent form: ℓ − 1 ≤ log₂ 𝔠
        let direct = s.derived_length == 0 || ((s.derived_length - 1) as f64) <= (s.nilpotency_class as f64).log2();
        ensure(r.holds && direct, || format!("{name}: ℓ = {}, 𝔠 = {}", s.derived_length, s.nilpotency_class))?;
        ensure(s.derived_length <= s.nilpotency_class, || format!("{name}: ℓ > 𝔠"))?;
        count += 1;
    }
    let neg = robinson_check(4, 4).map_err(|e| e.to_string())?;
    ensure(!neg.holds, || "(ℓ = 4, 𝔠 = 4) accepted".into())?;
    Ok(format!("holds on {count} corpus groups; (ℓ = 4, 𝔠 = 4) rejected"))
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let lie_only = SeriesOptions {
        search_budget: None,
        ..SeriesOptions::default()
    };
    let width = unidyn::exact::width_from_bits(16);
    let pool: Vec<(String, Vec<IntMatrix>)> = corpus()
        .into_iter()
        .filter_map(|(name, spec)| {
            let p = unipotent_pipeline(&spec.generators, spec.r as u64, &width, DEFAULT_WORD_BUDGET).ok()?;
            (p.is_certified() && p.powered_generators.iter().any(|g| !g.is_identity()) && spec.r <= 5)
                .then_some((name, p.powered_generators))
        })
        .collect();
    ensure(!pool.is_empty(), || "no unipotent corpus groups".into())?;
    for trial in 0..50 {
        let (name, gens) = pool.choose(&mut rng).unwrap();
        let base = group_series_report(gens, &lie_only).map_err(|e| e.to_string())?;
        let kinds: Vec<EntropyKind> = gens.iter().map(|g| classify_entropy(g, &width).unwrap().kind).collect();
        let u = random_unimodular(&mut rng, gens[0].dim());
        let u_inv = u.inverse_unimodular().unwrap();
        let moved: Vec<IntMatrix> = gens
            .iter()
            .map(|g| {
                let k = *[-3i64, -2, -1, 1, 2, 3].choose(&mut rng).unwrap();
                let p = if k > 0 { g.pow(k as u64) } else { g.inverse_unimodular().unwrap().pow((-k) as u64) };
                &(&u * &p) * &u_inv
            })
            .collect();
        let after = group_series_report(&moved, &lie_only).map_err(|e| e.to_string())?;
        let kinds_after: Vec<EntropyKind> = moved.iter().map(|g| classify_entropy(g, &width).unwrap().kind).collect();
        ensure(
            (base.derived_length, base.nilpotency_class) == (after.derived_length, after.nilpotency_class),
            || format!("trial {trial} ({name}): ({}, {}) became ({}, {})", base.derived_length, base.nilpotency_class, after.derived_length, after.nilpotency_class),
        )?;
        ensure(kinds == kinds_after, || format!("trial {trial} ({name}): kinds changed"))?;
    }
    Ok(format!("50 powered and conjugated instances from {} groups unchanged", pool.len()))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let seed = 8;
    let family = random_family(seed, 140);
    let threshold = BigRational::from_integer(SLOW_GROWTH_THRESHOLD.into());
    let (mut analysed, mut unbounded, mut flagged, mut not_preserved) = (0, 0, 0, 0);
    let mut dims = BTreeSet::new();
    for (i, inst) in family.iter().enumerate() {
        match inst.analyze(40) {
            InstanceOutcome::Analyzed(a) => {
                analysed += 1;
                dims.insert(inst.map.dim());
                ensure(a.agreement, || format!("instance {i} ({:?}): criteria disagree", inst.kind))?;
                if !a.power_bounded_exact {
                    unbounded += 1;
                    if a.ratio_at_range <= threshold {
                        ensure(a.slow_growth, || format!("instance {i}: small ratio without flag"))?;
                        flagged += 1;
                    }
                }
            }
            InstanceOutcome::NotPreserved => not_preserved += 1,
        }
    }
    ensure(analysed >= 100, || format!("only {analysed} instances analysed"))?;
    ensure(dims.iter().all(|&d| d <= 5), || "dimension above 5".into())?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "seed {seed}: {analysed} analysed, 100% agreement, {unbounded} unbounded ({flagged} flagged slow), {not_preserved} shears preserve no cone ({:?})",
        start.elapsed()
    ))
}

// ---------------------------------------------------------------- 9

/// Group order by repeated multiplication until the set stops growing.
fn naive_order(gens: &[IntMatrix]) -> usize {
    let mut set: BTreeSet<Vec<String>> = BTreeSet::new();
    let key = |m: &IntMatrix| m.entries().iter().map(ToString::to_string).collect::<Vec<_>>();
    let mut elems = vec![IntMatrix::identity(gens[0].dim())];
    set.insert(key(&elems[0]));
    loop {
        let mut grew = false;
        for x in elems.clone() {
            for g in gens {
                let y = g * &x;
                if set.insert(key(&y)) {
                    elems.push(y);
                    grew = true;
                }
            }
        }
        if !grew {
            return elems.len();
        }
    }
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    let mut saw_shear = false;
    for (name, spec) in corpus() {
        let (Some(cone), Some(classes)) = (spec.cone(), spec.fixed_classes.as_ref()) else {
            continue;
        };
        let report = fujiki_lieberman_check(&spec.generators, &cone, classes, &FlOptions::default())
            .map_err(|e| format!("{name}: {e}"))?;
        if spec.expect_violation {
            let step = &report.generators[0].power_bounded;
            ensure(!step.passed, || format!("{name}: bounded-powers step passed"))?;
            ensure(step.reason.contains("repeated root"), || format!("{name}: reason {:?}", step.reason))?;
            ensure(!report.success, || format!("{name}: pipeline succeeded"))?;
            lines.push(format!("{name} fails (ii): {}", step.reason));
            saw_shear = true;
            continue;
        }
        let m = uniform_exponent(spec.r as u64).unwrap().m_lcm_u64();
        ensure(spec.generators.iter().all(|g| g.pow(m).is_identity()), || format!("{name}: g^{m} ≠ I"))?;
        ensure(report.success, || format!("{name}: {}", report.closure.reason))?;
        let order = report.image_order.unwrap();
        ensure(order == naive_order(&spec.generators), || format!("{name}: order {order} vs naive"))?;
        if let Some(e) = spec.expected_value("image_order") {
            ensure(e == order.to_string(), || format!("{name}: order {order} vs annotation {e}"))?;
        }
        for g in &report.generators {
            let q = g.quasi_order.ok_or("no quasi order")?;
            ensure(m % q == 0, || format!("{name}: quasi order {q} does not divide {m}"))?;
        }
        lines.push(format!("{name} order {order}"));
    }
    ensure(saw_shear, || "no shear fixture".into())?;
    ensure(lines.len() >= 3, || "too few cone examples".into())?;
    Ok(lines.join("; "))
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Outcome {
    let lie_only = SeriesOptions {
        search_budget: None,
        ..SeriesOptions::default()
    };
    let mut lines = Vec::new();
    for (name, spec) in corpus() {
        let Some(n) = spec.n else { continue };
        if spec.gradings.range(2..n).next().is_none() {
            continue;
        }
        let report = essential_length(&spec.generators, n, spec.r as u64, &spec.gradings, &lie_only)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(report.degrees_agree, || format!("{name}: {:?}", report.degree_lengths))?;
        // direct recomputation per degree
        for (&k, mats) in spec.gradings.range(2..n) {
            let s = group_series_report(mats, &lie_only).map_err(|e| format!("{name} degree {k}: {e}"))?;
            ensure(s.derived_length == report.ell_ess, || {
                format!("{name}: degree {k} has ℓ = {}, degree 1 has {}", s.derived_length, report.ell_ess)
            })?;
        }
        let ks: Vec<usize> = report.degree_lengths.iter().map(|d| d.k).collect();
        lines.push(format!("{name}: ℓ = {} in degrees 1 and {ks:?}", report.ell_ess));
    }
    ensure(!lines.is_empty(), || "no graded corpus entries".into())?;
    Ok(lines.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("uniform exponent vs brute force", criterion_1),
        ("Kronecker classification agreement", criterion_2),
        ("Kolchin certification soundness", criterion_3),
        ("series lengths vs brute force", criterion_4),
        ("ℓ_ess ≤ n − 1 on the corpus", criterion_5),
        ("Robinson inequality", criterion_6),
        ("power-scaling and conjugation invariance", criterion_7),
        ("boundedness equivalence on random cone maps", criterion_8),
        ("finite-image pipeline", criterion_9),
        ("cross-degree consistency", criterion_10),
    ];
    let mut failures = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {title}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {:>2}: {title}: {why}", i + 1);
            }
        }
    }
    // the analysis status of every bundled document, for the record
    let statuses: Vec<Status> = corpus()
        .iter()
        .map(|(_, s)| run_analyze(s, &AnalysisOptions::default()).status)
        .collect();
    let all_ok = statuses.iter().all(|s| s.is_ok());
    println!(
        "corpus analysis: {} documents, {}",
        statuses.len(),
        if all_ok { "all as declared" } else { "unexpected status present" }
    );
    if failures > 0 || !all_ok {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
