//! Acceptance gate: one test per release criterion, each printing a
//! `[acceptance]` verdict line (visible with `--nocapture`). Tolerances and
//! corpus sizes are pinned here on purpose — loosening them is a release
//! decision, not a refactor.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use harsanyi_core::attribution::{
    shapley_interaction_definitional, shapley_interaction_from_effects,
    shapley_taylor_definitional, shapley_taylor_from_effects, shapley_values_definitional,
    shapley_values_from_effects,
};
use harsanyi_core::game_oracle::{random_table, OracleDescriptor, ValueTable};
use harsanyi_core::interaction::{harsanyi_single_naive, verify_reconstruction};
use harsanyi_core::sparsity::{
    check_weak_monotonicity, coefficient_matrix_determinant, concept_count_bound,
    count_valid_concepts, decompose_order_sums, fit_min_growth_exponent, normalized_strength_curve,
    order_average_outputs, order_sums, select_tau, verify_order_mean_identity,
};
use harsanyi_core::subset_algebra::{submasks, SubsetMask};
use harsanyi_core::synth::{
    self, noisy_game, or_game, parity_game, planted_game, random_monotone_planted_game,
    random_planted_game, random_polynomial_game, Concept, GameKind, GameSpec,
};
use harsanyi_core::verify::{axiom_checks, SuiteConfig};
use harsanyi_core::harsanyi_dividends;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tabulate_spec(spec: GameSpec) -> ValueTable {
    OracleDescriptor::Synthetic { spec }.tabulate().unwrap()
}

fn report(id: u32, label: &str, evidence: String) {
    println!("[acceptance] criterion {id} {label}: PASS ({evidence})");
}

/// Every coalition's output is the sum of its sub-coalition effects.
#[test]
fn criterion_01_universal_matching() {
    const TABLES: usize = 100;
    const N: u32 = 8;
    const REL_TOL: f64 = 1e-9;
    const BUDGET: Duration = Duration::from_secs(5);

    let start = Instant::now();
    let mut rng = rng(101);
    let mut worst = 0.0f64;
    for _ in 0..TABLES {
        let table = random_table(N, &mut rng).unwrap();
        let r = verify_reconstruction(&table, REL_TOL);
        assert!(
            r.pass,
            "residual {} at mask {:#b} exceeds {REL_TOL}*scale",
            r.max_abs_residual, r.worst_mask
        );
        worst = worst.max(r.max_abs_residual / r.scale);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}, budget {BUDGET:?}");
    report(
        1,
        "universal matching",
        format!("{TABLES} tables at n={N}, worst residual {worst:.3e}, {elapsed:?}"),
    );
}

/// The lattice sweep agrees with the per-mask alternating sum.
#[test]
fn criterion_02_transform_equivalence() {
    const TABLES: usize = 20;
    const N: u32 = 12;
    const REL_TOL: f64 = 1e-12;
    const BUDGET: Duration = Duration::from_secs(30);

    let start = Instant::now();
    let mut rng = rng(202);
    let mut worst = 0.0f64;
    for _ in 0..TABLES {
        let table = random_table(N, &mut rng).unwrap();
        let ints = harsanyi_dividends(&table);
        let scale = ints.scale();
        for mask in 0..1u32 << N {
            let m = SubsetMask::new(mask, N).unwrap();
            let naive = harsanyi_single_naive(&table, m);
            let diff = (naive - ints.effect(m)).abs() / scale;
            assert!(diff <= REL_TOL, "mask {mask:#b}: relative gap {diff}");
            worst = worst.max(diff);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}, budget {BUDGET:?}");
    report(
        2,
        "transform equivalence",
        format!("{TABLES} tables at n={N}, worst gap {worst:.3e}, {elapsed:?}"),
    );
}

/// Definitional and effect-sharing routes agree for the per-player score,
/// the coalition index, and the capped index, with every cutoff branch hit.
#[test]
fn criterion_03_dual_route_equality() {
    const TABLES: usize = 50;
    const N: u32 = 8;
    const MAX_TARGET: u32 = 4;
    const REL_TOL: f64 = 1e-9;
    const BUDGET: Duration = Duration::from_secs(120);

    let start = Instant::now();
    let mut rng = rng(303);
    let mut worst = 0.0f64;
    let (mut below, mut equal, mut above) = (0u64, 0u64, 0u64);
    for _ in 0..TABLES {
        let table = random_table(N, &mut rng).unwrap();
        let ints = harsanyi_dividends(&table);
        let scale = table.scale();
        let a = shapley_values_definitional(&table);
        let b = shapley_values_from_effects(&ints);
        for i in 0..N as usize {
            worst = worst.max((a.phi[i] - b.phi[i]).abs() / scale);
        }
        for mask in 1..1u32 << N {
            if mask.count_ones() > MAX_TARGET {
                continue;
            }
            let t = SubsetMask::new(mask, N).unwrap();
            let pair = (
                shapley_interaction_definitional(&table, t).unwrap(),
                shapley_interaction_from_effects(&ints, t).unwrap(),
            );
            worst = worst.max((pair.0 - pair.1).abs() / scale);
            for k in 1..=MAX_TARGET {
                match t.order().cmp(&k) {
                    std::cmp::Ordering::Less => below += 1,
                    std::cmp::Ordering::Equal => equal += 1,
                    std::cmp::Ordering::Greater => above += 1,
                }
                let capped = (
                    shapley_taylor_definitional(&table, t, k).unwrap(),
                    shapley_taylor_from_effects(&ints, t, k).unwrap(),
                );
                worst = worst.max((capped.0 - capped.1).abs() / scale);
            }
        }
        assert!(worst <= REL_TOL, "route gap {worst} exceeds {REL_TOL}*scale");
    }
    assert!(below > 0 && equal > 0 && above > 0, "cutoff branches: <{below} ={equal} >{above}");
    let elapsed = start.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}, budget {BUDGET:?}");
    report(
        3,
        "dual-route equality",
        format!(
            "{TABLES} tables at n={N}, worst gap {worst:.3e}, cutoff branches {below}/{equal}/{above}, {elapsed:?}"
        ),
    );
}

/// All seven decomposition properties hold; conjunction recovery is exact.
#[test]
fn criterion_04_axiom_suite() {
    let results = axiom_checks(&SuiteConfig::new(404));
    assert_eq!(results.len(), 7);
    for r in &results {
        assert!(
            r.pass,
            "axiom check {} failed: residual {} vs {} ({})",
            r.name, r.worst_residual, r.tolerance, r.detail
        );
    }
    let worst = results
        .iter()
        .map(|r| r.worst_residual)
        .fold(0.0f64, f64::max);
    report(
        4,
        "axiom suite",
        format!("7/7 checks, worst residual {worst:.3e}"),
    );
}

/// Product-term games: closed-form effects match the lattice, and nothing
/// survives above the top total degree.
#[test]
fn criterion_05_polynomial_closed_form() {
    const GAMES: usize = 50;
    const N: u32 = 8;
    const REL_TOL: f64 = 1e-10;

    let mut rng = rng(505);
    let mut worst_match = 0.0f64;
    let mut worst_tail = 0.0f64;
    for i in 0..GAMES {
        let max_degree = 1 + (i as u32) % 4;
        let spec = random_polynomial_game(N, 5, max_degree, &mut rng).unwrap();
        let GameKind::Polynomial { terms, .. } = &spec.kind else {
            unreachable!()
        };
        let top = terms.iter().map(|t| t.total_degree()).max().unwrap();
        let table = tabulate_spec(spec.clone());
        let ints = harsanyi_dividends(&table);
        let scale = ints.scale();
        for mask in 0..1u32 << N {
            let m = SubsetMask::new(mask, N).unwrap();
            let analytic = synth::analytic_effect(&spec, m).unwrap();
            let gap = (ints.effect(m) - analytic).abs() / scale;
            assert!(gap <= REL_TOL, "game {i} mask {mask:#b}: gap {gap}");
            worst_match = worst_match.max(gap);
            if mask.count_ones() > top {
                let tail = ints.effect(m).abs() / scale;
                assert!(tail <= REL_TOL, "game {i} mask {mask:#b}: stray effect {tail}");
                worst_tail = worst_tail.max(tail);
            }
        }
    }
    report(
        5,
        "polynomial closed form",
        format!("{GAMES} games at n={N}, worst match {worst_match:.3e}, worst tail {worst_tail:.3e}"),
    );
}

/// Size averages are binomially weighted per-order sums (full order cap).
#[test]
fn criterion_06_order_mean_identity() {
    const TABLES: usize = 100;
    const N: u32 = 8;
    const REL_TOL: f64 = 1e-9;

    let mut rng = rng(101); // identical corpus to criterion 1
    let mut worst = 0.0f64;
    for _ in 0..TABLES {
        let table = random_table(N, &mut rng).unwrap();
        let ints = harsanyi_dividends(&table);
        let r = verify_order_mean_identity(&order_average_outputs(&table), &order_sums(&ints), N);
        assert!(r.pass, "residual {} at m={} vs {REL_TOL}*scale", r.max_residual, r.worst_order);
        worst = worst.max(r.max_residual / r.scale);
    }
    report(
        6,
        "order-mean identity",
        format!("{TABLES} tables at n={N}, worst residual {worst:.3e}"),
    );
}

/// The coefficient-matrix determinant matches its closed form on the grid.
#[test]
fn criterion_07_determinant_closed_form() {
    const REL_TOL: f64 = 1e-9;
    let mut worst = 0.0f64;
    let mut cells = 0;
    for n in 4..=14u32 {
        for cap in 1..=6.min(n - 1) {
            let check = coefficient_matrix_determinant(n, cap).unwrap();
            assert!(
                check.relative_error <= REL_TOL,
                "n={n} cap={cap}: det {} vs {} (rel {})",
                check.determinant,
                check.expected,
                check.relative_error
            );
            worst = worst.max(check.relative_error);
            cells += 1;
        }
    }
    report(
        7,
        "determinant closed form",
        format!("{cells} grid cells (4<=n<=14), worst relative error {worst:.3e}"),
    );
}

fn monotone_corpus(seed: u64, games: usize, n: u32) -> Vec<ValueTable> {
    let mut rng = rng(seed);
    (0..games)
        .map(|_| tabulate_spec(random_monotone_planted_game(n, 8, 4, &mut rng).unwrap()))
        .collect()
}

/// All singletons plus a thin layer of pairs: the size profile is nearly
/// linear, so the fitted exponent stays below 2 and the first-order sum
/// (exactly `n` after scaling) must spill into a head term.
fn dense_corpus(seed: u64, games: usize, n: u32) -> Vec<ValueTable> {
    let mut rng = rng(seed);
    (0..games)
        .map(|_| {
            let mut concepts: Vec<Concept> = (0..n)
                .map(|i| Concept { mask: 1 << i, coeff: rng.gen_range(0.8..1.2) })
                .collect();
            let mut seen = std::collections::HashSet::new();
            while seen.len() < n as usize + 2 {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if a == b {
                    continue;
                }
                let mask = (1u32 << a) | (1 << b);
                if seen.insert(mask) {
                    concepts.push(Concept { mask, coeff: rng.gen_range(0.8..1.2) });
                }
            }
            tabulate_spec(planted_game(n, 0.0, concepts).unwrap())
        })
        .collect()
}

/// Per-order sums decompose into bounded digits plus a head term whose
/// exponent excess respects the growth-derived bound. The generic corpus may
/// or may not form heads; the singleton-dominated corpus must.
#[test]
fn criterion_08_head_decomposition() {
    const GAMES: usize = 30;
    const DENSE_GAMES: usize = 10;
    const N: u32 = 12;
    const ORDER_CAP: u32 = 4;
    const REL_TOL: f64 = 1e-9;

    let mut corpus = monotone_corpus(808, GAMES, N);
    corpus.extend(dense_corpus(818, DENSE_GAMES, N));
    let mut heads = 0usize;
    for (i, table) in corpus.iter().enumerate() {
        let dense = i >= GAMES;
        let ints = harsanyi_dividends(table);
        let sums = order_sums(&ints);
        let profile = order_average_outputs(table);
        let p = fit_min_growth_exponent(&profile)
            .unwrap_or_else(|| panic!("game {i}: no feasible growth exponent"));
        let d = decompose_order_sums(&sums, &profile, p, ORDER_CAP).unwrap();
        for term in &d.orders {
            assert!(term.residual <= REL_TOL, "game {i} order {}: residual {}", term.order, term.residual);
            assert!(term.head_coeff.abs() <= 1.0 + 1e-12);
            assert!(term.digits[0].abs() < N as f64);
            for digit in &term.digits[1..] {
                assert!(digit.abs() <= (N - 1) as f64 && digit.fract() == 0.0);
            }
        }
        if let Some(head) = &d.head {
            heads += 1;
            let bound = head
                .excess_bound
                .unwrap_or_else(|| panic!("game {i}: no excess bound at fitted exponent"));
            assert!(
                head.within_bound,
                "game {i}: excess {} exceeds bound {bound}",
                head.excess
            );
        } else {
            assert!(!dense, "game {i}: singleton-dominated game formed no head term");
        }
    }
    assert!(heads >= DENSE_GAMES, "only {heads} head terms formed");
    report(
        8,
        "head decomposition",
        format!(
            "{} planted games at n={N}, {heads} with head terms bounded, all rows within {REL_TOL}",
            GAMES + DENSE_GAMES
        ),
    );
}

/// Orders that survive cancellation never hold more above-threshold effects
/// than the head-decomposition cap allows.
#[test]
fn criterion_09_count_bound() {
    const GAMES: usize = 30;
    const N: u32 = 12;
    const ORDER_CAP: u32 = 4;

    let mut checked = 0usize;
    for (i, table) in monotone_corpus(808, GAMES, N).iter().enumerate() {
        let ints = harsanyi_dividends(table);
        let sums = order_sums(&ints);
        let profile = order_average_outputs(table);
        let p = fit_min_growth_exponent(&profile).unwrap();
        let d = decompose_order_sums(&sums, &profile, p, ORDER_CAP).unwrap();
        let tau = select_tau(table).unwrap();
        let counts = count_valid_concepts(&ints, tau).unwrap();
        for k in 1..=ORDER_CAP {
            if sums.net_ratio[k as usize].abs() <= 1.0 / N as f64 {
                continue;
            }
            let row = concept_count_bound(&d, &sums, &counts, tau, k).unwrap();
            assert_eq!(
                row.satisfied,
                Some(true),
                "game {i} order {k}: count {} exceeds bound {:?}",
                row.count,
                row.bound
            );
            checked += 1;
        }
    }
    assert!(checked > 0, "no order ever passed the net-ratio filter");
    report(
        9,
        "count bound",
        format!("{GAMES} games at n={N}, {checked} order bounds checked, zero violations"),
    );
}

/// A game with 30 planted concepts yields a strength curve with exactly 30
/// real entries; everything after them is float dust.
#[test]
fn criterion_10_strength_curve() {
    const N: u32 = 14;
    const CONCEPTS: usize = 30;
    const TAU: f64 = 1e-3;
    const GHOST: f64 = 1e-9;
    const BUDGET: Duration = Duration::from_secs(10);

    let start = Instant::now();
    let mut rng = rng(1010);
    let spec = random_planted_game(N, CONCEPTS, 1, 4, 0.5, 2.0, true, &mut rng).unwrap();
    let table = tabulate_spec(spec);
    let curve = normalized_strength_curve(&harsanyi_dividends(&table));
    let strong = curve.iter().filter(|c| c.strength > TAU).count();
    assert_eq!(strong, CONCEPTS, "expected exactly {CONCEPTS} salient entries");
    if let Some(ghost) = curve.get(CONCEPTS) {
        assert!(
            ghost.strength <= GHOST,
            "rank-31 strength {} is above the float-dust ceiling",
            ghost.strength
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}, budget {BUDGET:?}");
    report(
        10,
        "strength curve",
        format!(
            "n={N}, {strong} entries above {TAU}, rank-31 strength {:.3e}, {elapsed:?}",
            curve.get(CONCEPTS).map(|c| c.strength).unwrap_or(0.0)
        ),
    );
}

/// Direct alternating-sum effect of one coalition under a given spec.
fn spec_effect(spec: &GameSpec, mask: u32) -> f64 {
    let baseline = spec.evaluate(0);
    let order = mask.count_ones();
    submasks(mask)
        .map(|t| {
            let sign = if (order - t.count_ones()).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * (spec.evaluate(t) - baseline)
        })
        .sum()
}

/// Stress scenarios: noise floods every order at the predicted variance,
/// parity defeats the growth assumption, and an OR gate matches
/// inclusion-exclusion exactly.
#[test]
fn criterion_11_counterexample_scenarios() {
    const N: u32 = 10;
    const SIGMA: f64 = 0.1;
    const SEEDS: usize = 200;
    const FLOOR: f64 = 1e-6;

    // (a) noisy zero game: noise shows up at (almost) every coalition...
    let zero = planted_game(N, 0.0, Vec::new()).unwrap();
    let noisy = tabulate_spec(noisy_game(zero.clone(), SIGMA, 424_242).unwrap());
    let ints = harsanyi_dividends(&noisy);
    let loud = (1..ints.len())
        .filter(|&i| ints.effect_at(i).abs() > FLOOR)
        .count();
    let total = ints.len() - 1;
    assert!(
        loud * 10 >= total * 9,
        "only {loud}/{total} coalitions exceed {FLOOR}"
    );
    // ...and the per-coalition variance doubles with every added player.
    let mut var_evidence = Vec::new();
    for mask in [0b1u32, 0b11111, (1 << N) - 1] {
        let k = mask.count_ones();
        let samples: Vec<f64> = (0..SEEDS)
            .map(|s| {
                let spec = noisy_game(zero.clone(), SIGMA, 7000 + s as u64).unwrap();
                spec_effect(&spec, mask)
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / SEEDS as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (SEEDS - 1) as f64;
        let predicted = 2f64.powi(k as i32) * SIGMA * SIGMA;
        assert!(
            var >= predicted / 2.0 && var <= predicted * 2.0,
            "|S|={k}: sample variance {var} vs predicted {predicted}"
        );
        var_evidence.push(format!("|S|={k}: {var:.3}~{predicted:.3}"));
    }

    // (b) parity: growth assumption fails, every effect nonzero with
    // alternating sign and magnitude 2^|S| - 1, exactly.
    let parity = tabulate_spec(parity_game(N).unwrap());
    let verdict = check_weak_monotonicity(&order_average_outputs(&parity));
    assert!(!verdict.pass, "parity should defeat weak monotonicity");
    let pints = harsanyi_dividends(&parity);
    for mask in 1..1u32 << N {
        let k = mask.count_ones();
        let expected = if k % 2 == 1 { 1.0 } else { -1.0 } * (2f64.powi(k as i32) - 1.0);
        assert_eq!(pints.effect_at(mask as usize), expected, "mask {mask:#b}");
    }

    // (c) OR over 8 members: inclusion-exclusion closed form, exact.
    let members = 0xFFu32;
    let or = tabulate_spec(or_game(N, members, 1.0).unwrap());
    let oints = harsanyi_dividends(&or);
    let mut nonzero = 0usize;
    for mask in 1..1u32 << N {
        let e = oints.effect_at(mask as usize);
        if mask & !members == 0 {
            let k = mask.count_ones();
            let expected = if k % 2 == 1 { 1.0 } else { -1.0 };
            assert_eq!(e, expected, "member subset {mask:#b}");
            nonzero += 1;
        } else {
            assert_eq!(e, 0.0, "non-member coalition {mask:#b}");
        }
    }
    assert_eq!(nonzero, 255);

    report(
        11,
        "counterexample scenarios",
        format!(
            "noise {loud}/{total} loud, variances [{}]; parity 1023 exact signs; or_game 255 exact effects",
            var_evidence.join(", ")
        ),
    );
}

/// Byte-identical reruns for every subcommand, plus one negative control per
/// documented exit code.
#[test]
fn criterion_12_cli_determinism_and_exit_codes() {
    use std::process::Command;

    let bin = env!("CARGO_BIN_EXE_harsanyi");
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .env_remove("HARSANYI_MAX_N")
            .output()
            .unwrap()
    };
    let bytes = |name: &str| std::fs::read(dir.path().join(name)).unwrap();

    // synth twice with one seed: identical spec and table files.
    for round in ["a", "b"] {
        let out = run(&[
            "synth", "--kind", "planted", "--n", "10", "--seed", "7",
            "--concepts", "5", "--max-order", "3",
            "--spec-out", &path(&format!("spec_{round}.json")),
            "--table-out", &path(&format!("table_{round}.json")),
        ]);
        assert!(out.status.success(), "{out:?}");
    }
    assert_eq!(bytes("spec_a.json"), bytes("spec_b.json"));
    assert_eq!(bytes("table_a.json"), bytes("table_b.json"));

    // compute, sparsity, attribution, verify: rerun and compare bytes.
    for round in ["a", "b"] {
        let out = run(&[
            "compute", "--input", &path("table_a.json"),
            "--output", &path(&format!("effects_{round}.json")),
        ]);
        assert!(out.status.success(), "{out:?}");
        let out = run(&[
            "sparsity", "--input", &path("table_a.json"),
            "--output", &path(&format!("report_{round}.json")),
            "--csv", &path(&format!("curve_{round}.csv")),
        ]);
        assert!(out.status.success(), "{out:?}");
        let out = run(&[
            "attribution", "--input", &path("table_a.json"),
            "--target", "5", "--order", "2",
            "--output", &path(&format!("attr_{round}.json")),
        ]);
        assert!(out.status.success(), "{out:?}");
        let out = run(&[
            "verify", "--suite", "lemmas", "--seed", "3", "--trials", "1",
            "--output", &path(&format!("checks_{round}.json")),
        ]);
        assert!(out.status.success(), "{out:?}");
    }
    for file in ["effects", "report", "attr", "checks"] {
        assert_eq!(
            bytes(&format!("{file}_a.json")),
            bytes(&format!("{file}_b.json")),
            "{file} differs between reruns"
        );
    }
    assert_eq!(bytes("curve_a.csv"), bytes("curve_b.csv"));

    // Exit 2: malformed input, message naming the missing key.
    std::fs::write(dir.path().join("broken.json"), "{\"n\": 3}").unwrap();
    let out = run(&["compute", "--input", &path("broken.json"), "--output", &path("x.json")]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("format"), "stderr should name the offending key: {stderr}");

    // Exit 3: oracle process cannot start.
    let out = run(&[
        "compute", "--oracle-cmd", "definitely-not-a-real-binary-3f9c", "--n", "4",
        "--output", &path("x.json"),
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");

    // Exit 4: the all-zero game has no salience threshold.
    std::fs::write(
        dir.path().join("zero.json"),
        format!(
            "{{\"format\":\"harsanyi-vt/1\",\"n\":4,\"values\":[{}]}}",
            vec!["0.0"; 16].join(",")
        ),
    )
    .unwrap();
    let out = run(&["sparsity", "--input", &path("zero.json")]);
    assert_eq!(out.status.code(), Some(4), "{out:?}");

    // Exit 1: an effects file that does not rebuild its table, named mask.
    let effects_doc: serde_json::Value =
        serde_json::from_slice(&bytes("effects_a.json")).unwrap();
    let mut corrupted = effects_doc.clone();
    let entry = &mut corrupted["effects"][3];
    *entry = serde_json::json!(entry.as_f64().unwrap() + 0.5);
    std::fs::write(
        dir.path().join("corrupted.json"),
        serde_json::to_vec(&corrupted).unwrap(),
    )
    .unwrap();
    let out = run(&[
        "verify", "--suite", "matching", "--seed", "1", "--trials", "1",
        "--values", &path("table_a.json"),
        "--interactions", &path("corrupted.json"),
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("FAIL") && stdout.contains("mask 0b11"),
        "summary should name the worst mask: {stdout}"
    );

    report(
        12,
        "cli determinism and exit codes",
        "byte-identical reruns for all five subcommands; exit codes 1/2/3/4 reproduced".to_string(),
    );
}
