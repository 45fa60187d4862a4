//! Randomized self-checks for every identity the library relies on.
//!
//! Each check builds its own seeded inputs, measures the worst residual
//! against a pinned tolerance, and reports a [`CheckResult`]. The checks are
//! grouped into four suites — `axioms` (properties of the effect
//! decomposition), `matching` (lossless reconstruction), `theorems`
//! (attribution dual routes and the sparsity bounds), and `lemmas`
//! (supporting identities) — so a caller can re-run any slice of the
//! evidence on demand.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attribution::{
    shapley_interaction_definitional, shapley_interaction_from_effects,
    shapley_taylor_definitional, shapley_taylor_from_effects, shapley_values_definitional,
    shapley_values_from_effects,
};
use crate::game_oracle::{random_table, ValueTable};
use crate::interaction::{
    conditional_interaction, harsanyi_dividends, harsanyi_single_naive, reconstruction_report,
    InteractionTable,
};
use crate::sparsity::{
    coefficient_matrix_determinant, concept_count_bound, count_valid_concepts,
    decompose_order_sums, fit_min_growth_exponent, order_average_outputs, order_sums, select_tau,
    verify_order_mean_identity,
};
use crate::subset_algebra::SubsetMask;
use crate::synth::{
    analytic_effect, planted_game, random_monotone_planted_game, random_polynomial_game, Concept,
};

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Largest residual observed, in the units named by `detail`.
    pub worst_residual: f64,
    /// Tolerance the residual was held against.
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, worst: f64, tol: f64, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: worst <= tol,
            worst_residual: worst,
            tolerance: tol,
            detail: detail.into(),
        }
    }
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

/// Shared knobs for a suite run. `n` and `trials` replace each check's
/// defaults when set; randomized checks stay deterministic for a fixed seed.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Player count override; checks otherwise pick their own sizes.
    pub n: Option<u32>,
    /// Repetition override per randomized check.
    pub trials: Option<usize>,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        SuiteConfig {
            seed,
            n: None,
            trials: None,
        }
    }

    fn sizes(&self, defaults: &[u32]) -> Vec<u32> {
        match self.n {
            Some(n) => vec![n],
            None => defaults.to_vec(),
        }
    }

    fn size(&self, default: u32) -> u32 {
        self.n.unwrap_or(default)
    }

    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }
}

/// One RNG per check so the suites stay reproducible regardless of ordering.
fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

// ── Axiom suite ─────────────────────────────────────────────────────────────

/// Properties of the effect decomposition itself: efficiency, linearity,
/// dummy players, symmetry, relabeling, the recursive split, and exact
/// recovery of a planted conjunction.
pub fn axiom_checks(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        check_efficiency(cfg),
        check_linearity(cfg),
        check_dummy_player(cfg),
        check_symmetry(cfg),
        check_relabeling(cfg),
        check_recursive_split(cfg),
        check_conjunction_recovery(cfg),
    ]
}

fn check_efficiency(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 1);
    let mut worst = 0.0f64;
    for n in cfg.sizes(&[3, 5, 8]) {
        for _ in 0..cfg.trials(5) {
            let table = random_table(n, &mut rng).unwrap();
            let ints = harsanyi_dividends(&table);
            let total: f64 = (0..ints.len()).map(|i| ints.effect_at(i)).sum();
            let grand = table.value_at(table.len() - 1) - table.baseline();
            let phi = shapley_values_from_effects(&ints);
            let phi_total: f64 = phi.phi.iter().sum();
            let scale = table.scale();
            worst = worst
                .max((total - grand).abs() / scale)
                .max((phi_total - grand).abs() / scale);
        }
    }
    CheckResult::new(
        "efficiency",
        worst,
        1e-12,
        "effects and per-player scores both sum to the grand-coalition utility",
    )
}

fn check_linearity(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 2);
    let n = cfg.size(7);
    let (alpha, beta) = (0.7, -1.3);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(5) {
        let v = random_table(n, &mut rng).unwrap();
        let w = random_table(n, &mut rng).unwrap();
        let mixed = ValueTable::from_values(
            n,
            (0..v.len())
                .map(|i| alpha * v.value_at(i) + beta * w.value_at(i))
                .collect(),
        )
        .unwrap();
        let iv = harsanyi_dividends(&v);
        let iw = harsanyi_dividends(&w);
        let im = harsanyi_dividends(&mixed);
        let scale = im.scale();
        for i in 0..im.len() {
            let expected = alpha * iv.effect_at(i) + beta * iw.effect_at(i);
            worst = worst.max((im.effect_at(i) - expected).abs() / scale);
        }
    }
    CheckResult::new(
        "linearity",
        worst,
        1e-12,
        "effects of a linear mix equal the mix of effects",
    )
}

fn check_dummy_player(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 3);
    let n = cfg.size(7).max(2);
    let dummy = n - 1;
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(5) {
        let c: f64 = rng.gen_range(-2.0..2.0);
        let inner = random_table(n - 1, &mut rng).unwrap();
        // Player `dummy` always contributes exactly c, independent of context.
        let table = ValueTable::from_values(
            n,
            (0..1u32 << n)
                .map(|mask| {
                    let rest = (mask & !(1 << dummy)) as usize;
                    inner.value_at(rest) + if mask >> dummy & 1 == 1 { c } else { 0.0 }
                })
                .collect(),
        )
        .unwrap();
        let ints = harsanyi_dividends(&table);
        let scale = table.scale();
        for mask in 0..1u32 << n {
            if mask >> dummy & 1 == 0 {
                continue;
            }
            let expected = if mask == 1 << dummy { c } else { 0.0 };
            worst = worst.max((ints.effect_at(mask as usize) - expected).abs() / scale);
        }
    }
    CheckResult::new(
        "dummy_player",
        worst,
        1e-12,
        "a context-free contributor keeps its own effect and joins no interaction",
    )
}

/// Swap players 0 and 1 in a mask.
fn swap01(mask: u32) -> u32 {
    (mask & !0b11) | (mask & 1) << 1 | (mask >> 1 & 1)
}

fn check_symmetry(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 4);
    let n = cfg.size(7).max(2);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(5) {
        let g = random_table(n, &mut rng).unwrap();
        // Force symmetry in players 0 and 1 by evaluating at a canonical mask.
        let table = ValueTable::from_values(
            n,
            (0..1u32 << n)
                .map(|mask| g.value_at(mask.min(swap01(mask)) as usize))
                .collect(),
        )
        .unwrap();
        let ints = harsanyi_dividends(&table);
        let scale = ints.scale();
        for mask in 0..1u32 << n {
            let diff = ints.effect_at(mask as usize) - ints.effect_at(swap01(mask) as usize);
            worst = worst.max(diff.abs() / scale);
        }
    }
    CheckResult::new(
        "symmetry",
        worst,
        1e-12,
        "interchangeable players receive mirrored effects",
    )
}

fn check_relabeling(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 5);
    let n = cfg.size(7);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(5) {
        let table = random_table(n, &mut rng).unwrap();
        // Random permutation via Fisher-Yates.
        let mut perm: Vec<u32> = (0..n).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let permute = |mask: u32| -> u32 {
            (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .fold(0, |acc, i| acc | 1 << perm[i as usize])
        };
        let mut relabeled = vec![0.0; table.len()];
        for mask in 0..table.len() as u32 {
            relabeled[permute(mask) as usize] = table.value_at(mask as usize);
        }
        let ints = harsanyi_dividends(&table);
        let rints = harsanyi_dividends(&ValueTable::from_values(n, relabeled).unwrap());
        let scale = ints.scale();
        for mask in 0..table.len() as u32 {
            let diff = rints.effect_at(permute(mask) as usize) - ints.effect_at(mask as usize);
            worst = worst.max(diff.abs() / scale);
        }
    }
    CheckResult::new(
        "relabeling",
        worst,
        1e-12,
        "renaming players renames effects and changes nothing else",
    )
}

fn check_recursive_split(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 6);
    let n = cfg.size(7);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(3) {
        let table = random_table(n, &mut rng).unwrap();
        let ints = harsanyi_dividends(&table);
        let scale = ints.scale();
        for mask in 0..1u32 << n {
            let s = SubsetMask::new(mask, n).unwrap();
            for i in 0..n {
                if s.contains(i) {
                    continue;
                }
                let cond = conditional_interaction(&table, s, i).unwrap();
                let joined = ints.effect(s.with(i).unwrap());
                let diff = joined - (cond - ints.effect(s));
                worst = worst.max(diff.abs() / scale);
            }
        }
    }
    CheckResult::new(
        "recursive_split",
        worst,
        1e-12,
        "the effect of S+i is the conditioned effect minus the effect of S",
    )
}

fn check_conjunction_recovery(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 7);
    let n = cfg.size(8);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(5) {
        let target: u32 = rng.gen_range(1..1u32 << n);
        let c: f64 = rng.gen_range(0.5..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let table = ValueTable::from_values(
            n,
            (0..1u32 << n)
                .map(|mask| if mask & target == target { c } else { 0.0 })
                .collect(),
        )
        .unwrap();
        let ints = harsanyi_dividends(&table);
        for mask in 0..1u32 << n {
            let expected = if mask == target { c } else { 0.0 };
            worst = worst.max((ints.effect_at(mask as usize) - expected).abs() / c.abs());
        }
    }
    CheckResult::new(
        "conjunction_recovery",
        worst,
        1e-12,
        "an AND of players is detected as exactly one effect",
    )
}

// ── Matching suite ──────────────────────────────────────────────────────────

/// Lossless-decomposition checks: effects rebuild every output bit-tightly,
/// the fast sweep agrees with the direct alternating sum, and applying
/// decompose–rebuild twice is idempotent.
pub fn matching_checks(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        check_reconstruction(cfg),
        check_direct_sum_agreement(cfg),
        check_idempotence(cfg),
    ]
}

fn check_reconstruction(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 10);
    let sizes = match cfg.n {
        Some(n) => vec![n],
        None => (2..=10).collect(),
    };
    let mut worst = 0.0f64;
    let mut worst_detail = String::from("no residual");
    for n in sizes {
        for _ in 0..cfg.trials(1) {
            let table = random_table(n, &mut rng).unwrap();
            let report = crate::interaction::verify_reconstruction(&table, 1e-12);
            let rel = report.max_abs_residual / report.scale;
            if rel > worst {
                worst = rel;
                worst_detail = format!("worst at n={n}, mask {:#b}", report.worst_mask);
            }
        }
    }
    CheckResult::new("reconstruction", worst, 1e-12, worst_detail)
}

fn check_direct_sum_agreement(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 11);
    let n = cfg.size(9);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(3) {
        let table = random_table(n, &mut rng).unwrap();
        let ints = harsanyi_dividends(&table);
        let scale = ints.scale();
        for _ in 0..50 {
            let mask = SubsetMask::new(rng.gen_range(0..1u32 << n), n).unwrap();
            let direct = harsanyi_single_naive(&table, mask);
            worst = worst.max((direct - ints.effect(mask)).abs() / scale);
        }
    }
    CheckResult::new(
        "direct_sum_agreement",
        worst,
        1e-12,
        "lattice sweep matches the per-coalition alternating sum",
    )
}

fn check_idempotence(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 12);
    let mut worst = 0.0f64;
    for n in cfg.sizes(&[4, 7, 10]) {
        for _ in 0..cfg.trials(1) {
            let table = random_table(n, &mut rng).unwrap();
            let ints = harsanyi_dividends(&table);
            let rebuilt = ValueTable::new(ints.reconstruct_all());
            let again = harsanyi_dividends(&rebuilt);
            let scale = ints.scale();
            for i in 0..ints.len() {
                worst = worst.max((again.effect_at(i) - ints.effect_at(i)).abs() / scale);
            }
        }
    }
    CheckResult::new(
        "idempotence",
        worst,
        1e-12,
        "decompose-rebuild-decompose returns the same effects",
    )
}

/// Check a user-supplied table/effects pair: do the stored effects rebuild
/// the stored outputs? The detail names the worst coalition.
pub fn matching_file_check(
    table: &ValueTable,
    interactions: &InteractionTable,
    rel_tol: f64,
) -> crate::error::Result<CheckResult> {
    if table.n() != interactions.n() {
        return Err(crate::error::Error::precondition(format!(
            "outputs are for n={} players but effects are for n={}",
            table.n(),
            interactions.n()
        )));
    }
    let report = reconstruction_report(table, interactions, rel_tol);
    Ok(CheckResult::new(
        "supplied_pair_reconstruction",
        report.max_abs_residual / report.scale,
        rel_tol,
        format!("worst residual at mask {:#b}", report.worst_mask),
    ))
}

// ── Theorem suite ───────────────────────────────────────────────────────────

/// Attribution dual routes (per-player, per-coalition, capped-order) plus the
/// head decomposition and concept-count bounds on monotone planted games.
pub fn theorem_checks(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        check_per_player_dual_route(cfg),
        check_pairwise_dual_route(cfg),
        check_capped_dual_route(cfg),
        check_head_decomposition(cfg),
        check_count_bounds(cfg),
    ]
}

fn check_per_player_dual_route(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 20);
    let mut worst = 0.0f64;
    for n in cfg.sizes(&[4, 6, 8]) {
        for _ in 0..cfg.trials(3) {
            let table = random_table(n, &mut rng).unwrap();
            let ints = harsanyi_dividends(&table);
            let a = shapley_values_definitional(&table);
            let b = shapley_values_from_effects(&ints);
            let scale = table.scale();
            for i in 0..n as usize {
                worst = worst.max((a.phi[i] - b.phi[i]).abs() / scale);
            }
        }
    }
    CheckResult::new(
        "per_player_dual_route",
        worst,
        1e-9,
        "size-stratified averaging equals the effect-sharing route",
    )
}

fn check_pairwise_dual_route(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 21);
    let n = cfg.size(7);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(2) {
        let table = random_table(n, &mut rng).unwrap();
        let ints = harsanyi_dividends(&table);
        let scale = table.scale();
        for mask in 1..1u32 << n {
            if mask.count_ones() > 3 {
                continue;
            }
            let t = SubsetMask::new(mask, n).unwrap();
            let a = shapley_interaction_definitional(&table, t).unwrap();
            let b = shapley_interaction_from_effects(&ints, t).unwrap();
            worst = worst.max((a - b).abs() / scale);
        }
    }
    CheckResult::new(
        "coalition_dual_route",
        worst,
        1e-9,
        "discrete-derivative averaging equals the effect-sharing route (|T| <= 3)",
    )
}

fn check_capped_dual_route(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 22);
    let n = cfg.size(6);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(2) {
        let table = random_table(n, &mut rng).unwrap();
        let ints = harsanyi_dividends(&table);
        let grand = table.value_at(table.len() - 1) - table.baseline();
        let scale = table.scale();
        for k in 1..=n {
            let mut total = 0.0;
            for mask in 0..1u32 << n {
                if mask.count_ones() > k || mask == 0 {
                    continue;
                }
                let t = SubsetMask::new(mask, n).unwrap();
                let a = shapley_taylor_definitional(&table, t, k).unwrap();
                let b = shapley_taylor_from_effects(&ints, t, k).unwrap();
                worst = worst.max((a - b).abs() / scale);
                total += a;
            }
            // The capped attribution must still spend the whole grand utility.
            worst = worst.max((total - grand).abs() / scale);
        }
    }
    CheckResult::new(
        "capped_dual_route",
        worst,
        1e-9,
        "capped-order attribution: dual routes agree and sum to the grand utility",
    )
}

/// Monotone planted fixture sized to the available masks.
fn monotone_fixture(rng: &mut ChaCha8Rng, n: u32) -> (crate::synth::GameSpec, ValueTable) {
    let concepts = 6.min((1usize << n) - 1);
    let spec = random_monotone_planted_game(n, concepts, 4.min(n), rng).unwrap();
    let table =
        ValueTable::from_values(n, (0..1u32 << n).map(|m| spec.evaluate(m)).collect()).unwrap();
    (spec, table)
}

/// Singleton-dominated monotone game. Its size profile is close to linear,
/// so the fitted growth exponent stays below 2 and digit capacity is a
/// single base-`n` digit — the first-order sum (always exactly `n` after
/// scaling) must then spill into a head term. Used to exercise the head
/// bound on a game where a head provably forms.
fn dense_fixture(rng: &mut ChaCha8Rng, n: u32) -> ValueTable {
    let mut concepts: Vec<Concept> = (0..n)
        .map(|i| Concept {
            mask: 1 << i,
            coeff: rng.gen_range(0.8..1.2),
        })
        .collect();
    let pairs = crate::subset_algebra::binomial(n, 2).unwrap_or(0).min(n as u64 + 2);
    let mut seen = std::collections::HashSet::new();
    while (seen.len() as u64) < pairs {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let mask = (1u32 << a) | (1 << b);
        if seen.insert(mask) {
            concepts.push(Concept {
                mask,
                coeff: rng.gen_range(0.8..1.2),
            });
        }
    }
    let spec = planted_game(n, 0.0, concepts).unwrap();
    ValueTable::from_values(n, (0..1u32 << n).map(|m| spec.evaluate(m)).collect()).unwrap()
}

fn check_head_decomposition(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 23);
    let n = cfg.size(10);
    let cap = 4.min(n);
    let mut worst = 0.0f64;
    let mut heads = 0usize;
    let mut detail = String::new();
    for game in 0..cfg.trials(8) {
        // Alternate between the generic monotone corpus (heads optional) and
        // the singleton-dominated one (a head must form).
        let dense = game % 2 == 1;
        let table = if dense {
            dense_fixture(&mut rng, n)
        } else {
            monotone_fixture(&mut rng, n).1
        };
        let ints = harsanyi_dividends(&table);
        let sums = order_sums(&ints);
        let profile = order_average_outputs(&table);
        let Some(p) = fit_min_growth_exponent(&profile) else {
            worst = f64::INFINITY;
            detail = format!("game {game}: no feasible growth exponent");
            break;
        };
        let d = decompose_order_sums(&sums, &profile, p, cap).unwrap();
        for term in &d.orders {
            worst = worst.max(term.residual);
            worst = worst.max(term.head_coeff.abs() - 1.0);
            worst = worst.max(term.digits[0].abs() - n as f64);
            for digit in &term.digits[1..] {
                worst = worst.max(digit.abs() - (n - 1) as f64);
            }
        }
        match &d.head {
            Some(head) => {
                heads += 1;
                match head.excess_bound {
                    Some(bound) => worst = worst.max(head.excess - bound),
                    None => {
                        worst = f64::INFINITY;
                        detail = format!("game {game}: no excess bound at fitted exponent");
                    }
                }
            }
            None if dense => {
                worst = f64::INFINITY;
                detail = format!("game {game}: singleton-dominated game formed no head term");
            }
            None => {}
        }
    }
    if detail.is_empty() {
        detail = format!("all rows rebuilt within tolerance; {heads} head terms bounded");
    }
    CheckResult::new("head_decomposition", worst, 1e-9, detail)
}

fn check_count_bounds(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 24);
    let n = cfg.size(10);
    let cap = 4.min(n);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(8) {
        let (_, table) = monotone_fixture(&mut rng, n);
        let ints = harsanyi_dividends(&table);
        let sums = order_sums(&ints);
        let profile = order_average_outputs(&table);
        let p = fit_min_growth_exponent(&profile).unwrap();
        let d = decompose_order_sums(&sums, &profile, p, cap).unwrap();
        let tau = select_tau(&table).unwrap();
        let counts = count_valid_concepts(&ints, tau).unwrap();
        for k in 1..=cap {
            let row = concept_count_bound(&d, &sums, &counts, tau, k).unwrap();
            if let Some(bound) = row.bound {
                worst = worst.max((row.count as f64 - bound) / bound.max(1.0));
            }
        }
    }
    CheckResult::new(
        "count_bounds",
        worst,
        1e-9,
        "above-threshold effect counts never exceed the per-order cap",
    )
}

// ── Lemma suite ─────────────────────────────────────────────────────────────

/// Supporting identities: closed-form effects of polynomial games, vanishing
/// above the top degree, the order-mean identity, and the coefficient-matrix
/// determinant.
pub fn lemma_checks(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        check_polynomial_effects(cfg),
        check_degree_vanishing(cfg),
        check_order_mean_identity(cfg),
        check_determinant_grid(),
    ]
}

fn polynomial_fixture(rng: &mut ChaCha8Rng, n: u32) -> (crate::synth::GameSpec, ValueTable) {
    let spec = random_polynomial_game(n, 6, 4, rng).unwrap();
    let table =
        ValueTable::from_values(n, (0..1u32 << n).map(|m| spec.evaluate(m)).collect()).unwrap();
    (spec, table)
}

fn check_polynomial_effects(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 30);
    let n = cfg.size(8);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(5) {
        let (spec, table) = polynomial_fixture(&mut rng, n);
        let ints = harsanyi_dividends(&table);
        let scale = ints.scale();
        for mask in 0..1u32 << n {
            let m = SubsetMask::new(mask, n).unwrap();
            let analytic = analytic_effect(&spec, m).unwrap();
            worst = worst.max((ints.effect(m) - analytic).abs() / scale);
        }
    }
    CheckResult::new(
        "polynomial_effects",
        worst,
        1e-9,
        "lattice effects match the closed form for product terms",
    )
}

fn check_degree_vanishing(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 31);
    let n = cfg.size(8);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials(5) {
        let (spec, table) = polynomial_fixture(&mut rng, n);
        let crate::synth::GameKind::Polynomial { terms, .. } = &spec.kind else {
            unreachable!()
        };
        let top = terms.iter().map(|t| t.total_degree()).max().unwrap();
        let ints = harsanyi_dividends(&table);
        let scale = ints.scale();
        for mask in 0..1u32 << n {
            if mask.count_ones() > top {
                worst = worst.max(ints.effect_at(mask as usize).abs() / scale);
            }
        }
    }
    CheckResult::new(
        "degree_vanishing",
        worst,
        1e-9,
        "no effect survives above the top total degree",
    )
}

fn check_order_mean_identity(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = rng_for(cfg.seed, 32);
    let sizes = match cfg.n {
        Some(n) => vec![n],
        None => (4..=9).collect(),
    };
    let mut worst = 0.0f64;
    for n in sizes {
        for _ in 0..cfg.trials(1) {
            let table = random_table(n, &mut rng).unwrap();
            let ints = harsanyi_dividends(&table);
            let report =
                verify_order_mean_identity(&order_average_outputs(&table), &order_sums(&ints), n);
            worst = worst.max(report.max_residual / report.scale);
        }
    }
    CheckResult::new(
        "order_mean_identity",
        worst,
        1e-9,
        "size averages equal the binomially weighted per-order sums",
    )
}

fn check_determinant_grid() -> CheckResult {
    let mut worst = 0.0f64;
    for n in 2..=16u32 {
        for cap in 1..n.min(7) {
            let check = coefficient_matrix_determinant(n, cap).unwrap();
            worst = worst.max(check.relative_error);
        }
    }
    CheckResult::new(
        "determinant_closed_form",
        worst,
        1e-9,
        "coefficient-matrix determinant matches 1 / prod C(n,k)",
    )
}

// ── Suite dispatch ──────────────────────────────────────────────────────────

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 5] = ["axioms", "matching", "theorems", "lemmas", "all"];

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> crate::error::Result<Vec<CheckResult>> {
    match name {
        "axioms" => Ok(axiom_checks(cfg)),
        "matching" => Ok(matching_checks(cfg)),
        "theorems" => Ok(theorem_checks(cfg)),
        "lemmas" => Ok(lemma_checks(cfg)),
        "all" => {
            let mut out = axiom_checks(cfg);
            out.extend(matching_checks(cfg));
            out.extend(theorem_checks(cfg));
            out.extend(lemma_checks(cfg));
            Ok(out)
        }
        other => Err(crate::error::Error::precondition(format!(
            "unknown suite {other:?}; expected one of {SUITES:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset_algebra::LatticeArray;

    #[test]
    fn every_suite_passes() {
        let cfg = SuiteConfig::new(2024);
        for suite in ["axioms", "matching", "theorems", "lemmas"] {
            let results = run_suite(suite, &cfg).unwrap();
            for r in &results {
                assert!(
                    r.pass,
                    "{suite}/{}: residual {} exceeds {} ({})",
                    r.name, r.worst_residual, r.tolerance, r.detail
                );
            }
        }
    }

    #[test]
    fn all_suite_concatenates() {
        let all = run_suite("all", &SuiteConfig::new(7)).unwrap();
        assert_eq!(all.len(), 7 + 3 + 5 + 4);
        assert!(all_pass(&all));
    }

    #[test]
    fn suites_are_seed_stable() {
        let a = run_suite("axioms", &SuiteConfig::new(42)).unwrap();
        let b = run_suite("axioms", &SuiteConfig::new(42)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.worst_residual, y.worst_residual);
        }
    }

    #[test]
    fn overrides_apply_to_every_suite() {
        let cfg = SuiteConfig {
            seed: 5,
            n: Some(5),
            trials: Some(2),
        };
        let all = run_suite("all", &cfg).unwrap();
        assert!(all_pass(&all), "{all:?}");
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("bogus", &SuiteConfig::new(0)).is_err());
    }

    #[test]
    fn supplied_pair_check_reports_worst_mask() {
        let mut rng = rng_for(99, 0);
        let table = random_table(5, &mut rng).unwrap();
        let ints = harsanyi_dividends(&table);
        let ok = matching_file_check(&table, &ints, 1e-9).unwrap();
        assert!(ok.pass);

        let mut broken = ints.effects().clone().into_vec();
        broken[0b10110] += 0.5;
        let bad = InteractionTable::new(
            LatticeArray::new(5, broken).unwrap(),
            ints.baseline(),
        )
        .unwrap();
        let fail = matching_file_check(&table, &bad, 1e-9).unwrap();
        assert!(!fail.pass);
        assert!(fail.detail.contains("0b10110"), "{}", fail.detail);

        let other = random_table(4, &mut rng).unwrap();
        let other_ints = harsanyi_dividends(&other);
        assert!(matching_file_check(&table, &other_ints, 1e-9).is_err());
    }
}
