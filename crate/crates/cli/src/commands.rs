//! Subcommand implementations. Each returns the process exit code on
//! success; errors bubble up to the dispatcher, which maps them onto the
//! documented exit codes (2 input, 3 oracle, 4 degenerate game).

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use harsanyi_core::attribution::{
    shapley_interaction_definitional, shapley_interaction_from_effects,
    shapley_taylor_definitional, shapley_taylor_from_effects, shapley_values_definitional,
    shapley_values_from_effects,
};
use harsanyi_core::game_oracle::{
    load_value_table, save_value_table, OracleDescriptor, VALUE_TABLE_FORMAT,
};
use harsanyi_core::interaction::{load_interaction_table, save_interaction_table};
use harsanyi_core::jsonio;
use harsanyi_core::sparsity::{curve_to_csv, full_report};
use harsanyi_core::synth::{self, load_game_spec, save_game_spec, GameSpec, GAME_SPEC_FORMAT};
use harsanyi_core::verify::{matching_file_check, run_suite, SuiteConfig};
use harsanyi_core::{harsanyi_dividends, Error, Result, SubsetMask, ValueTable};

use crate::caps;
use crate::{
    AttributionArgs, ComputeArgs, OutputFormat, SparsityArgs, SynthArgs, SynthKind, VerifyArgs,
};

/// Load a game from a value-table or game-spec file; spec inputs are
/// tabulated. The `format` field decides which loader runs.
fn load_table_input(path: &Path, cap: u32) -> Result<ValueTable> {
    let tree = jsonio::read_json_file(path)?;
    let format = tree
        .get("format")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::format(Some(path), "missing \"format\" field"))?;
    match format {
        VALUE_TABLE_FORMAT => {
            let table = load_value_table(path)?;
            caps::check_cap(table.n(), cap)?;
            Ok(table)
        }
        GAME_SPEC_FORMAT => {
            let spec = load_game_spec(path)?;
            caps::check_cap(spec.n, cap)?;
            OracleDescriptor::Synthetic { spec }.tabulate()
        }
        other => Err(Error::format(
            Some(path),
            format!(
                "unrecognized format {other:?}; expected {VALUE_TABLE_FORMAT:?} or {GAME_SPEC_FORMAT:?}"
            ),
        )),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: Some(path.display().to_string()),
        source,
    })
}

/// Emit a document to `--output` when given, else to stdout.
fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ── compute ─────────────────────────────────────────────────────────────────

pub fn cmd_compute(args: &ComputeArgs, cap: u32) -> Result<i32> {
    let table = match (&args.input, &args.oracle_cmd) {
        (Some(path), None) => load_table_input(path, cap)?,
        (None, Some(cmdline)) => {
            let n = args
                .n
                .ok_or_else(|| Error::precondition("--n is required with --oracle-cmd"))?;
            caps::check_cap(n, cap)?;
            let command: Vec<String> = cmdline.split_whitespace().map(String::from).collect();
            if command.is_empty() {
                return Err(Error::precondition("--oracle-cmd is empty"));
            }
            OracleDescriptor::External { command, n }.tabulate()?
        }
        _ => {
            return Err(Error::precondition(
                "provide exactly one of --input or --oracle-cmd",
            ))
        }
    };
    let interactions = harsanyi_dividends(&table);
    save_interaction_table(&interactions, &args.output)?;
    let mut nonzero = 0usize;
    let mut max_abs = 0.0f64;
    for i in 0..interactions.len() {
        let e = interactions.effect_at(i).abs();
        if e > 1e-12 {
            nonzero += 1;
        }
        max_abs = max_abs.max(e);
    }
    println!(
        "wrote {}: n={}, {} effects above 1e-12, max |effect| = {}",
        args.output.display(),
        table.n(),
        nonzero,
        max_abs
    );
    Ok(0)
}

// ── sparsity ────────────────────────────────────────────────────────────────

pub fn cmd_sparsity(args: &SparsityArgs, cap: u32) -> Result<i32> {
    let table = load_table_input(&args.input, cap)?;
    let report = full_report(&table, args.p, args.tau, args.order_cap)?;
    if let Some(path) = &args.csv {
        write_text(path, &curve_to_csv(&report.curve))?;
    }
    let document = match args.format {
        OutputFormat::Json => jsonio::canonical_json_string(&report)?,
        OutputFormat::Csv => curve_to_csv(&report.curve),
    };
    emit(args.output.as_deref(), &document)?;
    if let Some(path) = &args.output {
        println!(
            "wrote {}: n={}, {} nonzero effects, decomposition {}",
            path.display(),
            report.n,
            report.nonzero_effects,
            report.decomposition_status
        );
    }
    Ok(0)
}

// ── attribution ─────────────────────────────────────────────────────────────

/// One quantity computed along both routes, with their absolute gap.
#[derive(Serialize)]
struct RouteValue {
    definitional: f64,
    effect_route: f64,
    delta: f64,
}

impl RouteValue {
    fn new(definitional: f64, effect_route: f64) -> Self {
        RouteValue {
            definitional,
            effect_route,
            delta: (definitional - effect_route).abs(),
        }
    }
}

#[derive(Serialize)]
struct TargetReport {
    mask: u32,
    order: u32,
    order_cutoff: u32,
    /// Pairwise-style index of the target coalition (no order cutoff).
    interaction_index: RouteValue,
    /// Capped-order index of the target at `order_cutoff`.
    capped_index: RouteValue,
}

#[derive(Serialize)]
struct AttributionReport {
    n: u32,
    /// Per-player scores, both routes.
    shapley: Vec<RouteValue>,
    target: Option<TargetReport>,
}

pub fn cmd_attribution(args: &AttributionArgs, cap: u32) -> Result<i32> {
    let table = load_table_input(&args.input, cap)?;
    let interactions = harsanyi_dividends(&table);
    let definitional = shapley_values_definitional(&table);
    let effect_route = shapley_values_from_effects(&interactions);
    let shapley = definitional
        .phi
        .iter()
        .zip(&effect_route.phi)
        .map(|(&a, &b)| RouteValue::new(a, b))
        .collect();
    let target = match args.target {
        Some(mask) => {
            let t = SubsetMask::new(mask, table.n())?;
            let cutoff = args.order.unwrap_or_else(|| t.order().max(1));
            let interaction_index = RouteValue::new(
                shapley_interaction_definitional(&table, t)?,
                shapley_interaction_from_effects(&interactions, t)?,
            );
            let capped_index = RouteValue::new(
                shapley_taylor_definitional(&table, t, cutoff)?,
                shapley_taylor_from_effects(&interactions, t, cutoff)?,
            );
            Some(TargetReport {
                mask,
                order: t.order(),
                order_cutoff: cutoff,
                interaction_index,
                capped_index,
            })
        }
        None => None,
    };
    let report = AttributionReport {
        n: table.n(),
        shapley,
        target,
    };
    emit(args.output.as_deref(), &jsonio::canonical_json_string(&report)?)?;
    Ok(0)
}

// ── verify ──────────────────────────────────────────────────────────────────

pub fn cmd_verify(args: &VerifyArgs, cap: u32) -> Result<i32> {
    if let Some(n) = args.n {
        if !(2..=12).contains(&n) {
            return Err(Error::precondition(format!(
                "--n must lie in 2..=12 for the exhaustive suites, got {n}"
            )));
        }
    }
    let cfg = SuiteConfig {
        seed: args.seed,
        n: args.n,
        trials: args.trials,
    };
    let mut results = run_suite(&args.suite, &cfg)?;
    if let (Some(values), Some(interactions)) = (&args.values, &args.interactions) {
        let table = load_value_table(values)?;
        caps::check_cap(table.n(), cap)?;
        let ints = load_interaction_table(interactions)?;
        results.push(matching_file_check(&table, &ints, args.tol)?);
    }
    let mut passed = 0usize;
    for r in &results {
        let verdict = if r.pass {
            passed += 1;
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "check {}: {} (worst {:e} vs tol {:e}) {}",
            r.name, verdict, r.worst_residual, r.tolerance, r.detail
        );
    }
    println!("suite {}: {passed}/{} checks passed", args.suite, results.len());
    if let Some(path) = &args.output {
        write_text(path, &jsonio::canonical_json_string(&results)?)?;
    }
    Ok(if passed == results.len() { 0 } else { 1 })
}

// ── synth ───────────────────────────────────────────────────────────────────

pub fn cmd_synth(args: &SynthArgs, cap: u32) -> Result<i32> {
    caps::check_cap(args.n, cap)?;
    if args.spec_out.is_none() && args.table_out.is_none() {
        return Err(Error::precondition(
            "give --spec-out and/or --table-out; nothing to write otherwise",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let spec = build_spec(args, args.kind, &mut rng)?;
    let kind_label = kind_name(args.kind);
    if let Some(path) = &args.spec_out {
        save_game_spec(&spec, path)?;
        println!("wrote {} ({kind_label} spec, n={})", path.display(), args.n);
    }
    if let Some(path) = &args.table_out {
        let table = OracleDescriptor::Synthetic { spec }.tabulate()?;
        save_value_table(&table, path)?;
        println!(
            "wrote {} ({kind_label} table, {} entries)",
            path.display(),
            table.len()
        );
    }
    Ok(0)
}

fn kind_name(kind: SynthKind) -> &'static str {
    match kind {
        SynthKind::Planted => "planted",
        SynthKind::Polynomial => "polynomial",
        SynthKind::Noisy => "noisy",
        SynthKind::Parity => "parity",
        SynthKind::OrGame => "or_game",
    }
}

fn build_spec(args: &SynthArgs, kind: SynthKind, rng: &mut ChaCha8Rng) -> Result<GameSpec> {
    match kind {
        SynthKind::Planted => {
            let max_order = args.max_order.unwrap_or_else(|| args.n.min(4));
            if args.monotone {
                synth::random_monotone_planted_game(args.n, args.concepts, max_order, rng)
            } else {
                synth::random_planted_game(
                    args.n,
                    args.concepts,
                    args.min_order,
                    max_order,
                    args.coeff_lo,
                    args.coeff_hi,
                    args.signed,
                    rng,
                )
            }
        }
        SynthKind::Polynomial => {
            synth::random_polynomial_game(args.n, args.terms, args.max_degree, rng)
        }
        SynthKind::Parity => synth::parity_game(args.n),
        SynthKind::OrGame => {
            let members = args
                .members
                .ok_or_else(|| Error::precondition("--members is required for or_game"))?;
            synth::or_game(args.n, members, args.payoff)
        }
        SynthKind::Noisy => {
            let sigma = args
                .sigma
                .ok_or_else(|| Error::precondition("--sigma is required for noisy"))?;
            let base = args.base.unwrap_or(SynthKind::Planted);
            if base == SynthKind::Noisy {
                return Err(Error::precondition("--base cannot itself be noisy"));
            }
            let inner = build_spec(args, base, rng)?;
            synth::noisy_game(inner, sigma, args.seed)
        }
    }
}
