//! The exact interaction decomposition and its defining identities.
//!
//! For a game `v` with baseline-shifted utilities `u(S) = v(S) - v(empty)`,
//! the effect of a coalition is the alternating subset sum
//! `I(S) = sum_{T ⊆ S} (-1)^(|S|-|T|) u(T)`. These effects decompose the game
//! losslessly: summing the effects of all subsets of `S` (plus the baseline)
//! reproduces `v(S)` for every mask, which is the invariant
//! [`verify_reconstruction`] checks end to end.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game_oracle::ValueTable;
use crate::jsonio;
use crate::subset_algebra::{submasks, LatticeArray, SubsetMask};

/// Format discriminator for interaction-table files.
pub const INTERACTION_TABLE_FORMAT: &str = "harsanyi-it/1";

/// Dense table of interaction effects plus the baseline output they shift.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTable {
    effects: LatticeArray,
    baseline: f64,
}

impl InteractionTable {
    pub fn new(effects: LatticeArray, baseline: f64) -> Result<Self> {
        if !baseline.is_finite() {
            return Err(Error::NonFinite {
                context: "interaction table baseline".into(),
            });
        }
        Ok(InteractionTable { effects, baseline })
    }

    pub fn n(&self) -> u32 {
        self.effects.n()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    pub fn effects(&self) -> &LatticeArray {
        &self.effects
    }

    pub fn effect(&self, mask: SubsetMask) -> f64 {
        self.effects.get(mask)
    }

    pub fn effect_at(&self, index: usize) -> f64 {
        self.effects[index]
    }

    /// Rebuild one game output: `v(S) = baseline + sum_{T ⊆ S} I(T)`.
    pub fn reconstruct(&self, mask: SubsetMask) -> f64 {
        debug_assert_eq!(mask.n(), self.n());
        let direct: f64 = submasks(mask.bits())
            .map(|t| self.effects[t as usize])
            .sum();
        self.baseline + direct
    }

    /// Rebuild the whole table in one subset-sum sweep.
    pub fn reconstruct_all(&self) -> LatticeArray {
        let mut out = self.effects.clone();
        out.zeta_in_place();
        let data: Vec<f64> = out.as_slice().iter().map(|v| v + self.baseline).collect();
        LatticeArray::new(self.n(), data).expect("reconstruction stays finite")
    }

    pub fn scale(&self) -> f64 {
        self.effects.scale()
    }
}

/// Decompose a table into its interaction effects (fast sweep, O(n·2^n)).
/// The empty coalition always carries effect exactly 0.
pub fn harsanyi_dividends(table: &ValueTable) -> InteractionTable {
    let mut effects = table.utilities();
    effects.mobius_in_place();
    InteractionTable {
        effects,
        baseline: table.baseline(),
    }
}

/// One effect straight from the definition, `sum_{T ⊆ S} (-1)^(|S|-|T|) u(T)`.
/// Independent of the fast sweep; this is the cross-check oracle.
pub fn harsanyi_single_naive(table: &ValueTable, mask: SubsetMask) -> f64 {
    debug_assert_eq!(mask.n(), table.n());
    let baseline = table.baseline();
    let order = mask.order();
    submasks(mask.bits())
        .map(|t| {
            let sign = if (order - t.count_ones()).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sign * (table.value_at(t as usize) - baseline)
        })
        .sum()
}

/// Marginal benefit of adding coalition `T` on top of context `S`:
/// `sum_{L ⊆ T} (-1)^(|T|-|L|) u(L ∪ S)`. Requires `T` and `S` disjoint.
pub fn marginal_benefit(table: &ValueTable, t: SubsetMask, s: SubsetMask) -> Result<f64> {
    if !t.is_disjoint_from(&s) {
        return Err(Error::precondition(format!(
            "marginal benefit needs disjoint coalitions, got T={t} overlapping S={s}"
        )));
    }
    let baseline = table.baseline();
    let order = t.order();
    Ok(submasks(t.bits())
        .map(|l| {
            let sign = if (order - l.count_ones()).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sign * (table.value_at((l | s.bits()) as usize) - baseline)
        })
        .sum())
}

/// Interaction of `S` in the sub-game where player `i` is always present:
/// `sum_{L ⊆ S} (-1)^(|S|-|L|) u(L ∪ {i})`. Requires `i ∉ S`.
pub fn conditional_interaction(table: &ValueTable, s: SubsetMask, i: u32) -> Result<f64> {
    if s.contains(i) {
        return Err(Error::precondition(format!(
            "player {i} must lie outside the conditioned coalition {s}"
        )));
    }
    if i >= table.n() {
        return Err(Error::precondition(format!(
            "player {i} out of range for n={}",
            table.n()
        )));
    }
    let baseline = table.baseline();
    let order = s.order();
    Ok(submasks(s.bits())
        .map(|l| {
            let sign = if (order - l.count_ones()).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sign * (table.value_at((l | (1 << i)) as usize) - baseline)
        })
        .sum())
}

/// Outcome of the lossless-decomposition check.
#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    pub pass: bool,
    pub rel_tol: f64,
    /// `max(1, max|v(S)|)`; residuals are compared against `rel_tol * scale`.
    pub scale: f64,
    pub max_abs_residual: f64,
    pub worst_mask: u32,
}

/// Decompose, reconstruct every output, and report the worst residual.
pub fn verify_reconstruction(table: &ValueTable, rel_tol: f64) -> ReconstructionReport {
    let interactions = harsanyi_dividends(table);
    reconstruction_report(table, &interactions, rel_tol)
}

/// Same check against an externally supplied decomposition (for auditing
/// files that claim to decompose a given table).
pub fn reconstruction_report(
    table: &ValueTable,
    interactions: &InteractionTable,
    rel_tol: f64,
) -> ReconstructionReport {
    let rebuilt = interactions.reconstruct_all();
    let mut worst = (0.0f64, 0u32);
    for (mask, (&a, &b)) in table
        .values()
        .as_slice()
        .iter()
        .zip(rebuilt.as_slice())
        .enumerate()
    {
        let residual = (a - b).abs();
        if residual > worst.0 {
            worst = (residual, mask as u32);
        }
    }
    let scale = table.scale();
    ReconstructionReport {
        pass: worst.0 <= rel_tol * scale,
        rel_tol,
        scale,
        max_abs_residual: worst.0,
        worst_mask: worst.1,
    }
}

// ── File format ─────────────────────────────────────────────────────────────

pub fn save_interaction_table(table: &InteractionTable, path: &Path) -> Result<()> {
    #[derive(Serialize)]
    struct Out<'a> {
        format: &'a str,
        n: u32,
        baseline: f64,
        effects: &'a [f64],
    }
    jsonio::write_canonical_json(
        path,
        &Out {
            format: INTERACTION_TABLE_FORMAT,
            n: table.n(),
            baseline: table.baseline(),
            effects: table.effects().as_slice(),
        },
    )
}

pub fn load_interaction_table(path: &Path) -> Result<InteractionTable> {
    let tree = jsonio::read_json_file(path)?;
    jsonio::expect_format(&tree, INTERACTION_TABLE_FORMAT, path)?;
    let n = tree
        .get("n")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::format(Some(path), "missing integer key \"n\""))?;
    let baseline = jsonio::lenient_f64(
        tree.get("baseline")
            .ok_or_else(|| Error::format(Some(path), "missing key \"baseline\""))?,
        "baseline",
    )?;
    let raw = tree
        .get("effects")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::format(Some(path), "missing array key \"effects\""))?;
    let mut effects = Vec::with_capacity(raw.len());
    for (i, item) in raw.iter().enumerate() {
        effects.push(jsonio::lenient_f64(item, &format!("effects[{i}]"))?);
    }
    InteractionTable::new(LatticeArray::new(n as u32, effects)?, baseline)
}
