//! Classical attribution indices, each computed along two independent routes.
//!
//! Every index here has a definitional form (weighted sums of marginal
//! benefits over contexts) and an interaction form (weighted sums of effects
//! from the exact decomposition). The two must agree; keeping both routes
//! intact is what lets the verification suites cross-check them against each
//! other on arbitrary games.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game_oracle::ValueTable;
use crate::interaction::{marginal_benefit, InteractionTable};
use crate::subset_algebra::{binomial_f64, submasks, SubsetMask};

/// Per-player attribution scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributionVector {
    pub n: u32,
    pub phi: Vec<f64>,
}

impl AttributionVector {
    pub fn get(&self, i: u32) -> f64 {
        self.phi[i as usize]
    }
}

/// Shapley values from the size-stratified definition: average the marginal
/// contribution of `i` over context sizes, uniformly across sizes and
/// uniformly within each size.
pub fn shapley_values_definitional(table: &ValueTable) -> AttributionVector {
    let n = table.n();
    let mut phi = vec![0.0; n as usize];
    for i in 0..n {
        let bit = 1u32 << i;
        let mut by_size = vec![0.0; n as usize];
        for s in 0..table.len() as u32 {
            if s & bit != 0 {
                continue;
            }
            by_size[s.count_ones() as usize] +=
                table.value_at((s | bit) as usize) - table.value_at(s as usize);
        }
        let mut acc = 0.0;
        for (m, sum) in by_size.iter().enumerate() {
            acc += sum / binomial_f64(n - 1, m as u32).expect("n <= 24");
        }
        phi[i as usize] = acc / n as f64;
    }
    AttributionVector { n, phi }
}

/// Shapley values by spreading each effect evenly over its members:
/// `phi(i) = sum_{S ∋ i} I(S) / |S|`. Single pass over the lattice.
pub fn shapley_values_from_effects(interactions: &InteractionTable) -> AttributionVector {
    let n = interactions.n();
    let mut phi = vec![0.0; n as usize];
    for mask in 1..interactions.len() as u32 {
        let share = interactions.effect_at(mask as usize) / mask.count_ones() as f64;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros();
            phi[i as usize] += share;
            rest &= rest - 1;
        }
    }
    AttributionVector { n, phi }
}

/// Pairwise-or-higher interaction index from its definition: marginal
/// benefits of `T` over all outside contexts, with permutation weights
/// `|S|! (n-|S|-|T|)! / (n-|T|+1)!`.
pub fn shapley_interaction_definitional(table: &ValueTable, t: SubsetMask) -> Result<f64> {
    check_target(table.n(), t)?;
    let n = table.n();
    let t_order = t.order();
    let outside = t.complement();
    let mut acc = 0.0;
    for s_bits in submasks(outside.bits()) {
        let s = SubsetMask::new(s_bits, n)?;
        // |S|!(n-|S|-|T|)!/(n-|T|+1)! == 1 / ((n-|T|+1) * C(n-|T|, |S|)),
        // which keeps every factor inside exact integer range.
        let weight = 1.0
            / ((n - t_order + 1) as f64 * binomial_f64(n - t_order, s.order()).expect("n <= 24"));
        acc += weight * marginal_benefit(table, t, s)?;
    }
    Ok(acc)
}

/// Same index from the decomposition: `sum_{S ⊆ N∖T} I(S ∪ T) / (|S|+1)`.
pub fn shapley_interaction_from_effects(
    interactions: &InteractionTable,
    t: SubsetMask,
) -> Result<f64> {
    check_target(interactions.n(), t)?;
    let outside = t.complement();
    let mut acc = 0.0;
    for s_bits in submasks(outside.bits()) {
        acc += interactions.effect_at((s_bits | t.bits()) as usize)
            / (s_bits.count_ones() + 1) as f64;
    }
    Ok(acc)
}

/// Order-`k` truncated interaction index, definitional route. Coalitions
/// below the cutoff keep their bare marginal benefit at the empty context;
/// coalitions at the cutoff average marginal benefits over outside contexts;
/// above the cutoff the index is zero.
pub fn shapley_taylor_definitional(table: &ValueTable, t: SubsetMask, k: u32) -> Result<f64> {
    check_target(table.n(), t)?;
    check_order_cutoff(table.n(), k)?;
    let n = table.n();
    let t_order = t.order();
    if t_order > k {
        return Ok(0.0);
    }
    if t_order < k {
        return marginal_benefit(table, t, SubsetMask::empty(n)?);
    }
    let mut acc = 0.0;
    for s_bits in submasks(t.complement().bits()) {
        let s = SubsetMask::new(s_bits, n)?;
        acc += marginal_benefit(table, t, s)?
            / binomial_f64(n - 1, s.order()).expect("n <= 24");
    }
    Ok(acc * k as f64 / n as f64)
}

/// Order-`k` truncated interaction index from the decomposition: below the
/// cutoff the bare effect, at the cutoff `sum_S I(S ∪ T) / C(|S|+k, k)`,
/// above it zero.
pub fn shapley_taylor_from_effects(
    interactions: &InteractionTable,
    t: SubsetMask,
    k: u32,
) -> Result<f64> {
    check_target(interactions.n(), t)?;
    check_order_cutoff(interactions.n(), k)?;
    let t_order = t.order();
    if t_order > k {
        return Ok(0.0);
    }
    if t_order < k {
        return Ok(interactions.effect(t));
    }
    let mut acc = 0.0;
    for s_bits in submasks(t.complement().bits()) {
        let weight = binomial_f64(s_bits.count_ones() + k, k).expect("n <= 24");
        acc += interactions.effect_at((s_bits | t.bits()) as usize) / weight;
    }
    Ok(acc)
}

fn check_target(n: u32, t: SubsetMask) -> Result<()> {
    if t.n() != n {
        return Err(Error::precondition(format!(
            "target is over n={}, data has n={n}",
            t.n()
        )));
    }
    if t.is_empty() {
        return Err(Error::precondition("target coalition must be nonempty"));
    }
    Ok(())
}

fn check_order_cutoff(n: u32, k: u32) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::precondition(format!(
            "order cutoff k={k} out of range 1..={n}"
        )));
    }
    Ok(())
}
