//! Synthetic game families with known ground truth.
//!
//! Each [`GameSpec`] describes a value function over masked inputs whose
//! interaction structure is known in closed form, which makes these games the
//! reference instruments for every verification suite: planted conjunctions
//! decompose into exactly their concept list, polynomial games admit an
//! analytic effect formula, and the noisy / parity / disjunction families
//! exercise the failure modes of sparsity assumptions.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset_algebra::{SubsetMask, MAX_PLAYERS};

/// Format discriminator for game description files.
pub const GAME_SPEC_FORMAT: &str = "harsanyi-gs/1";

/// A declarative description of a synthetic game.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameSpec {
    pub n: u32,
    /// Output on the fully-masked input, `v(empty)`.
    #[serde(default)]
    pub baseline_output: f64,
    #[serde(flatten)]
    pub kind: GameKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GameKind {
    /// Sum of conjunction indicators: `v(S) = baseline + sum c_j [S ⊇ T_j]`.
    Planted { concepts: Vec<Concept> },
    /// A polynomial evaluated on masked inputs: absent variables are pinned
    /// to the baseline point, so a term contributes only when its whole
    /// support is present.
    Polynomial {
        baseline_point: Vec<f64>,
        eval_point: Vec<f64>,
        terms: Vec<PolyTerm>,
    },
    /// Any inner game plus independent Gaussian output noise per mask.
    Noisy {
        inner: Box<GameSpec>,
        sigma: f64,
        seed: u64,
    },
    /// `+1` for coalitions of odd size, `-1` for nonempty even ones.
    Parity,
    /// Disjunction over a member set: payoff whenever any member is present.
    OrGame { members: u32, payoff: f64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Concept {
    pub mask: u32,
    pub coeff: f64,
}

/// One monomial `coeff * prod_i (x_i - b_i)^degrees[i]`. The coefficient is
/// stored already divided by the factorials of the degrees, so it is exactly
/// the effect the term contributes on its support.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTerm {
    pub degrees: Vec<u32>,
    pub coeff: f64,
}

impl PolyTerm {
    /// Mask of variables with degree >= 1.
    pub fn support(&self) -> u32 {
        self.degrees
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .fold(0u32, |m, (i, _)| m | (1 << i))
    }

    pub fn total_degree(&self) -> u32 {
        self.degrees.iter().sum()
    }
}

impl GameSpec {
    /// Structural validation; every loader and constructor funnels through
    /// here so downstream evaluation can assume a well-formed description.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_PLAYERS {
            return Err(Error::PlayerCountOutOfRange {
                n: self.n,
                max: MAX_PLAYERS,
            });
        }
        if !self.baseline_output.is_finite() {
            return Err(Error::NonFinite {
                context: "baseline_output".into(),
            });
        }
        let full = 1u64 << self.n;
        match &self.kind {
            GameKind::Planted { concepts } => {
                let mut seen = HashSet::new();
                for c in concepts {
                    if c.mask == 0 {
                        return Err(Error::precondition(
                            "planted concept masks must be nonempty",
                        ));
                    }
                    if u64::from(c.mask) >= full {
                        return Err(Error::MaskOutOfRange {
                            mask: c.mask,
                            n: self.n,
                        });
                    }
                    if !c.coeff.is_finite() {
                        return Err(Error::NonFinite {
                            context: format!("coefficient for concept {:#b}", c.mask),
                        });
                    }
                    if !seen.insert(c.mask) {
                        return Err(Error::precondition(format!(
                            "duplicate planted concept mask {:#b}",
                            c.mask
                        )));
                    }
                }
                Ok(())
            }
            GameKind::Polynomial {
                baseline_point,
                eval_point,
                terms,
            } => {
                let n = self.n as usize;
                if baseline_point.len() != n || eval_point.len() != n {
                    return Err(Error::precondition(format!(
                        "baseline_point and eval_point must have length n={n}"
                    )));
                }
                if baseline_point.iter().chain(eval_point).any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite {
                        context: "polynomial evaluation points".into(),
                    });
                }
                for term in terms {
                    if term.degrees.len() != n {
                        return Err(Error::precondition(format!(
                            "term degree vector must have length n={n}"
                        )));
                    }
                    if term.total_degree() == 0 {
                        return Err(Error::precondition(
                            "constant terms belong in baseline_output, not in terms",
                        ));
                    }
                    if !term.coeff.is_finite() {
                        return Err(Error::NonFinite {
                            context: "polynomial term coefficient".into(),
                        });
                    }
                }
                Ok(())
            }
            GameKind::Noisy { inner, sigma, .. } => {
                if !sigma.is_finite() || *sigma < 0.0 {
                    return Err(Error::precondition("noise sigma must be finite and >= 0"));
                }
                if inner.n != self.n {
                    return Err(Error::precondition(format!(
                        "inner game has n={}, wrapper has n={}",
                        inner.n, self.n
                    )));
                }
                inner.validate()
            }
            GameKind::Parity => Ok(()),
            GameKind::OrGame { members, payoff } => {
                if *members == 0 {
                    return Err(Error::precondition("or-game member set must be nonempty"));
                }
                if u64::from(*members) >= full {
                    return Err(Error::MaskOutOfRange {
                        mask: *members,
                        n: self.n,
                    });
                }
                if !payoff.is_finite() {
                    return Err(Error::NonFinite {
                        context: "or-game payoff".into(),
                    });
                }
                Ok(())
            }
        }
    }

    /// Evaluate the game output `v(S)` for a coalition mask. The spec must
    /// have been validated; evaluation itself cannot fail.
    pub fn evaluate(&self, mask: u32) -> f64 {
        match &self.kind {
            GameKind::Planted { concepts } => {
                let hits: f64 = concepts
                    .iter()
                    .filter(|c| mask & c.mask == c.mask)
                    .map(|c| c.coeff)
                    .sum();
                self.baseline_output + hits
            }
            GameKind::Polynomial {
                baseline_point,
                eval_point,
                terms,
            } => {
                let mut acc = self.baseline_output;
                for term in terms {
                    // A term vanishes unless every variable it touches is present.
                    if term.support() & !mask != 0 {
                        continue;
                    }
                    let mut prod = term.coeff;
                    for (i, &d) in term.degrees.iter().enumerate() {
                        if d > 0 {
                            prod *= (eval_point[i] - baseline_point[i]).powi(d as i32);
                        }
                    }
                    acc += prod;
                }
                acc
            }
            GameKind::Noisy { inner, sigma, seed } => {
                inner.evaluate(mask) + sigma * masked_noise(*seed, mask)
            }
            GameKind::Parity => {
                let u = if mask == 0 {
                    0.0
                } else if mask.count_ones() % 2 == 1 {
                    1.0
                } else {
                    -1.0
                };
                self.baseline_output + u
            }
            GameKind::OrGame { members, payoff } => {
                if mask & members != 0 {
                    self.baseline_output + payoff
                } else {
                    self.baseline_output
                }
            }
        }
    }

    /// Maximum total degree across terms; `None` for non-polynomial games.
    pub fn max_total_degree(&self) -> Option<u32> {
        match &self.kind {
            GameKind::Polynomial { terms, .. } => {
                Some(terms.iter().map(PolyTerm::total_degree).max().unwrap_or(0))
            }
            _ => None,
        }
    }
}

/// Deterministic per-mask standard normal draw. Seeding by `(seed, mask)`
/// rather than by evaluation sequence means the noise field is a fixed
/// function of the mask, so evaluation order can never change a game.
fn masked_noise(seed: u64, mask: u32) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(mask));
    rng.sample(StandardNormal)
}

/// Closed-form effect of a polynomial game for one coalition: the sum of
/// `coeff * prod_{i in S} (x_i - b_i)^k_i` over terms supported on exactly
/// `S`. Only polynomial games admit this analytic route.
pub fn analytic_effect(spec: &GameSpec, mask: SubsetMask) -> Result<f64> {
    let GameKind::Polynomial {
        baseline_point,
        eval_point,
        terms,
    } = &spec.kind
    else {
        return Err(Error::precondition(
            "analytic effects are defined for polynomial games only",
        ));
    };
    if mask.n() != spec.n {
        return Err(Error::precondition(format!(
            "mask has n={}, game has n={}",
            mask.n(),
            spec.n
        )));
    }
    if mask.is_empty() {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for term in terms {
        if term.support() != mask.bits() {
            continue;
        }
        let mut prod = term.coeff;
        for (i, &d) in term.degrees.iter().enumerate() {
            if d > 0 {
                prod *= (eval_point[i] - baseline_point[i]).powi(d as i32);
            }
        }
        acc += prod;
    }
    Ok(acc)
}

// ── Constructors ────────────────────────────────────────────────────────────

pub fn planted_game(n: u32, baseline_output: f64, concepts: Vec<Concept>) -> Result<GameSpec> {
    let spec = GameSpec {
        n,
        baseline_output,
        kind: GameKind::Planted { concepts },
    };
    spec.validate()?;
    Ok(spec)
}

pub fn polynomial_game(
    n: u32,
    baseline_output: f64,
    baseline_point: Vec<f64>,
    eval_point: Vec<f64>,
    terms: Vec<PolyTerm>,
) -> Result<GameSpec> {
    let spec = GameSpec {
        n,
        baseline_output,
        kind: GameKind::Polynomial {
            baseline_point,
            eval_point,
            terms,
        },
    };
    spec.validate()?;
    Ok(spec)
}

pub fn noisy_game(inner: GameSpec, sigma: f64, seed: u64) -> Result<GameSpec> {
    let spec = GameSpec {
        n: inner.n,
        baseline_output: inner.baseline_output,
        kind: GameKind::Noisy {
            inner: Box::new(inner),
            sigma,
            seed,
        },
    };
    spec.validate()?;
    Ok(spec)
}

pub fn parity_game(n: u32) -> Result<GameSpec> {
    let spec = GameSpec {
        n,
        baseline_output: 0.0,
        kind: GameKind::Parity,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn or_game(n: u32, members: u32, payoff: f64) -> Result<GameSpec> {
    let spec = GameSpec {
        n,
        baseline_output: 0.0,
        kind: GameKind::OrGame { members, payoff },
    };
    spec.validate()?;
    Ok(spec)
}

// ── Random generators ───────────────────────────────────────────────────────

/// Sample a planted game with `concepts` distinct masks whose orders lie in
/// `min_order..=max_order`. Coefficient magnitudes are uniform in
/// `coeff_lo..=coeff_hi`; when `signed` is set each coefficient gets a random
/// sign.
// The parameters mirror the CLI flags one-to-one; a builder would just
// rename them.
#[allow(clippy::too_many_arguments)]
pub fn random_planted_game(
    n: u32,
    concepts: usize,
    min_order: u32,
    max_order: u32,
    coeff_lo: f64,
    coeff_hi: f64,
    signed: bool,
    rng: &mut impl Rng,
) -> Result<GameSpec> {
    if min_order == 0 || min_order > max_order || max_order > n {
        return Err(Error::precondition(format!(
            "need 1 <= min_order <= max_order <= n, got {min_order}..={max_order} with n={n}"
        )));
    }
    if !(0.0 < coeff_lo && coeff_lo <= coeff_hi) {
        return Err(Error::precondition(
            "coefficient magnitudes must satisfy 0 < lo <= hi",
        ));
    }
    let available: u64 = (min_order..=max_order)
        .map(|k| crate::subset_algebra::binomial(n, k).unwrap_or(u64::MAX))
        .sum();
    if (concepts as u64) > available {
        return Err(Error::precondition(format!(
            "cannot place {concepts} distinct concepts; only {available} masks have orders {min_order}..={max_order}"
        )));
    }
    let mut seen = HashSet::new();
    let mut list = Vec::with_capacity(concepts);
    while list.len() < concepts {
        let order = rng.gen_range(min_order..=max_order);
        let mask = random_mask_of_order(n, order, rng);
        if !seen.insert(mask) {
            continue;
        }
        let mut coeff = rng.gen_range(coeff_lo..=coeff_hi);
        if signed && rng.gen_bool(0.5) {
            coeff = -coeff;
        }
        list.push(Concept { mask, coeff });
    }
    planted_game(n, 0.0, list)
}

/// Planted game tailored to the growth analysis: positive coefficients in
/// `[0.5, 2]`, orders in `1..=max_order`, and the first concept is always a
/// singleton so the first-order average output is strictly positive.
pub fn random_monotone_planted_game(
    n: u32,
    concepts: usize,
    max_order: u32,
    rng: &mut impl Rng,
) -> Result<GameSpec> {
    if concepts == 0 {
        return Err(Error::precondition("need at least one concept"));
    }
    let available: u64 = (1..=max_order.min(n))
        .map(|k| crate::subset_algebra::binomial(n, k).unwrap_or(u64::MAX))
        .sum();
    if (concepts as u64) > available {
        return Err(Error::precondition(format!(
            "cannot place {concepts} distinct concepts; only {available} masks have orders 1..={}",
            max_order.min(n)
        )));
    }
    let mut seen = HashSet::new();
    let mut list = Vec::with_capacity(concepts);
    let first = random_mask_of_order(n, 1, rng);
    seen.insert(first);
    list.push(Concept {
        mask: first,
        coeff: rng.gen_range(0.5..=2.0),
    });
    while list.len() < concepts {
        let order = rng.gen_range(1..=max_order.min(n));
        let mask = random_mask_of_order(n, order, rng);
        if !seen.insert(mask) {
            continue;
        }
        list.push(Concept {
            mask,
            coeff: rng.gen_range(0.5..=2.0),
        });
    }
    planted_game(n, 0.0, list)
}

/// Sample a polynomial game: `terms` monomials with total degrees in
/// `1..=max_degree`, baseline point near the origin and per-variable offsets
/// `x_i - b_i` bounded away from zero so no effect collapses by accident.
pub fn random_polynomial_game(
    n: u32,
    terms: usize,
    max_degree: u32,
    rng: &mut impl Rng,
) -> Result<GameSpec> {
    if max_degree == 0 {
        return Err(Error::precondition("max_degree must be >= 1"));
    }
    let baseline_point: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let eval_point: Vec<f64> = baseline_point
        .iter()
        .map(|b| {
            let mag = rng.gen_range(0.5..1.5);
            if rng.gen_bool(0.5) {
                b + mag
            } else {
                b - mag
            }
        })
        .collect();
    let mut list = Vec::with_capacity(terms);
    for _ in 0..terms {
        let total = rng.gen_range(1..=max_degree);
        let support_size = rng.gen_range(1..=total.min(n));
        let support = random_mask_of_order(n, support_size, rng);
        let mut degrees = vec![0u32; n as usize];
        for i in 0..n {
            if support >> i & 1 == 1 {
                degrees[i as usize] = 1;
            }
        }
        // Distribute the remaining degree uniformly over the support.
        let members: Vec<u32> = (0..n).filter(|i| support >> i & 1 == 1).collect();
        for _ in 0..(total - support_size) {
            let pick = members[rng.gen_range(0..members.len())];
            degrees[pick as usize] += 1;
        }
        let mut coeff = rng.gen_range(0.5..2.0);
        if rng.gen_bool(0.5) {
            coeff = -coeff;
        }
        list.push(PolyTerm { degrees, coeff });
    }
    polynomial_game(n, rng.gen_range(-1.0..1.0), baseline_point, eval_point, list)
}

fn random_mask_of_order(n: u32, order: u32, rng: &mut impl Rng) -> u32 {
    let mut players: Vec<u32> = (0..n).collect();
    players.partial_shuffle(rng, order as usize);
    players[..order as usize].iter().fold(0, |m, &i| m | (1 << i))
}

// ── File format ─────────────────────────────────────────────────────────────

pub fn save_game_spec(spec: &GameSpec, path: &std::path::Path) -> Result<()> {
    spec.validate()?;
    #[derive(Serialize)]
    struct SpecFile<'a> {
        format: &'a str,
        #[serde(flatten)]
        spec: &'a GameSpec,
    }
    crate::jsonio::write_canonical_json(
        path,
        &SpecFile {
            format: GAME_SPEC_FORMAT,
            spec,
        },
    )
}

pub fn load_game_spec(path: &std::path::Path) -> Result<GameSpec> {
    let tree = crate::jsonio::read_json_file(path)?;
    crate::jsonio::expect_format(&tree, GAME_SPEC_FORMAT, path)?;
    let spec: GameSpec = serde_json::from_value(tree)
        .map_err(|e| Error::format(Some(path), format!("bad game description: {e}")))?;
    spec.validate()?;
    Ok(spec)
}
