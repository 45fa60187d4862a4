//! Order-level sparsity diagnostics for interaction decompositions.
//!
//! The questions answered here: how does the average output grow with
//! coalition size, how much interaction mass sits at each order, how much of
//! it survives sign cancellation, and how many coalitions per order carry an
//! effect above a salience threshold. The centrepiece is a base-`n` digit
//! decomposition of the per-order effect sums which, combined with a
//! polynomial growth bound on the order averages, caps the number of
//! above-threshold coalitions an order can hold.
//!
//! Conventions used throughout: `means[m]` is the average utility over
//! coalitions of size `m` (`means[0]` is exactly 0), `sums[k]` is the sum of
//! effects over coalitions of order `k`, and all relative tolerances compare
//! against `max(1, magnitude)` scales recorded in the reports.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game_oracle::ValueTable;
use crate::interaction::{harsanyi_dividends, InteractionTable};
use crate::subset_algebra::binomial_f64;

/// Slack applied to strict comparisons between floating-point aggregates.
const COMPARE_SLACK: f64 = 1e-12;

/// Largest growth exponent the fitter will consider.
const MAX_GROWTH_EXPONENT: f64 = 64.0;

/// Average utility per coalition size.
#[derive(Debug, Clone, Serialize)]
pub struct OrderProfile {
    pub n: u32,
    /// `means[m]` = average of `u(S)` over `|S| = m`, for `m = 0..=n`.
    pub means: Vec<f64>,
}

/// Per-order effect totals.
#[derive(Debug, Clone, Serialize)]
pub struct OrderSums {
    pub n: u32,
    /// `sums[k]` = signed total of effects at order `k`.
    pub sums: Vec<f64>,
    /// `abs_sums[k]` = total of |effect| at order `k`.
    pub abs_sums: Vec<f64>,
    /// `net_ratio[k]` = `sums[k] / abs_sums[k]`; 0 when the order is empty.
    /// Magnitude 1 means no cancellation, near 0 means the order's effects
    /// almost cancel.
    pub net_ratio: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderViolation {
    pub lower_order: u32,
    pub upper_order: u32,
    pub lower_mean: f64,
    pub upper_mean: f64,
}

/// Verdict of the non-decreasing-averages check.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityVerdict {
    pub pass: bool,
    pub violations: Vec<OrderViolation>,
}

/// Verdict of the polynomial lower-bound check at a given exponent `p`:
/// for every `m' < m` with a positive upper mean, `means[m']` must be at
/// least `(m'/m)^p * means[m]`.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthBoundVerdict {
    pub p: f64,
    pub pass: bool,
    pub violations: Vec<OrderViolation>,
}

pub fn order_average_outputs(table: &ValueTable) -> OrderProfile {
    let n = table.n();
    let baseline = table.baseline();
    let mut totals = vec![0.0f64; n as usize + 1];
    for mask in 0..table.len() as u32 {
        totals[mask.count_ones() as usize] += table.value_at(mask as usize) - baseline;
    }
    let means = totals
        .iter()
        .enumerate()
        .map(|(m, &t)| t / binomial_f64(n, m as u32).expect("n <= 24"))
        .collect();
    OrderProfile { n, means }
}

pub fn check_weak_monotonicity(profile: &OrderProfile) -> MonotonicityVerdict {
    let scale = profile.means.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let slack = COMPARE_SLACK * scale;
    let mut violations = Vec::new();
    for m in 1..profile.means.len() {
        if profile.means[m] < profile.means[m - 1] - slack {
            violations.push(OrderViolation {
                lower_order: (m - 1) as u32,
                upper_order: m as u32,
                lower_mean: profile.means[m - 1],
                upper_mean: profile.means[m],
            });
        }
    }
    MonotonicityVerdict {
        pass: violations.is_empty(),
        violations,
    }
}

pub fn check_growth_lower_bound(profile: &OrderProfile, p: f64) -> Result<GrowthBoundVerdict> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::precondition(format!(
            "growth exponent must satisfy p > 1, got {p}"
        )));
    }
    let scale = profile.means.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let slack = COMPARE_SLACK * scale;
    let mut violations = Vec::new();
    for m in 1..=profile.n as usize {
        // Non-positive upper means impose no lower bound.
        if profile.means[m] <= 0.0 {
            continue;
        }
        for lower in 1..m {
            let required = (lower as f64 / m as f64).powf(p) * profile.means[m];
            if profile.means[lower] < required - slack {
                violations.push(OrderViolation {
                    lower_order: lower as u32,
                    upper_order: m as u32,
                    lower_mean: profile.means[lower],
                    upper_mean: profile.means[m],
                });
            }
        }
    }
    Ok(GrowthBoundVerdict {
        p,
        pass: violations.is_empty(),
        violations,
    })
}

/// Smallest exponent `p > 1` (to 1e-6) for which the growth lower bound
/// holds, or `None` when even `p = 64` fails. Raising `p` only weakens the
/// bound, so feasibility is monotone and bisection applies.
pub fn fit_min_growth_exponent(profile: &OrderProfile) -> Option<f64> {
    let feasible = |p: f64| {
        check_growth_lower_bound(profile, p)
            .map(|v| v.pass)
            .unwrap_or(false)
    };
    if !feasible(MAX_GROWTH_EXPONENT) {
        return None;
    }
    let mut lo = 1.0;
    let mut hi = MAX_GROWTH_EXPONENT;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

pub fn order_sums(interactions: &InteractionTable) -> OrderSums {
    let n = interactions.n();
    let mut sums = vec![0.0f64; n as usize + 1];
    let mut abs_sums = vec![0.0f64; n as usize + 1];
    for mask in 0..interactions.len() as u32 {
        let e = interactions.effect_at(mask as usize);
        sums[mask.count_ones() as usize] += e;
        abs_sums[mask.count_ones() as usize] += e.abs();
    }
    let net_ratio = sums
        .iter()
        .zip(&abs_sums)
        .map(|(&s, &a)| if a == 0.0 { 0.0 } else { s / a })
        .collect();
    OrderSums {
        n,
        sums,
        abs_sums,
        net_ratio,
    }
}

/// Result of checking that order averages are recovered by the per-order
/// effect sums: `means[m] = sum_k C(m,k)/C(n,k) * sums[k]`, truncated at
/// `order_cap`. Exact whenever all effects above `order_cap` vanish (always
/// exact at `order_cap = n`).
#[derive(Debug, Clone, Serialize)]
pub struct OrderMeanIdentityReport {
    pub order_cap: u32,
    pub pass: bool,
    pub rel_tol: f64,
    /// Majorizes both the means and the largest cancellation inside the
    /// predicted sums.
    pub scale: f64,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub worst_order: u32,
}

pub fn verify_order_mean_identity(
    profile: &OrderProfile,
    sums: &OrderSums,
    order_cap: u32,
) -> OrderMeanIdentityReport {
    let n = profile.n;
    let rel_tol = 1e-9;
    let mut scale = profile.means.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let mut residuals = Vec::with_capacity(n as usize + 1);
    let mut worst = (0.0f64, 0u32);
    for m in 0..=n {
        let mut predicted = 0.0;
        let mut magnitude = 0.0;
        for k in 1..=order_cap.min(m) {
            let coeff = binomial_f64(m, k).expect("n <= 24") / binomial_f64(n, k).expect("n <= 24");
            predicted += coeff * sums.sums[k as usize];
            magnitude += (coeff * sums.sums[k as usize]).abs();
        }
        scale = scale.max(magnitude);
        let residual = (profile.means[m as usize] - predicted).abs();
        if residual > worst.0 {
            worst = (residual, m);
        }
        residuals.push(residual);
    }
    OrderMeanIdentityReport {
        order_cap,
        pass: worst.0 <= rel_tol * scale,
        rel_tol,
        scale,
        residuals,
        max_residual: worst.0,
        worst_order: worst.1,
    }
}

/// Determinant check for the binomial coefficient matrix that maps per-order
/// sums to order averages (restricted to the top `order_cap` sizes).
#[derive(Debug, Clone, Serialize)]
pub struct DeterminantCheck {
    pub n: u32,
    pub order_cap: u32,
    pub determinant: f64,
    /// Closed form `1 / prod_{k=1}^{order_cap} C(n,k)`.
    pub expected: f64,
    pub relative_error: f64,
    pub pass: bool,
}

/// Build the `order_cap x order_cap` matrix with entry `C(m, j) / C(n, j+1)`
/// for rows `m = n-order_cap ..= n-1` (ascending, which makes the determinant
/// positive) and columns `j = 0 .. order_cap`, and compare its determinant
/// against the closed form.
pub fn coefficient_matrix_determinant(n: u32, order_cap: u32) -> Result<DeterminantCheck> {
    if !(1..=16).contains(&n) || order_cap == 0 || order_cap >= n {
        return Err(Error::precondition(format!(
            "need 1 <= order_cap < n <= 16, got order_cap={order_cap}, n={n}"
        )));
    }
    let m_cap = order_cap as usize;
    let mut matrix = vec![vec![0.0f64; m_cap]; m_cap];
    for (r, row) in matrix.iter_mut().enumerate() {
        let m = n - order_cap + r as u32;
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = binomial_f64(m, c as u32)? / binomial_f64(n, c as u32 + 1)?;
        }
    }
    let determinant = det_in_place(matrix);
    let mut expected = 1.0;
    for k in 1..=order_cap {
        expected /= binomial_f64(n, k)?;
    }
    let relative_error = (determinant - expected).abs() / expected.abs();
    Ok(DeterminantCheck {
        n,
        order_cap,
        determinant,
        expected,
        relative_error,
        pass: relative_error <= 1e-9,
    })
}

/// Gaussian elimination with partial pivoting; fine for the tiny matrices
/// used here.
fn det_in_place(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        let pivot_row = a[col].clone();
        for row in &mut a[col + 1..] {
            let factor = row[col] / pivot_row[col];
            for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * p;
            }
        }
    }
    det
}

/// One entry of the ranked effect-strength curve.
#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub rank: u64,
    /// |effect| normalized by the largest |effect|.
    pub strength: f64,
    pub mask: u32,
    pub order: u32,
    pub effect: f64,
}

/// All nonzero effects ranked by |effect| descending (ties broken by
/// ascending mask), with strengths normalized to the top entry. Empty when
/// every effect is exactly zero.
pub fn normalized_strength_curve(interactions: &InteractionTable) -> Vec<CurvePoint> {
    let mut entries: Vec<(u32, f64)> = (0..interactions.len() as u32)
        .filter_map(|mask| {
            let e = interactions.effect_at(mask as usize);
            (e != 0.0).then_some((mask, e))
        })
        .collect();
    entries.sort_by(|x, y| y.1.abs().total_cmp(&x.1.abs()).then(x.0.cmp(&y.0)));
    let top = match entries.first() {
        Some(&(_, e)) => e.abs(),
        None => return Vec::new(),
    };
    entries
        .iter()
        .enumerate()
        .map(|(i, &(mask, effect))| CurvePoint {
            rank: i as u64 + 1,
            strength: effect.abs() / top,
            mask,
            order: mask.count_ones(),
            effect,
        })
        .collect()
}

/// Render a curve as CSV with a fixed header; floats are written in their
/// shortest round-trip form.
pub fn curve_to_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("rank,strength,mask,order,effect\n");
    for point in curve {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            point.rank, point.strength, point.mask, point.order, point.effect
        ));
    }
    out
}

/// Count effects with `|I(S)| >= tau` per order.
pub fn count_valid_concepts(interactions: &InteractionTable, tau: f64) -> Result<Vec<u64>> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::precondition(format!(
            "salience threshold must be positive and finite, got {tau}"
        )));
    }
    let mut counts = vec![0u64; interactions.n() as usize + 1];
    for mask in 0..interactions.len() as u32 {
        if interactions.effect_at(mask as usize).abs() >= tau {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    Ok(counts)
}

/// Default salience threshold: 5% of the mean |u(S)| over nonempty
/// coalitions. Errors when that mean is zero (nothing to threshold).
pub fn select_tau(table: &ValueTable) -> Result<f64> {
    let baseline = table.baseline();
    let total: f64 = (1..table.len())
        .map(|i| (table.value_at(i) - baseline).abs())
        .sum();
    let mean = total / (table.len() - 1) as f64;
    if mean == 0.0 {
        return Err(Error::DegenerateGame(
            "every utility is zero; no salience threshold exists".into(),
        ));
    }
    Ok(0.05 * mean)
}

/// Base-`n` digit decomposition of the per-order sums relative to the
/// first-order mean.
///
/// For each order `k`, `sums[k] / means[1]` is expanded in base `n` with the
/// fractional remainder absorbed into digit 0 and the sign applied to every
/// digit. Digits at positions `>= floor(p)` are merged into a single head
/// term `head_coeff * n^(p + excess)`, so that
/// `sums[k] = (head + sum_i digits[i] * n^i) * means[1]` holds per order.
#[derive(Debug, Clone, Serialize)]
pub struct OrderSumDecomposition {
    pub n: u32,
    pub p: f64,
    /// Number of retained digit positions, `floor(p)`.
    pub digit_count: usize,
    pub order_cap: u32,
    pub first_order_mean: f64,
    pub orders: Vec<OrderTerm>,
    /// Present when at least one order has digits at or above `floor(p)`.
    pub head: Option<HeadAggregate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderTerm {
    pub order: u32,
    /// Coefficient of the merged high-digit term, `|head_coeff| <= 1`;
    /// exactly 0 for orders whose expansion stops below `floor(p)`.
    pub head_coeff: f64,
    /// Digits 0..floor(p); positions >= 1 are signed integers in `-(n-1)..=n-1`,
    /// position 0 additionally carries the fractional remainder (`|digit| < n`).
    pub digits: Vec<f64>,
    pub has_head: bool,
    /// Relative error of rebuilding `sums[k]` from this row.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeadAggregate {
    /// Shared exponent excess: head terms scale as `n^(p + excess)`.
    pub excess: f64,
    /// Coalition size whose aggregated head coefficient is nonzero.
    pub witness_order: u32,
    /// Aggregated head coefficient at the witness order.
    pub head_coeff: f64,
    /// Aggregated digits at the witness order.
    pub digits: Vec<f64>,
    /// Largest excess compatible with the growth bound at the witness order,
    /// from `0 <= mean utility at witness <= n^p * means[1]`. `None` when the
    /// digits already overshoot that window (possible only if the growth
    /// assumptions fail at this `p`).
    pub excess_bound: Option<f64>,
    /// Whether `excess <= excess_bound` (within 1e-9); false when no bound
    /// exists.
    pub within_bound: bool,
}

pub fn decompose_order_sums(
    sums: &OrderSums,
    profile: &OrderProfile,
    p: f64,
    order_cap: u32,
) -> Result<OrderSumDecomposition> {
    let n = sums.n;
    if profile.n != n {
        return Err(Error::precondition("profile and sums disagree on n"));
    }
    if n < 2 {
        return Err(Error::precondition(
            "base-n digit expansion needs at least two players",
        ));
    }
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::precondition(format!(
            "growth exponent must satisfy p > 1, got {p}"
        )));
    }
    if order_cap == 0 || order_cap > n {
        return Err(Error::precondition(format!(
            "order cap {order_cap} out of range 1..={n}"
        )));
    }
    let first_order_mean = profile.means[1];
    if first_order_mean <= 0.0 || first_order_mean.is_nan() {
        return Err(Error::AssumptionViolated(format!(
            "first-order mean utility must be positive, got {first_order_mean}"
        )));
    }
    let digit_count = p.floor() as usize;
    let base = n as f64;

    struct Expansion {
        digits: Vec<f64>,
        head_sign: f64,
        head_value: f64, // |merged high digits|, 0 when none
    }

    let mut expansions = Vec::with_capacity(order_cap as usize);
    for k in 1..=order_cap {
        let x = sums.sums[k as usize] / first_order_mean;
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        let magnitude = x.abs();
        if magnitude >= 1e30 {
            return Err(Error::precondition(format!(
                "order-{k} sum is too large to expand ({magnitude:e})"
            )));
        }
        // Integer digits in base n, least significant first; the fractional
        // remainder rides along in digit 0 (so |digit 0| < n always).
        let mut int_part = magnitude.floor() as u128;
        let frac = magnitude - magnitude.floor();
        let mut digits: Vec<f64> = Vec::new();
        while int_part > 0 {
            digits.push((int_part % n as u128) as f64);
            int_part /= n as u128;
        }
        if digits.is_empty() {
            digits.push(0.0);
        }
        digits[0] += frac;
        let mut head_value = 0.0;
        for (i, d) in digits.iter().enumerate().skip(digit_count) {
            head_value += d * base.powi(i as i32);
        }
        digits.truncate(digit_count);
        digits.resize(digit_count, 0.0);
        for d in digits.iter_mut() {
            *d *= sign;
        }
        expansions.push(Expansion {
            digits,
            head_sign: sign,
            head_value,
        });
    }

    // Shared excess: align every order's head term to the largest one.
    let excess = expansions
        .iter()
        .filter(|e| e.head_value > 0.0)
        .map(|e| e.head_value.ln() / base.ln() - p)
        .fold(f64::NEG_INFINITY, f64::max);
    let has_head = excess.is_finite();

    let mut orders = Vec::with_capacity(order_cap as usize);
    for (idx, exp) in expansions.iter().enumerate() {
        let k = idx + 1;
        let head_coeff = if exp.head_value > 0.0 {
            let own_excess = exp.head_value.ln() / base.ln() - p;
            exp.head_sign * base.powf(own_excess - excess)
        } else {
            0.0
        };
        let head_part = if exp.head_value > 0.0 {
            head_coeff * base.powf(p + excess)
        } else {
            0.0
        };
        let digit_part: f64 = exp
            .digits
            .iter()
            .enumerate()
            .map(|(i, d)| d * base.powi(i as i32))
            .sum();
        let rebuilt = (head_part + digit_part) * first_order_mean;
        let target = sums.sums[k];
        let residual = (rebuilt - target).abs() / target.abs().max(1.0);
        orders.push(OrderTerm {
            order: k as u32,
            head_coeff,
            digits: exp.digits.clone(),
            has_head: exp.head_value > 0.0,
            residual,
        });
    }

    let head = if has_head {
        Some(aggregate_head(n, p, excess, digit_count, &orders, order_cap)?)
    } else {
        None
    };

    Ok(OrderSumDecomposition {
        n,
        p,
        digit_count,
        order_cap,
        first_order_mean,
        orders,
        head,
    })
}

fn aggregate_head(
    n: u32,
    p: f64,
    excess: f64,
    digit_count: usize,
    orders: &[OrderTerm],
    order_cap: u32,
) -> Result<HeadAggregate> {
    let base = f64::from(n);
    let weight = |m0: u32, k: u32| -> f64 {
        binomial_f64(m0, k).expect("n <= 24") / binomial_f64(n, k).expect("n <= 24")
    };
    // Walk candidate coalition sizes from the top; the first with a nonzero
    // aggregated head coefficient witnesses the bound.
    let mut witness = None;
    for m0 in (n.saturating_sub(order_cap)..=n).rev() {
        let coeff: f64 = orders
            .iter()
            .map(|o| weight(m0, o.order) * o.head_coeff)
            .sum();
        if coeff.abs() > 1e-12 {
            witness = Some((m0, coeff));
            break;
        }
    }
    let Some((witness_order, head_coeff)) = witness else {
        return Err(Error::AssumptionViolated(
            "aggregated head coefficient vanished at every candidate size".into(),
        ));
    };
    let digits: Vec<f64> = (0..digit_count)
        .map(|i| {
            orders
                .iter()
                .map(|o| weight(witness_order, o.order) * o.digits[i])
                .sum()
        })
        .collect();
    // The mean utility at the witness size is (head_coeff*n^(p+excess) +
    // sum_i digits[i]*n^i) * means[1]; squeezing it into [0, n^p * means[1]]
    // yields an upper limit on the excess.
    let digit_over_np: f64 = digits
        .iter()
        .enumerate()
        .map(|(i, d)| d * base.powf(i as f64 - p))
        .sum();
    let argument = if head_coeff > 0.0 {
        (1.0 - digit_over_np) / head_coeff
    } else {
        digit_over_np / -head_coeff
    };
    let excess_bound = (argument > 0.0).then(|| argument.ln() / base.ln());
    let within_bound = excess_bound.is_some_and(|b| excess <= b + 1e-9);
    Ok(HeadAggregate {
        excess,
        witness_order,
        head_coeff,
        digits,
        excess_bound,
        within_bound,
    })
}

/// Status of one order's concept-count bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Checked,
    /// The order's effects sum to zero, so no bound exists.
    NetZero,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConceptCountBound {
    pub order: u32,
    /// Number of effects with `|I(S)| >= tau` at this order.
    pub count: u64,
    /// `means[1] / (tau * |net_ratio|) * |head + digits|`, rebuilt from the
    /// stored decomposition; `None` when the order nets to zero.
    pub bound: Option<f64>,
    pub satisfied: Option<bool>,
    pub status: BoundStatus,
}

/// Evaluate the concept-count cap for one order from a stored decomposition.
pub fn concept_count_bound(
    decomposition: &OrderSumDecomposition,
    sums: &OrderSums,
    counts: &[u64],
    tau: f64,
    order: u32,
) -> Result<ConceptCountBound> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::precondition(format!(
            "salience threshold must be positive and finite, got {tau}"
        )));
    }
    if order == 0 || order > decomposition.order_cap {
        return Err(Error::precondition(format!(
            "order {order} outside decomposition range 1..={}",
            decomposition.order_cap
        )));
    }
    let count = counts[order as usize];
    let net = sums.net_ratio[order as usize];
    if net == 0.0 {
        return Ok(ConceptCountBound {
            order,
            count,
            bound: None,
            satisfied: None,
            status: BoundStatus::NetZero,
        });
    }
    let term = &decomposition.orders[order as usize - 1];
    let base = decomposition.n as f64;
    let head_part = match (&decomposition.head, term.has_head) {
        (Some(head), true) => term.head_coeff * base.powf(decomposition.p + head.excess),
        _ => 0.0,
    };
    let digit_part: f64 = term
        .digits
        .iter()
        .enumerate()
        .map(|(i, d)| d * base.powi(i as i32))
        .sum();
    let bound = decomposition.first_order_mean / (tau * net.abs()) * (head_part + digit_part).abs();
    Ok(ConceptCountBound {
        order,
        count,
        bound: Some(bound),
        satisfied: Some(count as f64 <= bound + 1e-9),
        status: BoundStatus::Checked,
    })
}

/// Everything the sparsity analysis produces for one game.
#[derive(Debug, Clone, Serialize)]
pub struct SparsityReport {
    pub n: u32,
    pub baseline: f64,
    /// `max(1, max|v(S)|)` of the analysed table.
    pub scale: f64,
    pub order_means: Vec<f64>,
    pub monotonicity: MonotonicityVerdict,
    /// Smallest feasible growth exponent, when one exists below 64.
    pub min_feasible_p: Option<f64>,
    /// Exponent actually used downstream.
    pub p: Option<f64>,
    pub p_source: String,
    pub growth_lower_bound: Option<GrowthBoundVerdict>,
    pub tau: f64,
    pub tau_source: String,
    pub order_cap: u32,
    pub order_cap_source: String,
    pub order_sums: OrderSums,
    /// `|net_ratio| * n` per order; at most 1 means cancellation dominates.
    pub scaled_net_ratio: Vec<f64>,
    pub cancellation_dominated: Vec<u32>,
    pub valid_counts: Vec<u64>,
    pub nonzero_effects: u64,
    pub max_abs_effect: f64,
    pub curve: Vec<CurvePoint>,
    pub decomposition: Option<OrderSumDecomposition>,
    pub decomposition_status: String,
    pub count_bounds: Vec<ConceptCountBound>,
}

/// Run the full pipeline: decompose, profile, fit or accept `p`, pick or
/// accept `tau`, and assemble every diagnostic. Overrides replace the
/// automatic choices; `None` means automatic.
pub fn full_report(
    table: &ValueTable,
    p_override: Option<f64>,
    tau_override: Option<f64>,
    order_cap_override: Option<u32>,
) -> Result<SparsityReport> {
    let n = table.n();
    let scale = table.scale();
    let interactions = harsanyi_dividends(table);
    let profile = order_average_outputs(table);
    let monotonicity = check_weak_monotonicity(&profile);
    let sums = order_sums(&interactions);

    let tau = match tau_override {
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(t) => {
            return Err(Error::precondition(format!(
                "salience threshold must be positive and finite, got {t}"
            )))
        }
        None => select_tau(table)?,
    };
    let tau_source = if tau_override.is_some() { "override" } else { "auto" };

    // Automatic order cap: highest order holding any effect mass.
    let auto_cap = (1..=n)
        .filter(|&k| sums.abs_sums[k as usize] > 1e-12 * scale)
        .max()
        .unwrap_or(1);
    let order_cap = match order_cap_override {
        Some(cap) if (1..=n).contains(&cap) => cap,
        Some(cap) => {
            return Err(Error::precondition(format!(
                "order cap {cap} out of range 1..={n}"
            )))
        }
        None => auto_cap,
    };
    let order_cap_source = if order_cap_override.is_some() { "override" } else { "auto" };

    let min_feasible_p = fit_min_growth_exponent(&profile);
    let (p, p_source) = match p_override {
        Some(p) if p > 1.0 && p.is_finite() => (Some(p), "override"),
        Some(p) => {
            return Err(Error::precondition(format!(
                "growth exponent must satisfy p > 1, got {p}"
            )))
        }
        None => (min_feasible_p, if min_feasible_p.is_some() { "fitted" } else { "none" }),
    };
    let growth_lower_bound = match p {
        Some(p) => Some(check_growth_lower_bound(&profile, p)?),
        None => None,
    };

    let (decomposition, decomposition_status) = match p {
        None => (None, "skipped: no growth exponent is feasible".to_string()),
        Some(_) if n < 2 => (None, "skipped: single-player game".to_string()),
        Some(p) => match decompose_order_sums(&sums, &profile, p, order_cap) {
            Ok(d) => (Some(d), "ok".to_string()),
            Err(e) => (None, format!("skipped: {e}")),
        },
    };

    let valid_counts = count_valid_concepts(&interactions, tau)?;
    let curve = normalized_strength_curve(&interactions);
    let nonzero_effects = curve.len() as u64;
    let max_abs_effect = curve.first().map(|c| c.effect.abs()).unwrap_or(0.0);

    let scaled_net_ratio: Vec<f64> = sums
        .net_ratio
        .iter()
        .map(|r| r.abs() * n as f64)
        .collect();
    let cancellation_dominated: Vec<u32> = (1..=n)
        .filter(|&k| sums.abs_sums[k as usize] > 0.0 && scaled_net_ratio[k as usize] <= 1.0)
        .collect();

    let count_bounds = match &decomposition {
        Some(d) => (1..=order_cap)
            .map(|k| concept_count_bound(d, &sums, &valid_counts, tau, k))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };

    Ok(SparsityReport {
        n,
        baseline: table.baseline(),
        scale,
        order_means: profile.means.clone(),
        monotonicity,
        min_feasible_p,
        p,
        p_source: p_source.to_string(),
        growth_lower_bound,
        tau,
        tau_source: tau_source.to_string(),
        order_cap,
        order_cap_source: order_cap_source.to_string(),
        order_sums: sums,
        scaled_net_ratio,
        cancellation_dominated,
        valid_counts,
        nonzero_effects,
        max_abs_effect,
        curve,
        decomposition,
        decomposition_status,
        count_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_oracle::random_table;
    use crate::subset_algebra::LatticeArray;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table_from(n: u32, f: impl FnMut(crate::subset_algebra::SubsetMask) -> f64) -> ValueTable {
        ValueTable::new(LatticeArray::from_fn(n, f).unwrap())
    }

    fn seeded(n: u32, seed: u64) -> ValueTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_table(n, &mut rng).unwrap()
    }

    fn parity_table(n: u32) -> ValueTable {
        let spec = crate::synth::parity_game(n).unwrap();
        table_from(n, |m| spec.evaluate(m.bits()))
    }

    fn profile_of(means: Vec<f64>) -> OrderProfile {
        OrderProfile {
            n: (means.len() - 1) as u32,
            means,
        }
    }

    #[test]
    fn order_averages_examples() {
        let constant = table_from(3, |_| 2.5);
        assert_eq!(order_average_outputs(&constant).means, vec![0.0; 4]);

        let additive = table_from(3, |m| m.order() as f64);
        assert_eq!(order_average_outputs(&additive).means, vec![0.0, 1.0, 2.0, 3.0]);

        let parity = order_average_outputs(&parity_table(3));
        assert_eq!(parity.means, vec![0.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn monotonicity_verdicts() {
        let additive = order_average_outputs(&table_from(4, |m| m.order() as f64));
        assert!(check_weak_monotonicity(&additive).pass);

        let verdict = check_weak_monotonicity(&order_average_outputs(&parity_table(4)));
        assert!(!verdict.pass);
        assert!(verdict
            .violations
            .iter()
            .any(|v| v.lower_order == 1 && v.upper_order == 2));
    }

    #[test]
    fn growth_bound_verdicts() {
        let linear = profile_of((0..=6).map(|m| m as f64).collect());
        assert!(check_growth_lower_bound(&linear, 2.0).unwrap().pass);

        let cubic = profile_of((0..=6).map(|m| (m as f64).powi(3)).collect());
        let verdict = check_growth_lower_bound(&cubic, 2.0).unwrap();
        assert!(!verdict.pass);
        assert!(verdict.violations.iter().any(|v| v.lower_order == 1));

        assert!(check_growth_lower_bound(&linear, 1.0).is_err());
        assert!(check_growth_lower_bound(&linear, 0.5).is_err());
    }

    #[test]
    fn growth_exponent_fitting() {
        let linear = profile_of((0..=8).map(|m| m as f64).collect());
        let p = fit_min_growth_exponent(&linear).unwrap();
        assert!(p > 1.0 && p < 1.0 + 1e-5, "{p}");

        // Quadratic growth needs p close to 2.
        let quadratic = profile_of((0..=8).map(|m| (m as f64).powi(2)).collect());
        let p = fit_min_growth_exponent(&quadratic).unwrap();
        assert!((p - 2.0).abs() <= 1e-4, "{p}");

        // A zero first-order mean with positive top mean is unfixable.
        let mut dead = vec![0.0; 9];
        dead[8] = 1.0;
        assert!(fit_min_growth_exponent(&profile_of(dead)).is_none());

        // All-zero profiles are vacuously fine at any exponent.
        let p = fit_min_growth_exponent(&profile_of(vec![0.0; 9])).unwrap();
        assert!(p > 1.0 && p < 1.0 + 1e-5);
    }

    #[test]
    fn order_sum_examples() {
        let ints = crate::interaction::harsanyi_dividends(&ValueTable::from_values(
            2,
            vec![0.0, 1.0, 1.0, 3.0],
        ).unwrap());
        let sums = order_sums(&ints);
        assert_eq!(sums.sums, vec![0.0, 2.0, 1.0]);
        assert_eq!(sums.abs_sums, vec![0.0, 2.0, 1.0]);
        assert_eq!(sums.net_ratio, vec![0.0, 1.0, 1.0]);

        // Exact cancellation: net ratio 0 with mass present.
        let ints = crate::interaction::InteractionTable::new(
            LatticeArray::new(2, vec![0.0, 1.0, -1.0, 0.0]).unwrap(),
            0.0,
        )
        .unwrap();
        let sums = order_sums(&ints);
        assert_eq!(sums.sums[1], 0.0);
        assert_eq!(sums.abs_sums[1], 2.0);
        assert_eq!(sums.net_ratio[1], 0.0);
    }

    #[test]
    fn order_mean_identity_holds_at_full_cap() {
        for seed in 0..5 {
            let t = seeded(8, 40 + seed);
            let ints = crate::interaction::harsanyi_dividends(&t);
            let report =
                verify_order_mean_identity(&order_average_outputs(&t), &order_sums(&ints), 8);
            assert!(report.pass, "seed {seed}: residual {}", report.max_residual);
        }
        // Parity stresses the cancellation inside the predicted sums.
        let t = parity_table(10);
        let ints = crate::interaction::harsanyi_dividends(&t);
        let report =
            verify_order_mean_identity(&order_average_outputs(&t), &order_sums(&ints), 10);
        assert!(report.pass, "residual {}", report.max_residual);
    }

    #[test]
    fn order_mean_identity_additive_form() {
        // Purely additive games: means grow linearly as (m/n) * first-order sum.
        let t = table_from(5, |m| m.members().map(|i| (i + 1) as f64).sum());
        let ints = crate::interaction::harsanyi_dividends(&t);
        let sums = order_sums(&ints);
        let profile = order_average_outputs(&t);
        for m in 0..=5u32 {
            let predicted = m as f64 / 5.0 * sums.sums[1];
            assert!((profile.means[m as usize] - predicted).abs() <= 1e-12);
        }
        let report = verify_order_mean_identity(&profile, &sums, 1);
        assert!(report.pass);
    }

    #[test]
    fn determinant_closed_form_examples() {
        let check = coefficient_matrix_determinant(5, 1).unwrap();
        assert!((check.determinant - 0.2).abs() <= 1e-15);

        let check = coefficient_matrix_determinant(6, 2).unwrap();
        assert!(
            (check.determinant - 1.0 / 90.0).abs() <= 1e-12,
            "{}",
            check.determinant
        );

        let check = coefficient_matrix_determinant(4, 3).unwrap();
        assert!(
            (check.determinant - 1.0 / 96.0).abs() <= 1e-12,
            "{}",
            check.determinant
        );

        assert!(coefficient_matrix_determinant(4, 4).is_err());
        assert!(coefficient_matrix_determinant(17, 2).is_err());
    }

    #[test]
    fn determinant_closed_form_grid() {
        for n in 2..=12u32 {
            for cap in 1..n.min(7) {
                let check = coefficient_matrix_determinant(n, cap).unwrap();
                assert!(
                    check.pass,
                    "n={n} cap={cap}: det {} vs {}",
                    check.determinant, check.expected
                );
            }
        }
    }

    #[test]
    fn strength_curve_ranking() {
        let ints = crate::interaction::InteractionTable::new(
            LatticeArray::new(2, vec![0.0, 1.0, 1.0, 1.0]).unwrap(),
            0.0,
        )
        .unwrap();
        let curve = normalized_strength_curve(&ints);
        assert_eq!(curve.len(), 3);
        assert!(curve.iter().all(|c| c.strength == 1.0));
        assert_eq!(curve.iter().map(|c| c.mask).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(curve.iter().map(|c| c.rank).collect::<Vec<_>>(), vec![1, 2, 3]);

        let mut effects = vec![0.0; 8];
        effects[0b101] = -2.0;
        effects[0b010] = 0.5;
        let ints = crate::interaction::InteractionTable::new(
            LatticeArray::new(3, effects).unwrap(),
            0.0,
        )
        .unwrap();
        let curve = normalized_strength_curve(&ints);
        assert_eq!(curve.len(), 2);
        assert_eq!(curve[0].mask, 0b101);
        assert_eq!(curve[0].strength, 1.0);
        assert_eq!(curve[0].effect, -2.0);
        assert_eq!(curve[1].strength, 0.25);
        assert_eq!(curve[1].order, 1);

        let zeros = crate::interaction::InteractionTable::new(
            LatticeArray::zeros(3).unwrap(),
            0.0,
        )
        .unwrap();
        assert!(normalized_strength_curve(&zeros).is_empty());
    }

    #[test]
    fn curve_csv_layout() {
        let ints = crate::interaction::InteractionTable::new(
            LatticeArray::new(2, vec![0.0, 0.5, 0.0, -1.0]).unwrap(),
            0.0,
        )
        .unwrap();
        let csv = curve_to_csv(&normalized_strength_curve(&ints));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "rank,strength,mask,order,effect");
        assert_eq!(lines[1], "1,1,3,2,-1");
        assert_eq!(lines[2], "2,0.5,1,1,0.5");
    }

    #[test]
    fn valid_concept_counting() {
        let ints = crate::interaction::InteractionTable::new(
            LatticeArray::new(2, vec![0.0, 1.0, 1.0, 1.0]).unwrap(),
            0.0,
        )
        .unwrap();
        assert_eq!(count_valid_concepts(&ints, 0.5).unwrap(), vec![0, 2, 1]);
        assert_eq!(count_valid_concepts(&ints, 10.0).unwrap(), vec![0, 0, 0]);
        assert!(count_valid_concepts(&ints, 0.0).is_err());
        assert!(count_valid_concepts(&ints, -1.0).is_err());
    }

    #[test]
    fn tau_selection() {
        let t = ValueTable::from_values(2, vec![0.0, 1.0, 1.0, 3.0]).unwrap();
        let tau = select_tau(&t).unwrap();
        assert!((tau - 0.05 * 5.0 / 3.0).abs() <= 1e-15);

        let constant = table_from(3, |_| 7.0);
        assert!(matches!(select_tau(&constant), Err(Error::DegenerateGame(_))));
    }

    #[test]
    fn decomposition_engineered_head_example() {
        // Order-1 sum equal to (n^2 + 3) * first-order mean at p = 1.5:
        // one head digit at position 2 and a bare 3 in position 0.
        let n = 8u32;
        let mut sums = OrderSums {
            n,
            sums: vec![0.0; n as usize + 1],
            abs_sums: vec![0.0; n as usize + 1],
            net_ratio: vec![0.0; n as usize + 1],
        };
        sums.sums[1] = (n * n + 3) as f64;
        sums.abs_sums[1] = sums.sums[1];
        sums.net_ratio[1] = 1.0;
        let mut means = vec![0.0; n as usize + 1];
        means[1] = 1.0;
        let profile = profile_of(means);

        let d = decompose_order_sums(&sums, &profile, 1.5, 1).unwrap();
        assert_eq!(d.digit_count, 1);
        let term = &d.orders[0];
        assert!(term.has_head);
        assert!((term.head_coeff - 1.0).abs() <= 1e-12);
        assert_eq!(term.digits, vec![3.0]);
        let head = d.head.as_ref().unwrap();
        assert!((head.excess - 0.5).abs() <= 1e-12);
        assert_eq!(head.witness_order, 8);
        assert!((head.head_coeff - 1.0).abs() <= 1e-12);
        assert!(term.residual <= 1e-12);
    }

    #[test]
    fn decomposition_pure_digit_example() {
        // Additive unit game: order-1 sum is n * mean, a single digit at
        // position 1, which stays below floor(p) = 2. No head term.
        let t = table_from(6, |m| m.order() as f64);
        let ints = crate::interaction::harsanyi_dividends(&t);
        let sums = order_sums(&ints);
        let profile = order_average_outputs(&t);
        let d = decompose_order_sums(&sums, &profile, 2.0, 6).unwrap();
        assert!(d.head.is_none());
        let first = &d.orders[0];
        assert!(!first.has_head);
        assert_eq!(first.digits, vec![0.0, 1.0]);
        for term in &d.orders[1..] {
            assert!(term.digits.iter().all(|&d| d == 0.0));
            assert!(term.residual <= 1e-12);
        }
    }

    #[test]
    fn decomposition_digit_ranges_and_reconstruction() {
        for seed in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec =
                crate::synth::random_monotone_planted_game(10, 8, 4, &mut rng).unwrap();
            let t = table_from(10, |m| spec.evaluate(m.bits()));
            let ints = crate::interaction::harsanyi_dividends(&t);
            let sums = order_sums(&ints);
            let profile = order_average_outputs(&t);
            let p = fit_min_growth_exponent(&profile).unwrap();
            let d = decompose_order_sums(&sums, &profile, p, 4).unwrap();
            for term in &d.orders {
                assert!(term.residual <= 1e-9, "seed {seed} order {}", term.order);
                assert!(term.head_coeff.abs() <= 1.0 + 1e-12);
                assert!(term.digits[0].abs() < 10.0);
                for digit in &term.digits[1..] {
                    assert!(digit.abs() <= 9.0);
                    assert_eq!(digit.fract(), 0.0);
                }
            }
            if let Some(head) = &d.head {
                assert!(head.within_bound, "seed {seed}: {head:?}");
            }
        }
    }

    #[test]
    fn decomposition_zero_sums_is_pure_case_one() {
        let sums = OrderSums {
            n: 6,
            sums: vec![0.0; 7],
            abs_sums: vec![0.0; 7],
            net_ratio: vec![0.0; 7],
        };
        let mut means = vec![0.0; 7];
        means[1] = 1.0;
        let d = decompose_order_sums(&sums, &profile_of(means), 2.0, 6).unwrap();
        assert!(d.head.is_none());
        assert!(d.orders.iter().all(|o| o.digits.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn decomposition_requires_positive_first_order_mean() {
        let t = parity_table(6);
        let ints = crate::interaction::harsanyi_dividends(&t);
        let sums = order_sums(&ints);
        let mut profile = order_average_outputs(&t);
        profile.means[1] = 0.0;
        assert!(matches!(
            decompose_order_sums(&sums, &profile, 2.0, 6),
            Err(Error::AssumptionViolated(_))
        ));
    }

    #[test]
    fn concept_bound_two_concepts() {
        let spec = crate::synth::planted_game(
            6,
            0.0,
            vec![
                crate::synth::Concept { mask: 0b000001, coeff: 1.0 },
                crate::synth::Concept { mask: 0b001110, coeff: 1.0 },
            ],
        )
        .unwrap();
        let t = table_from(6, |m| spec.evaluate(m.bits()));
        let ints = crate::interaction::harsanyi_dividends(&t);
        let sums = order_sums(&ints);
        let profile = order_average_outputs(&t);
        let p = fit_min_growth_exponent(&profile).unwrap();
        let d = decompose_order_sums(&sums, &profile, p, 3).unwrap();
        let counts = count_valid_concepts(&ints, 0.5).unwrap();
        let row = concept_count_bound(&d, &sums, &counts, 0.5, 3).unwrap();
        assert_eq!(row.count, 1);
        let bound = row.bound.unwrap();
        // |order-3 sum| / tau = 1 / 0.5 = 2.
        assert!((bound - 2.0).abs() <= 1e-9, "{bound}");
        assert_eq!(row.satisfied, Some(true));
    }

    #[test]
    fn concept_bound_net_zero_order() {
        let sums = OrderSums {
            n: 4,
            sums: vec![0.0; 5],
            abs_sums: vec![0.0, 0.0, 2.0, 0.0, 0.0],
            net_ratio: vec![0.0; 5],
        };
        let mut means = vec![0.0; 5];
        means[1] = 1.0;
        let d = decompose_order_sums(&sums, &profile_of(means), 2.0, 4).unwrap();
        let row = concept_count_bound(&d, &sums, &[0, 0, 2, 0, 0], 0.1, 2).unwrap();
        assert_eq!(row.status, BoundStatus::NetZero);
        assert_eq!(row.bound, None);
        assert_eq!(row.satisfied, None);
    }

    #[test]
    fn full_report_planted_game() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let spec = crate::synth::random_monotone_planted_game(8, 3, 3, &mut rng).unwrap();
        let t = table_from(8, |m| spec.evaluate(m.bits()));
        let report = full_report(&t, None, None, None).unwrap();
        assert_eq!(report.tau_source, "auto");
        assert_eq!(report.p_source, "fitted");
        assert!(report.monotonicity.pass);
        assert!(report.decomposition.is_some(), "{}", report.decomposition_status);
        let planted: u64 = report.valid_counts.iter().sum();
        assert_eq!(planted, 3);
        assert!(report
            .count_bounds
            .iter()
            .all(|b| b.satisfied != Some(false)));
        assert_eq!(report.nonzero_effects as usize, report.curve.len());
    }

    #[test]
    fn full_report_parity_game() {
        let report = full_report(&parity_table(8), None, None, None).unwrap();
        assert!(!report.monotonicity.pass);
        assert_eq!(report.min_feasible_p, None);
        assert_eq!(report.p, None);
        assert!(report.decomposition.is_none());
        assert!(report.decomposition_status.contains("skipped"));
        assert_eq!(report.curve.len(), 255);
        // Every nonempty coalition counts at the default threshold.
        assert_eq!(report.valid_counts.iter().sum::<u64>(), 255);
    }

    #[test]
    fn full_report_degenerate_game() {
        let constant = table_from(4, |_| 1.0);
        assert!(matches!(
            full_report(&constant, None, None, None),
            Err(Error::DegenerateGame(_))
        ));
    }

    #[test]
    fn full_report_rejects_bad_overrides() {
        let t = seeded(5, 5);
        assert!(full_report(&t, Some(0.5), None, None).is_err());
        assert!(full_report(&t, None, Some(-1.0), None).is_err());
        assert!(full_report(&t, None, None, Some(9)).is_err());
    }
}
