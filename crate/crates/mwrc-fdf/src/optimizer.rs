//! Optimal pairing construction and verification.
//!
//! Two pairings are provably optimal in closed form: the SNR-ordered chain
//! maximizes the common rate, and the star centered at the weakest user
//! maximizes the sum rate whenever the SNRs are not too low (every pair-phase
//! log argument at least 1). [`brute_force_best`] verifies both claims by
//! exhaustive enumeration; [`silencing_search`] extends the sum-rate optimum
//! to channels with users weak enough that muting them pays off; and
//! [`sum_rate_analytic_bounds`] gives closed-form bounds on how much an
//! arbitrary tree can lose against the optimum.

use crate::channel::ChannelState;
use crate::fdf_rates::{evaluate, pair_bound_log, weak_bound_violation};
use crate::pairing_graph::{enumerate_trees, Pairing};
use crate::{Error, Result};

/// Which aggregate a search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Maximize the minimum per-user rate.
    Common,
    /// Maximize the total rate.
    Sum,
}

/// Outcome of an optimization: the chosen pairing and its context.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// The maximizing pairing, over the active users.
    pub pairing: Pairing,
    /// Value of the objective at the maximizer.
    pub objective_value: f64,
    /// The objective that was maximized.
    pub objective: Objective,
    /// Users that transmit; everyone unless silencing was applied.
    pub active_set: Vec<usize>,
    /// Phase count `m` in the `1/(2m)` pre-log. With silenced users this
    /// includes the extra individual uplink phase feasibility requires.
    pub phases: usize,
}

/// The SNR-ordered path `1-2, 2-3, ..., (n-1)-n`: the common-rate optimum.
pub fn chain_pairing(n: usize) -> Pairing {
    assert!(n >= 2, "need at least 2 users");
    Pairing::new(n, (1..n).map(|i| (i, i + 1)).collect()).expect("chain is valid")
}

/// The star pairing everyone with `center`. Centered at the weakest user
/// (label 1) it is the sum-rate optimum; centered at the strongest (label
/// `n`) it is the max-SNR reference scheme.
pub fn star_pairing(n: usize, center: usize) -> Pairing {
    assert!(n >= 2, "need at least 2 users");
    assert!((1..=n).contains(&center), "center label out of range");
    Pairing::new(
        n,
        (1..=n).filter(|&i| i != center).map(|i| (i, center)).collect(),
    )
    .expect("star is valid")
}

/// Closed-form maximum common rate, achieved by [`chain_pairing`]:
/// `1/(2(n-1)) * max{0, min}` over the `n - 1` chain-edge log terms
/// `log2(gamma_i + gamma_i/(gamma_i + gamma_{i+1}))` and the downlink term
/// `log2(1 + gamma_d)`.
pub fn common_rate_closed_form(ch: &ChannelState) -> f64 {
    let n = ch.n();
    let mut min_log = (1.0 + ch.gamma_d()).log2();
    for i in 1..n {
        min_log = min_log.min(pair_bound_log(ch.gamma(i), ch.gamma(i + 1)));
    }
    min_log.max(0.0) / (2.0 * (n - 1) as f64)
}

/// Closed-form maximum sum rate, achieved by the star at the weakest user
/// when the regime check passes (downlink not applied):
/// `1/(2(n-1)) * log2((gamma_1 + gamma_1/(gamma_1 + gamma_n)) *
/// prod_{i>=2} (gamma_i/(gamma_i + gamma_1) + gamma_i))`.
pub fn sum_rate_closed_form(ch: &ChannelState) -> Result<f64> {
    if let Some((i, j, value)) = weak_bound_violation(ch) {
        return Err(Error::WeakBoundViolation { i, j, value });
    }
    Ok(sum_rate_star_log(ch.gammas()) / (2.0 * (ch.n() - 1) as f64))
}

/// Unclamped sum of star-at-weakest log terms over the given SNRs
/// (sorted non-decreasing): the center's bound against the strongest plus
/// every other user's bound against the center.
fn sum_rate_star_log(gammas: &[f64]) -> f64 {
    let lo = gammas[0];
    let hi = gammas[gammas.len() - 1];
    let mut total = pair_bound_log(lo, hi);
    for &g in &gammas[1..] {
        total += pair_bound_log(g, lo);
    }
    total
}

/// Exhaustively maximizes the objective over all labeled trees.
///
/// Ties keep the first maximizer in enumeration order, i.e. the
/// lexicographically smallest Prüfer sequence. Sum-rate searches normally
/// run with `apply_downlink = false`, matching the closed form.
pub fn brute_force_best(
    ch: &ChannelState,
    objective: Objective,
    apply_downlink: bool,
) -> Result<OptimizationResult> {
    let n = ch.n();
    let mut best: Option<(f64, Pairing)> = None;
    for tree in enumerate_trees(n)? {
        let report = evaluate(&tree, ch, apply_downlink)?;
        let value = match objective {
            Objective::Common => report.common_rate,
            Objective::Sum => report.sum_rate,
        };
        let better = match &best {
            Some((best_value, _)) => value > *best_value,
            None => true,
        };
        if better {
            best = Some((value, tree));
        }
    }
    let (objective_value, pairing) = best.expect("enumeration yields at least one tree");
    Ok(OptimizationResult {
        pairing,
        objective_value,
        objective,
        active_set: (1..=n).collect(),
        phases: n - 1,
    })
}

/// Sum-rate search that may silence weak users.
///
/// For silent-count `i` in `0..=n-2`, candidate silent sets are `i`-subsets
/// of the `i + 1` weakest users plus the strongest; the active users form a
/// star at their weakest member. With `i` users silent, feasibility needs an
/// extra individual uplink phase (rate-neutral), for `m = n - i` phases; the
/// all-active case keeps `m = n - 1`. The best candidate wins; ties prefer
/// fewer silenced users. The all-active candidate is always evaluated, so
/// the result never falls below it.
pub fn silencing_search(ch: &ChannelState) -> OptimizationResult {
    let n = ch.n();
    let mut best: Option<(f64, Vec<usize>)> = None;

    for silent_count in 0..=(n - 2) {
        let candidates = silent_candidates(n, silent_count);
        for silent in candidates {
            let active: Vec<usize> = (1..=n).filter(|u| !silent.contains(u)).collect();
            let value = silenced_objective(ch, &active);
            let better = match &best {
                Some((best_value, _)) => value > *best_value,
                None => true,
            };
            if better {
                best = Some((value, active));
            }
        }
    }

    let (objective_value, active_set) = best.expect("the all-active candidate always exists");
    let phases = if active_set.len() == n { n - 1 } else { active_set.len() };
    OptimizationResult {
        pairing: star_over(&active_set, n),
        objective_value,
        objective: Objective::Sum,
        active_set,
        phases,
    }
}

/// Star-at-weakest sum rate of the given active users (canonical labels,
/// ascending), with the pre-log for their phase count; clamped at zero.
/// The choice of `m`: `n - 1` when everyone is active, otherwise the active
/// count (pairwise phases plus the extra individual phase).
pub(crate) fn silenced_objective(ch: &ChannelState, active: &[usize]) -> f64 {
    let n = ch.n();
    let m = if active.len() == n { n - 1 } else { active.len() };
    let gammas: Vec<f64> = active.iter().map(|&u| ch.gamma(u)).collect();
    (sum_rate_star_log(&gammas) / (2.0 * m as f64)).max(0.0)
}

/// `silent_count`-subsets of the candidate set: the `silent_count + 1`
/// weakest users together with the strongest.
fn silent_candidates(n: usize, silent_count: usize) -> Vec<Vec<usize>> {
    if silent_count == 0 {
        return vec![Vec::new()];
    }
    let mut pool: Vec<usize> = (1..=silent_count + 1).collect();
    if !pool.contains(&n) {
        pool.push(n);
    }
    subsets_of_size(&pool, silent_count)
}

fn subsets_of_size(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn recurse(
        pool: &[usize],
        start: usize,
        size: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for idx in start..pool.len() {
            current.push(pool[idx]);
            recurse(pool, idx + 1, size, current, out);
            current.pop();
        }
    }
    recurse(pool, 0, size, &mut current, &mut out);
    out
}

/// Star over the active users centered at their weakest member, labeled in
/// the full `1..=n` space. For a single active user the "star" is empty;
/// that cannot arise from [`silencing_search`], which keeps at least two.
fn star_over(active: &[usize], n: usize) -> Pairing {
    let center = active[0];
    Pairing::new(
        n,
        active[1..].iter().map(|&u| (u, center)).collect(),
    )
    .expect("active labels are valid")
}

/// Closed-form sum-rate bounds relating the optimal tree to a random one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRateBounds {
    /// Upper bound on the optimal tree's sum rate:
    /// `1/(2(n-1)) * log2(prod(gamma) * (1 + 1/(2 gamma_1))^n)`.
    pub upper_optimal: f64,
    /// Lower bound on every tree's sum rate:
    /// `1/(2(n-1)) * log2(prod(gamma) * (1 + 1/(2 gamma_n))^n)`.
    pub lower_random: f64,
    /// Upper bound on the optimal-minus-arbitrary sum-rate difference:
    /// `1/2 * log2((gamma_n (1 + 2 gamma_1) / (gamma_1 (1 + 2 gamma_n)))^n)`.
    /// Vanishes as the weakest SNR grows, so a random tree approaches the
    /// optimum at high SNR.
    pub gap_bound: f64,
}

/// Evaluates the three analytic sum-rate bounds.
pub fn sum_rate_analytic_bounds(ch: &ChannelState) -> SumRateBounds {
    let n = ch.n();
    let pre = 1.0 / (2.0 * (n - 1) as f64);
    let log_prod: f64 = ch.gammas().iter().map(|g| g.log2()).sum();
    let g1 = ch.gamma(1);
    let gn = ch.gamma(n);
    let upper_optimal = pre * (log_prod + n as f64 * (1.0 + 1.0 / (2.0 * g1)).log2());
    let lower_random = pre * (log_prod + n as f64 * (1.0 + 1.0 / (2.0 * gn)).log2());
    let gap_bound = 0.5 * ((gn * (1.0 + 2.0 * g1)) / (g1 * (1.0 + 2.0 * gn)))
        .powi(n as i32)
        .log2();
    SumRateBounds {
        upper_optimal,
        lower_random,
        gap_bound,
    }
}
