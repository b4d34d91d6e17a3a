//! FDF achievable-rate bounds: per-user, common, and sum rates of a feasible
//! pairing under a channel state.
//!
//! When users `i` and `j` transmit together, the relay's ability to decode
//! the pair function caps user `i` at `(1/2M) * log2(gamma_i/(gamma_i +
//! gamma_j) + gamma_i)` bits per real channel use (clamped at zero), and
//! every broadcast caps all users at `(1/2M) * log2(1 + Gamma_d)`. A user's
//! rate is the minimum of its bounds over all phases it participates in;
//! since the pair bound decreases in the partner's SNR, only the strongest
//! partner binds.

use crate::channel::ChannelState;
use crate::pairing_graph::{graph_of, Pairing};
use crate::{check_nonnegative, Error, Result};

/// Rates of one pairing under one channel, in bits per real channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// Rate of each user; index `i - 1` holds canonical user `i`.
    pub per_user: Vec<f64>,
    /// `min` of `per_user`.
    pub common_rate: f64,
    /// Sum of `per_user`.
    pub sum_rate: f64,
    /// Whether the downlink bound was applied.
    pub downlink_applied: bool,
    /// Phase count used in the `1/(2m)` pre-log.
    pub m: usize,
}

/// The pair-phase log argument `gamma_i/(gamma_i + gamma_j) + gamma_i`.
pub(crate) fn pair_bound_arg(gamma_i: f64, gamma_j: f64) -> f64 {
    gamma_i / (gamma_i + gamma_j) + gamma_i
}

/// Unclamped pair bound without pre-log: `log2(pair_bound_arg)`.
pub(crate) fn pair_bound_log(gamma_i: f64, gamma_j: f64) -> f64 {
    pair_bound_arg(gamma_i, gamma_j).log2()
}

/// Rate bound on user `i` when paired with user `j`, over `m` phase pairs:
/// `max{0, (1/2m) * log2(gamma_i/(gamma_i + gamma_j) + gamma_i)}`.
///
/// Asymmetric: the first argument is the user being bounded.
pub fn fdf_pair_bound(gamma_i: f64, gamma_j: f64, m: usize) -> Result<f64> {
    if !(gamma_i.is_finite() && gamma_i > 0.0) {
        return Err(Error::NonpositiveParameter {
            name: "gamma_i",
            value: gamma_i,
        });
    }
    if !(gamma_j.is_finite() && gamma_j > 0.0) {
        return Err(Error::NonpositiveParameter {
            name: "gamma_j",
            value: gamma_j,
        });
    }
    if m == 0 {
        return Err(Error::ZeroPhases);
    }
    Ok((pair_bound_log(gamma_i, gamma_j) / (2.0 * m as f64)).max(0.0))
}

/// Rate bound imposed by the downlink broadcasts:
/// `(1/2m) * log2(1 + gamma_d)`.
pub fn downlink_bound(gamma_d: f64, m: usize) -> Result<f64> {
    check_nonnegative("gamma_d", gamma_d)?;
    if m == 0 {
        return Err(Error::ZeroPhases);
    }
    Ok((1.0 + gamma_d).log2() / (2.0 * m as f64))
}

/// Achievable rate of user `i` under a feasible pairing: the minimum pair
/// bound over `i`'s neighbors (only the strongest neighbor binds), further
/// capped by the downlink bound when `apply_downlink` is set.
pub fn user_rate(
    pairing: &Pairing,
    ch: &ChannelState,
    i: usize,
    apply_downlink: bool,
) -> Result<f64> {
    let report = evaluate(pairing, ch, apply_downlink)?;
    if i < 1 || i > ch.n() {
        return Err(Error::LabelOutOfRange {
            label: i,
            n: ch.n(),
        });
    }
    Ok(report.per_user[i - 1])
}

/// Evaluates all per-user rates of a feasible pairing, with `m = n - 1`.
pub fn evaluate(pairing: &Pairing, ch: &ChannelState, apply_downlink: bool) -> Result<RateReport> {
    let n = ch.n();
    if pairing.n() != n {
        return Err(Error::UserCountMismatch {
            pairing: pairing.n(),
            channel: n,
        });
    }
    if !graph_of(pairing).is_tree() {
        return Err(Error::NotATree);
    }
    let m = n - 1;

    // Strongest neighbor per user. Canonical labels sort by SNR, so the
    // highest-labeled neighbor is the highest-SNR neighbor.
    let mut strongest = vec![0usize; n];
    for &(a, b) in pairing.pairs() {
        strongest[a - 1] = strongest[a - 1].max(b);
        strongest[b - 1] = strongest[b - 1].max(a);
    }

    let downlink = if apply_downlink {
        Some(downlink_bound(ch.gamma_d(), m)?)
    } else {
        None
    };

    let per_user: Vec<f64> = (1..=n)
        .map(|i| {
            let uplink =
                (pair_bound_log(ch.gamma(i), ch.gamma(strongest[i - 1])) / (2.0 * m as f64))
                    .max(0.0);
            match downlink {
                Some(d) => uplink.min(d),
                None => uplink,
            }
        })
        .collect();

    Ok(report_from(per_user, apply_downlink, m))
}

/// Assembles a report from per-user rates, deriving the two aggregates.
pub(crate) fn report_from(per_user: Vec<f64>, downlink_applied: bool, m: usize) -> RateReport {
    let common_rate = per_user.iter().copied().fold(f64::INFINITY, f64::min);
    let sum_rate = per_user.iter().sum();
    RateReport {
        per_user,
        common_rate,
        sum_rate,
        downlink_applied,
        m,
    }
}

/// Whether the sum-rate closed form's regime holds: `gamma_i/(gamma_i +
/// gamma_j) + gamma_i >= 1` for every ordered pair `(i, j)`. The worst case
/// is the weakest user against the strongest, so only that pair is checked.
pub fn weak_bound_holds(ch: &ChannelState) -> bool {
    weak_bound_violation(ch).is_none()
}

/// The worst-case regime violation, if any: `(i, j, value)` with `value < 1`.
pub(crate) fn weak_bound_violation(ch: &ChannelState) -> Option<(usize, usize, f64)> {
    let n = ch.n();
    let worst = pair_bound_arg(ch.gamma(1), ch.gamma(n));
    if worst < 1.0 {
        Some((1, n, worst))
    } else {
        None
    }
}
