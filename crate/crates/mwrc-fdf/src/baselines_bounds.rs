//! Reference schemes and information-theoretic outer bounds.
//!
//! TDM here means: the uplink is split into `n` equal slots, one transmitter
//! per slot, each uplink followed by a relay broadcast, for a `1/(2n)`
//! pre-log. For a fair comparison each user's TDM transmit power is scaled so
//! its average power over a round matches what it spends under a reference
//! pairing, where a user of degree `d` transmits in `d` of the `n - 1`
//! pairwise slots. The cut-set bounds cap what any relaying strategy could
//! achieve and so dominate every achievable-rate column.

use crate::channel::ChannelState;
use crate::fdf_rates::{report_from, RateReport};
use crate::pairing_graph::{graph_of, Pairing};
use crate::{Error, Result};

/// How a per-user power scaling was derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingMode {
    /// Unit factors (or an unrecognized reference): no power matching.
    None,
    /// Matched to the chain pairing, the common-rate optimum.
    MatchChain,
    /// Matched to the star at the weakest user, the sum-rate optimum.
    MatchStar,
}

/// Per-user multiplicative SNR factors for the TDM baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerScaling {
    /// Which reference the factors were matched to.
    pub mode: ScalingMode,
    /// Positive factor per user; index `i - 1` holds canonical user `i`.
    pub factors: Vec<f64>,
}

impl PowerScaling {
    /// Unit factors: TDM at nominal power.
    pub fn unit(n: usize) -> Self {
        PowerScaling {
            mode: ScalingMode::None,
            factors: vec![1.0; n],
        }
    }
}

/// Power-matched TDM factors against a reference tree.
///
/// Under the reference, user `i` transmits at power `P` in `degree(i)` of the
/// `n - 1` pairwise slots, an average of `P * degree(i)/(n-1)` per slot. In
/// TDM it transmits in 1 of `n` slots, so matching the average requires slot
/// power `P * n * degree(i)/(n-1)`: `factor[i] = n * degree(i)/(n-1)`.
pub fn tdm_scaling(ch: &ChannelState, reference: &Pairing) -> Result<PowerScaling> {
    let n = ch.n();
    if reference.n() != n {
        return Err(Error::UserCountMismatch {
            pairing: reference.n(),
            channel: n,
        });
    }
    let g = graph_of(reference);
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let factors: Vec<f64> = g
        .degrees()
        .iter()
        .map(|&d| n as f64 * d as f64 / (n - 1) as f64)
        .collect();
    let chain = crate::optimizer::chain_pairing(n);
    let star = crate::optimizer::star_pairing(n, 1);
    let mode = if *reference == chain {
        ScalingMode::MatchChain
    } else if *reference == star {
        ScalingMode::MatchStar
    } else {
        ScalingMode::None
    };
    Ok(PowerScaling { mode, factors })
}

/// TDM rates: `per_user[i] = 1/(2n) * min{log2(1 + factor[i] * gamma_i),
/// log2(1 + gamma_d)}`. Every user must decode every broadcast, so the
/// downlink bottleneck applies throughout.
pub fn tdm_rates(ch: &ChannelState, scaling: &PowerScaling) -> RateReport {
    tdm_report(ch, scaling, true)
}

/// TDM rates on the uplink side alone: no broadcast bottleneck. Used where
/// the quantity being compared against also ignores the downlink.
pub fn tdm_uplink_rates(ch: &ChannelState, scaling: &PowerScaling) -> RateReport {
    tdm_report(ch, scaling, false)
}

fn tdm_report(ch: &ChannelState, scaling: &PowerScaling, apply_downlink: bool) -> RateReport {
    let n = ch.n();
    assert_eq!(scaling.factors.len(), n, "factor count must match users");
    let downlink_log = if apply_downlink {
        (1.0 + ch.gamma_d()).log2()
    } else {
        f64::INFINITY
    };
    let per_user: Vec<f64> = (1..=n)
        .map(|i| {
            let uplink_log = (1.0 + scaling.factors[i - 1] * ch.gamma(i)).log2();
            uplink_log.min(downlink_log) / (2.0 * n as f64)
        })
        .collect();
    report_from(per_user, true, n)
}

/// Cut-set upper bound on the common rate:
/// `1/(2(n-1)) * min{log2(1 + sum of the n-1 lowest scaled SNRs),
/// log2(1 + gamma_d)}`.
pub fn cutset_common_bound(ch: &ChannelState, scaled_gamma: &[f64]) -> f64 {
    let n = ch.n();
    assert_eq!(scaled_gamma.len(), n, "scaled SNR count must match users");
    let uplink_sum: f64 = scaled_gamma[..n - 1].iter().sum();
    let uplink_log = (1.0 + uplink_sum).log2();
    let downlink_log = (1.0 + ch.gamma_d()).log2();
    uplink_log.min(downlink_log) / (2.0 * (n - 1) as f64)
}

/// Cut-set upper bound on the sum rate: `1/(n-1) * sum_i S_i` with
/// `S_i = min{1/2 * log2(1 + sum_{j != i} scaled_gamma_j),
/// 1/2 * log2(1 + big_gamma_i)}`.
pub fn cutset_sum_bound(ch: &ChannelState, scaled_gamma: &[f64]) -> f64 {
    let n = ch.n();
    assert_eq!(scaled_gamma.len(), n, "scaled SNR count must match users");
    let total: f64 = scaled_gamma.iter().sum();
    let mut acc = 0.0;
    for i in 1..=n {
        let others = total - scaled_gamma[i - 1];
        let uplink = 0.5 * (1.0 + others).log2();
        let downlink = 0.5 * (1.0 + ch.big_gamma(i)).log2();
        acc += uplink.min(downlink);
    }
    acc / (n - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::make_channel;
    use crate::fdf_rates::evaluate;
    use crate::optimizer::{chain_pairing, star_pairing};
    use crate::pairing_graph::random_tree;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    #[test]
    fn scaling_factors_from_degrees() {
        let ch = ChannelState::from_snrs(&[1.0, 2.0, 4.0, 8.0], None).unwrap();
        let s = tdm_scaling(&ch, &chain_pairing(4)).unwrap();
        assert_eq!(s.mode, ScalingMode::MatchChain);
        let expected = [4.0 / 3.0, 8.0 / 3.0, 8.0 / 3.0, 4.0 / 3.0];
        for (f, e) in s.factors.iter().zip(expected) {
            assert!((f - e).abs() < TOL);
        }

        let s = tdm_scaling(&ch, &star_pairing(4, 1)).unwrap();
        assert_eq!(s.mode, ScalingMode::MatchStar);
        let expected = [4.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0];
        for (f, e) in s.factors.iter().zip(expected) {
            assert!((f - e).abs() < TOL);
        }

        let two = ChannelState::from_snrs(&[1.0, 1.0], None).unwrap();
        let s = tdm_scaling(&two, &chain_pairing(2)).unwrap();
        assert_eq!(s.factors, vec![2.0, 2.0]);

        let cycle = Pairing::new(4, vec![(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(tdm_scaling(&ch, &cycle).is_err());
    }

    #[test]
    fn scaling_preserves_round_energy() {
        // Total energy per round: reference spends degree(i) slots at power 1;
        // TDM spends 1 of n slots at factor[i], and n/(n-1) rounds of TDM
        // carry one full exchange worth of slots.
        let ch = ChannelState::from_snrs(&[0.5, 1.5, 2.5, 3.5, 9.0], None).unwrap();
        let reference = chain_pairing(5);
        let degrees = graph_of(&reference).degrees().to_vec();
        let s = tdm_scaling(&ch, &reference).unwrap();
        for (f, d) in s.factors.iter().zip(degrees) {
            assert!((f * (5.0 - 1.0) / 5.0 - d as f64).abs() < TOL);
        }
    }

    #[test]
    fn tdm_rate_values() {
        let ch = ChannelState::from_snrs(&[1.0, 1.0], Some(1e9)).unwrap();
        let scaling = tdm_scaling(&ch, &chain_pairing(2)).unwrap();
        let report = tdm_rates(&ch, &scaling);
        assert!((report.per_user[0] - 0.396240625180).abs() < TOL);
        assert!((report.per_user[1] - 0.396240625180).abs() < TOL);

        let zero = ChannelState::from_snrs(&[1.0, 2.0], Some(0.0)).unwrap();
        let report = tdm_rates(&zero, &PowerScaling::unit(2));
        assert!(report.per_user.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn tdm_uplink_variant_ignores_downlink() {
        let ch = ChannelState::from_snrs(&[1.0, 2.0, 4.0, 8.0], Some(0.5)).unwrap();
        let scaling = PowerScaling::unit(4);
        let capped = tdm_rates(&ch, &scaling);
        let uncapped = tdm_uplink_rates(&ch, &scaling);
        for i in 1..=4 {
            let expected = (1.0 + ch.gamma(i)).log2() / 8.0;
            assert!((uncapped.per_user[i - 1] - expected).abs() < TOL);
            assert!(capped.per_user[i - 1] <= uncapped.per_user[i - 1]);
        }
        // The tight downlink actually binds, so the reports differ.
        assert!(capped.sum_rate < uncapped.sum_rate);
    }

    #[test]
    fn tdm_approaches_single_user_capacity() {
        let ch = ChannelState::from_snrs(&[1.0, 2.0, 4.0, 8.0], Some(1e12)).unwrap();
        let report = tdm_rates(&ch, &PowerScaling::unit(4));
        for i in 1..=4 {
            let expected = (1.0 + ch.gamma(i)).log2() / 8.0;
            assert!((report.per_user[i - 1] - expected).abs() < TOL);
        }
    }

    #[test]
    fn cutset_common_examples() {
        let ch = ChannelState::from_snrs(&[1.0, 2.0, 4.0, 8.0], Some(7.0)).unwrap();
        assert!((cutset_common_bound(&ch, &[1.0, 2.0, 4.0, 8.0]) - 0.5).abs() < TOL);

        let zero_down = ChannelState::from_snrs(&[1.0, 2.0, 4.0, 8.0], Some(0.0)).unwrap();
        assert_eq!(cutset_common_bound(&zero_down, &[1.0, 2.0, 4.0, 8.0]), 0.0);

        let two = ChannelState::from_snrs(&[1.0, 1.0], Some(1e9)).unwrap();
        assert!((cutset_common_bound(&two, &[1.0, 1.0]) - 0.5).abs() < TOL);
    }

    #[test]
    fn cutset_sum_examples() {
        let two = ChannelState::from_snrs(&[1.0, 1.0], Some(1e9)).unwrap();
        assert!((cutset_sum_bound(&two, &[1.0, 1.0]) - 1.0).abs() < TOL);

        let ch = ChannelState::from_snrs(&[1.0, 2.0, 4.0, 8.0], Some(1e9)).unwrap();
        assert_eq!(cutset_sum_bound(&ch, &[0.0, 0.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn cutset_bounds_dominate_achievable_rates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let gains = crate::channel::sample_rayleigh_gains(4, &mut rng).unwrap();
            let ch = make_channel(&gains, 1.0, 4.0, 0.1).unwrap();
            let tree = random_tree(4, &mut rng);
            let report = evaluate(&tree, &ch, true).unwrap();
            let gammas = ch.gammas().to_vec();
            assert!(report.common_rate <= cutset_common_bound(&ch, &gammas) + 1e-12);
            assert!(report.sum_rate <= cutset_sum_bound(&ch, &gammas) + 1e-12);
        }
    }
}
