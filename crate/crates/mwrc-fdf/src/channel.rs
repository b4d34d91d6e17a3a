//! Channel-state construction and Rayleigh fading-gain sampling.
//!
//! All SNRs are linear (not dB). Users are relabeled so that uplink SNRs are
//! non-decreasing; the applied permutation is kept so callers can map results
//! back to their original user order.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::{check_nonnegative, check_positive, Error, Result};

/// Per-user SNR state in canonical (sorted) labeling.
///
/// Canonical label `i` (1-based) has uplink SNR `gamma(i)` with
/// `gamma(1) <= gamma(2) <= ... <= gamma(n)`, and downlink SNR
/// `big_gamma(i)`. With reciprocal links the same gain ordering governs both
/// directions, so the minimum downlink SNR `gamma_d()` sits at label 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    n: usize,
    gamma: Vec<f64>,
    big_gamma: Vec<f64>,
    gamma_d: f64,
    relabel: Vec<usize>,
}

impl ChannelState {
    /// Number of users.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Uplink SNR of canonical user `i` (1-based).
    pub fn gamma(&self, i: usize) -> f64 {
        self.gamma[i - 1]
    }

    /// All uplink SNRs; index `i - 1` holds canonical user `i`.
    pub fn gammas(&self) -> &[f64] {
        &self.gamma
    }

    /// Downlink SNR of canonical user `i` (1-based).
    pub fn big_gamma(&self, i: usize) -> f64 {
        self.big_gamma[i - 1]
    }

    /// All downlink SNRs; index `i - 1` holds canonical user `i`.
    pub fn big_gammas(&self) -> &[f64] {
        &self.big_gamma
    }

    /// Minimum downlink SNR; the downlink bottleneck for every broadcast.
    pub fn gamma_d(&self) -> f64 {
        self.gamma_d
    }

    /// Permutation mapping canonical label -> original 1-based user index.
    pub fn relabel(&self) -> &[usize] {
        &self.relabel
    }

    /// Uplink SNRs in the caller's original user order.
    pub fn original_gammas(&self) -> Vec<f64> {
        let mut orig = vec![0.0; self.n];
        for (c, &o) in self.relabel.iter().enumerate() {
            orig[o - 1] = self.gamma[c];
        }
        orig
    }

    /// Builds a state directly from uplink SNRs.
    ///
    /// `gamma_d` is the minimum downlink SNR; per-user downlink SNRs are
    /// derived by reciprocity (`big_gamma(i)` proportional to `gamma(i)`,
    /// with the minimum equal to `gamma_d`). Pass `None` when downlink
    /// limits will not be applied; the downlink side then mirrors the uplink.
    pub fn from_snrs(gammas: &[f64], gamma_d: Option<f64>) -> Result<Self> {
        if gammas.len() < 2 {
            return Err(Error::TooFewUsers(gammas.len()));
        }
        for (idx, &g) in gammas.iter().enumerate() {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::NonpositiveGain {
                    index: idx + 1,
                    value: g,
                });
            }
        }
        if let Some(gd) = gamma_d {
            check_nonnegative("downlink SNR", gd)?;
        }
        let (gamma, relabel) = sort_with_relabel(gammas);
        let big_gamma: Vec<f64> = match gamma_d {
            // Reciprocity: scale the uplink profile so its minimum is gamma_d.
            Some(gd) => gamma.iter().map(|g| g * (gd / gamma[0])).collect(),
            None => gamma.clone(),
        };
        let gamma_d = big_gamma[0];
        Ok(ChannelState {
            n: gamma.len(),
            gamma,
            big_gamma,
            gamma_d,
            relabel,
        })
    }
}

/// Sorts values non-decreasing and returns (sorted, canonical -> original map).
fn sort_with_relabel(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Stable: equal SNRs keep their original relative order.
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let sorted = order.iter().map(|&k| values[k]).collect();
    let relabel = order.iter().map(|&k| k + 1).collect();
    (sorted, relabel)
}

/// Builds a [`ChannelState`] from amplitude gains and powers.
///
/// User `i` with gain `|h_i|` gets uplink SNR `p_user * |h_i|^2 / noise_var`
/// and downlink SNR `p_relay * |h_i|^2 / noise_var`; users are then relabeled
/// so uplink SNRs are non-decreasing.
///
/// # Examples
///
/// ```
/// let ch = mwrc_fdf::channel::make_channel(&[2.0, 1.0, 3.0], 1.0, 3.0, 1.0).unwrap();
/// assert_eq!(ch.gammas(), &[1.0, 4.0, 9.0]);
/// assert_eq!(ch.big_gammas(), &[3.0, 12.0, 27.0]);
/// assert_eq!(ch.gamma_d(), 3.0);
/// assert_eq!(ch.relabel(), &[2, 1, 3]);
/// ```
pub fn make_channel(
    gains: &[f64],
    p_user: f64,
    p_relay: f64,
    noise_var: f64,
) -> Result<ChannelState> {
    if gains.len() < 2 {
        return Err(Error::TooFewUsers(gains.len()));
    }
    for (idx, &g) in gains.iter().enumerate() {
        // A zero gain disconnects the user; negative or non-finite is nonsense.
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::NonpositiveGain {
                index: idx + 1,
                value: g,
            });
        }
    }
    check_positive("p_user", p_user)?;
    check_positive("p_relay", p_relay)?;
    check_positive("noise_var", noise_var)?;

    let up: Vec<f64> = gains.iter().map(|g| p_user * g * g / noise_var).collect();
    let (gamma, relabel) = sort_with_relabel(&up);
    let big_gamma: Vec<f64> = relabel
        .iter()
        .map(|&o| {
            let g = gains[o - 1];
            p_relay * g * g / noise_var
        })
        .collect();
    let gamma_d = big_gamma[0];
    Ok(ChannelState {
        n: gamma.len(),
        gamma,
        big_gamma,
        gamma_d,
        relabel,
    })
}

/// Samples `n` Rayleigh amplitude gains: `|h|` with `|h|^2 ~ Exp(1)`,
/// the amplitude distribution of a unit-variance complex Gaussian.
pub fn sample_rayleigh_gains<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::TooFewUsers(n));
    }
    Ok((0..n)
        .map(|_| {
            let power: f64 = Exp1.sample(rng);
            power.sqrt()
        })
        .collect())
}
