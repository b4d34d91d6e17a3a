//! Achievable-rate analysis for the N-user multiway relay channel (MWRC)
//! under functional-decode-forward (FDF) pairwise relaying.
//!
//! N users exchange data through a relay with no direct user-to-user links.
//! A full data exchange runs M = N-1 uplink/downlink phase pairs; in each
//! uplink phase a pair of users transmits simultaneously and the relay decodes
//! a function of their messages, which it broadcasts on the downlink. A
//! schedule is described by the multiset of user pairs ("pairing"); it is
//! decodable if and only if its client graph is a spanning tree.
//!
//! The crate provides:
//!
//! - [`channel`]: SNR bookkeeping with canonical (sorted) user labels and
//!   Rayleigh fading samples.
//! - [`pairing_graph`]: pairings as client graphs, tree feasibility (both a
//!   graph test and an independent GF(2) decodability oracle), Prüfer codes,
//!   exhaustive tree enumeration, and a local rewiring transform.
//! - [`fdf_rates`]: per-user, common, and sum achievable rates of a feasible
//!   pairing.
//! - [`optimizer`]: the closed-form optimal pairings (chain for common rate,
//!   star at the weakest user for sum rate), brute-force verification,
//!   a silencing search for channels with very weak users, and analytic
//!   sum-rate gap bounds.
//! - [`baselines_bounds`]: TDM and max-SNR-star reference schemes plus
//!   cut-set outer bounds.
//! - [`montecarlo`]: seeded, worker-count-independent Monte Carlo sweeps
//!   over Rayleigh fading with CSV emission.
//!
//! User labels are 1-based canonical indices: users are relabeled so that
//! uplink SNRs are non-decreasing, `gamma[1] <= ... <= gamma[N]`. All public
//! interfaces (pairs, Prüfer entries, per-user vectors) use these labels;
//! slices are indexed by `label - 1`.

use std::path::PathBuf;

pub mod baselines_bounds;
pub mod channel;
pub mod fdf_rates;
pub mod montecarlo;
pub mod optimizer;
pub mod pairing_graph;

/// Errors reported by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Fewer than two users.
    #[error("at least 2 users are required, got {0}")]
    TooFewUsers(usize),
    /// A channel gain was zero, negative, or not finite.
    #[error("gain for user {index} must be positive and finite, got {value}")]
    NonpositiveGain { index: usize, value: f64 },
    /// A scalar parameter that must be strictly positive was not.
    #[error("{name} must be positive and finite, got {value}")]
    NonpositiveParameter { name: &'static str, value: f64 },
    /// A scalar parameter that must be nonnegative was not.
    #[error("{name} must be nonnegative and finite, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    /// A scalar parameter that may take any finite value was not finite.
    #[error("{name} must be finite, got {value}")]
    NonfiniteParameter { name: &'static str, value: f64 },
    /// The pre-log phase count must be at least 1.
    #[error("phase count must be at least 1")]
    ZeroPhases,
    /// A user label outside `1..=n`.
    #[error("user label {label} is out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    /// A pair joining a user with itself.
    #[error("a pair must join two distinct users, got {0}-{0}")]
    SelfPair(usize),
    /// Unparseable pairing text.
    #[error("invalid pairing {text:?}: {reason}")]
    PairingSyntax { text: String, reason: String },
    /// A Prüfer sequence entry outside `1..=n`.
    #[error("sequence entry {entry} is out of range 1..={n}")]
    SequenceEntryOutOfRange { entry: usize, n: usize },
    /// The schedule's client graph is not a spanning tree, so the exchange
    /// is not decodable and no rate is defined.
    #[error("pairing is not a tree (Theorem 1)")]
    NotATree,
    /// A pairing built for one user count was used with another.
    #[error("pairing is over {pairing} users but the channel has {channel}")]
    UserCountMismatch { pairing: usize, channel: usize },
    /// Too many users for exhaustive tree enumeration.
    #[error(
        "n = {n} exceeds the enumeration cap of {cap}: \
         brute force over n^(n-2) trees is infeasible"
    )]
    EnumerationCap { n: usize, cap: usize },
    /// A rewiring step referenced an edge the graph does not have.
    #[error("graph has no edge {a}-{b}")]
    MissingEdge { a: usize, b: usize },
    /// The closed-form sum rate requires the low-SNR ("weak bound") regime
    /// check to pass for every pair; it failed for this one.
    #[error(
        "sum-rate closed form needs gamma_i/(gamma_i+gamma_j) + gamma_i >= 1 \
         for all pairs; pair ({i}, {j}) gives {value}"
    )]
    WeakBoundViolation { i: usize, j: usize, value: f64 },
    /// Simulation configured with zero draws.
    #[error("draw count must be at least 1")]
    NoDraws,
    /// Simulation configured with no SNR points.
    #[error("at least one SNR point is required")]
    NoSnrPoints,
    /// Bar-chart simulation configured with no user counts.
    #[error("at least one user count is required")]
    NoUserCounts,
    /// Draw count exceeds what the per-draw RNG stream encoding can index.
    #[error("draw count {0} exceeds the supported maximum of 2^32 - 1")]
    TooManyDraws(usize),
    /// An I/O failure, annotated with the path involved.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::NonpositiveParameter { name, value })
    }
}

pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeParameter { name, value })
    }
}
