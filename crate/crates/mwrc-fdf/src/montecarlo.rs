//! Seeded Monte Carlo sweeps over Rayleigh-fading channels.
//!
//! Determinism contract: results depend only on the configuration (seed
//! included), never on thread count or scheduling. Each (SNR point, draw)
//! pair owns a counter-addressed RNG stream, per-draw results are collected
//! in draw order, and averages use a fixed-shape pairwise summation tree, so
//! repeated runs produce bit-identical output.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines_bounds::{
    cutset_common_bound, cutset_sum_bound, tdm_rates, tdm_scaling, tdm_uplink_rates,
};
use crate::channel::{make_channel, sample_rayleigh_gains};
use crate::fdf_rates::evaluate;
use crate::optimizer::{chain_pairing, star_pairing};
use crate::pairing_graph::{random_tree, Pairing};
use crate::{Error, Result};

/// Per-draw rate columns, in CSV order (gaps are derived afterwards).
const RATE_COLS: usize = 10;

/// Monte Carlo sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Number of users.
    pub n: usize,
    /// Fading draws per SNR point.
    pub draws: usize,
    /// Root seed; all randomness derives from it.
    pub seed: u64,
    /// Sweep axis: `1/noise_var` in dB, i.e. `noise_var = 10^(-dB/10)`.
    pub snr_db_points: Vec<f64>,
    /// Per-user transmit power (default 1).
    pub p_user: f64,
    /// Relay transmit power (default `n`: one user's worth per served user).
    pub p_relay: f64,
}

impl SimConfig {
    /// Configuration with default powers `p_user = 1`, `p_relay = n`.
    pub fn new(n: usize, draws: usize, seed: u64, snr_db_points: Vec<f64>) -> Result<Self> {
        let cfg = SimConfig {
            n,
            draws,
            seed,
            snr_db_points,
            p_user: 1.0,
            p_relay: n as f64,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewUsers(self.n));
        }
        if self.draws == 0 {
            return Err(Error::NoDraws);
        }
        // Draw indices share a 64-bit stream id with the point index.
        if self.draws > u32::MAX as usize {
            return Err(Error::TooManyDraws(self.draws));
        }
        if self.snr_db_points.is_empty() {
            return Err(Error::NoSnrPoints);
        }
        for &db in &self.snr_db_points {
            if !db.is_finite() {
                return Err(Error::NonfiniteParameter {
                    name: "snr_db",
                    value: db,
                });
            }
        }
        crate::check_positive("p_user", self.p_user)?;
        crate::check_positive("p_relay", self.p_relay)?;
        Ok(())
    }
}

/// Averaged rates and relative gaps at one SNR point.
///
/// `rc_*` columns are common rates with the downlink bottleneck applied;
/// `rs_*` columns are sum rates on the uplink side alone. Gap columns hold
/// `100 * (opt - scheme) / opt` computed on the averaged rates, so a negative
/// gap means the scheme's average beats the per-draw optimum's average.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    /// Chain pairing, the common-rate optimum.
    pub rc_opt: f64,
    /// Star at the weakest user, the sum-rate optimum.
    pub rs_opt: f64,
    /// Uniformly random tree pairing (one fresh tree per draw).
    pub rc_random: f64,
    pub rs_random: f64,
    /// Star at the strongest user: pair everyone with the best SNR.
    pub rc_strong_star: f64,
    pub rs_strong_star: f64,
    /// Power-matched TDM: chain-matched factors for the common rate
    /// (downlink applied), star-matched factors for the sum rate
    /// (uplink-only, like every other `rs_*` rate).
    pub rc_tdm: f64,
    pub rs_tdm: f64,
    /// Cut-set outer bounds at nominal power.
    pub rc_cutset: f64,
    pub rs_cutset: f64,
    pub gc_random: f64,
    pub gc_tdm: f64,
    pub gc_strong_star: f64,
    pub gs_random: f64,
    pub gs_tdm: f64,
    pub gs_strong_star: f64,
}

/// One full sweep: a row per SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub n: usize,
    pub points: Vec<SweepPoint>,
}

/// Averaged rates for one user count at a fixed SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct BarsRow {
    pub n: usize,
    pub rc_opt: f64,
    pub rs_opt: f64,
    pub rc_random: f64,
    pub rs_random: f64,
    pub rc_strong_star: f64,
    pub rs_strong_star: f64,
    pub rc_tdm: f64,
    pub rs_tdm: f64,
    pub rc_cutset: f64,
    pub rs_cutset: f64,
}

/// Scheme comparison across user counts: a row per `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BarsResult {
    pub snr_db: f64,
    pub rows: Vec<BarsRow>,
}

/// Runs the sweep described by `cfg`.
pub fn run_sweep(cfg: &SimConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let mut points = Vec::with_capacity(cfg.snr_db_points.len());
    for (pi, &db) in cfg.snr_db_points.iter().enumerate() {
        let noise_var = 10f64.powf(-db / 10.0);
        let rows = draw_rows(cfg, pi as u64, noise_var)?;
        points.push(point_from(db, &average_columns(&rows)));
    }
    Ok(SweepResult {
        n: cfg.n,
        points,
    })
}

/// Runs the per-`n` comparison at a fixed SNR with default powers.
pub fn run_bars(n_list: &[usize], snr_db: f64, draws: usize, seed: u64) -> Result<BarsResult> {
    if n_list.is_empty() {
        return Err(Error::NoUserCounts);
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for (ni, &n) in n_list.iter().enumerate() {
        let cfg = SimConfig::new(n, draws, seed, vec![snr_db])?;
        let noise_var = 10f64.powf(-snr_db / 10.0);
        let avg = average_columns(&draw_rows(&cfg, ni as u64, noise_var)?);
        rows.push(BarsRow {
            n,
            rc_opt: avg[0],
            rs_opt: avg[1],
            rc_random: avg[2],
            rs_random: avg[3],
            rc_strong_star: avg[4],
            rs_strong_star: avg[5],
            rc_tdm: avg[6],
            rs_tdm: avg[7],
            rc_cutset: avg[8],
            rs_cutset: avg[9],
        });
    }
    Ok(BarsResult { snr_db, rows })
}

/// All draws at one SNR point, in draw order regardless of worker count.
fn draw_rows(cfg: &SimConfig, stream_hi: u64, noise_var: f64) -> Result<Vec<[f64; RATE_COLS]>> {
    let chain = chain_pairing(cfg.n);
    let weak_star = star_pairing(cfg.n, 1);
    let strong_star = star_pairing(cfg.n, cfg.n);
    (0..cfg.draws)
        .into_par_iter()
        .map(|draw| {
            draw_row(
                cfg,
                stream_hi,
                draw as u64,
                noise_var,
                &chain,
                &weak_star,
                &strong_star,
            )
        })
        .collect()
}

fn draw_row(
    cfg: &SimConfig,
    stream_hi: u64,
    draw: u64,
    noise_var: f64,
    chain: &Pairing,
    weak_star: &Pairing,
    strong_star: &Pairing,
) -> Result<[f64; RATE_COLS]> {
    // A counter-addressed stream per (point, draw) keeps every draw's
    // randomness independent of which worker executes it.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream((stream_hi << 32) | draw);
    // Stream use order is part of the reproducibility contract:
    // gains first, then the random tree.
    let gains = sample_rayleigh_gains(cfg.n, &mut rng)?;
    let ch = make_channel(&gains, cfg.p_user, cfg.p_relay, noise_var)?;
    let tree = random_tree(cfg.n, &mut rng);

    let chain_common = evaluate(chain, &ch, true)?;
    let weak_star_sum = evaluate(weak_star, &ch, false)?;
    let tree_common = evaluate(&tree, &ch, true)?;
    let tree_sum = evaluate(&tree, &ch, false)?;
    let strong_common = evaluate(strong_star, &ch, true)?;
    let strong_sum = evaluate(strong_star, &ch, false)?;
    // The TDM columns mirror the downlink treatment of what they compare
    // against: the common side applies the broadcast bottleneck like
    // rc_opt, the sum side is uplink-only like rs_opt.
    let tdm_chain = tdm_rates(&ch, &tdm_scaling(&ch, chain)?);
    let tdm_star = tdm_uplink_rates(&ch, &tdm_scaling(&ch, weak_star)?);

    Ok([
        chain_common.common_rate,
        weak_star_sum.sum_rate,
        tree_common.common_rate,
        tree_sum.sum_rate,
        strong_common.common_rate,
        strong_sum.sum_rate,
        tdm_chain.common_rate,
        tdm_star.sum_rate,
        cutset_common_bound(&ch, ch.gammas()),
        cutset_sum_bound(&ch, ch.gammas()),
    ])
}

fn point_from(snr_db: f64, avg: &[f64; RATE_COLS]) -> SweepPoint {
    // Guard against an all-zero optimum; gaps are meaningless there.
    let gap = |opt: f64, other: f64| {
        if opt > 0.0 {
            100.0 * (opt - other) / opt
        } else {
            0.0
        }
    };
    SweepPoint {
        snr_db,
        rc_opt: avg[0],
        rs_opt: avg[1],
        rc_random: avg[2],
        rs_random: avg[3],
        rc_strong_star: avg[4],
        rs_strong_star: avg[5],
        rc_tdm: avg[6],
        rs_tdm: avg[7],
        rc_cutset: avg[8],
        rs_cutset: avg[9],
        gc_random: gap(avg[0], avg[2]),
        gc_tdm: gap(avg[0], avg[6]),
        gc_strong_star: gap(avg[0], avg[4]),
        gs_random: gap(avg[1], avg[3]),
        gs_tdm: gap(avg[1], avg[7]),
        gs_strong_star: gap(avg[1], avg[5]),
    }
}

/// Column-wise averages with a summation order fixed by draw count alone.
fn average_columns(rows: &[[f64; RATE_COLS]]) -> [f64; RATE_COLS] {
    let mut out = [0.0; RATE_COLS];
    let mut column = vec![0.0; rows.len()];
    for (c, slot) in out.iter_mut().enumerate() {
        for (v, row) in column.iter_mut().zip(rows) {
            *v = row[c];
        }
        *slot = pairwise_sum(&column) / rows.len() as f64;
    }
    out
}

/// Balanced pairwise summation: deterministic shape, O(log n) error growth.
fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Sweep CSV header; the column names are part of the output contract.
pub const SWEEP_HEADER: &str = "snr_db,rc_opt,rs_opt,rc_random,rs_random,\
rc_parastoo,rs_parastoo,rc_tdm,rs_tdm,rc_cutset,rs_cutset,\
gc_random,gc_tdm,gc_parastoo,gs_random,gs_tdm,gs_parastoo";

/// Bar-chart CSV header.
pub const BARS_HEADER: &str =
    "n,rc_opt,rs_opt,rc_random,rs_random,rc_parastoo,rs_parastoo,rc_tdm,rs_tdm,rc_cutset,rs_cutset";

/// Renders a sweep as CSV text: 9 significant digits, `\n` line endings.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in &result.points {
        let row = [
            p.snr_db,
            p.rc_opt,
            p.rs_opt,
            p.rc_random,
            p.rs_random,
            p.rc_strong_star,
            p.rs_strong_star,
            p.rc_tdm,
            p.rs_tdm,
            p.rc_cutset,
            p.rs_cutset,
            p.gc_random,
            p.gc_tdm,
            p.gc_strong_star,
            p.gs_random,
            p.gs_tdm,
            p.gs_strong_star,
        ];
        push_row(&mut out, None, &row);
    }
    out
}

/// Renders a bar-chart table as CSV text.
pub fn bars_csv(result: &BarsResult) -> String {
    let mut out = String::from(BARS_HEADER);
    out.push('\n');
    for r in &result.rows {
        let row = [
            r.rc_opt,
            r.rs_opt,
            r.rc_random,
            r.rs_random,
            r.rc_strong_star,
            r.rs_strong_star,
            r.rc_tdm,
            r.rs_tdm,
            r.rc_cutset,
            r.rs_cutset,
        ];
        push_row(&mut out, Some(r.n), &row);
    }
    out
}

fn push_row(out: &mut String, leading_count: Option<usize>, values: &[f64]) {
    use std::fmt::Write;
    let mut first = true;
    if let Some(n) = leading_count {
        let _ = write!(out, "{n}");
        first = false;
    }
    for v in values {
        if !first {
            out.push(',');
        }
        let _ = write!(out, "{v:.8e}");
        first = false;
    }
    out.push('\n');
}

/// Writes [`sweep_csv`] to `path`.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_text(path, &sweep_csv(result))
}

/// Writes [`bars_csv`] to `path`.
pub fn emit_bars_csv(result: &BarsResult, path: &Path) -> Result<()> {
    write_text(path, &bars_csv(result))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SimConfig {
        SimConfig::new(4, 200, 7, vec![0.0, 10.0, 20.0]).unwrap()
    }

    #[test]
    fn validates_config() {
        assert!(SimConfig::new(1, 10, 0, vec![0.0]).is_err());
        assert!(SimConfig::new(4, 0, 0, vec![0.0]).is_err());
        assert!(SimConfig::new(4, 10, 0, vec![]).is_err());
        assert!(SimConfig::new(4, 10, 0, vec![f64::NAN]).is_err());
        assert!(run_bars(&[], 5.0, 10, 0).is_err());
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let cfg = small_config();
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(sweep_csv(&a), sweep_csv(&b));
    }

    #[test]
    fn output_is_independent_of_worker_count() {
        let cfg = small_config();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_sweep(&cfg))
            .unwrap();
        let quad = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_sweep(&cfg))
            .unwrap();
        assert_eq!(sweep_csv(&single), sweep_csv(&quad));
    }

    #[test]
    fn seeds_change_results() {
        let a = run_sweep(&SimConfig::new(4, 50, 1, vec![10.0]).unwrap()).unwrap();
        let b = run_sweep(&SimConfig::new(4, 50, 2, vec![10.0]).unwrap()).unwrap();
        assert_ne!(a.points[0].rc_opt, b.points[0].rc_opt);
    }

    #[test]
    fn averages_respect_per_draw_optimality() {
        let sweep = run_sweep(&small_config()).unwrap();
        for p in &sweep.points {
            assert!(p.rc_opt >= p.rc_random);
            assert!(p.rc_opt >= p.rc_strong_star);
            assert!(p.rs_opt >= p.rs_random);
            assert!(p.rs_opt >= p.rs_strong_star);
            // The common columns are end-to-end rates, so the cut-set bound
            // dominates them. The sum columns are uplink-side rates and may
            // exceed the (downlink-constrained) sum cut on skewed draws.
            assert!(p.rc_cutset >= p.rc_opt);
            assert!(p.gc_random >= 0.0 && p.gc_random <= 100.0);
            assert!(p.gs_random >= 0.0 && p.gs_random <= 100.0);
        }
    }

    #[test]
    fn rates_grow_with_snr() {
        let sweep = run_sweep(&small_config()).unwrap();
        assert!(sweep.points[2].rc_opt > sweep.points[0].rc_opt);
        assert!(sweep.points[2].rs_opt > sweep.points[0].rs_opt);
    }

    #[test]
    fn gaps_match_their_definition() {
        let sweep = run_sweep(&SimConfig::new(3, 64, 3, vec![6.0]).unwrap()).unwrap();
        let p = &sweep.points[0];
        let expect = 100.0 * (p.rc_opt - p.rc_tdm) / p.rc_opt;
        assert!((p.gc_tdm - expect).abs() < 1e-12);
        let expect = 100.0 * (p.rs_opt - p.rs_strong_star) / p.rs_opt;
        assert!((p.gs_strong_star - expect).abs() < 1e-12);
    }

    #[test]
    fn csv_shape_and_parseability() {
        let sweep = run_sweep(&small_config()).unwrap();
        let text = sweep_csv(&sweep);
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 1 + sweep.points.len());
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines[0].split(',').count(), 17);
        for line in &lines[1..] {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 17);
            for cell in cells {
                let v: f64 = cell.parse().expect("numeric cell");
                assert!(v.is_finite());
            }
        }
        // 9 significant digits: mantissa printed with 8 decimal places.
        assert!(lines[1].starts_with("0.00000000e0,"));
    }

    #[test]
    fn bars_cover_each_user_count() {
        let bars = run_bars(&[2, 3, 4], 10.0, 100, 5).unwrap();
        assert_eq!(bars.rows.len(), 3);
        for (row, &n) in bars.rows.iter().zip(&[2usize, 3, 4]) {
            assert_eq!(row.n, n);
            assert!(row.rc_cutset >= row.rc_opt);
            assert!(row.rs_opt >= row.rs_random);
        }
        let text = bars_csv(&bars);
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines[0], BARS_HEADER);
        assert!(lines[1].starts_with("2,"));
        assert_eq!(lines[3].split(',').count(), 11);
    }

    #[test]
    fn emit_writes_files() {
        let dir = std::env::temp_dir();
        let path = dir.join("mwrc_fdf_sweep_test.csv");
        let sweep = run_sweep(&SimConfig::new(3, 16, 1, vec![5.0]).unwrap()).unwrap();
        emit_csv(&sweep, &path).unwrap();
        let body = std::fs::read_to_string(&path).unwrap();
        assert_eq!(body, sweep_csv(&sweep));
        std::fs::remove_file(&path).ok();

        let missing = dir.join("no_such_dir_mwrc").join("x.csv");
        assert!(emit_csv(&sweep, &missing).is_err());
    }
}
