//! Release gate: one test per contract criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::process::Command;
use std::time::{Duration, Instant};

use mwrc_fdf::baselines_bounds::{cutset_common_bound, cutset_sum_bound};
use mwrc_fdf::channel::{make_channel, sample_rayleigh_gains, ChannelState};
use mwrc_fdf::fdf_rates::evaluate;
use mwrc_fdf::montecarlo::{run_sweep, SimConfig};
use mwrc_fdf::optimizer::{
    brute_force_best, common_rate_closed_form, silencing_search, star_pairing,
    sum_rate_analytic_bounds, sum_rate_closed_form, Objective,
};
use mwrc_fdf::pairing_graph::{enumerate_trees, feasible_by_rank, is_feasible, Pairing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

/// Distinct SNRs drawn uniformly from `lo..hi`, sorted ascending.
fn distinct_snrs<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let mut gammas: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
        gammas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if gammas.windows(2).all(|w| w[0] < w[1]) {
            return gammas;
        }
    }
}

#[test]
fn chain_maximizes_common_rate_over_all_trees() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0;
    for n in 3..=6 {
        for _ in 0..100 {
            let gammas = distinct_snrs(&mut rng, n, 0.05, 50.0);
            // A huge downlink SNR keeps the broadcast side non-binding.
            let ch = ChannelState::from_snrs(&gammas, Some(1e9)).unwrap();
            let best = brute_force_best(&ch, Objective::Common, true).unwrap();
            let chain_value = common_rate_closed_form(&ch);
            assert!(
                (best.objective_value - chain_value).abs() <= TOL,
                "chain not optimal for gammas {gammas:?}: brute {} vs chain {}",
                best.objective_value,
                chain_value
            );
            checked += 1;
        }
    }
    assert!(
        start.elapsed() < Duration::from_secs(30),
        "exhaustive common-rate sweep took {:?}",
        start.elapsed()
    );
    println!("acceptance: chain pairing maximizes the common rate ({checked} channels): pass");
}

#[test]
fn weakest_star_maximizes_sum_rate_over_all_trees() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut checked = 0;
    for n in 3..=6 {
        for _ in 0..100 {
            let gammas = distinct_snrs(&mut rng, n, 1.0, 50.0);
            let ch = ChannelState::from_snrs(&gammas, None).unwrap();
            let best = brute_force_best(&ch, Objective::Sum, false).unwrap();
            let star_value = sum_rate_closed_form(&ch).unwrap();
            assert!(
                (best.objective_value - star_value).abs() <= TOL,
                "star not optimal for gammas {gammas:?}: brute {} vs star {}",
                best.objective_value,
                star_value
            );
            checked += 1;
        }
    }
    assert!(
        start.elapsed() < Duration::from_secs(30),
        "exhaustive sum-rate sweep took {:?}",
        start.elapsed()
    );
    println!("acceptance: star at the weakest user maximizes the sum rate ({checked} channels): pass");
}

#[test]
fn closed_forms_match_pinned_oracle_values() {
    // Both constants were first produced by the exhaustive search below and
    // then pinned; the closed forms must land on them too.
    const PINNED_SUM: f64 = 1.1636797;
    const PINNED_COMMON: f64 = 0.0691729;
    let ch = ChannelState::from_snrs(&[1.0, 2.0, 4.0, 8.0], Some(1e9)).unwrap();

    let star_sum = sum_rate_closed_form(&ch).unwrap();
    let brute_sum = brute_force_best(&ch, Objective::Sum, false).unwrap();
    assert!((star_sum - PINNED_SUM).abs() <= 1e-5, "closed-form sum {star_sum}");
    assert!(
        (brute_sum.objective_value - PINNED_SUM).abs() <= 1e-5,
        "exhaustive sum {}",
        brute_sum.objective_value
    );
    assert_eq!(brute_sum.pairing, star_pairing(4, 1));

    let chain_common = common_rate_closed_form(&ch);
    let brute_common = brute_force_best(&ch, Objective::Common, true).unwrap();
    assert!(
        (chain_common - PINNED_COMMON).abs() <= 1e-5,
        "closed-form common {chain_common}"
    );
    assert!(
        (brute_common.objective_value - PINNED_COMMON).abs() <= 1e-5,
        "exhaustive common {}",
        brute_common.objective_value
    );

    println!("acceptance: closed forms reproduce the pinned example values: pass");
}

/// All unordered user pairs on `n` labels.
fn all_edges(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect()
}

/// All multisets of `k` edges (combinations with replacement).
fn edge_multisets(edges: &[(usize, usize)], k: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(
        edges: &[(usize, usize)],
        start: usize,
        k: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for idx in start..edges.len() {
            current.push(edges[idx]);
            recurse(edges, idx, k, current, out);
            current.pop();
        }
    }
    recurse(edges, 0, k, &mut current, &mut out);
    out
}

fn feasibility_checks_agree(pairing: &Pairing) -> bool {
    let tree = is_feasible(pairing);
    (1..=pairing.n()).all(|u| feasible_by_rank(pairing, u) == tree)
}

#[test]
fn graph_and_rank_feasibility_always_agree() {
    let mut checked = 0;
    for n in 2..=4 {
        for pairs in edge_multisets(&all_edges(n), n - 1) {
            let pairing = Pairing::new(n, pairs).unwrap();
            assert!(
                feasibility_checks_agree(&pairing),
                "disagreement on {pairing:?}"
            );
            checked += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for n in [5usize, 6] {
        for _ in 0..10_000 {
            let pairs: Vec<(usize, usize)> = (0..n - 1)
                .map(|_| {
                    let a = rng.random_range(1..=n);
                    let mut b = rng.random_range(1..=n);
                    while b == a {
                        b = rng.random_range(1..=n);
                    }
                    (a, b)
                })
                .collect();
            let pairing = Pairing::new(n, pairs).unwrap();
            assert!(
                feasibility_checks_agree(&pairing),
                "disagreement on {pairing:?}"
            );
            checked += 1;
        }
    }
    println!("acceptance: tree test and decoding-rank test agree ({checked} pairings): pass");
}

#[test]
fn analytic_sum_rate_bounds_sandwich_every_tree() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..1_000 {
        let gammas = distinct_snrs(&mut rng, 4, 1.0, 50.0);
        let ch = ChannelState::from_snrs(&gammas, None).unwrap();
        let best = brute_force_best(&ch, Objective::Sum, false).unwrap();
        let bounds = sum_rate_analytic_bounds(&ch);
        assert!(
            bounds.upper_optimal >= best.objective_value - TOL,
            "upper bound below optimum for {gammas:?}"
        );
        for tree in enumerate_trees(4).unwrap() {
            let sum = evaluate(&tree, &ch, false).unwrap().sum_rate;
            assert!(
                bounds.lower_random <= sum + TOL,
                "lower bound above a tree's sum rate for {gammas:?}"
            );
            assert!(
                best.objective_value - sum <= bounds.gap_bound + TOL,
                "gap bound exceeded for {gammas:?}"
            );
        }
    }

    // Scaling all SNRs up makes pairing choice irrelevant: by 10^6 the
    // worst tree sits within a millibit of the optimum.
    let base = distinct_snrs(&mut rng, 4, 1.0, 50.0);
    let mut last_diff = f64::INFINITY;
    for k in 0..=6 {
        let scaled: Vec<f64> = base.iter().map(|g| g * 10f64.powi(k)).collect();
        let ch = ChannelState::from_snrs(&scaled, None).unwrap();
        let best = brute_force_best(&ch, Objective::Sum, false).unwrap();
        let worst = enumerate_trees(4)
            .unwrap()
            .map(|tree| evaluate(&tree, &ch, false).unwrap().sum_rate)
            .fold(f64::INFINITY, f64::min);
        last_diff = best.objective_value - worst;
    }
    assert!(
        last_diff < 1e-3,
        "optimal-vs-worst-tree difference {last_diff} at scale 10^6"
    );
    println!("acceptance: analytic bounds hold and tighten with SNR (1000 channels): pass");
}

#[test]
fn cutset_bounds_dominate_every_achievable_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let noise_grid = [1.0, 0.1, 0.01];
    let mut checked = 0;
    for idx in 0..1_000 {
        let n = 3 + idx % 3;
        let gains = sample_rayleigh_gains(n, &mut rng).unwrap();
        let noise = noise_grid[idx % noise_grid.len()];
        let ch = make_channel(&gains, 1.0, n as f64, noise).unwrap();
        let common_cut = cutset_common_bound(&ch, ch.gammas());
        let sum_cut = cutset_sum_bound(&ch, ch.gammas());
        for tree in enumerate_trees(n).unwrap() {
            let report = evaluate(&tree, &ch, true).unwrap();
            assert!(
                report.common_rate <= common_cut + TOL,
                "common rate above cut-set bound for gains {gains:?}"
            );
            assert!(
                report.sum_rate <= sum_cut + TOL,
                "sum rate above cut-set bound for gains {gains:?}"
            );
        }
        checked += 1;
    }
    println!("acceptance: cut-set bounds dominate all achievable rates ({checked} channels): pass");
}

#[test]
fn sweep_gap_signs_follow_the_expected_pattern() {
    let start = Instant::now();
    let cfg = SimConfig::new(4, 10_000, 7, vec![0.0, 4.0, 20.0]).unwrap();
    let sweep = run_sweep(&cfg).unwrap();
    let [low, mid, high] = &sweep.points[..] else {
        panic!("expected three sweep points");
    };

    assert!(low.gc_tdm < 0.0, "TDM common gap at 0 dB: {}", low.gc_tdm);
    assert!(low.gs_tdm < 0.0, "TDM sum gap at 0 dB: {}", low.gs_tdm);
    assert!(high.gc_tdm > 0.0, "TDM common gap at 20 dB: {}", high.gc_tdm);
    assert!(high.gs_tdm > 0.0, "TDM sum gap at 20 dB: {}", high.gs_tdm);

    for point in [low, mid, high] {
        assert!(
            point.gc_random > 0.0 && point.gs_random > 0.0,
            "random-tree gaps must stay positive at {} dB",
            point.snr_db
        );
    }
    assert!(
        high.gc_random < mid.gc_random,
        "random-tree common gap must shrink with SNR"
    );
    assert!(
        high.gs_random < mid.gs_random,
        "random-tree sum gap must shrink with SNR"
    );
    assert!(
        start.elapsed() < Duration::from_secs(60),
        "sweep took {:?}",
        start.elapsed()
    );
    println!("acceptance: simulated gap curves match the expected sign pattern: pass");
}

/// Best star-at-weakest sum rate over every active subset of two or more
/// users, written against the raw SNRs only.
fn full_subset_oracle(ch: &ChannelState) -> f64 {
    let n = ch.n();
    let arg = |gi: f64, gj: f64| gi / (gi + gj) + gi;
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        let active: Vec<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        if active.len() < 2 {
            continue;
        }
        let m = if active.len() == n { n - 1 } else { active.len() };
        let lo = ch.gamma(active[0]);
        let hi = ch.gamma(*active.last().unwrap());
        let mut log_sum = arg(lo, hi).log2();
        for &a in &active[1..] {
            log_sum += arg(ch.gamma(a), lo).log2();
        }
        best = best.max((log_sum / (2.0 * m as f64)).max(0.0));
    }
    best
}

#[test]
fn silencing_search_matches_full_subset_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for idx in 0..200 {
        let n = if idx % 2 == 0 { 4 } else { 5 };
        // Mix of near-dead and healthy users so silencing actually pays off
        // on a fair share of the draws.
        let gammas: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_range(0.0..1.0) < 0.3 {
                    rng.random_range(1e-7..0.5)
                } else {
                    rng.random_range(1.0..50.0)
                }
            })
            .collect();
        let ch = ChannelState::from_snrs(&gammas, None).unwrap();
        let result = silencing_search(&ch);
        let oracle = full_subset_oracle(&ch);
        assert!(
            (result.objective_value - oracle).abs() <= TOL,
            "search {} vs oracle {oracle} for gammas {gammas:?}",
            result.objective_value
        );

        let all_active: Vec<usize> = (1..=n).collect();
        let arg = |gi: f64, gj: f64| gi / (gi + gj) + gi;
        let mut log_sum = arg(ch.gamma(1), ch.gamma(n)).log2();
        for &u in &all_active[1..] {
            log_sum += arg(ch.gamma(u), ch.gamma(1)).log2();
        }
        let all_active_value = (log_sum / (2.0 * (n - 1) as f64)).max(0.0);
        assert!(
            result.objective_value >= all_active_value - TOL,
            "search fell below the all-active star for gammas {gammas:?}"
        );
    }
    println!("acceptance: silencing search matches the full-subset oracle (200 channels): pass");
}

#[test]
fn simulate_csv_is_identical_across_worker_counts() {
    let bin = env!("CARGO_BIN_EXE_mwrc-fdf");
    let dir = std::env::temp_dir();
    let out_one = dir.join("mwrc_acceptance_threads1.csv");
    let out_four = dir.join("mwrc_acceptance_threads4.csv");
    for (threads, out) in [("1", &out_one), ("4", &out_four)] {
        let status = Command::new(bin)
            .args([
                "simulate",
                "--n",
                "4",
                "--snr-db",
                "0,10,20",
                "--draws",
                "400",
                "--seed",
                "99",
                "--threads",
                threads,
                "--out",
            ])
            .arg(out)
            .status()
            .expect("simulate run");
        assert!(status.success(), "simulate exited with {status}");
    }
    let bytes_one = std::fs::read(&out_one).unwrap();
    let bytes_four = std::fs::read(&out_four).unwrap();
    assert!(!bytes_one.is_empty());
    assert!(bytes_one.starts_with(b"snr_db,"));
    assert_eq!(bytes_one, bytes_four, "worker count changed the CSV bytes");
    let _ = std::fs::remove_file(&out_one);
    let _ = std::fs::remove_file(&out_four);
    println!("acceptance: simulation output is byte-identical across worker counts: pass");
}
