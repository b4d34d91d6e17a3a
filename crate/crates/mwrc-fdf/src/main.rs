//! Command-line interface.
//!
//! A thin wrapper over the library: each subcommand parses arguments, calls
//! library entry points, and prints values with 6 decimal places. No rate
//! math lives here. Exit codes: 0 success, 1 domain or runtime failure,
//! 2 usage error.
//!
//! Users are always reported in canonical labels: 1..n in non-decreasing
//! uplink SNR order. SNR arguments are linear unless `--db` is given.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mwrc_fdf::channel::{make_channel, sample_rayleigh_gains, ChannelState};
use mwrc_fdf::fdf_rates::evaluate;
use mwrc_fdf::montecarlo::{emit_bars_csv, emit_csv, run_bars, run_sweep, SimConfig};
use mwrc_fdf::optimizer::{
    brute_force_best, chain_pairing, silencing_search, star_pairing, sum_rate_closed_form,
    Objective, OptimizationResult,
};
use mwrc_fdf::pairing_graph::{
    enumerate_trees, feasible_by_rank, graph_of, is_feasible, prufer_decode, prufer_encode,
    random_tree, Pairing, PruferSequence,
};
use mwrc_fdf::Error;

#[derive(Parser)]
#[command(
    name = "mwrc-fdf",
    version,
    about = "Achievable rates and optimal pairings for multiway relay channels \
             under functional-decode-forward"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the rates a pairing achieves on a given channel.
    Rate(RateArgs),
    /// Construct an optimal pairing for an objective.
    Optimize(OptimizeArgs),
    /// Run randomized self-checks of the optimality and feasibility results.
    Verify(VerifyArgs),
    /// Monte Carlo sweep over SNR; writes a CSV.
    Simulate(SimulateArgs),
    /// Monte Carlo scheme comparison across user counts; writes a CSV.
    Bars(BarsArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("downlink").required(true).args(["downlink_snr", "no_downlink"])))]
struct RateArgs {
    /// Uplink SNRs, comma separated (linear unless --db).
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    snr: Vec<f64>,
    /// Interpret all SNR values as dB.
    #[arg(long)]
    db: bool,
    /// Minimum downlink SNR (linear unless --db).
    #[arg(long, allow_negative_numbers = true)]
    downlink_snr: Option<f64>,
    /// Evaluate the uplink side only.
    #[arg(long)]
    no_downlink: bool,
    /// Pairing over canonical labels, e.g. "1-2,2-3,3-4".
    #[arg(long)]
    pairing: String,
}

#[derive(Args)]
#[command(group(ArgGroup::new("downlink").args(["downlink_snr", "no_downlink"])))]
struct OptimizeArgs {
    /// Uplink SNRs, comma separated (linear unless --db).
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    snr: Vec<f64>,
    /// Interpret all SNR values as dB.
    #[arg(long)]
    db: bool,
    /// Minimum downlink SNR (linear unless --db). Default: uplink only.
    #[arg(long, allow_negative_numbers = true)]
    downlink_snr: Option<f64>,
    /// Optimize the uplink side only (the default).
    #[arg(long)]
    no_downlink: bool,
    /// What to maximize.
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    /// Also consider silencing weak users (sum objective only).
    #[arg(long, conflicts_with = "brute_force")]
    allow_silencing: bool,
    /// Exhaustive search over all labeled trees instead of the closed form.
    #[arg(long)]
    brute_force: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    /// Highest rate every user can get simultaneously.
    Common,
    /// Total throughput across users.
    Sum,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of users.
    #[arg(long)]
    n: usize,
    /// Random channels per check.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    /// RNG seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of users.
    #[arg(long)]
    n: usize,
    /// SNR axis in dB: "start:stop:step" (inclusive) or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: String,
    /// Fading draws per SNR point.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u32).range(1..))]
    draws: u32,
    /// RNG seed; the same seed always reproduces the same CSV.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: one per CPU). Results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    /// Per-user transmit power.
    #[arg(long, default_value_t = 1.0)]
    p_user: f64,
    /// Relay transmit power (default: n).
    #[arg(long)]
    p_relay: Option<f64>,
}

#[derive(Args)]
struct BarsArgs {
    /// User counts: "start:stop:step" (inclusive) or a comma list.
    #[arg(long)]
    n_list: String,
    /// Fixed SNR point in dB.
    #[arg(long, allow_negative_numbers = true)]
    snr_db: f64,
    /// Fading draws per user count.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    draws: u32,
    /// RNG seed.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: one per CPU). Results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

/// Non-usage failures exit 1; usage failures exit 2.
enum Failure {
    Usage(String),
    Runtime(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Rate(args) => cmd_rate(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Bars(args) => cmd_bars(args),
    }
}

fn to_linear(value: f64, db: bool) -> f64 {
    if db {
        10f64.powf(value / 10.0)
    } else {
        value
    }
}

/// Parses "start:stop:step" (inclusive) or a comma list of reals.
fn parse_axis(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| Failure::Usage(format!("invalid axis {text:?}: {why}"));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("expected start:stop:step with numeric parts"))?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 {
            return Err(bad("step must be positive and all parts finite"));
        }
        if start > stop {
            return Err(bad("start exceeds stop"));
        }
        let mut points = Vec::new();
        let mut k = 0u32;
        loop {
            let v = start + f64::from(k) * step;
            // Absorb float drift so the stop point itself is included.
            if v > stop + 1e-9 {
                break;
            }
            points.push(v);
            k += 1;
        }
        Ok(points)
    } else {
        text.split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|_| bad("expected a comma list of numbers"))
    }
}

/// Parses "start:stop:step" (inclusive) or a comma list of integers.
fn parse_counts(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = |why: &str| Failure::Usage(format!("invalid count list {text:?}: {why}"));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let nums: Vec<usize> = parts
            .iter()
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("expected start:stop:step with integer parts"))?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if step == 0 {
            return Err(bad("step must be positive"));
        }
        if start > stop {
            return Err(bad("start exceeds stop"));
        }
        Ok((start..=stop).step_by(step).collect())
    } else {
        text.split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<usize>, _>>()
            .map_err(|_| bad("expected a comma list of integers"))
    }
}

fn channel_from_args(snr: &[f64], db: bool, downlink_snr: Option<f64>) -> Result<ChannelState, Failure> {
    let snrs: Vec<f64> = snr.iter().map(|&s| to_linear(s, db)).collect();
    let downlink = downlink_snr.map(|d| to_linear(d, db));
    Ok(ChannelState::from_snrs(&snrs, downlink)?)
}

fn cmd_rate(args: RateArgs) -> Result<(), Failure> {
    let ch = channel_from_args(&args.snr, args.db, args.downlink_snr)?;
    let pairing = Pairing::parse(&args.pairing, ch.n())?;
    let report = evaluate(&pairing, &ch, args.downlink_snr.is_some())?;
    println!("pairing: {pairing}");
    println!("phases: {}", report.m);
    for (idx, rate) in report.per_user.iter().enumerate() {
        let label = idx + 1;
        println!("user {label} (snr {:.6}): {rate:.6}", ch.gamma(label));
    }
    println!("common rate: {:.6}", report.common_rate);
    println!("sum rate: {:.6}", report.sum_rate);
    Ok(())
}

fn cmd_optimize(args: OptimizeArgs) -> Result<(), Failure> {
    let objective = match args.objective {
        ObjectiveArg::Common => Objective::Common,
        ObjectiveArg::Sum => Objective::Sum,
    };
    if args.allow_silencing && objective == Objective::Common {
        return Err(Failure::Usage(
            "--allow-silencing applies only to --objective sum".into(),
        ));
    }
    if args.downlink_snr.is_some() && objective == Objective::Sum && !args.brute_force {
        return Err(Failure::Usage(
            "--downlink-snr with --objective sum requires --brute-force \
             (the sum-rate construction covers the uplink side)"
                .into(),
        ));
    }
    let ch = channel_from_args(&args.snr, args.db, args.downlink_snr)?;
    let apply_downlink = args.downlink_snr.is_some();
    let n = ch.n();

    let result = if args.brute_force {
        brute_force_best(&ch, objective, apply_downlink)?
    } else {
        match objective {
            Objective::Common => {
                let chain = chain_pairing(n);
                let value = evaluate(&chain, &ch, apply_downlink)?.common_rate;
                OptimizationResult {
                    pairing: chain,
                    objective_value: value,
                    objective,
                    active_set: (1..=n).collect(),
                    phases: n - 1,
                }
            }
            Objective::Sum if args.allow_silencing => silencing_search(&ch),
            Objective::Sum => match sum_rate_closed_form(&ch) {
                Ok(value) => OptimizationResult {
                    pairing: star_pairing(n, 1),
                    objective_value: value,
                    objective,
                    active_set: (1..=n).collect(),
                    phases: n - 1,
                },
                Err(e @ Error::WeakBoundViolation { .. }) => {
                    eprintln!("warning: {e}; falling back to exhaustive search");
                    brute_force_best(&ch, objective, false)?
                }
                Err(e) => return Err(e.into()),
            },
        }
    };

    println!("pairing: {}", result.pairing);
    let objective_name = match result.objective {
        Objective::Common => "common",
        Objective::Sum => "sum",
    };
    println!("objective: {objective_name}");
    println!("value: {:.6}", result.objective_value);
    let active: Vec<String> = result.active_set.iter().map(|u| u.to_string()).collect();
    println!("active: {}", active.join(","));
    println!("phases: {}", result.phases);
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let n = args.n;
    let trials = args.trials as usize;
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    // Exhaustive search maximizing the worst user never beats the chain.
    for trial in 0..trials {
        let gains = sample_rayleigh_gains(n, &mut rng)?;
        let ch = make_channel(&gains, 1.0, n as f64, 1.0)?;
        let best = brute_force_best(&ch, Objective::Common, true)?;
        let chain = evaluate(&chain_pairing(n), &ch, true)?.common_rate;
        if (best.objective_value - chain).abs() > TOL {
            return Err(check_failed(
                "chain-common-optimality",
                trial,
                &format!("brute force {} vs chain {chain} on {:?}", best.objective_value, ch.gammas()),
            ));
        }
    }
    println!("check chain-common-optimality: ok ({trials} trials)");

    // With all SNRs >= 1, exhaustive sum-rate search matches the
    // weakest-user star and its closed form.
    for trial in 0..trials {
        let gains = sample_rayleigh_gains(n, &mut rng)?;
        let snrs: Vec<f64> = gains.iter().map(|g| 1.0 + g * g).collect();
        let ch = ChannelState::from_snrs(&snrs, None)?;
        let best = brute_force_best(&ch, Objective::Sum, false)?;
        let star = sum_rate_closed_form(&ch)?;
        if (best.objective_value - star).abs() > TOL {
            return Err(check_failed(
                "star-sum-optimality",
                trial,
                &format!("brute force {} vs star {star} on {:?}", best.objective_value, ch.gammas()),
            ));
        }
    }
    println!("check star-sum-optimality: ok ({trials} trials)");

    // Spanning-tree feasibility agrees with the parity-space rank test
    // for every user, on schedules that are usually not trees.
    for trial in 0..trials {
        let pairs: Vec<(usize, usize)> = (0..n - 1)
            .map(|_| loop {
                let a = rng.random_range(1..=n);
                let b = rng.random_range(1..=n);
                if a != b {
                    break (a, b);
                }
            })
            .collect();
        let pairing = Pairing::new(n, pairs)?;
        let tree = is_feasible(&pairing);
        for user in 1..=n {
            if feasible_by_rank(&pairing, user) != tree {
                return Err(check_failed(
                    "pairing-feasibility-rank-agreement",
                    trial,
                    &format!("user {user} disagrees on {pairing}"),
                ));
            }
        }
    }
    println!("check pairing-feasibility-rank-agreement: ok ({trials} trials)");

    // Sequence -> tree -> sequence and tree -> sequence -> tree identities.
    for trial in 0..trials {
        let seq = PruferSequence::new(
            (0..n.saturating_sub(2))
                .map(|_| rng.random_range(1..=n))
                .collect(),
        )?;
        let tree = prufer_decode(&seq);
        let back = prufer_encode(&tree)?;
        if back != seq {
            return Err(check_failed(
                "tree-sequence-round-trip",
                trial,
                &format!("{seq:?} decoded to {tree} but re-encoded to {back:?}"),
            ));
        }
        let again = random_tree(n, &mut rng);
        if prufer_decode(&prufer_encode(&again)?) != again {
            return Err(check_failed("tree-sequence-round-trip", trial, &format!("{again}")));
        }
    }
    println!("check tree-sequence-round-trip: ok ({trials} trials)");

    // Among sum-rate optima there is always a tree where the strongest
    // user is a leaf, and one where the two strongest users are leaves.
    for trial in 0..trials {
        let gains = sample_rayleigh_gains(n, &mut rng)?;
        let snrs: Vec<f64> = gains.iter().map(|g| 1.0 + g * g).collect();
        let ch = ChannelState::from_snrs(&snrs, None)?;
        let best = brute_force_best(&ch, Objective::Sum, false)?.objective_value;
        let mut strongest_leaf = false;
        let mut two_strongest_leaves = false;
        for tree in enumerate_trees(n)? {
            let value = evaluate(&tree, &ch, false)?.sum_rate;
            if (value - best).abs() <= TOL {
                let g = graph_of(&tree);
                strongest_leaf |= g.degree(n) == 1;
                two_strongest_leaves |= g.degree(n) == 1 && g.degree(n - 1) == 1;
            }
        }
        if !(strongest_leaf && two_strongest_leaves) {
            return Err(check_failed(
                "sum-optimal-degree-structure",
                trial,
                &format!("no leaf-structured optimum for {:?}", ch.gammas()),
            ));
        }
    }
    println!("check sum-optimal-degree-structure: ok ({trials} trials)");

    Ok(())
}

fn check_failed(name: &str, trial: usize, detail: &str) -> Failure {
    Failure::Runtime(format!("check {name}: failed at trial {trial}: {detail}"))
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let points = parse_axis(&args.snr_db)?;
    let mut cfg = SimConfig::new(args.n, args.draws as usize, args.seed, points)?;
    cfg.p_user = args.p_user;
    if let Some(p) = args.p_relay {
        cfg.p_relay = p;
    }
    let sweep = with_threads(args.threads, || run_sweep(&cfg))?;
    emit_csv(&sweep, &args.out)?;
    println!(
        "wrote {} SNR points ({} draws each) to {}",
        sweep.points.len(),
        cfg.draws,
        args.out.display()
    );
    Ok(())
}

fn cmd_bars(args: BarsArgs) -> Result<(), Failure> {
    let counts = parse_counts(&args.n_list)?;
    let bars = with_threads(args.threads, || {
        run_bars(&counts, args.snr_db, args.draws as usize, args.seed)
    })?;
    emit_bars_csv(&bars, &args.out)?;
    println!(
        "wrote {} user counts ({} draws each) to {}",
        bars.rows.len(),
        args.draws,
        args.out.display()
    );
    Ok(())
}

/// Runs `f` on a dedicated pool of `threads` workers when given; results are
/// thread-count independent either way.
fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> mwrc_fdf::Result<T> + Send,
) -> Result<T, Failure> {
    match threads {
        None => f().map_err(Failure::from),
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Failure::Runtime(format!("could not build thread pool: {e}")))?
            .install(f)
            .map_err(Failure::from),
    }
}
