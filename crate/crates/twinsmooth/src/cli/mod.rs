//! Command-line front end: subcommands over every operation family,
//! JSONL results, checkpoint/resume, shard partitioning.

pub mod checkpoint;
pub mod config;
pub mod records;
pub mod runner;
pub mod shard;
pub mod verify;

use crate::arith::SmoothnessBound;
use crate::pell::{fundamental_solution, Solve};
use crate::search::Strategy;
use clap::{Parser, Subcommand};
use config::Opts;
use num_bigint::BigUint;
use runner::{Engine, RunError, Sink};
use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

pub use shard::partition;

#[derive(Parser)]
#[command(
    name = "twinsmooth",
    version,
    about = "Find pairs of consecutive B-smooth integers via Pell equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// List every m in [--lo, --hi] with m(m+1) B-smooth, one per line
    SieveTwins(Opts),
    /// Solve x^2 - D y^2 = 1 (prints the fundamental solution or reports the cap)
    SolvePell(Opts),
    /// Enumerate the complete twin set for a small bound
    Enumerate(Opts),
    /// High-index search: sieve small pairs, lift through smooth v_n
    SearchHighOrder(Opts),
    /// Ascending-coefficient search over Delta up to --delta-max
    SearchDelta(Opts),
    /// Search over Delta with exactly --k prime factors in a window
    SearchSmallPrimes(Opts),
    /// Walk solution indices above a fundamental witness --m1
    Lift(Opts),
    /// Expand a twin seed set by the pairwise combination rule
    Chm(Opts),
    /// Recheck every claim in a results file
    Verify(Opts),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::SieveTwins(_) => "sieve-twins",
            Command::SolvePell(_) => "solve-pell",
            Command::Enumerate(_) => "enumerate",
            Command::SearchHighOrder(_) => "search-high-order",
            Command::SearchDelta(_) => "search-delta",
            Command::SearchSmallPrimes(_) => "search-small-primes",
            Command::Lift(_) => "lift",
            Command::Chm(_) => "chm",
            Command::Verify(_) => "verify",
        }
    }

    fn opts_mut(&mut self) -> &mut Opts {
        match self {
            Command::SieveTwins(o)
            | Command::SolvePell(o)
            | Command::Enumerate(o)
            | Command::SearchHighOrder(o)
            | Command::SearchDelta(o)
            | Command::SearchSmallPrimes(o)
            | Command::Lift(o)
            | Command::Chm(o)
            | Command::Verify(o) => o,
        }
    }
}

/// Runs a parsed command; the return value is the process exit code
/// (0 success, 1 runtime or verification failure, 2 usage).
pub fn run(mut cmd: Command) -> i32 {
    let name = cmd.name();
    if let Err(e) = cmd.opts_mut().merge_config_file() {
        eprintln!("error: {e}");
        return 2;
    }
    match dispatch(name, cmd) {
        Ok(code) => code,
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(RunError::Config(e)) => {
            eprintln!("usage error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn engine_for(name: &str, opts: &Opts) -> Result<Engine, RunError> {
    let (shard_id, shard_count) = opts.shard_pair()?;
    Ok(Engine {
        strategy_tag: name.to_string(),
        digest: opts.digest(name),
        shard_id,
        shard_count,
        out: opts.out.clone(),
        checkpoint: opts.checkpoint.clone(),
        resume: opts.resume,
    })
}

fn dispatch(name: &'static str, cmd: Command) -> Result<i32, RunError> {
    match cmd {
        Command::SieveTwins(opts) => {
            let bound = SmoothnessBound::new(opts.require_b()?)
                .map_err(crate::search::SearchError::from)?;
            let lo = opts.lo.ok_or(RunError::Usage("sieve-twins needs --lo".into()))?;
            let hi = opts.hi.ok_or(RunError::Usage("sieve-twins needs --hi".into()))?;
            let n = runner::run_sieve_twins(&bound, lo, hi, opts.out.as_deref())?;
            eprintln!("{n} twin pairs in [{lo}, {hi}]");
            Ok(0)
        }
        Command::SolvePell(opts) => {
            let d_str = opts
                .d
                .clone()
                .ok_or(RunError::Usage("solve-pell needs --d".into()))?;
            let d = BigUint::from_str(&d_str)
                .map_err(|_| RunError::Usage(format!("bad --d value {d_str:?}")))?;
            let cap = opts.parse_big(&opts.cap, "cap")?;
            match fundamental_solution(&d, cap.as_ref()) {
                Ok(Solve::Found(s)) => {
                    println!("x={} y={}", s.x, s.y);
                    Ok(0)
                }
                Ok(Solve::ExceedsCap) => {
                    println!("exceeds cap");
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(1)
                }
            }
        }
        Command::Enumerate(opts) => {
            let bound = SmoothnessBound::new(opts.require_b()?)
                .map_err(crate::search::SearchError::from)?;
            let cap = opts.parse_big(&opts.cap, "cap")?;
            let engine = engine_for(name, &opts)?;
            let items = runner::enumerate_items(&bound, engine.shard_id, engine.shard_count)?;
            let unresolved = AtomicU64::new(0);
            let summary = engine.run(
                items.len() as u64,
                &|i| items[i as usize].to_string(),
                |i| {
                    let (recs, exceeded) =
                        runner::enumerate_delta(&bound, &items[i as usize], cap.as_ref())?;
                    if exceeded {
                        unresolved.fetch_add(1, Ordering::Relaxed);
                    }
                    Ok(recs)
                },
            )?;
            eprintln!(
                "enumerate: {} coefficients, {} records, {} unresolved",
                summary.items_done,
                summary.records,
                unresolved.load(Ordering::Relaxed)
            );
            Ok(0)
        }
        Command::SearchHighOrder(opts) => {
            let cfg = opts.search_config()?;
            let engine = engine_for(name, &opts)?;
            let items = runner::high_order_items(&cfg, engine.shard_id, engine.shard_count)?;
            let summary = engine.run(
                items.len() as u64,
                &|i| {
                    let (n, lo, hi) = items[i as usize];
                    format!("n={n} w=[{lo},{hi}]")
                },
                |i| runner::run_high_order_item(&cfg, items[i as usize]),
            )?;
            eprintln!(
                "search-high-order: {} blocks, {} records, {} duplicates",
                summary.items_done, summary.records, summary.duplicates
            );
            Ok(0)
        }
        Command::SearchDelta(opts) => {
            let cfg = opts.search_config()?;
            let engine = engine_for(name, &opts)?;
            let items = runner::delta_items(&cfg, engine.shard_id, engine.shard_count)?;
            let summary = engine.run(
                items.len() as u64,
                &|i| items[i as usize].to_string(),
                |i| runner::run_delta_item(&cfg, &items[i as usize], Strategy::SmallCoefficient),
            )?;
            eprintln!(
                "search-delta: {} coefficients, {} records",
                summary.items_done, summary.records
            );
            Ok(0)
        }
        Command::SearchSmallPrimes(opts) => {
            let cfg = opts.search_config()?;
            if opts.k.is_none() {
                return Err(RunError::Usage("search-small-primes needs --k".into()));
            }
            let engine = engine_for(name, &opts)?;
            let items = runner::small_primes_items(&cfg, engine.shard_id, engine.shard_count)?;
            let summary = engine.run(
                items.len() as u64,
                &|i| items[i as usize].to_string(),
                |i| runner::run_delta_item(&cfg, &items[i as usize], Strategy::SmallPrimes),
            )?;
            eprintln!(
                "search-small-primes: {} coefficients, {} records",
                summary.items_done, summary.records
            );
            Ok(0)
        }
        Command::Lift(opts) => {
            let cfg = opts.search_config()?;
            let m1_str = opts
                .m1
                .clone()
                .ok_or(RunError::Usage("lift needs --m1".into()))?;
            let m1 = BigUint::from_str(&m1_str)
                .map_err(|_| RunError::Usage(format!("bad --m1 value {m1_str:?}")))?;
            let mut sink = Sink::open(opts.out.as_deref(), None)?;
            let lifted = runner::run_lift(&cfg, &m1, &mut sink)?;
            eprintln!("lift: fundamental plus {lifted} lifted records");
            Ok(0)
        }
        Command::Chm(opts) => {
            let bound = SmoothnessBound::new(opts.require_b()?)
                .map_err(crate::search::SearchError::from)?;
            let seeds_str = opts
                .seeds
                .clone()
                .ok_or(RunError::Usage("chm needs --seeds".into()))?;
            let mut seeds = BTreeSet::new();
            for part in seeds_str.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let m = BigUint::from_str(part)
                    .map_err(|_| RunError::Usage(format!("bad seed {part:?}")))?;
                seeds.insert(m);
            }
            if seeds.is_empty() {
                return Err(RunError::Usage("chm needs at least one seed".into()));
            }
            let engine = engine_for(name, &opts)?;
            let max_rounds = opts.max_rounds.unwrap_or(32);
            let summary = runner::run_chm(&engine, &bound, &seeds, max_rounds)?;
            eprintln!(
                "chm: reached round {}, {} new records",
                summary.items_done, summary.records
            );
            Ok(0)
        }
        Command::Verify(opts) => {
            let path = opts
                .file
                .clone()
                .ok_or(RunError::Usage("verify needs --file".into()))?;
            let lines = records::read_results(&path)?;
            let mut verifier = verify::Verifier::new();
            let report = verifier.verify_lines(&lines);
            for (lineno, msg) in &report.failures {
                println!("line {lineno}: FAIL {msg}");
            }
            println!(
                "verify: {} records, {} failures",
                report.checked,
                report.failures.len()
            );
            Ok(if report.ok() { 0 } else { 1 })
        }
    }
}
