//! Batch execution: a deterministic work-item sequence per subcommand,
//! processed in order with a worker pool per batch, records appended by a
//! single writer, checkpoint advanced after every batch.

use crate::arith::{sieve_twin_smooth, SmoothnessBound, SIEVE_SEGMENT};
use crate::cli::checkpoint::{Checkpoint, Cursor};
use crate::cli::records::ResultLine;
use crate::cli::shard::partition;
use crate::lehmer::{enumerate_q_prime, index_bound, triple_from_pair};
use crate::pell::{fundamental_solution, next_solution, Solve};
use crate::poly::{max_m1_bits, v_coeffs};
use crate::search::{
    high_order_scan_block, lift_solutions, make_record, process_delta, DeltaOutcome,
    SearchConfig, Strategy, TwinRecord,
};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::io::{Seek, Write};
use std::path::{Path, PathBuf};

/// Work items finished between checkpoint writes.
const BATCH: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Search(#[from] crate::search::SearchError),
    #[error(transparent)]
    Config(#[from] crate::cli::config::ConfigError),
    #[error(transparent)]
    Shard(#[from] crate::cli::shard::ShardError),
}

/// Where records go: a file opened for append, or stdout.
pub struct Sink {
    file: Option<std::fs::File>,
    path: Option<PathBuf>,
    pub written: u64,
}

impl Sink {
    pub fn open(out: Option<&Path>, truncate_to: Option<u64>) -> std::io::Result<Sink> {
        match out {
            None => Ok(Sink {
                file: None,
                path: None,
                written: 0,
            }),
            Some(path) => {
                let keep = truncate_to.unwrap_or(0);
                if keep > 0 && !path.exists() {
                    return Err(std::io::Error::new(
                        std::io::ErrorKind::NotFound,
                        format!(
                            "cannot resume: results file {} is gone but the checkpoint \
                             says it held {keep} bytes",
                            path.display()
                        ),
                    ));
                }
                let mut f = std::fs::OpenOptions::new()
                    .create(true)
                    .truncate(false)
                    .write(true)
                    .open(path)?;
                f.set_len(keep)?;
                f.seek(std::io::SeekFrom::End(0))?;
                Ok(Sink {
                    file: Some(f),
                    path: Some(path.to_path_buf()),
                    written: keep,
                })
            }
        }
    }

    pub fn emit(&mut self, rec: &TwinRecord) -> std::io::Result<()> {
        let line = serde_json::to_string(&ResultLine::from_record(rec))?;
        match &mut self.file {
            Some(f) => {
                f.write_all(line.as_bytes())?;
                f.write_all(b"\n")?;
                self.written += line.len() as u64 + 1;
            }
            None => println!("{line}"),
        }
        Ok(())
    }

    fn sync(&mut self) -> std::io::Result<()> {
        if let Some(f) = &mut self.file {
            f.sync_all()?;
        }
        Ok(())
    }

    /// m values already present (used to rebuild the duplicate filter on
    /// resume).
    pub fn existing_members(&self) -> std::io::Result<BTreeSet<BigUint>> {
        let mut set = BTreeSet::new();
        if let Some(path) = &self.path {
            if path.exists() {
                for (_, line) in crate::cli::records::read_results(path)? {
                    if let Ok(m) = line.m.parse::<BigUint>() {
                        set.insert(m);
                    }
                }
            }
        }
        Ok(set)
    }
}

/// Shared plumbing for the checkpointed subcommands.
pub struct Engine {
    pub strategy_tag: String,
    pub digest: String,
    pub shard_id: u64,
    pub shard_count: u64,
    pub out: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
}

pub struct RunSummary {
    pub items_done: u64,
    pub records: u64,
    pub duplicates: u64,
}

impl Engine {
    /// Runs `process` over items `start..items`, batching, deduplicating on
    /// m, appending to the sink and checkpointing after each batch.
    pub fn run<F>(&self, items: u64, describe: &dyn Fn(u64) -> String, process: F) -> Result<RunSummary, RunError>
    where
        F: Fn(u64) -> Result<Vec<TwinRecord>, crate::search::SearchError> + Sync,
    {
        let mut start = 0u64;
        let mut truncate_to = None;
        if self.resume {
            if let Some(ck_path) = &self.checkpoint {
                if ck_path.exists() {
                    let ck = Checkpoint::load(ck_path)?;
                    if ck.config_digest != self.digest {
                        return Err(RunError::Usage(format!(
                            "checkpoint {} belongs to a different configuration",
                            ck_path.display()
                        )));
                    }
                    start = ck.cursor.index + 1;
                    truncate_to = Some(ck.output_len);
                }
            }
        }
        let mut sink = Sink::open(self.out.as_deref(), truncate_to)?;
        let mut seen = if start > 0 {
            sink.existing_members()?
        } else {
            BTreeSet::new()
        };

        let mut summary = RunSummary {
            items_done: start,
            records: 0,
            duplicates: 0,
        };
        let mut idx = start;
        while idx < items {
            let hi = (idx + BATCH as u64).min(items);
            let batch: Vec<u64> = (idx..hi).collect();
            let results: Vec<Result<Vec<TwinRecord>, crate::search::SearchError>> =
                batch.par_iter().map(|&i| process(i)).collect();
            for res in results {
                for rec in res? {
                    if seen.insert(rec.m.clone()) {
                        sink.emit(&rec)?;
                        summary.records += 1;
                    } else {
                        summary.duplicates += 1;
                    }
                }
            }
            sink.sync()?;
            summary.items_done = hi;
            if let Some(ck_path) = &self.checkpoint {
                Checkpoint {
                    strategy: self.strategy_tag.clone(),
                    cursor: Cursor {
                        index: hi - 1,
                        last: describe(hi - 1),
                    },
                    shard_id: self.shard_id,
                    shard_count: self.shard_count,
                    config_digest: self.digest.clone(),
                    timestamp: chrono::Utc::now().to_rfc3339(),
                    output_len: sink.written,
                }
                .store(ck_path)?;
            }
            idx = hi;
        }
        Ok(summary)
    }
}

/// search-delta: ascending Delta in Q' within this shard's value subrange
/// of [1, delta_max].
pub fn delta_items(
    cfg: &SearchConfig,
    shard_id: u64,
    shard_count: u64,
) -> Result<Vec<BigUint>, RunError> {
    let delta_max = cfg
        .delta_max
        .clone()
        .ok_or_else(|| RunError::Usage("search-delta needs --delta-max".into()))?;
    let hi = delta_max
        .to_u64()
        .ok_or_else(|| RunError::Usage("--delta-max beyond u64 is not shardable".into()))?;
    let Some((lo, hi)) = partition(1, hi, shard_id, shard_count)? else {
        return Ok(Vec::new());
    };
    let lo_b = BigUint::from(lo);
    Ok(enumerate_q_prime(&cfg.bound, Some(BigUint::from(hi)))
        .filter(|d| d >= &lo_b)
        .collect())
}

/// search-small-primes: k-prime products within this shard's value
/// subrange of [delta_lo, delta_hi].
pub fn small_primes_items(
    cfg: &SearchConfig,
    shard_id: u64,
    shard_count: u64,
) -> Result<Vec<BigUint>, RunError> {
    let lo = cfg
        .delta_lo
        .to_u64()
        .ok_or_else(|| RunError::Usage("--delta-lo beyond u64 is not shardable".into()))?;
    let hi = cfg
        .delta_hi
        .to_u64()
        .ok_or_else(|| RunError::Usage("--delta-hi beyond u64 is not shardable".into()))?;
    if lo > hi {
        return Err(RunError::Usage("--delta-lo exceeds --delta-hi".into()));
    }
    let Some((lo, hi)) = partition(lo, hi, shard_id, shard_count)? else {
        return Ok(Vec::new());
    };
    let mut sub = cfg.clone();
    sub.delta_lo = BigUint::from(lo);
    sub.delta_hi = BigUint::from(hi);
    Ok(crate::search::small_primes_deltas(&sub)
        .into_iter()
        .filter(|d| d != &BigUint::from(2u32))
        .collect())
}

/// high-order blocks: for each index n in [s, (B+1)/2], the shard's slice
/// of [1, 2^T - 1] cut into sieve-segment sized pieces.
pub fn high_order_items(
    cfg: &SearchConfig,
    shard_id: u64,
    shard_count: u64,
) -> Result<Vec<(u64, u64, u64)>, RunError> {
    let mut items = Vec::new();
    for n in crate::search::high_order_index_range(cfg) {
        let Some(t_bits) = max_m1_bits(cfg.b_max, n) else {
            continue;
        };
        if t_bits >= 63 {
            return Err(RunError::Usage(format!(
                "w range 2^{t_bits} at index {n} is beyond this tool; raise --s"
            )));
        }
        let w_hi = (1u64 << t_bits) - 1;
        let Some((lo, hi)) = partition(1, w_hi, shard_id, shard_count)? else {
            continue;
        };
        let mut block_lo = lo;
        while block_lo <= hi {
            let block_hi = block_lo.saturating_add(SIEVE_SEGMENT - 1).min(hi);
            items.push((n, block_lo, block_hi));
            block_lo = block_hi + 1;
        }
    }
    Ok(items)
}

/// enumerate: the full coefficient list for the bound (finite: products of
/// the primes <= B), sharded by item index.
pub fn enumerate_items(
    bound: &SmoothnessBound,
    shard_id: u64,
    shard_count: u64,
) -> Result<Vec<BigUint>, RunError> {
    let all: Vec<BigUint> = enumerate_q_prime(bound, None).collect();
    let count = all.len() as u64;
    let Some((lo, hi)) = partition(0, count - 1, shard_id, shard_count)? else {
        return Ok(Vec::new());
    };
    Ok(all[lo as usize..=hi as usize].to_vec())
}

/// Per-coefficient enumeration: fundamental under the cap (None =
/// unbounded), all indices up to max{3, (q_t+1)/2} when the fundamental y
/// is smooth. Returns records; an ExceedsCap outcome surfaces as an
/// unresolved marker via the bool.
pub fn enumerate_delta(
    bound: &SmoothnessBound,
    delta: &BigUint,
    x_cap: Option<&BigUint>,
) -> Result<(Vec<TwinRecord>, bool), crate::search::SearchError> {
    let d = delta * 2u32;
    let fund = match fundamental_solution(&d, x_cap)? {
        Solve::Found(f) => f,
        Solve::ExceedsCap => return Ok((Vec::new(), true)),
    };
    if !crate::arith::is_b_smooth(&fund.y, bound) {
        return Ok((Vec::new(), false));
    }
    let m1 = (&fund.x - 1u32) / 2u32;
    let mut recs = vec![make_record(
        m1.clone(),
        delta.clone(),
        fund.x.clone(),
        fund.y.clone(),
        1,
        Strategy::Enumeration,
        bound,
        1,
    )];
    let mut cur = fund.clone();
    for n in 2..=index_bound(bound) {
        cur = next_solution(&fund, &cur)?;
        let v = v_coeffs(n)?.eval_unsigned(&m1);
        if crate::arith::is_b_smooth(&v, bound) {
            let mn = (&cur.x - 1u32) / 2u32;
            recs.push(make_record(
                mn,
                delta.clone(),
                cur.x.clone(),
                cur.y.clone(),
                n,
                Strategy::Enumeration,
                bound,
                1,
            ));
        }
    }
    Ok((recs, false))
}

/// One delta item for the two coefficient-driven searches.
pub fn run_delta_item(
    cfg: &SearchConfig,
    delta: &BigUint,
    strategy: Strategy,
) -> Result<Vec<TwinRecord>, crate::search::SearchError> {
    match process_delta(cfg, delta, strategy)? {
        DeltaOutcome::Found(recs) => Ok(recs),
        _ => Ok(Vec::new()),
    }
}

/// The chm subcommand: seeds validated, then rounds as work items. Each
/// round combines all pairs of the current set; new members are emitted as
/// records (their provenance triples solved on the spot). Resume rebuilds
/// the set from the seeds plus the surviving output.
pub fn run_chm(
    engine: &Engine,
    bound: &SmoothnessBound,
    seeds: &BTreeSet<BigUint>,
    max_rounds: u64,
) -> Result<RunSummary, RunError> {
    for m in seeds {
        if crate::arith::pair_smoothness(m, bound).is_none() {
            return Err(RunError::Search(crate::search::SearchError::InvalidSeed(
                m.clone(),
            )));
        }
    }
    let mut start_round = 0u64;
    let mut truncate_to = None;
    if engine.resume {
        if let Some(ck_path) = &engine.checkpoint {
            if ck_path.exists() {
                let ck = Checkpoint::load(ck_path)?;
                if ck.config_digest != engine.digest {
                    return Err(RunError::Usage(
                        "checkpoint belongs to a different configuration".into(),
                    ));
                }
                start_round = ck.cursor.index + 1;
                truncate_to = Some(ck.output_len);
            }
        }
    }
    let mut sink = Sink::open(engine.out.as_deref(), truncate_to)?;
    let mut set: BTreeSet<BigUint> = seeds.clone();
    if start_round > 0 {
        set.extend(sink.existing_members()?);
    } else {
        // round 0 emits the seeds themselves
        for m in seeds {
            let rec = record_for_witness(m, bound)?;
            sink.emit(&rec)?;
        }
        sink.sync()?;
        store_round_checkpoint(engine, &sink, 0)?;
        start_round = 1;
    }

    let mut summary = RunSummary {
        items_done: start_round,
        records: 0,
        duplicates: 0,
    };
    for round in start_round..=max_rounds {
        let members: Vec<BigUint> = set.iter().cloned().collect();
        let mut fresh: BTreeSet<BigUint> = BTreeSet::new();
        for (i, m) in members.iter().enumerate() {
            for big in &members[i + 1..] {
                let gap = big - m;
                let num = m * (big + 1u32);
                let (mu, rem) = num_integer::Integer::div_rem(&num, &gap);
                if num_traits::Zero::is_zero(&rem) && !set.contains(&mu) {
                    fresh.insert(mu);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for mu in &fresh {
            let rec = record_for_witness(mu, bound)?;
            sink.emit(&rec)?;
            summary.records += 1;
        }
        set.extend(fresh);
        sink.sync()?;
        store_round_checkpoint(engine, &sink, round)?;
        summary.items_done = round;
    }
    Ok(summary)
}

fn store_round_checkpoint(engine: &Engine, sink: &Sink, round: u64) -> Result<(), RunError> {
    if let Some(ck_path) = &engine.checkpoint {
        Checkpoint {
            strategy: engine.strategy_tag.clone(),
            cursor: Cursor {
                index: round,
                last: format!("round {round}"),
            },
            shard_id: engine.shard_id,
            shard_count: engine.shard_count,
            config_digest: engine.digest.clone(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            output_len: sink.written,
        }
        .store(ck_path)?;
    }
    Ok(())
}

/// Full record for a twin witness whose triple is not yet known.
pub fn record_for_witness(
    m: &BigUint,
    bound: &SmoothnessBound,
) -> Result<TwinRecord, crate::search::SearchError> {
    let t = triple_from_pair(m, bound)?;
    Ok(make_record(
        m.clone(),
        t.delta,
        t.x,
        t.y,
        t.n,
        Strategy::Chm,
        bound,
        1,
    ))
}

/// The lift subcommand: triple of m1 (which must be fundamental), then the
/// index walk.
pub fn run_lift(
    cfg: &SearchConfig,
    m1: &BigUint,
    sink: &mut Sink,
) -> Result<u64, RunError> {
    let t = triple_from_pair(m1, &cfg.bound).map_err(crate::search::SearchError::from)?;
    if t.n != 1 {
        return Err(RunError::Usage(format!(
            "m1 = {m1} is the index-{} witness of Delta = {}; lift starts from the fundamental",
            t.n, t.delta
        )));
    }
    let rec = make_record(
        m1.clone(),
        t.delta,
        t.x,
        t.y,
        1,
        Strategy::SmallCoefficient,
        &cfg.bound,
        cfg.b_min,
    );
    let lifts = lift_solutions(&rec, cfg)?;
    let mut count = 0;
    sink.emit(&rec)?;
    for l in &lifts {
        sink.emit(l)?;
        count += 1;
    }
    Ok(count)
}

/// sieve-twins: plain m values, one per line.
pub fn run_sieve_twins(
    bound: &SmoothnessBound,
    lo: u64,
    hi: u64,
    out: Option<&Path>,
) -> Result<u64, RunError> {
    let ms = sieve_twin_smooth(lo, hi, bound).map_err(crate::search::SearchError::from)?;
    let mut text = String::new();
    for m in &ms {
        text.push_str(&m.to_string());
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(ms.len() as u64)
}

/// Convenience for the scan-block work item.
pub fn run_high_order_item(
    cfg: &SearchConfig,
    item: (u64, u64, u64),
) -> Result<Vec<TwinRecord>, crate::search::SearchError> {
    high_order_scan_block(cfg, item.0, item.1, item.2)
}
