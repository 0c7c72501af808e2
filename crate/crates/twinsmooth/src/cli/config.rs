//! Flag resolution: every option can come from the command line or from a
//! key=value config file, with the command line winning. The resolved
//! settings canonicalize into a digest that ties checkpoints to the exact
//! run they belong to.

use crate::arith::SmoothnessBound;
use crate::search::SearchConfig;
use num_bigint::BigUint;
use num_traits::One;
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::str::FromStr;

/// The uniform flag family shared by the subcommands; everything optional
/// here so file values can fill the gaps.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Opts {
    /// Smoothness bound B
    #[arg(long)]
    pub b: Option<u64>,
    /// Lower end of the target bitsize window for m
    #[arg(long = "bits-min")]
    pub bits_min: Option<u64>,
    /// Upper end of the target bitsize window for m
    #[arg(long = "bits-max")]
    pub bits_max: Option<u64>,
    /// Minimal solution index for the high-order search
    #[arg(long)]
    pub s: Option<u64>,
    /// Coefficient cap for the ascending-Delta search (decimal)
    #[arg(long = "delta-max")]
    pub delta_max: Option<String>,
    /// Number of prime factors for the small-primes search
    #[arg(long)]
    pub k: Option<usize>,
    /// Coefficient window lower end (decimal)
    #[arg(long = "delta-lo")]
    pub delta_lo: Option<String>,
    /// Coefficient window upper end (decimal)
    #[arg(long = "delta-hi")]
    pub delta_hi: Option<String>,
    /// Maximal lift index
    #[arg(long = "n-max")]
    pub n_max: Option<u64>,
    /// Only lift to indices that are powers of two
    #[arg(long = "powers-of-two-only")]
    pub powers_of_two_only: bool,
    /// Cap on the solution x (decimal); default 2^(bits-max + 1) + 1
    #[arg(long)]
    pub cap: Option<String>,
    /// Results file (JSONL, append-only)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Checkpoint file
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Shard as i/n, e.g. 0/4
    #[arg(long)]
    pub shard: Option<String>,
    /// Continue from the checkpoint
    #[arg(long)]
    pub resume: bool,
    /// key=value file supplying defaults for any flag above
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Range start for sieve-twins
    #[arg(long)]
    pub lo: Option<u64>,
    /// Range end for sieve-twins
    #[arg(long)]
    pub hi: Option<u64>,
    /// Fundamental witness m1 for lift
    #[arg(long)]
    pub m1: Option<String>,
    /// Comma-separated seed witnesses for chm
    #[arg(long)]
    pub seeds: Option<String>,
    /// Round cap for chm
    #[arg(long = "max-rounds")]
    pub max_rounds: Option<u64>,
    /// Pell coefficient D for solve-pell (decimal)
    #[arg(long)]
    pub d: Option<String>,
    /// Results file to verify
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("missing required flag --{0}")]
    Missing(&'static str),
    #[error("could not parse {what} value {value:?}")]
    BadValue { what: &'static str, value: String },
    #[error("config file {0}: {1}")]
    File(PathBuf, String),
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
}

impl Opts {
    /// Fills unset fields from a key=value file (keys named like the long
    /// flags). Unknown keys are an error: misspelled settings must not be
    /// silently ignored on a long campaign.
    pub fn merge_config_file(&mut self) -> Result<(), ConfigError> {
        let Some(path) = self.config.clone() else {
            return Ok(());
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| ConfigError::File(path.clone(), e.to_string()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::File(
                    path,
                    format!("line {}: expected key=value", lineno + 1),
                ));
            };
            let key = key.trim();
            let value = value.trim().to_string();
            self.apply_file_entry(key, &value)
                .map_err(|msg| ConfigError::File(path.clone(), format!("line {}: {msg}", lineno + 1)))?;
        }
        Ok(())
    }

    fn apply_file_entry(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn set<T: FromStr>(slot: &mut Option<T>, value: &str, key: &str) -> Result<(), String> {
            if slot.is_none() {
                let parsed = value
                    .parse::<T>()
                    .map_err(|_| format!("bad value {value:?} for {key}"))?;
                *slot = Some(parsed);
            }
            Ok(())
        }
        match key {
            "b" => set(&mut self.b, value, key),
            "bits-min" => set(&mut self.bits_min, value, key),
            "bits-max" => set(&mut self.bits_max, value, key),
            "s" => set(&mut self.s, value, key),
            "delta-max" => set(&mut self.delta_max, value, key),
            "k" => set(&mut self.k, value, key),
            "delta-lo" => set(&mut self.delta_lo, value, key),
            "delta-hi" => set(&mut self.delta_hi, value, key),
            "n-max" => set(&mut self.n_max, value, key),
            "powers-of-two-only" => {
                if !self.powers_of_two_only {
                    self.powers_of_two_only = value
                        .parse::<bool>()
                        .map_err(|_| format!("bad value {value:?} for {key}"))?;
                }
                Ok(())
            }
            "cap" => set(&mut self.cap, value, key),
            "out" => set(&mut self.out, value, key),
            "checkpoint" => set(&mut self.checkpoint, value, key),
            "shard" => set(&mut self.shard, value, key),
            "resume" => {
                if !self.resume {
                    self.resume = value
                        .parse::<bool>()
                        .map_err(|_| format!("bad value {value:?} for {key}"))?;
                }
                Ok(())
            }
            "lo" => set(&mut self.lo, value, key),
            "hi" => set(&mut self.hi, value, key),
            "m1" => set(&mut self.m1, value, key),
            "seeds" => set(&mut self.seeds, value, key),
            "max-rounds" => set(&mut self.max_rounds, value, key),
            "d" => set(&mut self.d, value, key),
            "file" => set(&mut self.file, value, key),
            other => Err(format!("unknown key {other:?}")),
        }
    }

    pub fn require_b(&self) -> Result<u64, ConfigError> {
        self.b.ok_or(ConfigError::Missing("b"))
    }

    pub fn parse_big(&self, field: &Option<String>, what: &'static str) -> Result<Option<BigUint>, ConfigError> {
        match field {
            None => Ok(None),
            Some(s) => BigUint::from_str(s)
                .map(Some)
                .map_err(|_| ConfigError::BadValue {
                    what,
                    value: s.clone(),
                }),
        }
    }

    pub fn shard_pair(&self) -> Result<(u64, u64), ConfigError> {
        match &self.shard {
            None => Ok((0, 1)),
            Some(s) => {
                let bad = || ConfigError::BadValue {
                    what: "shard",
                    value: s.clone(),
                };
                let (i, n) = s.split_once('/').ok_or_else(bad)?;
                let id = i.trim().parse::<u64>().map_err(|_| bad())?;
                let count = n.trim().parse::<u64>().map_err(|_| bad())?;
                if count == 0 || id >= count {
                    return Err(bad());
                }
                Ok((id, count))
            }
        }
    }

    /// Builds the search configuration: bound from --b, bit window from
    /// --bits-min/--bits-max, cap from --cap (default 2^(b_max+1) + 1) and
    /// the remaining knobs from their flags.
    pub fn search_config(&self) -> Result<SearchConfig, ConfigError> {
        let b = self.require_b()?;
        let bound = SmoothnessBound::new(b)?;
        let b_min = self.bits_min.unwrap_or(1);
        let b_max = self.bits_max.unwrap_or(64);
        let mut cfg = SearchConfig::new(bound, b_min, b_max);
        if let Some(s) = self.s {
            cfg.s = s;
        }
        cfg.delta_max = self.parse_big(&self.delta_max, "delta-max")?;
        if let Some(k) = self.k {
            cfg.k = k;
        }
        if let Some(lo) = self.parse_big(&self.delta_lo, "delta-lo")? {
            cfg.delta_lo = lo;
        } else {
            cfg.delta_lo = BigUint::one();
        }
        if let Some(hi) = self.parse_big(&self.delta_hi, "delta-hi")? {
            cfg.delta_hi = hi;
        }
        if let Some(n) = self.n_max {
            cfg.n_lift_max = n;
        }
        cfg.powers_of_two_only = self.powers_of_two_only;
        if let Some(cap) = self.parse_big(&self.cap, "cap")? {
            cfg.x_cap = cap;
        }
        Ok(cfg)
    }

    /// Digest of everything that determines the work sequence and its
    /// outputs. Same digest = same run, so a checkpoint can be trusted.
    pub fn digest(&self, subcommand: &str) -> String {
        let mut h = Sha256::new();
        let canonical = format!(
            "cmd={subcommand};b={:?};bits={:?}/{:?};s={:?};delta-max={:?};k={:?};\
             delta-lo={:?};delta-hi={:?};n-max={:?};p2={};cap={:?};shard={:?};\
             lo={:?};hi={:?};m1={:?};seeds={:?};max-rounds={:?}",
            self.b,
            self.bits_min,
            self.bits_max,
            self.s,
            self.delta_max,
            self.k,
            self.delta_lo,
            self.delta_hi,
            self.n_max,
            self.powers_of_two_only,
            self.cap,
            self.shard,
            self.lo,
            self.hi,
            self.m1,
            self.seeds,
            self.max_rounds,
        );
        h.update(canonical.as_bytes());
        hex_lower(&h.finalize())
    }
}

fn hex_lower(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
