//! The JSONL result schema. One object per line; big integers are decimal
//! strings so downstream consumers never round them through floats.

use crate::arith::Factorization;
use crate::search::{Strategy, TwinRecord};
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Wire form of a [`TwinRecord`]. Field names are the on-disk contract.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultLine {
    pub m: String,
    pub bits: u64,
    pub smoothness: u64,
    pub delta: String,
    pub x: String,
    pub y: String,
    pub n: u64,
    pub m_factors: Vec<(u64, u32)>,
    pub m1_factors: Vec<(u64, u32)>,
    pub sum_prime: bool,
    pub strategy: String,
    pub under_range: bool,
    pub timestamp: String,
}

impl ResultLine {
    pub fn from_record(rec: &TwinRecord) -> ResultLine {
        ResultLine {
            m: rec.m.to_string(),
            bits: rec.bits,
            smoothness: rec.smoothness,
            delta: rec.delta.to_string(),
            x: rec.x.to_string(),
            y: rec.y.to_string(),
            n: rec.n,
            m_factors: rec.m_factors.factors.clone(),
            m1_factors: rec.m1_factors.factors.clone(),
            sum_prime: rec.sum_prime,
            strategy: rec.strategy.tag().to_string(),
            under_range: rec.under_range,
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }

    /// Back to a record; fails on malformed numbers or an unknown strategy.
    pub fn to_record(&self) -> Result<TwinRecord, String> {
        let parse = |s: &str, what: &str| {
            BigUint::from_str(s).map_err(|e| format!("bad {what} {s:?}: {e}"))
        };
        let strategy = match self.strategy.as_str() {
            "high-order" => Strategy::HighOrder,
            "small-coefficient" => Strategy::SmallCoefficient,
            "small-primes" => Strategy::SmallPrimes,
            "lift" => Strategy::Lift,
            "chm" => Strategy::Chm,
            "enumeration" => Strategy::Enumeration,
            other => return Err(format!("unknown strategy tag {other:?}")),
        };
        Ok(TwinRecord {
            m: parse(&self.m, "m")?,
            bits: self.bits,
            smoothness: self.smoothness,
            delta: parse(&self.delta, "delta")?,
            x: parse(&self.x, "x")?,
            y: parse(&self.y, "y")?,
            n: self.n,
            m_factors: Factorization {
                factors: self.m_factors.clone(),
                cofactor: BigUint::one(),
            },
            m1_factors: Factorization {
                factors: self.m1_factors.clone(),
                cofactor: BigUint::one(),
            },
            strategy,
            sum_prime: self.sum_prime,
            under_range: self.under_range,
        })
    }
}

/// Parses a whole results file; returns (line number, line) for each entry.
pub fn read_results(path: &std::path::Path) -> std::io::Result<Vec<(usize, ResultLine)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: ResultLine = serde_json::from_str(line).map_err(|e| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("line {}: {e}", i + 1),
            )
        })?;
        out.push((i + 1, parsed));
    }
    Ok(out)
}
