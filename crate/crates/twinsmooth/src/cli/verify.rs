//! Re-derivation of everything a results file claims.
//!
//! For each line: the factorizations must recompose to m and m+1 and be
//! complete at the stated smoothness, the stated smoothness must be the
//! actual largest prime, x = 2m+1 and the Pell identity must hold, the
//! Lehmer triple recomputed from scratch (including re-solving the Pell
//! equation under cap x) must match delta, y and the solution index, and
//! the prime-sum flag must match a fresh primality test.

use crate::arith::{factor_with_bound, is_probable_prime, SmoothnessBound};
use crate::cli::records::ResultLine;
use crate::lehmer::triple_from_pair;
use num_bigint::BigUint;
use std::collections::HashMap;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct VerifyReport {
    pub checked: usize,
    pub failures: Vec<(usize, String)>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub struct Verifier {
    bounds: HashMap<u64, SmoothnessBound>,
}

impl Verifier {
    pub fn new() -> Self {
        Verifier {
            bounds: HashMap::new(),
        }
    }

    fn bound(&mut self, b: u64) -> Result<&SmoothnessBound, String> {
        if let std::collections::hash_map::Entry::Vacant(e) = self.bounds.entry(b) {
            let bound = SmoothnessBound::new(b).map_err(|e| e.to_string())?;
            e.insert(bound);
        }
        Ok(&self.bounds[&b])
    }

    /// All checks for one line; the error string says which check broke.
    pub fn verify_line(&mut self, line: &ResultLine) -> Result<(), String> {
        let m = BigUint::from_str(&line.m).map_err(|e| format!("unparseable m: {e}"))?;
        let delta =
            BigUint::from_str(&line.delta).map_err(|e| format!("unparseable delta: {e}"))?;
        let x = BigUint::from_str(&line.x).map_err(|e| format!("unparseable x: {e}"))?;
        let y = BigUint::from_str(&line.y).map_err(|e| format!("unparseable y: {e}"))?;

        if line.bits != m.bits() {
            return Err(format!("bits: stated {} actual {}", line.bits, m.bits()));
        }
        if x != &m * 2u32 + 1u32 {
            return Err("x != 2m + 1".into());
        }
        if &x * &x != &delta * 2u32 * &y * &y + 1u32 {
            return Err("Pell identity x^2 - 2 Delta y^2 = 1 fails".into());
        }

        let bound = self.bound(line.smoothness)?.clone();
        let mf = factor_with_bound(&m, &bound);
        let m1f = factor_with_bound(&(&m + 1u32), &bound);
        if !mf.is_complete() || !m1f.is_complete() {
            return Err(format!(
                "pair is not {}-smooth: cofactors {} / {}",
                line.smoothness, mf.cofactor, m1f.cofactor
            ));
        }
        if mf.factors != line.m_factors {
            return Err(format!(
                "m_factors mismatch: stated {:?} actual {:?}",
                line.m_factors, mf.factors
            ));
        }
        if m1f.factors != line.m1_factors {
            return Err(format!(
                "m1_factors mismatch: stated {:?} actual {:?}",
                line.m1_factors, m1f.factors
            ));
        }
        let actual_smoothness = mf
            .largest_prime()
            .into_iter()
            .chain(m1f.largest_prime())
            .max()
            .unwrap_or(2);
        if actual_smoothness != line.smoothness {
            return Err(format!(
                "smoothness: stated {} actual {}",
                line.smoothness, actual_smoothness
            ));
        }

        // bijection round trip with a fresh Pell solve (cap = x)
        let triple = triple_from_pair(&m, &bound).map_err(|e| format!("triple: {e}"))?;
        if triple.delta != delta {
            return Err(format!(
                "delta: stated {} bijection gives {}",
                delta, triple.delta
            ));
        }
        if triple.y != y {
            return Err(format!("y: stated {} bijection gives {}", y, triple.y));
        }
        if triple.n != line.n {
            return Err(format!(
                "solution index: stated {} equation gives {}",
                line.n, triple.n
            ));
        }

        let sum_prime = is_probable_prime(&(&m * 2u32 + 1u32));
        if sum_prime != line.sum_prime {
            return Err(format!(
                "sum_prime: stated {} actual {}",
                line.sum_prime, sum_prime
            ));
        }
        if chrono::DateTime::parse_from_rfc3339(&line.timestamp).is_err() {
            return Err(format!("timestamp {:?} is not ISO-8601", line.timestamp));
        }
        Ok(())
    }

    pub fn verify_lines(&mut self, lines: &[(usize, ResultLine)]) -> VerifyReport {
        let mut report = VerifyReport::default();
        for (lineno, line) in lines {
            report.checked += 1;
            if let Err(msg) = self.verify_line(line) {
                report.failures.push((*lineno, msg));
            }
        }
        report
    }
}

impl Default for Verifier {
    fn default() -> Self {
        Self::new()
    }
}
