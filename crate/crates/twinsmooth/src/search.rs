//! Search strategies over cryptographic-size ranges.
//!
//! Three ways of choosing which Pell equations to look at:
//!
//! * high-order: for each solution index n from s upward, sieve small twin
//!   pairs w and lift those with smooth v_n(w); the size bound
//!   m_n > 4^(n-1) m_1^n keeps the sieve range exponentially small.
//! * smallest-coefficient: solve equations for ascending Delta, since the
//!   chance of a solution landing in a fixed range scales like
//!   1/sqrt(Delta).
//! * small-primes: among Delta of comparable size, prefer those with more
//!   (hence smaller) prime factors; each prime p | Delta pins x = +-1 mod p,
//!   so more factors mean more residue sequences hitting the range.
//!
//! Every fundamental hit is also walked to higher indices with the v_n
//! smoothness test, and any twin-pair seed set can be expanded by the
//! pairwise combination mu = m(M+1)/(M-m).

use crate::arith::{is_b_smooth, is_probable_prime, pair_smoothness, sieve_twin_smooth, Factorization, SmoothnessBound};
use crate::arith::{factor_with_bound, ArithError};
use crate::lehmer::{triple_from_pair, LehmerError};
use crate::pell::{fundamental_solution, PellError, Solve};
use crate::poly::{m_n_from_m1, max_m1_bits, p_coeffs, v_coeffs, PolyError};
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("seed {0} is not a twin smooth pair for the configured bound")]
    InvalidSeed(BigUint),
    #[error("lifting starts from a fundamental record (index 1), got index {0}")]
    NotFundamental(u64),
    #[error(transparent)]
    Pell(#[from] PellError),
    #[error(transparent)]
    Lehmer(#[from] LehmerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Which strategy produced a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "high-order")]
    HighOrder,
    #[serde(rename = "small-coefficient")]
    SmallCoefficient,
    #[serde(rename = "small-primes")]
    SmallPrimes,
    #[serde(rename = "lift")]
    Lift,
    #[serde(rename = "chm")]
    Chm,
    #[serde(rename = "enumeration")]
    Enumeration,
}

impl Strategy {
    pub fn tag(&self) -> &'static str {
        match self {
            Strategy::HighOrder => "high-order",
            Strategy::SmallCoefficient => "small-coefficient",
            Strategy::SmallPrimes => "small-primes",
            Strategy::Lift => "lift",
            Strategy::Chm => "chm",
            Strategy::Enumeration => "enumeration",
        }
    }
}

/// A discovered pair (m, m+1) with provenance: the Lehmer triple that
/// reproduces it, the true solution index n on x^2 - 2 Delta y^2 = 1, and
/// the factorizations backing the smoothness claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinRecord {
    pub m: BigUint,
    pub bits: u64,
    pub smoothness: u64,
    pub delta: BigUint,
    pub x: BigUint,
    pub y: BigUint,
    pub n: u64,
    pub m_factors: Factorization,
    pub m1_factors: Factorization,
    pub strategy: Strategy,
    pub sum_prime: bool,
    pub under_range: bool,
}

/// Search parameters shared by the strategies. `x_cap` defaults to
/// 2^(b_max+1) + 1, the x value of an m with exactly b_max bits plus one.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub bound: SmoothnessBound,
    pub b_min: u64,
    pub b_max: u64,
    pub s: u64,
    pub x_cap: BigUint,
    pub delta_max: Option<BigUint>,
    pub k: usize,
    pub delta_lo: BigUint,
    pub delta_hi: BigUint,
    pub n_lift_max: u64,
    pub powers_of_two_only: bool,
}

impl SearchConfig {
    pub fn new(bound: SmoothnessBound, b_min: u64, b_max: u64) -> Self {
        let x_cap = (BigUint::one() << (b_max + 1)) + 1u32;
        SearchConfig {
            bound,
            b_min,
            b_max,
            s: 2,
            x_cap,
            delta_max: None,
            k: 1,
            delta_lo: BigUint::one(),
            delta_hi: BigUint::one() << 44,
            n_lift_max: 12,
            powers_of_two_only: false,
        }
    }
}

/// Tallies of what a search run did besides emitting records.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct SearchStats {
    pub items: u64,
    pub exceeded_cap: u64,
    pub discarded: u64,
    pub duplicates: u64,
}

#[derive(Debug, Default)]
pub struct SearchOutcome {
    pub records: Vec<TwinRecord>,
    pub stats: SearchStats,
}

/// Builds a full record for m given its triple. `n` must be the true
/// solution index; `b_min` drives the under-range flag.
#[allow(clippy::too_many_arguments)]
pub fn make_record(
    m: BigUint,
    delta: BigUint,
    x: BigUint,
    y: BigUint,
    n: u64,
    strategy: Strategy,
    bound: &SmoothnessBound,
    b_min: u64,
) -> TwinRecord {
    let m_factors = factor_with_bound(&m, bound);
    let m1_factors = factor_with_bound(&(&m + 1u32), bound);
    debug_assert!(m_factors.is_complete() && m1_factors.is_complete());
    let smoothness = m_factors
        .largest_prime()
        .into_iter()
        .chain(m1_factors.largest_prime())
        .max()
        .unwrap_or(2);
    let bits = m.bits();
    let sum_prime = is_probable_prime(&(&m * 2u32 + 1u32));
    TwinRecord {
        under_range: bits < b_min,
        m,
        bits,
        smoothness,
        delta,
        x,
        y,
        n,
        m_factors,
        m1_factors,
        strategy,
        sum_prime,
    }
}

/// One block of the high-order scan: twin smooth w in [w_lo, w_hi] lifted
/// through index n when v_n(w) is smooth. Emitted m_n stay within b_max
/// bits; the record index is the true index on the equation (w itself may
/// sit above the fundamental).
pub fn high_order_scan_block(
    cfg: &SearchConfig,
    n: u64,
    w_lo: u64,
    w_hi: u64,
) -> Result<Vec<TwinRecord>, SearchError> {
    let vn = v_coeffs(n)?;
    let pn = p_coeffs(n)?;
    let mut out = Vec::new();
    for w in sieve_twin_smooth(w_lo, w_hi, &cfg.bound)? {
        let wb = BigUint::from(w);
        let v = vn.eval_unsigned(&wb);
        if !is_b_smooth(&v, &cfg.bound) {
            continue;
        }
        let m_n = m_n_from_m1(&wb, n)?;
        if m_n.bits() > cfg.b_max {
            continue;
        }
        // w's own triple gives Delta and the index w occupies; the lifted
        // solution sits n times higher
        let wt = triple_from_pair(&wb, &cfg.bound)?;
        let x_n = pn.eval_unsigned(&wt.x);
        let y_n = &wt.y * &v;
        out.push(make_record(
            m_n,
            wt.delta,
            x_n,
            y_n,
            wt.n * n,
            Strategy::HighOrder,
            &cfg.bound,
            cfg.b_min,
        ));
    }
    Ok(out)
}

/// Index range of the high-order search: n from s to (B+1)/2.
pub fn high_order_index_range(cfg: &SearchConfig) -> std::ops::RangeInclusive<u64> {
    cfg.s..=cfg.bound.b().div_ceil(2)
}

/// Algorithm: for each index n from s to (B+1)/2, sieve all twin smooth
/// w below the bitsize bound ceil((b_max+2)/n) - 2 and lift the ones whose
/// v_n(w) is smooth. Duplicate m (reachable through several (w, n) routes)
/// keep their first record.
pub fn high_order_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let mut out = SearchOutcome::default();
    let mut seen = BTreeSet::new();
    for n in high_order_index_range(cfg) {
        let Some(t_bits) = max_m1_bits(cfg.b_max, n) else {
            continue; // no w can stay within the size budget at this index
        };
        let w_hi = 1u64
            .checked_shl(t_bits as u32)
            .map(|v| v - 1)
            .unwrap_or(u64::MAX);
        out.stats.items += 1;
        for rec in high_order_scan_block(cfg, n, 1, w_hi)? {
            if seen.insert(rec.m.clone()) {
                out.records.push(rec);
            } else {
                out.stats.duplicates += 1;
            }
        }
    }
    Ok(out)
}

/// What solving one coefficient produced.
#[derive(Debug)]
pub enum DeltaOutcome {
    /// Fundamental x exceeds the cap; nothing below the cap exists here.
    ExceedsCap,
    /// Fundamental y is not smooth, so no solution of this equation is.
    NotSmooth,
    /// Fundamental record followed by its smooth lifts.
    Found(Vec<TwinRecord>),
}

/// Solve x^2 - 2 Delta y^2 = 1 under the configured cap and return the
/// fundamental record plus lifted records when the fundamental is a twin
/// pair.
pub fn process_delta(
    cfg: &SearchConfig,
    delta: &BigUint,
    strategy: Strategy,
) -> Result<DeltaOutcome, SearchError> {
    let d = delta * 2u32;
    let fund = match fundamental_solution(&d, Some(&cfg.x_cap))? {
        Solve::Found(f) => f,
        Solve::ExceedsCap => return Ok(DeltaOutcome::ExceedsCap),
    };
    if !is_b_smooth(&fund.y, &cfg.bound) {
        return Ok(DeltaOutcome::NotSmooth);
    }
    let m1 = (&fund.x - 1u32) / 2u32;
    let rec = make_record(
        m1,
        delta.clone(),
        fund.x,
        fund.y,
        1,
        strategy,
        &cfg.bound,
        cfg.b_min,
    );
    let mut recs = lift_solutions(&rec, cfg)?;
    recs.insert(0, rec);
    Ok(DeltaOutcome::Found(recs))
}

/// Walk indices n = 2 .. n_lift_max above a fundamental record, emitting
/// those with smooth v_n(m_1). Stops as soon as the lower bound
/// 4^(n-1) m_1^n passes 2^b_max; optionally restricted to n a power of two
/// (the only indices whose pair can sum to a prime).
pub fn lift_solutions(
    rec: &TwinRecord,
    cfg: &SearchConfig,
) -> Result<Vec<TwinRecord>, SearchError> {
    if rec.n != 1 {
        return Err(SearchError::NotFundamental(rec.n));
    }
    let mut out = Vec::new();
    let size_cap = BigUint::one() << cfg.b_max;
    let x1 = BigInt::from(rec.x.clone());
    for n in 2..=cfg.n_lift_max {
        let lower = BigUint::from(4u32).pow(n as u32 - 1) * rec.m.pow(n as u32);
        if lower > size_cap {
            break;
        }
        if cfg.powers_of_two_only && !n.is_power_of_two() {
            continue;
        }
        let v = v_coeffs(n)?.eval_unsigned(&rec.m);
        if !is_b_smooth(&v, &cfg.bound) {
            continue;
        }
        let m_n = m_n_from_m1(&rec.m, n)?;
        let x_n = p_coeffs(n)?
            .eval(&x1)
            .to_biguint()
            .expect("x_n positive for x_1 >= 1");
        let y_n = &rec.y * &v;
        out.push(make_record(
            m_n,
            rec.delta.clone(),
            x_n,
            y_n,
            n,
            Strategy::Lift,
            &cfg.bound,
            cfg.b_min,
        ));
    }
    Ok(out)
}

/// Ascending-coefficient search: every Delta in Q' up to delta_max, solved
/// under the cap; fundamentals with smooth y become records and are lifted.
pub fn smallest_coefficient_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let mut out = SearchOutcome::default();
    let deltas: Vec<BigUint> =
        crate::lehmer::enumerate_q_prime(&cfg.bound, cfg.delta_max.clone()).collect();
    for delta in deltas {
        collect_delta(cfg, &delta, Strategy::SmallCoefficient, &mut out)?;
    }
    Ok(out)
}

/// Products of exactly k distinct primes <= B inside [delta_lo, delta_hi],
/// in lexicographic order of the prime-index combinations, pruned on the
/// partial product.
pub fn small_primes_deltas(cfg: &SearchConfig) -> Vec<BigUint> {
    let primes = cfg.bound.primes();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(cfg.k);
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        primes: &[u64],
        k: usize,
        lo: &BigUint,
        hi: &BigUint,
        start: usize,
        product: BigUint,
        stack: &mut Vec<usize>,
        out: &mut Vec<BigUint>,
    ) {
        if stack.len() == k {
            if &product >= lo {
                out.push(product);
            }
            return;
        }
        let remaining = k - stack.len();
        for i in start..primes.len() {
            // smallest possible completion from here
            let mut min_completion = &product * primes[i];
            for j in 1..remaining {
                if i + j >= primes.len() {
                    return;
                }
                min_completion *= primes[i + j];
            }
            if &min_completion > hi {
                return; // primes ascend, no later branch can fit
            }
            let next = &product * primes[i];
            stack.push(i);
            dfs(primes, k, lo, hi, i + 1, next, stack, out);
            stack.pop();
        }
    }
    dfs(
        primes,
        cfg.k,
        &cfg.delta_lo,
        &cfg.delta_hi,
        0,
        BigUint::one(),
        &mut stack,
        &mut out,
    );
    out
}

/// Search over coefficients that are products of exactly k distinct primes
/// within the configured window.
pub fn small_primes_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let mut out = SearchOutcome::default();
    for delta in small_primes_deltas(cfg) {
        // the lone prime 2 is outside Q'
        if delta == BigUint::from(2u32) {
            continue;
        }
        collect_delta(cfg, &delta, Strategy::SmallPrimes, &mut out)?;
    }
    Ok(out)
}

fn collect_delta(
    cfg: &SearchConfig,
    delta: &BigUint,
    strategy: Strategy,
    out: &mut SearchOutcome,
) -> Result<(), SearchError> {
    out.stats.items += 1;
    match process_delta(cfg, delta, strategy)? {
        DeltaOutcome::ExceedsCap => out.stats.exceeded_cap += 1,
        DeltaOutcome::NotSmooth => out.stats.discarded += 1,
        DeltaOutcome::Found(recs) => out.records.extend(recs),
    }
    Ok(())
}

/// Closure of a twin-smooth seed set under the combination rule: two pairs
/// with witnesses m < M yield mu = m(M+1)/(M-m) whenever the division is
/// exact, and (mu, mu+1) is then twin smooth as well. Rounds repeat until
/// no new witness appears or max_rounds is hit.
pub fn chm_expand(
    seeds: &BTreeSet<BigUint>,
    bound: &SmoothnessBound,
    max_rounds: u64,
) -> Result<BTreeSet<BigUint>, SearchError> {
    for m in seeds {
        if pair_smoothness(m, bound).is_none() {
            return Err(SearchError::InvalidSeed(m.clone()));
        }
    }
    let mut set: BTreeSet<BigUint> = seeds.clone();
    for _ in 0..max_rounds {
        let members: Vec<BigUint> = set.iter().cloned().collect();
        let mut fresh: BTreeSet<BigUint> = BTreeSet::new();
        for (i, m) in members.iter().enumerate() {
            for big in &members[i + 1..] {
                let gap = big - m;
                let num = m * (big + 1u32);
                let (mu, rem) = num_integer::Integer::div_rem(&num, &gap);
                if !num_traits::Zero::is_zero(&rem) {
                    continue;
                }
                if !set.contains(&mu) {
                    debug_assert!(
                        pair_smoothness(&mu, bound).is_some(),
                        "combination of twin pairs stays twin smooth"
                    );
                    fresh.insert(mu);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        set.extend(fresh);
    }
    Ok(set)
}
