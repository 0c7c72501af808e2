//! The bijection between coefficient-solution triples of x^2 - 2 Delta y^2 = 1
//! and twin smooth pairs, plus complete enumeration for small bounds.
//!
//! For a bound B with primes q_1 = 2, ..., q_t, the coefficient space Q' is
//! the set of squarefree products of those primes (including the empty
//! product 1) with the single value 2 removed. A triple (Delta, x, y) with
//! Delta in Q', y B-smooth and x^2 - 2 Delta y^2 = 1 corresponds to the twin
//! pair m = (x-1)/2, and conversely Delta and y are read off the squarefree
//! and square parts of m(m+1)/2. Solving all 2^t - 1 Pell equations and
//! walking solution indices up to max{3, (q_t+1)/2} enumerates every twin
//! B-smooth pair; an equation whose fundamental y is not smooth can be
//! discarded outright, since smoothness of any y_n forces smoothness of y_1.

use crate::arith::{factor_with_bound, is_b_smooth, Factorization, SmoothnessBound};
use crate::pell::{fundamental_solution, next_solution, PellError, PellSolution, Solve};
use crate::poly::v_coeffs;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LehmerError {
    #[error("triple violates the Pell identity x^2 - 2 Delta y^2 = 1")]
    PellIdentity,
    #[error("triple has even x or odd y")]
    Parity,
    #[error("Delta must be squarefree, B-smooth and different from 2")]
    InvalidDelta,
    #[error("y must be B-smooth")]
    YNotSmooth,
    #[error("m(m+1) is not B-smooth, so m is outside the twin set")]
    NotInTwinSet,
    #[error(transparent)]
    Pell(#[from] PellError),
}

/// A Lehmer triple (Delta, x, y) solving x^2 - 2 Delta y^2 = 1, with the
/// solution index n of (x, y) on that equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTriple {
    pub delta: BigUint,
    pub x: BigUint,
    pub y: BigUint,
    pub n: u64,
}

/// A twin pair witness m with the factorizations of m and m+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinPair {
    pub m: BigUint,
    pub b: u64,
    pub m_factors: Factorization,
    pub m1_factors: Factorization,
}

impl TwinPair {
    /// Largest prime factor of m(m+1); 2 for the pair (1, 2).
    pub fn smoothness(&self) -> u64 {
        self.m_factors
            .largest_prime()
            .into_iter()
            .chain(self.m1_factors.largest_prime())
            .max()
            .unwrap_or(2)
    }
}

/// m = (x-1)/2 for a valid triple. All triple invariants are checked:
/// the Pell identity, x odd / y even, Delta squarefree smooth and != 2,
/// y smooth.
pub fn pair_from_triple(
    t: &CoefficientTriple,
    bound: &SmoothnessBound,
) -> Result<TwinPair, LehmerError> {
    if &t.x * &t.x != &t.delta * 2u32 * &t.y * &t.y + 1u32 {
        return Err(LehmerError::PellIdentity);
    }
    if t.x.is_even() || t.y.is_odd() {
        return Err(LehmerError::Parity);
    }
    if t.delta == BigUint::from(2u32) {
        return Err(LehmerError::InvalidDelta);
    }
    let df = factor_with_bound(&t.delta, bound);
    if !df.is_complete() || df.factors.iter().any(|&(_, e)| e > 1) {
        return Err(LehmerError::InvalidDelta);
    }
    if !is_b_smooth(&t.y, bound) {
        return Err(LehmerError::YNotSmooth);
    }
    let m = (&t.x - 1u32) / 2u32;
    let m_factors = factor_with_bound(&m, bound);
    let m1_factors = factor_with_bound(&(&m + 1u32), bound);
    debug_assert!(
        m_factors.is_complete() && m1_factors.is_complete(),
        "m(m+1) = 2 Delta (y/2)^2 is smooth by construction"
    );
    Ok(TwinPair {
        m,
        b: bound.b(),
        m_factors,
        m1_factors,
    })
}

/// The unique triple for a twin pair: x = 2m+1, Delta the product of primes
/// with odd exponent in m(m+1)/2, y twice the square part. The solution
/// index is recovered by solving the equation (capped at x) and stepping.
pub fn triple_from_pair(
    m: &BigUint,
    bound: &SmoothnessBound,
) -> Result<CoefficientTriple, LehmerError> {
    let n_half = m * (m + 1u32) / 2u32;
    let f = factor_with_bound(&n_half, bound);
    if !f.is_complete() {
        return Err(LehmerError::NotInTwinSet);
    }
    let mut delta = BigUint::one();
    let mut y = BigUint::from(2u32);
    for &(p, e) in &f.factors {
        if e % 2 == 1 {
            delta *= p;
        }
        y *= BigUint::from(p).pow(e / 2);
    }
    let x = m * 2u32 + 1u32;
    let index = solution_index(&delta, &x)?;
    Ok(CoefficientTriple { delta, x, y, n: index })
}

/// Index of the solution with the given x on x^2 - 2 Delta y^2 = 1.
fn solution_index(delta: &BigUint, x: &BigUint) -> Result<u64, PellError> {
    let d = delta * 2u32;
    let fund = match fundamental_solution(&d, Some(x))? {
        Solve::Found(f) => f,
        Solve::ExceedsCap => return Err(PellError::NotApplicable(d)),
    };
    let mut cur = fund.clone();
    while &cur.x < x {
        cur = next_solution(&fund, &cur)?;
    }
    debug_assert_eq!(&cur.x, x, "x is a solution value, so stepping must hit it");
    Ok(cur.n)
}

/// Ascending stream of Q': squarefree products of the primes <= B
/// (including 1), excluding the value 2, up to `delta_max`.
///
/// A min-heap of (product, highest-prime-index) lets the stream stay
/// ascending without materializing all 2^t subsets.
pub struct QPrimeIter<'a> {
    primes: &'a [u64],
    delta_max: Option<BigUint>,
    heap: BinaryHeap<Reverse<(BigUint, usize)>>,
}

impl<'a> Iterator for QPrimeIter<'a> {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        while let Some(Reverse((v, next_idx))) = self.heap.pop() {
            for (i, &p) in self.primes.iter().enumerate().skip(next_idx) {
                let child = &v * p;
                if let Some(cap) = &self.delta_max {
                    if &child > cap {
                        break;
                    }
                }
                self.heap.push(Reverse((child, i + 1)));
            }
            if v == BigUint::from(2u32) {
                continue; // Q' excludes the lone 2
            }
            return Some(v);
        }
        None
    }
}

pub fn enumerate_q_prime<'a>(
    bound: &'a SmoothnessBound,
    delta_max: Option<BigUint>,
) -> QPrimeIter<'a> {
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((BigUint::one(), 0usize)));
    QPrimeIter {
        primes: bound.primes(),
        delta_max,
        heap,
    }
}

/// One enumerated twin pair with its provenance triple.
#[derive(Debug, Clone)]
pub struct TwinEntry {
    pub pair: TwinPair,
    pub triple: CoefficientTriple,
}

/// Result of a full enumeration: the twin entries sorted by m, plus any
/// coefficients whose fundamental solution exceeded the cap. Pairs with
/// x <= cap are complete even when `unresolved` is non-empty, because every
/// solution of an unresolved equation has x beyond the cap.
#[derive(Debug, Default)]
pub struct Enumeration {
    pub twins: Vec<TwinEntry>,
    pub unresolved: Vec<BigUint>,
}

impl Enumeration {
    pub fn members(&self) -> Vec<BigUint> {
        self.twins.iter().map(|t| t.pair.m.clone()).collect()
    }
}

/// Solve every equation in Q' and collect all twin B-smooth pairs, walking
/// indices n = 1 .. max{3, (q_t+1)/2}. An equation is dropped as soon as its
/// fundamental y is not smooth. With `x_cap` = None the result is the
/// complete finite twin set for the bound.
pub fn enumerate_all_twins(bound: &SmoothnessBound, x_cap: Option<&BigUint>) -> Enumeration {
    let n_max = index_bound(bound);
    let mut out = Enumeration::default();
    let mut seen = std::collections::BTreeSet::new();
    for delta in enumerate_q_prime(bound, None) {
        let d = &delta * 2u32;
        let fund = match fundamental_solution(&d, x_cap) {
            Ok(Solve::Found(f)) => f,
            Ok(Solve::ExceedsCap) => {
                out.unresolved.push(delta);
                continue;
            }
            Err(_) => unreachable!("2*Delta is never a perfect square for Delta in Q'"),
        };
        if !is_b_smooth(&fund.y, bound) {
            continue; // no higher solution can be smooth either
        }
        let m1 = (&fund.x - 1u32) / 2u32;
        emit(&mut out, &mut seen, bound, &delta, &fund, 1, &m1);
        let mut cur = fund.clone();
        for n in 2..=n_max {
            cur = next_solution(&fund, &cur).expect("same equation");
            let v = v_coeffs(n).expect("n >= 2").eval_unsigned(&m1);
            if is_b_smooth(&v, bound) {
                let mn = (&cur.x - 1u32) / 2u32;
                emit(&mut out, &mut seen, bound, &delta, &cur, n, &mn);
            }
        }
    }
    out.twins.sort_by(|a, b| a.pair.m.cmp(&b.pair.m));
    out
}

/// Largest solution index that can still yield a twin pair: max{3, (q_t + 1)/2}.
pub fn index_bound(bound: &SmoothnessBound) -> u64 {
    3.max(bound.largest_prime().div_ceil(2))
}

fn emit(
    out: &mut Enumeration,
    seen: &mut std::collections::BTreeSet<BigUint>,
    bound: &SmoothnessBound,
    delta: &BigUint,
    sol: &PellSolution,
    n: u64,
    m: &BigUint,
) {
    // distinct (Delta, n) can never repeat an m, but stay defensive
    if !seen.insert(m.clone()) {
        return;
    }
    let triple = CoefficientTriple {
        delta: delta.clone(),
        x: sol.x.clone(),
        y: sol.y.clone(),
        n,
    };
    let pair = pair_from_triple(&triple, bound).expect("enumerated triples are valid");
    out.twins.push(TwinEntry { pair, triple });
}
