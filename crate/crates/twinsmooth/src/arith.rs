//! Smoothness arithmetic: prime lists, trial-division factorization,
//! a segmented sieve for consecutive smooth integers, and Miller-Rabin
//! primality.
//!
//! Everything here is exact integer arithmetic. An integer is B-smooth
//! when none of its prime factors exceeds B; a pair (m, m+1) is twin
//! B-smooth when m(m+1) is B-smooth. 1 is smooth for every bound (empty
//! factorization), so (1, 2) is a valid twin pair.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Integers the sieve processes per segment. Power of two, sized so the
/// residual array (8 bytes per integer) stays cache-friendly.
pub const SIEVE_SEGMENT: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("smoothness bound must be at least 2, got {0}")]
    InvalidBound(u64),
    #[error("empty range: lo {lo} exceeds hi {hi}")]
    EmptyRange { lo: u64, hi: u64 },
}

/// A smoothness bound B together with the ascending list of all primes <= B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessBound {
    b: u64,
    primes: Vec<u64>,
}

impl SmoothnessBound {
    /// Sieve of Eratosthenes up to B. Errors when B < 2.
    pub fn new(b: u64) -> Result<Self, ArithError> {
        if b < 2 {
            return Err(ArithError::InvalidBound(b));
        }
        let n = b as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for p in 2..=n {
            if !composite[p] {
                primes.push(p as u64);
                let mut q = p * p;
                while q <= n {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        Ok(SmoothnessBound { b, primes })
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// All primes <= B, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// t, the number of primes not exceeding B.
    pub fn count(&self) -> usize {
        self.primes.len()
    }

    /// q_t, the largest prime not exceeding B.
    pub fn largest_prime(&self) -> u64 {
        *self.primes.last().expect("bound >= 2 always holds prime 2")
    }
}

/// All primes <= B, ascending.
pub fn primes_up_to(b: u64) -> Result<SmoothnessBound, ArithError> {
    SmoothnessBound::new(b)
}

/// Trial-division factorization relative to a bound: every prime-power
/// divisor with prime <= B lands in `factors`; whatever remains is the
/// `cofactor`. The input is B-smooth exactly when the cofactor is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
    pub cofactor: BigUint,
}

impl Factorization {
    /// Recomposes cofactor * prod p^e.
    pub fn value(&self) -> BigUint {
        let mut v = self.cofactor.clone();
        for &(p, e) in &self.factors {
            v *= BigUint::from(p).pow(e);
        }
        v
    }

    /// True when no unfactored part remains.
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Largest prime appearing in `factors`, if any.
    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }
}

/// u64 fast path: factors out all primes <= B, returns (factors, cofactor).
pub fn factor_u64(n: u64, bound: &SmoothnessBound) -> (Vec<(u64, u32)>, u64) {
    let mut factors = Vec::new();
    let mut rem = n;
    if rem == 0 {
        return (factors, 0);
    }
    for &p in bound.primes() {
        if rem == 1 {
            break;
        }
        if p.saturating_mul(p) > rem {
            // remaining part is 1 or prime; it belongs in factors iff <= B
            break;
        }
        if rem.is_multiple_of(p) {
            let mut e = 0u32;
            while rem.is_multiple_of(p) {
                rem /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rem > 1 && rem <= bound.b() {
        // rem is prime here: it survived division by all primes <= sqrt(rem)
        factors.push((rem, 1));
        rem = 1;
    }
    (factors, rem)
}

/// Factorization of n by trial division over the primes <= B, ascending,
/// with early exit once the running cofactor reaches 1.
pub fn factor_with_bound(n: &BigUint, bound: &SmoothnessBound) -> Factorization {
    if let Some(small) = n.to_u64() {
        let (factors, cofactor) = factor_u64(small, bound);
        return Factorization {
            factors,
            cofactor: BigUint::from(cofactor),
        };
    }
    let mut factors = Vec::new();
    let mut rem = n.clone();
    for &p in bound.primes() {
        if rem.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        let (q, r) = num_integer::Integer::div_rem(&rem, &pb);
        if r.is_zero() {
            let mut e = 1u32;
            rem = q;
            loop {
                let (q, r) = num_integer::Integer::div_rem(&rem, &pb);
                if r.is_zero() {
                    rem = q;
                    e += 1;
                } else {
                    break;
                }
            }
            factors.push((p, e));
        }
        // once rem fits u64 the fast path finishes the job
        if let Some(small) = rem.to_u64() {
            let (mut tail, cof) = factor_u64(small, bound);
            // tail primes are all >= p, so order is preserved
            factors.append(&mut tail);
            return Factorization {
                factors,
                cofactor: BigUint::from(cof),
            };
        }
    }
    Factorization {
        factors,
        cofactor: rem,
    }
}

/// True iff no prime factor of n exceeds B. 1 is smooth vacuously.
pub fn is_b_smooth(n: &BigUint, bound: &SmoothnessBound) -> bool {
    factor_with_bound(n, bound).is_complete()
}

/// u64 fast path of [`is_b_smooth`].
pub fn is_b_smooth_u64(n: u64, bound: &SmoothnessBound) -> bool {
    n >= 1 && factor_u64(n, bound).1 == 1
}

/// Largest prime factor of m(m+1), i.e. the exact smoothness of the pair.
/// Only meaningful when the pair is B-smooth for the given bound.
pub fn pair_smoothness(m: &BigUint, bound: &SmoothnessBound) -> Option<u64> {
    let f0 = factor_with_bound(m, bound);
    let f1 = factor_with_bound(&(m + 1u32), bound);
    if !f0.is_complete() || !f1.is_complete() {
        return None;
    }
    Some(
        f0.largest_prime()
            .into_iter()
            .chain(f1.largest_prime())
            .max()
            .unwrap_or(2),
    )
}

/// Per-segment smooth flags for [lo, hi]: flags[i] is true iff lo+i is
/// B-smooth. Divides every prime power out of a residual array; a slot
/// is smooth when its residual collapses to 1.
fn smooth_flags_segment(lo: u64, hi: u64, bound: &SmoothnessBound) -> Vec<bool> {
    debug_assert!(lo >= 1 && lo <= hi);
    let mut residual: Vec<u64> = (lo..=hi).collect();
    for &p in bound.primes() {
        // first multiple of p in [lo, hi]
        let mut q = lo.next_multiple_of(p);
        while q <= hi {
            let v = &mut residual[(q - lo) as usize];
            while (*v).is_multiple_of(p) {
                *v /= p;
            }
            q += p;
        }
    }
    residual.into_iter().map(|v| v == 1).collect()
}

/// Every m in [lo, hi] with m and m+1 both B-smooth, ascending. Sieves
/// [lo, hi+1] in fixed segments so the range and the smoothness bound can
/// both be large.
pub fn sieve_twin_smooth(
    lo: u64,
    hi: u64,
    bound: &SmoothnessBound,
) -> Result<Vec<u64>, ArithError> {
    if lo > hi {
        return Err(ArithError::EmptyRange { lo, hi });
    }
    let lo = lo.max(1);
    // m + 1 must fit u64 as well
    let hi = hi.min(u64::MAX - 1);
    if lo > hi {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    // carry the last flag across the seam so (m, m+1) straddling segments works
    let mut seg_lo = lo;
    let mut prev_flag: Option<bool> = None; // smoothness of seg_lo - 1
    while seg_lo <= hi {
        let seg_hi = seg_lo.saturating_add(SIEVE_SEGMENT - 1).min(hi + 1);
        let flags = smooth_flags_segment(seg_lo, seg_hi, bound);
        if let Some(true) = prev_flag {
            if flags[0] && seg_lo > lo && seg_lo - 1 <= hi {
                out.push(seg_lo - 1);
            }
        }
        for i in 0..flags.len().saturating_sub(1) {
            let m = seg_lo + i as u64;
            if m > hi {
                break;
            }
            if flags[i] && flags[i + 1] {
                out.push(m);
            }
        }
        prev_flag = flags.last().copied();
        seg_lo = seg_hi + 1;
    }
    Ok(out)
}

// deterministic Miller-Rabin witnesses for n < 2^64
const MR_WITNESSES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Rounds of random-base Miller-Rabin above 2^64; error < 4^-64.
const MR_ROUNDS_LARGE: usize = 64;

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all n < 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES_64 {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Probabilistic primality: deterministic (12-witness Miller-Rabin) below
/// 2^64, otherwise 64 random-base rounds.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    // n > 2^64 here, so it is odd or divisible by 2
    if !num_integer::Integer::is_odd(n) {
        return false;
    }
    use num_bigint::RandBigInt;
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n odd, n-1 even");
    let d = &n_minus_1 >> s;
    let mut rng = rand::thread_rng();
    'round: for _ in 0..MR_ROUNDS_LARGE {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}
