//! Pell equation x^2 - D y^2 = 1: fundamental solution by continued
//! fractions with a size cutoff, and stepping to arbitrary n-th solutions.
//!
//! The continued fraction of sqrt(D) is driven by the integer recurrence
//!
//!   a_k = floor((P_k + sqrt(D)) / Q_k),
//!   P_{k+1} = a_k Q_k - P_k,
//!   Q_{k+1} = (D - P_{k+1}^2) / Q_k,        P_0 = 0, Q_0 = 1,
//!
//! whose convergents A_i/B_i are candidate solutions. Every solution is a
//! convergent, the numerators A_i grow at least as fast as the Fibonacci
//! numbers, and the first convergent satisfying the equation is the
//! fundamental solution; so a cap M on x bounds the loop by O(log M)
//! iterations whether or not a solution exists below the cap.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::num::Wrapping;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PellError {
    #[error("no non-trivial solutions: {0} is a perfect square (or < 2)")]
    NotApplicable(BigUint),
    #[error("coefficient mismatch: solutions belong to different equations")]
    CoefficientMismatch,
    #[error("expected the fundamental solution (index 1), got index {0}")]
    NotFundamental(u64),
    #[error("solution index must be at least 1")]
    ZeroIndex,
}

/// A positive solution (x, y) of x^2 - D y^2 = 1 with its index n in the
/// power sequence generated by the fundamental solution (n = 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub d: BigUint,
    pub x: BigUint,
    pub y: BigUint,
    pub n: u64,
}

impl PellSolution {
    /// Exact check of x^2 - D y^2 = 1.
    pub fn verify(&self) -> bool {
        &self.x * &self.x == &self.d * &self.y * &self.y + 1u32
    }
}

/// Outcome of a capped fundamental-solution search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve {
    Found(PellSolution),
    /// The first convergent numerator beyond the cap was reached without
    /// hitting a solution; the fundamental x exceeds the cap.
    ExceedsCap,
}

impl Solve {
    pub fn found(self) -> Option<PellSolution> {
        match self {
            Solve::Found(s) => Some(s),
            Solve::ExceedsCap => None,
        }
    }
}

/// Continued-fraction state for sqrt(D): the triple (P_k, Q_k, a_k) with
/// Q_k | D - P_k^2 at every step. Stepping it yields the convergents.
#[derive(Debug, Clone)]
pub struct CFState {
    d: BigUint,
    a0: BigUint,
    pub k: u64,
    pub p_k: BigUint,
    pub q_k: BigUint,
    pub a_k: BigUint,
    // convergents A_{i-1}/B_{i-1} and A_i/B_i
    a_prev: BigUint,
    a_cur: BigUint,
    b_prev: BigUint,
    b_cur: BigUint,
}

/// One convergent A_i/B_i of sqrt(D) together with the quotient that
/// produced it. Numerators grow at least as fast as the Fibonacci numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: u64,
    pub quotient: BigUint,
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl CFState {
    /// Starts the expansion of sqrt(D); D must be >= 2 and not a square.
    pub fn new(d: &BigUint) -> Result<CFState, PellError> {
        let sqrt = d.sqrt();
        if d < &BigUint::from(2u32) || &sqrt * &sqrt == *d {
            return Err(PellError::NotApplicable(d.clone()));
        }
        Ok(CFState {
            d: d.clone(),
            a0: sqrt.clone(),
            k: 0,
            p_k: BigUint::zero(),
            q_k: BigUint::one(),
            a_k: sqrt.clone(),
            a_prev: BigUint::one(),
            a_cur: sqrt,
            b_prev: BigUint::zero(),
            b_cur: BigUint::one(),
        })
    }
}

impl Iterator for CFState {
    type Item = Convergent;

    /// The k-th convergent; the first call yields a_0/1.
    fn next(&mut self) -> Option<Convergent> {
        let out = Convergent {
            index: self.k,
            quotient: self.a_k.clone(),
            numerator: self.a_cur.clone(),
            denominator: self.b_cur.clone(),
        };
        // advance P, Q, a, then the convergent recurrence
        self.p_k = &self.a_k * &self.q_k - &self.p_k;
        let num = &self.d - &self.p_k * &self.p_k;
        debug_assert!((&num % &self.q_k).is_zero(), "CF recurrence exactness");
        self.q_k = num / &self.q_k;
        self.a_k = (&self.p_k + &self.a0) / &self.q_k;
        let a_next = &self.a_k * &self.a_cur + &self.a_prev;
        let b_next = &self.a_k * &self.b_cur + &self.b_prev;
        self.a_prev = std::mem::replace(&mut self.a_cur, a_next);
        self.b_prev = std::mem::replace(&mut self.b_cur, b_next);
        self.k += 1;
        Some(out)
    }
}

/// Fundamental solution of x^2 - D y^2 = 1 for non-square D >= 2, cut off
/// once the convergent numerator exceeds `x_cap` (None = unbounded).
///
/// Walks the convergents of sqrt(D); every solution is one of them, they
/// increase monotonically, so the first hit is fundamental and a cap bounds
/// the loop at O(log cap) steps. A mod-2^64 shadow of the Pell form screens
/// convergents so the full big-integer identity is rarely evaluated.
pub fn fundamental_solution(
    d: &BigUint,
    x_cap: Option<&BigUint>,
) -> Result<Solve, PellError> {
    let d_mod = Wrapping(mod_2_64(d));
    for conv in CFState::new(d)? {
        if let Some(cap) = x_cap {
            if &conv.numerator > cap {
                return Ok(Solve::ExceedsCap);
            }
        }
        // screen with the low limbs before paying for big squarings
        let sa = Wrapping(mod_2_64(&conv.numerator));
        let sb = Wrapping(mod_2_64(&conv.denominator));
        if (sa * sa - d_mod * sb * sb).0 == 1
            && &conv.numerator * &conv.numerator == d * &conv.denominator * &conv.denominator + 1u32
        {
            return Ok(Solve::Found(PellSolution {
                d: d.clone(),
                x: conv.numerator,
                y: conv.denominator,
                n: 1,
            }));
        }
    }
    unreachable!("the convergent stream is infinite")
}

fn mod_2_64(v: &BigUint) -> u64 {
    v.iter_u64_digits().next().unwrap_or(0)
}

/// Composition in Z[sqrt(D)]: (ax + ay sqrt(D)) (bx + by sqrt(D)).
fn compose(d: &BigUint, ax: &BigUint, ay: &BigUint, bx: &BigUint, by: &BigUint) -> (BigUint, BigUint) {
    let x = ax * bx + d * ay * by;
    let y = ax * by + ay * bx;
    (x, y)
}

/// The solution with index cur.n + 1, from x_{n+1} = x_n x_1 + D y_n y_1
/// and y_{n+1} = x_n y_1 + y_n x_1.
pub fn next_solution(fund: &PellSolution, cur: &PellSolution) -> Result<PellSolution, PellError> {
    if fund.d != cur.d {
        return Err(PellError::CoefficientMismatch);
    }
    if fund.n != 1 {
        return Err(PellError::NotFundamental(fund.n));
    }
    let (x, y) = compose(&fund.d, &cur.x, &cur.y, &fund.x, &fund.y);
    Ok(PellSolution {
        d: fund.d.clone(),
        x,
        y,
        n: cur.n + 1,
    })
}

/// The n-th solution by left-to-right binary doubling: squaring doubles the
/// index (x_{2k} = 2 x_k^2 - 1, y_{2k} = 2 x_k y_k) and a multiply by the
/// fundamental adds one.
pub fn nth_solution(fund: &PellSolution, n: u64) -> Result<PellSolution, PellError> {
    if n == 0 {
        return Err(PellError::ZeroIndex);
    }
    if fund.n != 1 {
        return Err(PellError::NotFundamental(fund.n));
    }
    let mut x = fund.x.clone();
    let mut y = fund.y.clone();
    let bits = 64 - n.leading_zeros();
    for i in (0..bits - 1).rev() {
        let (sx, sy) = compose(&fund.d, &x, &y, &x, &y);
        x = sx;
        y = sy;
        if (n >> i) & 1 == 1 {
            let (nx, ny) = compose(&fund.d, &x, &y, &fund.x, &fund.y);
            x = nx;
            y = ny;
        }
    }
    Ok(PellSolution {
        d: fund.d.clone(),
        x,
        y,
        n,
    })
}
