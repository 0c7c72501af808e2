//! Solution polynomials of the Pell equation.
//!
//! With (x_1, y_1) the fundamental solution of x^2 - D y^2 = 1, the n-th
//! solution is (p_n(x_1), y_1 u_n(x_1)). Writing m = (x-1)/2 turns the
//! Lucas quotient U_n = y_n/y_1 into v_n(m) = u_n(2m+1), a polynomial with
//! non-negative coefficients. The coefficient formulas come from expanding
//! (x^2-1)^i in the binomial sums for x_n and U_n:
//!
//!   p_n: coefficient of x^(n-2j)   is (-1)^j sum_{i=j}^{floor(n/2)}  C(n,2i)   C(i,j)
//!   u_n: coefficient of x^(n-1-2j) is (-1)^j sum_{i=j}^{ceil(n/2)-1} C(n,2i+1) C(i,j)
//!
//! These polynomials drive both the lifting of fundamental pairs to higher
//! solution indices and the size bounds that make high-index searching
//! cheap: m_n > 4^(n-1) m_1^n, so an upper bound of b bits on m_n caps
//! m_1 at ceil((b+2)/n) - 2 bits.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("solution polynomials are indexed from 1")]
    ZeroIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolyKind {
    /// x_n = p_n(x_1), degree n
    P,
    /// U_n = u_n(x_1), degree n-1
    U,
    /// U_n = v_n(m_1) with v_n(x) = u_n(2x+1), degree n-1
    V,
}

/// Integer coefficient vector, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionPolynomial {
    pub kind: PolyKind,
    pub n: u64,
    pub coeffs: Vec<BigInt>,
}

impl SolutionPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluation at a non-negative point for kinds whose value is known
    /// non-negative there (v_n everywhere on x >= 0; p_n, u_n for x >= 1).
    pub fn eval_unsigned(&self, x: &BigUint) -> BigUint {
        let v = self.eval(&BigInt::from(x.clone()));
        debug_assert!(!v.is_negative());
        v.to_biguint().expect("non-negative by construction")
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn p_coeffs_uncached(n: u64) -> SolutionPolynomial {
    let deg = n as usize;
    let half = n / 2;
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for j in 0..=half {
        let mut sum = BigInt::zero();
        for i in j..=half {
            sum += binomial(n, 2 * i) * binomial(i, j);
        }
        if j % 2 == 1 {
            sum = -sum;
        }
        coeffs[(n - 2 * j) as usize] = sum;
    }
    SolutionPolynomial {
        kind: PolyKind::P,
        n,
        coeffs,
    }
}

fn u_coeffs_uncached(n: u64) -> SolutionPolynomial {
    let deg = (n - 1) as usize;
    let top = n.div_ceil(2) - 1;
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for j in 0..=top {
        let mut sum = BigInt::zero();
        for i in j..=top {
            sum += binomial(n, 2 * i + 1) * binomial(i, j);
        }
        if j % 2 == 1 {
            sum = -sum;
        }
        coeffs[(n - 1 - 2 * j) as usize] = sum;
    }
    SolutionPolynomial {
        kind: PolyKind::U,
        n,
        coeffs,
    }
}

/// u_n composed with 2x+1, expanded by Horner over polynomials.
fn v_coeffs_uncached(n: u64) -> SolutionPolynomial {
    let u = u_coeffs_uncached(n);
    let mut acc: Vec<BigInt> = vec![u.coeffs.last().expect("degree >= 0").clone()];
    for c in u.coeffs.iter().rev().skip(1) {
        // acc = acc * (2x + 1) + c
        let mut next = vec![BigInt::zero(); acc.len() + 1];
        for (k, a) in acc.iter().enumerate() {
            next[k] += a;
            next[k + 1] += a * 2;
        }
        next[0] += c;
        acc = next;
    }
    debug_assert!(acc.iter().all(|c| !c.is_negative()));
    SolutionPolynomial {
        kind: PolyKind::V,
        n,
        coeffs: acc,
    }
}

type Cache = RwLock<HashMap<(PolyKind, u64), Arc<SolutionPolynomial>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(kind: PolyKind, n: u64, build: fn(u64) -> SolutionPolynomial) -> Arc<SolutionPolynomial> {
    if let Some(p) = cache().read().expect("poly cache poisoned").get(&(kind, n)) {
        return Arc::clone(p);
    }
    let built = Arc::new(build(n));
    cache()
        .write()
        .expect("poly cache poisoned")
        .entry((kind, n))
        .or_insert(built)
        .clone()
}

/// p_n with x_n = p_n(x_1); cached per n.
pub fn p_coeffs(n: u64) -> Result<Arc<SolutionPolynomial>, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroIndex);
    }
    Ok(cached(PolyKind::P, n, p_coeffs_uncached))
}

/// u_n with U_n = u_n(x_1); cached per n.
pub fn u_coeffs(n: u64) -> Result<Arc<SolutionPolynomial>, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroIndex);
    }
    Ok(cached(PolyKind::U, n, u_coeffs_uncached))
}

/// v_n(x) = u_n(2x+1) with U_n = v_n(m_1); cached per n.
pub fn v_coeffs(n: u64) -> Result<Arc<SolutionPolynomial>, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroIndex);
    }
    Ok(cached(PolyKind::V, n, v_coeffs_uncached))
}

/// m_n = (p_n(2 m_1 + 1) - 1) / 2; the division is always exact because
/// p_n of an odd argument is odd.
pub fn m_n_from_m1(m1: &BigUint, n: u64) -> Result<BigUint, PolyError> {
    let p = p_coeffs(n)?;
    let x1 = BigInt::from(m1 * 2u32 + 1u32);
    let xn = p.eval(&x1);
    debug_assert!(num_integer::Integer::is_odd(&xn));
    let m: BigInt = (xn - 1) / 2;
    Ok(m.to_biguint().expect("m_n >= 0 for m_1 >= 0"))
}

/// Largest bitsize of m_1 such that the lifted m_n can stay within b bits:
/// ceil((b+2)/n) - 2. None when no m_1 >= 1 qualifies (n too large for b).
pub fn max_m1_bits(b: u64, n: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    let t = (b + 2).div_ceil(n);
    if t < 3 {
        return None; // would give a bitsize below 1
    }
    Some(t - 2)
}
