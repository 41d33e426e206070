//! Base shells `S_2(n)` and the primality test used by the exceptional-value
//! filter.
//!
//! A pair `(x1, x2; n-2)` solves the problem iff `(x1 - 1)(x2 - 1) = n - 1`,
//! so `S_2(n)` is in bijection with the divisors `d` of `n - 1` with
//! `d * d <= n - 1`.

use crate::error::{EspError, Result};
use crate::solution::{Solution, SolutionKey, SolutionSet};

/// All divisors `d` of `m` with `d * d <= m`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorList {
    m: u64,
    divisors: Vec<u64>,
}

impl DivisorList {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }
}

pub fn divisors_up_to_sqrt(m: u64) -> Result<DivisorList> {
    if m == 0 {
        return Err(EspError::Domain("m must be ≥ 1".into()));
    }
    let mut divisors = Vec::new();
    let mut d = 1u64;
    // d <= m / d  <=>  d * d <= m, without overflow
    while d <= m / d {
        if m.is_multiple_of(d) {
            divisors.push(d);
        }
        d += 1;
    }
    Ok(DivisorList { m, divisors })
}

/// `S_2(n) = { (d + 1, (n-1)/d + 1; n-2) : d | n-1, d <= sqrt(n-1) }`.
pub fn build_s2(n: u64) -> Result<SolutionSet> {
    if n < 2 {
        return Err(EspError::Domain(format!("n must be ≥ 2, got {n}")));
    }
    let key = SolutionKey::new(n, 2)?;
    let mut set = SolutionSet::empty(key);
    for &d in divisors_up_to_sqrt(n - 1)?.divisors() {
        set.insert(Solution::new(vec![d + 1, (n - 1) / d + 1], n - 2))?;
    }
    Ok(set)
}

// Strong-pseudoprime test against the first twelve primes as witnesses;
// no composite below 3.3 * 10^24 passes all of them.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test, exact over all of `u64`.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if m == p {
            return true;
        }
        if m.is_multiple_of(p) {
            return false;
        }
    }
    let s = (m - 1).trailing_zeros();
    let d = (m - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, m);
            if x == m - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
