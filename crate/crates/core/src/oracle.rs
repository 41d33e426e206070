//! Brute-force enumerators used as ground truth for the recursive solver.
//!
//! Neither function shares code with [`crate::solver`]; both only rely on
//! [`Solution`] and plain arithmetic.

use std::collections::BTreeSet;

use crate::error::{EspError, Result};
use crate::solution::Solution;

/// Largest `n` accepted by [`brute_force_solutions`].
pub const ORACLE_MAX_N: u64 = 64;

/// Largest `n` accepted by [`full_tuple_solutions`].
pub const FULL_TUPLE_MAX_N: u64 = 12;

/// Every solution for tuple length `n`, by exhaustive search over
/// non-decreasing tuples of non-unit components in `[2, n]`.
///
/// Branches whose partial product exceeds `2n` are cut; no valid solution
/// has a larger common value.
pub fn brute_force_solutions(n: u64) -> Result<BTreeSet<Solution>> {
    if !(2..=ORACLE_MAX_N).contains(&n) {
        return Err(EspError::Range(format!(
            "oracle supports 2 ≤ n ≤ {ORACLE_MAX_N}, got {n}"
        )));
    }
    let max_r = n.ilog2() as usize + 1;
    let mut out = BTreeSet::new();
    let mut stack = Vec::with_capacity(max_r);
    for r in 2..=max_r {
        descend(n, r, 2, 1, &mut stack, &mut out);
    }
    Ok(out)
}

fn descend(
    n: u64,
    r: usize,
    min: u64,
    product: u64,
    stack: &mut Vec<u64>,
    out: &mut BTreeSet<Solution>,
) {
    if stack.len() == r {
        let units = n - r as u64;
        if product == stack.iter().sum::<u64>() + units {
            out.insert(Solution::new(stack.clone(), units));
        }
        return;
    }
    for x in min..=n {
        let p = product * x;
        if p > 2 * n {
            break;
        }
        stack.push(x);
        descend(n, r, x, p, stack, out);
        stack.pop();
    }
}

/// Every solution for tiny `n`, by checking each multiset of `n` values in
/// `[1, n]` directly. Makes no assumption about how many components may
/// exceed 1.
pub fn full_tuple_solutions(n: u64) -> Result<BTreeSet<Solution>> {
    if !(2..=FULL_TUPLE_MAX_N).contains(&n) {
        return Err(EspError::Range(format!(
            "full-tuple enumeration supports 2 ≤ n ≤ {FULL_TUPLE_MAX_N}, got {n}"
        )));
    }
    let mut out = BTreeSet::new();
    let mut tuple = vec![1u64; n as usize];
    loop {
        let sum: u64 = tuple.iter().sum();
        let product = tuple.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x));
        if product == Some(sum) {
            let nonunit: Vec<u64> = tuple.iter().copied().filter(|&x| x > 1).collect();
            let units = n - nonunit.len() as u64;
            out.insert(Solution::new(nonunit, units));
        }
        // next non-decreasing tuple: bump the last position below n, then
        // reset everything after it to the bumped value
        let Some(i) = tuple.iter().rposition(|&x| x < n) else {
            break;
        };
        let v = tuple[i] + 1;
        tuple[i..].iter_mut().for_each(|x| *x = v);
    }
    Ok(out)
}
