//! Solutions, shell keys and the checks every other module relies on.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EspError, Result};

/// One equal-sum-product tuple in compressed form.
///
/// `nonunit` holds the components that are at least 2, in non-decreasing
/// order; `units` counts the 1-components. The tuple length is
/// `nonunit.len() + units`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Solution {
    nonunit: Vec<u64>,
    units: u64,
}

impl Solution {
    /// Builds a solution from components in any order. Does not check the
    /// sum/product identity; see [`validate`].
    pub fn new(mut nonunit: Vec<u64>, units: u64) -> Self {
        nonunit.sort_unstable();
        Solution { nonunit, units }
    }

    /// Like [`Solution::new`], but rejects anything [`validate`] rejects.
    pub fn checked(nonunit: Vec<u64>, units: u64) -> Result<Self> {
        let s = Solution::new(nonunit, units);
        if validate(&s) {
            Ok(s)
        } else {
            Err(EspError::InvalidSolution(format!("{s}")))
        }
    }

    /// The basic solution `(2, n; n-2)`, present for every `n >= 2`.
    pub fn basic(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(EspError::Domain("n must be ≥ 2".into()));
        }
        Ok(Solution::new(vec![2, n], n - 2))
    }

    pub fn nonunit(&self) -> &[u64] {
        &self.nonunit
    }

    pub fn units(&self) -> u64 {
        self.units
    }

    /// Number of non-unit components, `r`.
    pub fn r(&self) -> usize {
        self.nonunit.len()
    }

    /// Total tuple length, `n`.
    pub fn n(&self) -> u64 {
        self.nonunit.len() as u64 + self.units
    }

    /// Product of the non-unit components, or `None` on overflow.
    pub fn product(&self) -> Option<u64> {
        self.nonunit
            .iter()
            .try_fold(1u64, |acc, &x| acc.checked_mul(x))
    }

    /// Sum of all `n` components, or `None` on overflow.
    pub fn sum(&self) -> Option<u64> {
        self.nonunit
            .iter()
            .try_fold(self.units, |acc, &x| acc.checked_add(x))
    }

    pub fn key(&self) -> SolutionKey {
        SolutionKey {
            n: self.n(),
            r: self.r() as u64,
        }
    }
}

/// Renders descending, non-units first: `(15,2;13)`.
impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.nonunit.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ";{})", self.units)
    }
}

impl FromStr for Solution {
    type Err = EspError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || EspError::InvalidSolution(format!("cannot parse {s:?}"));
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (comps, units) = inner.split_once(';').ok_or_else(bad)?;
        let nonunit = comps
            .split(',')
            .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let units = units.trim().parse::<u64>().map_err(|_| bad())?;
        Ok(Solution::new(nonunit, units))
    }
}

/// Checks every solution invariant, including `sum == product`.
///
/// Never panics; overflow in the product or sum counts as invalid.
pub fn validate(s: &Solution) -> bool {
    let xs = &s.nonunit;
    if xs.len() < 2 || xs.iter().any(|&x| x < 2) || xs.windows(2).any(|w| w[0] > w[1]) {
        return false;
    }
    let (Some(product), Some(sum)) = (s.product(), s.sum()) else {
        return false;
    };
    let n = s.n();
    product == sum
        && n.checked_mul(2).is_some_and(|bound| product <= bound)
        && xs.last().is_some_and(|&max| max <= n)
}

/// The shared value of the sum and product; at most `2n`.
pub fn common_value(s: &Solution) -> Result<u64> {
    if !validate(s) {
        return Err(EspError::InvalidSolution(s.to_string()));
    }
    // validate guarantees the product exists
    Ok(s.product().unwrap_or_default())
}

pub fn is_basic(s: &Solution) -> Result<bool> {
    if !validate(s) {
        return Err(EspError::InvalidSolution(s.to_string()));
    }
    Ok(s.nonunit == [2, s.n()])
}

/// Identifies `S_r(n)`, the solutions of length `n` with `r` non-unit
/// components.
///
/// Ordered by `n` first, then `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolutionKey {
    pub n: u64,
    pub r: u64,
}

impl SolutionKey {
    pub fn new(n: u64, r: u64) -> Result<Self> {
        if n < 2 {
            return Err(EspError::Domain(format!("n must be ≥ 2, got {n}")));
        }
        if r < 2 {
            return Err(EspError::Domain(format!("r must be ≥ 2, got {r}")));
        }
        if r > n {
            return Err(EspError::Domain(format!("r = {r} exceeds n = {n}")));
        }
        Ok(SolutionKey { n, r })
    }
}

/// `a < b` iff `[a.n = b.n][a.r < b.r] + [a.n < b.n]` is 1.
pub fn compare_keys(a: SolutionKey, b: SolutionKey) -> Ordering {
    let less = (a.n == b.n && a.r < b.r) || a.n < b.n;
    if less {
        Ordering::Less
    } else if a.n == b.n && a.r == b.r {
        Ordering::Equal
    } else {
        Ordering::Greater
    }
}

impl Ord for SolutionKey {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_keys(*self, *other)
    }
}

impl PartialOrd for SolutionKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SolutionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}({})", self.r, self.n)
    }
}

/// The set `S_r(n)` for one key. May be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    key: SolutionKey,
    solutions: BTreeSet<Solution>,
}

impl SolutionSet {
    pub fn empty(key: SolutionKey) -> Self {
        SolutionSet {
            key,
            solutions: BTreeSet::new(),
        }
    }

    pub fn key(&self) -> SolutionKey {
        self.key
    }

    /// Adds a member. Returns `Ok(false)` for a duplicate; errors if the
    /// solution has the wrong shape for this key or is not a solution.
    pub fn insert(&mut self, s: Solution) -> Result<bool> {
        if s.key() != self.key {
            return Err(EspError::Precondition(format!(
                "{s} does not belong to {}",
                self.key
            )));
        }
        if !validate(&s) {
            return Err(EspError::InvalidSolution(s.to_string()));
        }
        Ok(self.solutions.insert(s))
    }

    pub fn solutions(&self) -> &BTreeSet<Solution> {
        &self.solutions
    }

    pub fn iter(&self) -> impl Iterator<Item = &Solution> {
        self.solutions.iter()
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn contains(&self, s: &Solution) -> bool {
        self.solutions.contains(s)
    }

    pub fn into_solutions(self) -> BTreeSet<Solution> {
        self.solutions
    }
}
