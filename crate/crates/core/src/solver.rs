//! Memoized recursive construction of the shells `S_r(n)`.
//!
//! Every `(x_1, ..., x_r; n-r)` in `S_r(n)` with `r >= 3` comes from some
//! `(x_1, ..., x_{r-1}; j+1)` in `S_{r-1}(r+j)` by appending
//!
//! ```text
//! w = 1 + (n - r - j) / (x_1 + ... + x_{r-1} + j)
//! ```
//!
//! whenever that division is exact. Only `j` in
//! `2^(r-2) - r <= j <= floor((n - 3r + 2) / 2)` can contribute. Shells are
//! cached per `(n, r)` in a [`MemoStore`], empty ones included, so a shared
//! dead end is computed once.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::base_sets::build_s2;
use crate::error::{EspError, Result};
use crate::solution::{Solution, SolutionKey, SolutionSet};

/// The admissible offsets `j` for building `S_r(n)` from `S_{r-1}(r+j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JRange {
    pub j_min: i64,
    pub j_max: i64,
}

impl JRange {
    pub fn is_empty(&self) -> bool {
        self.j_min > self.j_max
    }

    pub fn contains(&self, j: i64) -> bool {
        self.j_min <= j && j <= self.j_max
    }

    fn iter(&self, order: JOrder) -> Box<dyn Iterator<Item = i64>> {
        let range = self.j_min..=self.j_max;
        match order {
            JOrder::Ascending => Box::new(range),
            JOrder::Descending => Box::new(range.rev()),
        }
    }
}

/// Order in which `calc_shell` visits `j`. The result does not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JOrder {
    #[default]
    Ascending,
    Descending,
}

pub fn j_bounds(n: u64, r: u64) -> Result<JRange> {
    if r < 3 {
        return Err(EspError::Domain(format!("j_bounds needs r ≥ 3, got {r}")));
    }
    // 2^(r-2) - r; past i64 range the lower bound is unreachable anyway
    let j_min = 1i128
        .checked_shl((r - 2) as u32)
        .filter(|_| r - 2 < 126)
        .map(|p| p - r as i128)
        .unwrap_or(i128::MAX);
    // div_euclid by a positive divisor floors toward negative infinity
    let j_max = (n as i128 - 3 * r as i128 + 2).div_euclid(2);
    let clamp = |v: i128| v.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
    Ok(JRange {
        j_min: clamp(j_min),
        j_max: clamp(j_max),
    })
}

/// Extends `base` in `S_{r-1}(r+j)` to an element of `S_r(n)`, if the
/// new component `w` is integral.
pub fn extend_candidate(base: &Solution, j: i64, n: u64, r: u64) -> Result<Option<Solution>> {
    if r < 3 || base.r() as u64 != r - 1 || base.units() as i128 != j as i128 + 1 {
        return Err(EspError::Precondition(format!(
            "{base} is not in S_{}({}+{j})",
            r.saturating_sub(1),
            r
        )));
    }
    if !j_bounds(n, r)?.contains(j) {
        return Err(EspError::Precondition(format!(
            "j = {j} outside the admissible range for S_{r}({n})"
        )));
    }
    Ok(extend_unchecked(base, j, n, r))
}

// Base components are at most r + j <= n and there are at most 64 of them.
const SMALL_N: u64 = 1 << 52;

fn extend_unchecked(base: &Solution, j: i64, n: u64, r: u64) -> Option<Solution> {
    let w = if n < SMALL_N {
        // every term is below 2^62, so i64 cannot overflow
        let sum: i64 = base.nonunit().iter().map(|&x| x as i64).sum();
        let denom = sum + j;
        let numer = n as i64 - r as i64 - j;
        if denom <= 0 || numer <= 0 || numer % denom != 0 {
            return None;
        }
        (1 + numer / denom) as u64
    } else {
        let sum: i128 = base.nonunit().iter().map(|&x| x as i128).sum();
        let denom = sum + j as i128;
        let numer = n as i128 - r as i128 - j as i128;
        if denom <= 0 || numer <= 0 || numer % denom != 0 {
            return None;
        }
        u64::try_from(1 + numer / denom).ok()?
    };
    let mut nonunit = Vec::with_capacity(base.r() + 1);
    nonunit.extend_from_slice(base.nonunit());
    nonunit.push(w);
    Some(Solution::new(nonunit, n - r))
}

/// Counters for cache behaviour, mainly for tests and the CLI.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MemoStats {
    pub hits: u64,
    pub misses: u64,
    /// Number of divisibility tests (`w` evaluations) performed.
    pub extend_evaluations: u64,
}

/// Cache of computed shells, ordered by [`crate::compare_keys`].
///
/// Backed by a B-tree, so lookup and insert take a logarithmic number of key
/// comparisons.
#[derive(Debug, Default)]
pub struct MemoStore {
    entries: BTreeMap<SolutionKey, Arc<SolutionSet>>,
    stats: MemoStats,
}

impl MemoStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: SolutionKey) -> Option<&Arc<SolutionSet>> {
        self.entries.get(&key)
    }

    pub fn contains(&self, key: SolutionKey) -> bool {
        self.entries.contains_key(&key)
    }

    /// Stores a shell. An existing entry for the same key is kept.
    pub fn insert(&mut self, set: SolutionSet) -> Arc<SolutionSet> {
        self.entries
            .entry(set.key())
            .or_insert_with(|| Arc::new(set))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = SolutionKey> + '_ {
        self.entries.keys().copied()
    }

    pub fn stats(&self) -> MemoStats {
        self.stats
    }

    fn lookup(&mut self, key: SolutionKey) -> Option<Arc<SolutionSet>> {
        let found = self.entries.get(&key).cloned();
        if found.is_some() {
            self.stats.hits += 1;
        } else {
            self.stats.misses += 1;
        }
        found
    }
}

/// Returns `S_r(k)`, computing and caching it (and every shell it depends
/// on) if needed.
pub fn calc_shell(k: u64, r: u64, memo: &mut MemoStore) -> Result<Arc<SolutionSet>> {
    calc_shell_ordered(k, r, memo, JOrder::Ascending)
}

/// [`calc_shell`] with an explicit visiting order for `j`.
pub fn calc_shell_ordered(
    k: u64,
    r: u64,
    memo: &mut MemoStore,
    order: JOrder,
) -> Result<Arc<SolutionSet>> {
    let key = SolutionKey::new(k, r)?;
    if let Some(hit) = memo.lookup(key) {
        return Ok(hit);
    }
    if r == 2 {
        return Ok(memo.insert(build_s2(k)?));
    }
    let mut set = SolutionSet::empty(key);
    let range = j_bounds(k, r)?;
    for j in range.iter(order) {
        // r + j >= r - 1 because j >= 2^(r-2) - r >= -1
        let sub = calc_shell_ordered((r as i64 + j) as u64, r - 1, memo, order)?;
        for base in sub.iter() {
            memo.stats.extend_evaluations += 1;
            if let Some(s) = extend_unchecked(base, j, k, r) {
                set.insert(s)?;
            }
        }
    }
    Ok(memo.insert(set))
}

/// First element of `S_r(k)` in ascending-`j` order, stopping as soon as one
/// is found. Sub-shells are cached in full; `S_r(k)` itself is only cached
/// if it turns out to be empty.
pub fn first_in_shell(k: u64, r: u64, memo: &mut MemoStore) -> Result<Option<Solution>> {
    let key = SolutionKey::new(k, r)?;
    if let Some(hit) = memo.lookup(key) {
        return Ok(hit.iter().next().cloned());
    }
    if r == 2 {
        let set = memo.insert(build_s2(k)?);
        return Ok(set.iter().next().cloned());
    }
    for j in j_bounds(k, r)?.iter(JOrder::Ascending) {
        let sub = calc_shell((r as i64 + j) as u64, r - 1, memo)?;
        for base in sub.iter() {
            memo.stats.extend_evaluations += 1;
            if let Some(s) = extend_unchecked(base, j, k, r) {
                return Ok(Some(s));
            }
        }
    }
    memo.insert(SolutionSet::empty(key));
    Ok(None)
}

/// Largest `r` with possibly non-empty `S_r(n)`: `floor(log2 n) + 1`.
pub fn max_shell(n: u64) -> u64 {
    n.ilog2() as u64 + 1
}

/// The full solution set `S(n)`, the union of `S_r(n)` for
/// `r = floor(log2 n) + 1` down to 2.
pub fn calc_solution(n: u64, memo: &mut MemoStore) -> Result<BTreeSet<Solution>> {
    if n < 2 {
        return Err(EspError::Domain(format!("n must be ≥ 2, got {n}")));
    }
    let mut all = BTreeSet::new();
    for r in (2..=max_shell(n).min(n)).rev() {
        all.extend(calc_shell(n, r, memo)?.iter().cloned());
    }
    Ok(all)
}

/// `S(n)` split by shell, largest `r` first. Empty shells are included.
pub fn calc_solution_by_shell(n: u64, memo: &mut MemoStore) -> Result<Vec<Arc<SolutionSet>>> {
    if n < 2 {
        return Err(EspError::Domain(format!("n must be ≥ 2, got {n}")));
    }
    (2..=max_shell(n).min(n))
        .rev()
        .map(|r| calc_shell(n, r, memo))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(xs: &[u64], units: u64) -> Solution {
        Solution::new(xs.to_vec(), units)
    }

    fn rendered<'a>(it: impl IntoIterator<Item = &'a Solution>) -> Vec<String> {
        it.into_iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn j_bounds_examples() {
        assert_eq!(j_bounds(15, 4).unwrap(), JRange { j_min: 0, j_max: 2 });
        assert_eq!(
            j_bounds(15, 3).unwrap(),
            JRange {
                j_min: -1,
                j_max: 4
            }
        );
        let r = j_bounds(4, 3).unwrap();
        assert_eq!(
            r,
            JRange {
                j_min: -1,
                j_max: -2
            }
        );
        assert!(r.is_empty());
        assert!(j_bounds(15, 2).is_err());
    }

    #[test]
    fn j_bounds_floors_negative_numerators() {
        // (5 - 12 + 2) / 2 = -2.5 -> -3
        assert_eq!(j_bounds(5, 4).unwrap().j_max, -3);
        assert_eq!(j_bounds(6, 4).unwrap().j_max, -2);
    }

    #[test]
    fn j_bounds_huge_r_is_empty() {
        assert!(j_bounds(100, 64).unwrap().is_empty());
        assert!(j_bounds(u64::MAX, 200).unwrap().is_empty());
        assert!(j_bounds(u64::MAX, u64::MAX).unwrap().is_empty());
    }

    #[test]
    fn extend_examples() {
        let base = sol(&[2, 2], 0);
        assert_eq!(
            extend_candidate(&base, -1, 5, 3).unwrap(),
            Some(sol(&[2, 2, 2], 2))
        );
        assert_eq!(extend_candidate(&base, -1, 6, 3).unwrap(), None);
        let base = sol(&[2, 2, 2], 2);
        assert_eq!(extend_candidate(&base, 1, 15, 4).unwrap(), None);
    }

    #[test]
    fn extend_rejects_shape_mismatch() {
        let base = sol(&[2, 2], 0);
        assert!(matches!(
            extend_candidate(&base, 0, 5, 3),
            Err(EspError::Precondition(_))
        ));
        assert!(extend_candidate(&base, -1, 15, 4).is_err());
        // j outside the admissible range: S_3(4) has an empty range
        assert!(extend_candidate(&base, -1, 4, 3).is_err());
    }

    #[test]
    fn shell_examples() {
        let mut memo = MemoStore::new();
        assert_eq!(
            rendered(calc_shell(5, 3, &mut memo).unwrap().iter()),
            ["(2,2,2;2)"]
        );
        assert!(calc_shell(15, 4, &mut memo).unwrap().is_empty());
        assert_eq!(
            rendered(calc_shell(12, 4, &mut memo).unwrap().iter()),
            ["(2,2,2,2;8)"]
        );
        assert!(calc_shell(1, 2, &mut memo).is_err());
        assert!(calc_shell(5, 1, &mut memo).is_err());
    }

    #[test]
    fn solution_examples() {
        let mut memo = MemoStore::new();
        assert_eq!(
            rendered(&calc_solution(15, &mut memo).unwrap()),
            ["(15,2;13)", "(8,3;13)"]
        );
        assert_eq!(rendered(&calc_solution(2, &mut memo).unwrap()), ["(2,2;0)"]);
        assert_eq!(
            rendered(&calc_solution(5, &mut memo).unwrap()),
            ["(2,2,2;2)", "(5,2;3)", "(3,3;3)"]
        );
        assert!(calc_solution(1, &mut memo).is_err());
    }

    #[test]
    fn empty_shells_are_memoized() {
        let mut memo = MemoStore::new();
        calc_shell(15, 4, &mut memo).unwrap();
        for (n, r) in [(6, 3), (4, 3), (15, 4), (5, 3), (2, 2)] {
            assert!(memo.contains(SolutionKey { n, r }), "S_{r}({n})");
        }
        assert!(memo.get(SolutionKey { n: 6, r: 3 }).unwrap().is_empty());
    }

    #[test]
    fn second_call_does_no_work() {
        let mut memo = MemoStore::new();
        let first = calc_shell(40, 4, &mut memo).unwrap();
        let before = memo.stats();
        let second = calc_shell(40, 4, &mut memo).unwrap();
        assert_eq!(first, second);
        assert_eq!(memo.stats().extend_evaluations, before.extend_evaluations);
        assert_eq!(memo.stats().hits, before.hits + 1);
    }

    #[test]
    fn first_in_shell_stops_early() {
        let mut full = MemoStore::new();
        let all = calc_shell(100, 3, &mut full).unwrap();
        let mut memo = MemoStore::new();
        let first = first_in_shell(100, 3, &mut memo).unwrap().unwrap();
        assert!(all.contains(&first));
        assert!(memo.stats().extend_evaluations < full.stats().extend_evaluations);
        // partial shells are not cached
        assert!(!memo.contains(SolutionKey { n: 100, r: 3 }));
    }

    #[test]
    fn first_in_empty_shell_caches_it() {
        let mut memo = MemoStore::new();
        assert_eq!(first_in_shell(6, 3, &mut memo).unwrap(), None);
        assert!(memo.contains(SolutionKey { n: 6, r: 3 }));
    }

    #[test]
    fn by_shell_is_descending_r() {
        let mut memo = MemoStore::new();
        let shells = calc_solution_by_shell(15, &mut memo).unwrap();
        let rs: Vec<u64> = shells.iter().map(|s| s.key().r).collect();
        assert_eq!(rs, [4, 3, 2]);
    }
}
