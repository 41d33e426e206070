//! Search for exceptional values: tuple lengths `n` whose only solution is
//! the basic one, `(2, n; n-2)`.
//!
//! For `n > 2` to be exceptional, `S_2(n)` must be a singleton, so `n - 1`
//! is prime; the stronger necessary condition is that `n - 1` is a Sophie
//! Germain prime. A candidate is rejected as soon as any non-basic solution
//! turns up.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::base_sets::is_prime;
use crate::error::{EspError, Result};
use crate::solution::Solution;
use crate::solver::{calc_shell, first_in_shell, max_shell, MemoStore};

/// `p` and `2p + 1` are both prime.
pub fn is_sophie_germain(p: u64) -> bool {
    is_prime(p)
        && p.checked_mul(2)
            .and_then(|q| q.checked_add(1))
            .is_some_and(is_prime)
}

/// Some non-basic solution for `n`, if there is one.
pub fn find_first_nonbasic(n: u64) -> Result<Option<Solution>> {
    find_first_nonbasic_with(n, &mut MemoStore::new())
}

/// [`find_first_nonbasic`] against a caller-owned store, so consecutive
/// calls share sub-shells.
///
/// `S_2(n)` is checked first: it has a second element exactly when `n - 1`
/// is composite, and then no shell with `r >= 3` is touched.
pub fn find_first_nonbasic_with(n: u64, memo: &mut MemoStore) -> Result<Option<Solution>> {
    if n < 2 {
        return Err(EspError::Domain(format!("n must be ≥ 2, got {n}")));
    }
    let basic = Solution::basic(n)?;
    let s2 = calc_shell(n, 2, memo)?;
    if let Some(s) = s2.iter().find(|s| **s != basic) {
        return Ok(Some(s.clone()));
    }
    for r in 3..=max_shell(n) {
        if let Some(s) = first_in_shell(n, r, memo)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

pub fn is_exceptional(n: u64) -> Result<bool> {
    Ok(find_first_nonbasic(n)?.is_none())
}

fn is_exceptional_with(n: u64, memo: &mut MemoStore) -> Result<bool> {
    Ok(find_first_nonbasic_with(n, memo)?.is_none())
}

/// Outcome of [`scan_exceptional`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub lo: u64,
    pub hi: u64,
    pub sg_filter: bool,
    /// Values of `n` actually run through the solver.
    pub tested: u64,
    /// Values of `n` in range with `n - 1` a Sophie Germain prime, plus
    /// `n = 2` when in range.
    pub sg_candidates: u64,
    /// Exceptional values found, ascending.
    pub exceptional: Vec<u64>,
    pub elapsed_ms: u64,
}

fn is_sg_candidate(n: u64) -> bool {
    n == 2 || is_sophie_germain(n - 1)
}

fn is_candidate(n: u64, sg_filter: bool) -> bool {
    n == 2
        || if sg_filter {
            is_sophie_germain(n - 1)
        } else {
            is_prime(n - 1)
        }
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo < 2 {
        return Err(EspError::Range(format!("lo must be ≥ 2, got {lo}")));
    }
    if lo > hi {
        return Err(EspError::Range(format!(
            "empty range: lo = {lo} > hi = {hi}"
        )));
    }
    Ok(())
}

#[derive(Default)]
struct Tally {
    tested: u64,
    sg_candidates: u64,
    exceptional: Vec<u64>,
}

impl Tally {
    fn scan(&mut self, lo: u64, hi: u64, sg_filter: bool, memo: &mut MemoStore) -> Result<()> {
        for n in lo..=hi {
            if is_sg_candidate(n) {
                self.sg_candidates += 1;
            }
            if !is_candidate(n, sg_filter) {
                continue;
            }
            self.tested += 1;
            if is_exceptional_with(n, memo)? {
                self.exceptional.push(n);
            }
        }
        Ok(())
    }

    fn merge(&mut self, other: Tally) {
        self.tested += other.tested;
        self.sg_candidates += other.sg_candidates;
        self.exceptional.extend(other.exceptional);
    }

    fn into_report(mut self, lo: u64, hi: u64, sg_filter: bool, started: Instant) -> ScanReport {
        self.exceptional.sort_unstable();
        ScanReport {
            lo,
            hi,
            sg_filter,
            tested: self.tested,
            sg_candidates: self.sg_candidates,
            exceptional: self.exceptional,
            elapsed_ms: started.elapsed().as_millis() as u64,
        }
    }
}

/// Scans `lo..=hi` for exceptional values on the current thread.
///
/// With `use_sg_filter` only `n = 2` and `n` with `n - 1` a Sophie Germain
/// prime are tested; otherwise every `n` with `n - 1` prime is. Both modes
/// find the same values.
pub fn scan_exceptional(lo: u64, hi: u64, use_sg_filter: bool) -> Result<ScanReport> {
    check_range(lo, hi)?;
    let started = Instant::now();
    let mut tally = Tally::default();
    tally.scan(lo, hi, use_sg_filter, &mut MemoStore::new())?;
    Ok(tally.into_report(lo, hi, use_sg_filter, started))
}

/// [`scan_exceptional`] split over `workers` threads. The range is cut into
/// chunks handed out on demand; each worker keeps its own memo store.
pub fn scan_exceptional_parallel(
    lo: u64,
    hi: u64,
    use_sg_filter: bool,
    workers: usize,
) -> Result<ScanReport> {
    check_range(lo, hi)?;
    if workers <= 1 {
        return scan_exceptional(lo, hi, use_sg_filter);
    }
    let started = Instant::now();
    let span = hi - lo + 1;
    let chunk = (span / (workers as u64 * 16)).clamp(1, 4096);
    let chunks = span.div_ceil(chunk);
    let next = AtomicU64::new(0);
    let merged = Mutex::new(Tally::default());
    let failure: Mutex<Option<EspError>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut memo = MemoStore::new();
                let mut local = Tally::default();
                loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= chunks {
                        break;
                    }
                    let a = lo + idx * chunk;
                    let b = (a + chunk - 1).min(hi);
                    if let Err(e) = local.scan(a, b, use_sg_filter, &mut memo) {
                        failure.lock().unwrap().get_or_insert(e);
                        break;
                    }
                }
                merged.lock().unwrap().merge(local);
            });
        }
    });

    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(merged
        .into_inner()
        .unwrap()
        .into_report(lo, hi, use_sg_filter, started))
}
