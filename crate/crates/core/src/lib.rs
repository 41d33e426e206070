//! Exact solver for the equal-sum-product problem.
//!
//! For a tuple length `n >= 2`, find every n-tuple of positive integers whose
//! sum equals its product, e.g. `1 + 2 + 3 = 1 * 2 * 3`. Solutions are stored
//! compressed: the sorted components that are at least 2, plus a count of the
//! 1-components.
//!
//! The solver builds the set `S_r(n)` of solutions with exactly `r`
//! non-unit components from smaller sets `S_{r-1}(k)`, caching every
//! intermediate set in an ordered [`MemoStore`]. The base sets `S_2(n)` come
//! straight from the divisors of `n - 1`.
//!
//! ```
//! use esp_core::{calc_solution, MemoStore};
//!
//! let mut memo = MemoStore::new();
//! let sols = calc_solution(15, &mut memo).unwrap();
//! let shown: Vec<String> = sols.iter().map(|s| s.to_string()).collect();
//! assert_eq!(shown, ["(15,2;13)", "(8,3;13)"]);
//! ```

pub mod base_sets;
pub mod cli;
pub mod error;
pub mod exceptional;
pub mod oracle;
pub mod solution;
pub mod solver;

pub use base_sets::{build_s2, divisors_up_to_sqrt, is_prime, DivisorList};
pub use error::{EspError, Result};
pub use exceptional::{
    find_first_nonbasic, find_first_nonbasic_with, is_exceptional, is_sophie_germain,
    scan_exceptional, scan_exceptional_parallel, ScanReport,
};
pub use oracle::brute_force_solutions;
pub use solution::{
    common_value, compare_keys, is_basic, validate, Solution, SolutionKey, SolutionSet,
};
pub use solver::{
    calc_shell, calc_shell_ordered, calc_solution, calc_solution_by_shell, extend_candidate,
    first_in_shell, j_bounds, max_shell, JOrder, JRange, MemoStats, MemoStore,
};
