//! The `esp` command line: `solve`, `verify` and `scan`.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a mismatch, 2 for usage or
//! domain errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::exceptional::{scan_exceptional_parallel, ScanReport};
use crate::oracle::{brute_force_solutions, ORACLE_MAX_N};
use crate::solution::Solution;
use crate::solver::{calc_solution, calc_solution_by_shell, MemoStore};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "esp", about = "Equal-sum-product tuple solver", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every n-tuple whose sum equals its product.
    Solve {
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compare the solver with brute force for every n in 2..=NMAX.
    Verify {
        #[arg(value_name = "NMAX")]
        n_max: u64,
    },
    /// Search LO..=HI for exceptional values.
    Scan {
        lo: u64,
        hi: u64,
        /// Only test n with n-1 a Sophie Germain prime.
        #[arg(long)]
        sg_filter: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1, value_name = "K")]
        workers: usize,
    },
}

/// Output mode shared by `solve` and `scan`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl OutputFormat {
    fn from_flag(json: bool) -> Self {
        if json {
            OutputFormat::Json
        } else {
            OutputFormat::Text
        }
    }
}

/// JSON document printed by `solve --json`.
#[derive(Debug, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct SolveOutput {
    pub n: u64,
    pub solutions: Vec<Solution>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Solve { n, json } => cmd_solve(n, OutputFormat::from_flag(json), out),
        Command::Verify { n_max } => cmd_verify(n_max, out),
        Command::Scan {
            lo,
            hi,
            sg_filter,
            json,
            workers,
        } => cmd_scan(
            lo,
            hi,
            sg_filter,
            OutputFormat::from_flag(json),
            workers,
            out,
        ),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<crate::EspError> for CliError {
    fn from(e: crate::EspError) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = std::result::Result<i32, CliError>;

pub fn cmd_solve(n: u64, format: OutputFormat, out: &mut dyn Write) -> CliResult {
    if n < 2 {
        return Err(CliError::Usage("n must be ≥ 2".into()));
    }
    let mut memo = MemoStore::new();
    let shells = calc_solution_by_shell(n, &mut memo)?;
    let ordered: Vec<Solution> = shells.iter().flat_map(|s| s.iter().cloned()).collect();
    match format {
        OutputFormat::Text => {
            for s in &ordered {
                writeln!(out, "{s}")?;
            }
        }
        OutputFormat::Json => {
            let doc = SolveOutput {
                n,
                solutions: ordered,
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string(&doc).map_err(std::io::Error::from)?
            )?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(n_max: u64, out: &mut dyn Write) -> CliResult {
    if !(2..=ORACLE_MAX_N).contains(&n_max) {
        return Err(CliError::Usage(format!(
            "NMAX must be in 2..={ORACLE_MAX_N}, got {n_max}"
        )));
    }
    let mut memo = MemoStore::new();
    let mut passed = 0u64;
    for n in 2..=n_max {
        let ours = calc_solution(n, &mut memo)?;
        let oracle = brute_force_solutions(n)?;
        if ours == oracle {
            passed += 1;
            writeln!(out, "n={n} PASS ({} solutions)", ours.len())?;
        } else {
            writeln!(out, "n={n} FAIL")?;
            for s in oracle.difference(&ours) {
                writeln!(out, "  missing {s}")?;
            }
            for s in ours.difference(&oracle) {
                writeln!(out, "  extra {s}")?;
            }
        }
    }
    let total = n_max - 1;
    let verdict = if passed == total { "PASS" } else { "FAIL" };
    writeln!(out, "{passed}/{total} {verdict}")?;
    Ok(if passed == total {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

pub fn cmd_scan(
    lo: u64,
    hi: u64,
    sg_filter: bool,
    format: OutputFormat,
    workers: usize,
    out: &mut dyn Write,
) -> CliResult {
    if workers == 0 {
        return Err(CliError::Usage("--workers must be ≥ 1".into()));
    }
    let report = scan_exceptional_parallel(lo, hi, sg_filter, workers)?;
    match format {
        OutputFormat::Text => write_scan_text(&report, out)?,
        OutputFormat::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&report).map_err(std::io::Error::from)?
        )?,
    }
    Ok(EXIT_OK)
}

fn write_scan_text(report: &ScanReport, out: &mut dyn Write) -> std::io::Result<()> {
    let values = if report.exceptional.is_empty() {
        "(none)".to_string()
    } else {
        report
            .exceptional
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "range: {}..={}", report.lo, report.hi)?;
    writeln!(
        out,
        "sg filter: {}",
        if report.sg_filter { "on" } else { "off" }
    )?;
    writeln!(out, "sg candidates: {}", report.sg_candidates)?;
    writeln!(out, "tested: {}", report.tested)?;
    writeln!(out, "exceptional: {values}")?;
    writeln!(out, "elapsed: {} ms", report.elapsed_ms)
}
