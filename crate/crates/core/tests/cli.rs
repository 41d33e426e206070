//! Runs the real `esp` binary.

use std::collections::BTreeSet;
use std::process::{Command, Output};

use esp_core::cli::SolveOutput;
use esp_core::{calc_solution, MemoStore, ScanReport, Solution};

fn esp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esp"))
        .args(args)
        .output()
        .expect("run esp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_prints_paper_style_tuples() {
    let o = esp(&["solve", "15"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(15,2;13)\n(8,3;13)\n");

    let o = esp(&["solve", "2"]);
    assert_eq!(stdout(&o), "(2,2;0)\n");
}

#[test]
fn solve_rejects_small_n() {
    let o = esp(&["solve", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("n must be ≥ 2"));
}

#[test]
fn solve_json_round_trips() {
    for n in [2u64, 12, 15, 100, 1000] {
        let o = esp(&["solve", &n.to_string(), "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let doc: SolveOutput = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(doc.n, n);
        let got: BTreeSet<Solution> = doc.solutions.into_iter().collect();
        assert_eq!(got, calc_solution(n, &mut MemoStore::new()).unwrap());
    }
}

#[test]
fn solve_json_arrays_are_ascending() {
    let o = esp(&["solve", "15", "--json"]);
    assert_eq!(
        stdout(&o).trim(),
        r#"{"n":15,"solutions":[{"nonunit":[2,15],"units":13},{"nonunit":[3,8],"units":13}]}"#
    );
}

#[test]
fn verify_exit_codes() {
    let o = esp(&["verify", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines()
            .filter(|l| l.starts_with("n=") && l.contains(" PASS"))
            .count(),
        63
    );
    assert_eq!(out.lines().last(), Some("63/63 PASS"));

    let o = esp(&["verify", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n=2 PASS"));

    assert_eq!(esp(&["verify", "100"]).status.code(), Some(2));
}

#[test]
fn scan_text_and_json() {
    let o = esp(&["scan", "2", "1000", "--sg-filter"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exceptional: 2 3 4 6 24 114 174 444\n"));

    let o = esp(&["scan", "500", "1000", "--sg-filter"]);
    assert!(stdout(&o).contains("exceptional: (none)\n"));

    let o = esp(&["scan", "2", "1000"]);
    assert!(stdout(&o).contains("exceptional: 2 3 4 6 24 114 174 444\n"));

    let o = esp(&[
        "scan",
        "2",
        "1000",
        "--sg-filter",
        "--json",
        "--workers",
        "2",
    ]);
    let report: ScanReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((report.lo, report.hi), (2, 1000));
    assert!(report.sg_filter);
    assert_eq!(report.exceptional, [2, 3, 4, 6, 24, 114, 174, 444]);
}

#[test]
fn scan_bad_range() {
    assert_eq!(esp(&["scan", "5", "4"]).status.code(), Some(2));
    assert_eq!(esp(&["scan", "0", "4"]).status.code(), Some(2));
    assert_eq!(esp(&["scan", "2"]).status.code(), Some(2));
}
