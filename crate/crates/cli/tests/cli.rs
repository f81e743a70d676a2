use std::process::{Command, Output};

use ghzcomm::report::{ClassicalReport, QuantumReport, SweepReport, Table1Dto, VerifyReport};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn ghzcomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghzcomm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn success(args: &[&str]) -> String {
    let out = ghzcomm(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

/// Parses a JSON report and checks that re-serializing reproduces it exactly.
fn round_trip<T: Serialize + DeserializeOwned>(text: &str) -> T {
    let value: T = serde_json::from_str(text).unwrap();
    let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(again, text);
    value
}

#[test]
fn perfect_quantum_protocol() {
    let r: QuantumReport = round_trip(&success(&["quantum", "--n", "2", "--p", "0", "--format", "json"]));
    assert_eq!(r.exact_success, 1.0);
    assert_eq!(r.schema_version, 1);
    assert!(r.sampled.is_none());
}

#[test]
fn sampled_quantum_protocol() {
    let args = ["quantum", "--n", "3", "--p", "0.5", "--shots", "100000", "--seed", "7", "--format", "json"];
    let r: QuantumReport = round_trip(&success(&args));
    assert_eq!(r.exact_success, 0.75);
    let s = r.sampled.unwrap();
    assert_eq!((s.shots, s.seed), (100_000, 7));
    assert!((s.mean - 0.75).abs() <= 4.0 * s.std_error);
}

#[test]
fn invalid_noise_is_a_usage_error() {
    for args in [
        &["quantum", "--n", "2", "--p", "1.5"][..],
        &["quantum", "--n", "1"],
        &["quantum", "--n", "17"],
        &["classical", "--n", "7"],
        &["sweep", "--n", "2"],
        &["sweep", "--n", "2", "--p-grid", ""],
        &["sweep", "--n", "2", "--p-grid", "0:1:0"],
        &["sweep", "--n", "2", "--p-grid", "0.7:0.2:3"],
        &["verify", "--ghz-k", "0"],
        &["table1", "--threads", "0"],
    ] {
        let out = ghzcomm(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn classical_two_senders() {
    let r: ClassicalReport = round_trip(&success(&["classical", "--n", "2", "--format", "json"]));
    assert_eq!(r.optimum.fraction, "3/4");
    assert!(!r.perfect_strategy_found);
    assert_eq!(r.strategies_examined, 65_536);
    assert_eq!(r.search, "all-strategies");
    assert!(!r.witnesses.is_empty() && r.witnesses.len() <= 1024);
}

#[test]
fn classical_three_and_four_senders() {
    let r: ClassicalReport = round_trip(&success(&["classical", "--n", "3", "--format", "json"]));
    assert_eq!(r.optimum.fraction, "3/4");
    let r: ClassicalReport = round_trip(&success(&["classical", "--n", "4", "--format", "json"]));
    assert!(r.optimum.decimal <= 0.75 && r.optimum.decimal >= r.lower_bound.decimal);
}

#[test]
fn sweep_csv_rows() {
    let text = success(&["sweep", "--n", "2", "--p-grid", "0:1:11", "--format", "csv"]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,p,quantum_success,classical_upper,advantage,entanglement_class")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 11);
    for row in &rows {
        let p: f64 = row[1].parse().unwrap();
        assert_eq!(row[4] == "true", p < 0.5, "p = {p}");
    }
    assert_eq!(rows[3][5], "genuinely entangled");
    assert_eq!(rows[6][5], "intermediate/biseparable");
    assert_eq!(rows[9][5], "fully separable");
}

#[test]
fn sweep_single_boundary_point() {
    let r: SweepReport = round_trip(&success(&["sweep", "--n", "5", "--p-grid", "0.5:0.5:1", "--format", "json"]));
    assert_eq!(r.rows.len(), 1);
    assert_eq!(r.rows[0].p, 0.5);
    assert!(!r.rows[0].advantage);
}

#[test]
fn table1_matches() {
    let r: Table1Dto = round_trip(&success(&["table1", "--format", "json"]));
    assert!(r.all_match);
    // Row and column 2 of the table are the g^4 encodings.
    let cell = &r.rows[2][2];
    assert_eq!((cell.e1, cell.e2), (4, 4));
    assert_eq!(cell.success.fraction, "3/4");
    assert!(cell.highlight);
    let csv = success(&["table1", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 65);
}

#[test]
fn verify_passes_and_prints_phase_table() {
    let r: VerifyReport = round_trip(&success(&["verify", "--ghz-k", "3", "--format", "json"]));
    assert!(r.passed);
    assert_eq!(r.ghz_table.unwrap().len(), 8);
    let pretty = success(&["verify", "--ghz-k", "3"]);
    assert!(pretty.contains("XXX"));
    assert!(pretty.contains("YYY"));
}

#[test]
fn injected_fault_exits_with_two() {
    let out = ghzcomm(&["verify", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("injected-fault"));
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    for args in [
        &["quantum", "--n", "4", "--p", "0.3", "--shots", "70000", "--seed", "99", "--format", "json"][..],
        &["classical", "--n", "4", "--format", "json"],
        &["sweep", "--n", "3", "--p-grid", "0:1:21", "--format", "csv"],
    ] {
        let base = success(args);
        assert_eq!(success(args), base, "{args:?}");
        for threads in ["1", "3"] {
            let mut with = args.to_vec();
            with.extend(["--threads", threads]);
            assert_eq!(success(&with), base, "{with:?}");
        }
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = success(&["table1", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, success(&["table1", "--format", "csv"]));
}
