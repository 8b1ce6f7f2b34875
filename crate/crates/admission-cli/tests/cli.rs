//! End-to-end tests of the `admission` binary: exact output bytes, exit
//! codes, reproducibility, and artifact files.

use std::path::Path;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn admission(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_admission"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn run_prints_the_exact_uniform_price_distribution() {
    let out = admission(&["run", "--mech", "abar", "--bids", &fixture("example1.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "{\"admittance\":\"2\",\"mechanism\":\"abar\",\"n\":4,\"outcomes\":[{\"probability\":\"1/2\",\"rates\":[\"0.4\",\"0.4\"],\"winners\":[2,3]},{\"probability\":\"1/2\",\"rates\":[\"0.4\",\"0.4\"],\"winners\":[3,4]}]}\n"
    );
}

#[test]
fn run_prints_the_exact_dropped_threshold_outcome() {
    let out = admission(&[
        "run",
        "--mech",
        "astar",
        "--bids",
        &fixture("example1.json"),
        "--drop",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "{\"admittance\":\"1\",\"mechanism\":\"astar\",\"n\":4,\"rates\":[\"59/150\"],\"winners\":[3]}\n"
    );
}

#[test]
fn run_admits_a_lone_bidder_at_capacity() {
    let out = admission(&[
        "run",
        "--mech",
        "astar",
        "--bids",
        &fixture("single_user.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "{\"admittance\":\"1\",\"mechanism\":\"astar\",\"n\":1,\"rates\":[\"1\"],\"winners\":[1]}\n"
    );
}

#[test]
fn run_is_byte_identical_across_invocations() {
    let args = [
        "run",
        "--mech",
        "abar",
        "--bids",
        &fixture("example1.json"),
        "--sample",
        "--seed",
        "7",
    ];
    let first = admission(&args);
    let second = admission(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn malformed_files_exit_2_with_one_line_reason() {
    let out = admission(&["run", "--mech", "abar", "--bids", &fixture("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.starts_with("error: "), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
    assert!(err.contains("capacity"), "{err}");
}

#[test]
fn over_capacity_bids_exit_2_naming_the_index() {
    let out = admission(&[
        "run",
        "--mech",
        "abar",
        "--bids",
        &fixture("over_capacity.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("bid_exceeds_capacity"), "{err}");
    assert!(err.contains("index 2"), "{err}");
}

#[test]
fn unknown_mechanism_exits_2() {
    let out = admission(&["run", "--mech", "vcg", "--bids", &fixture("example1.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_ic_passes_for_the_dropped_threshold_mechanism() {
    let out = admission(&[
        "verify", "--suite", "ic", "--mech", "astar", "--n", "2", "--grid", "1/10", "--drop",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout_of(&out);
    assert!(line.contains("\"passed\":true"), "{line}");
    assert!(line.contains("\"property_id\":\"incentive_compatibility\""));
}

#[test]
fn verify_ic_expect_fail_prints_a_counterexample_for_ties() {
    let out = admission(&[
        "verify",
        "--suite",
        "ic",
        "--mech",
        "abar",
        "--n",
        "2",
        "--grid",
        "1/20",
        "--expect-fail",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout_of(&out);
    assert!(line.contains("\"passed\":false"), "{line}");
    assert!(line.contains("\"kind\":\"deviation\""), "{line}");
    assert!(line.contains("\"expected\":\"fail\""), "{line}");
}

#[test]
fn verify_ic_failure_without_expect_fail_exits_1() {
    let out = admission(&[
        "verify", "--suite", "ic", "--mech", "abar", "--n", "2", "--grid", "1/20",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_weak_ic_passes_on_distinct_bids() {
    let out = admission(&[
        "verify", "--suite", "weak-ic", "--mech", "abar", "--n", "2", "--grid", "1/20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout_of(&out);
    assert!(line.contains("\"property_id\":\"weak_incentive_compatibility\""));
}

#[test]
fn verify_random_scalability_sweep_passes() {
    let out = admission(&[
        "verify",
        "--suite",
        "scalability",
        "--random",
        "300",
        "--n",
        "6",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_win_interval_against_fixed_others() {
    let out = admission(&[
        "verify",
        "--suite",
        "win-interval",
        "--bids",
        &fixture("two_high.json"),
        "--grid",
        "1/100",
        "--drop",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("\"passed\":true"));
}

#[test]
fn verify_anonymity_and_all_or_none_on_a_file() {
    for suite in ["anonymity", "all-or-none", "feasibility"] {
        let out = admission(&[
            "verify",
            "--suite",
            suite,
            "--mech",
            "abar",
            "--bids",
            &fixture("example1.json"),
        ]);
        assert_eq!(out.status.code(), Some(0), "suite {suite}");
    }
}

#[test]
fn verify_monotonicity_small_grid() {
    let out = admission(&[
        "verify",
        "--suite",
        "monotonicity",
        "--mech",
        "abar",
        "--n",
        "2",
        "--grid",
        "1/10",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_without_profile_source_exits_2() {
    let out = admission(&["verify", "--suite", "feasibility", "--mech", "abar"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("invalid_parameter"));
}

#[test]
fn experiment_tight_instance_reports_the_construction() {
    let out = admission(&["experiment", "tight-instance", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout_of(&out);
    assert!(line.contains("\"profile\":[\"0\",\"0\",\"0\",\"0.5\",\"0.5\"]"), "{line}");
    assert!(line.contains("\"abar\":2"), "{line}");
    assert!(line.contains("\"t\":5"), "{line}");
    assert!(line.contains("\"passed\":true"), "{line}");
}

#[test]
fn experiment_worst_case_validates_parameters() {
    let good = admission(&["experiment", "worst-case", "--n", "3", "--m", "2"]);
    assert_eq!(good.status.code(), Some(0));
    let line = stdout_of(&good);
    assert!(line.contains("\"astar\":0"));
    assert!(line.contains("\"f\":2"));

    let bad = admission(&["experiment", "worst-case", "--n", "2", "--m", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn experiment_divergence_writes_reproducible_artifacts() {
    let dir = std::env::temp_dir().join("admission-cli-test-divergence");
    let _ = std::fs::remove_dir_all(&dir);
    let args = [
        "experiment",
        "divergence",
        "--n",
        "4",
        "--d",
        "0.01",
        "--samples",
        "2000",
        "--seed",
        "42",
        "--out",
        dir.to_str().unwrap(),
    ];
    let first = admission(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(stdout_of(&first).contains("\"analytic_bound\":\"0.04\""));
    assert!(stdout_of(&first).contains("\"within_bound\":true"));
    let csv_first = std::fs::read_to_string(dir.join("divergence.csv")).unwrap();
    assert!(csv_first.starts_with("sample,divergent\n"));
    assert_eq!(csv_first.lines().count(), 2001);

    let second = admission(&args);
    assert_eq!(first.stdout, second.stdout);
    let csv_second = std::fs::read_to_string(dir.join("divergence.csv")).unwrap();
    assert_eq!(csv_first, csv_second);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn experiment_sweep_appends_exact_means() {
    let dir = std::env::temp_dir().join("admission-cli-test-sweep");
    let _ = std::fs::remove_dir_all(&dir);
    let out = admission(&[
        "experiment",
        "sweep",
        "--n",
        "1",
        "--samples",
        "10",
        "--seed",
        "5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert!(csv.starts_with("sample,abar,astar,f,t\n"));
    assert!(csv.ends_with("mean,1,1,1,1\n"));
    let _ = std::fs::remove_dir_all(&dir);
}
