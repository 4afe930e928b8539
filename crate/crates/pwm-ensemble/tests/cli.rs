//! End-to-end tests of the command-line interface.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pwm-ensemble"))
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

const SMALL_CONFIG: &str = r#"
schema_version = 1

[stream]
kind = "s3"
k = 3
mu = 1.0

[classifier]
kind = "threshold"

[run]
n = 120
aggregators = ["pwm", "am"]
seeds = { count = 3, base = 5 }

[output]
export_traces = true
"#;

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn bounds_prints_every_applicable_bound() {
    let output = bin()
        .args([
            "bounds", "--k", "8", "--n", "20000", "--p-opt", "0", "--p-star", "0", "--v-star",
            "8", "--max-delay", "20", "--alpha", "0.25",
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("B1 0.003600"), "{text}");
    // (K+1)/(N v*) = 9/160000
    assert!(text.contains("B2 0.000056"), "{text}");
    assert!(text.contains("B  0.000056"), "{text}");
    // 0.000056 + 20/20000
    assert!(text.contains("B_delayed 0.001056"), "{text}");
    assert!(text.contains("B_async 0.250056"), "{text}");
}

#[test]
fn bounds_not_applicable_uses_a_distinct_exit_code() {
    let output = bin()
        .args([
            "bounds",
            "--k",
            "4",
            "--n",
            "1000",
            "--p-opt",
            "0.1",
            "--label-prob",
            "0.2",
            "--observed-errors",
            "10",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3), "{}", stderr(&output));
    assert!(stdout(&output).contains("not applicable"));
}

#[test]
fn bounds_rejects_out_of_range_inputs() {
    let output = bin()
        .args(["bounds", "--k", "4", "--n", "1000", "--p-opt", "1.5"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("p_opt"));
}

#[test]
fn run_produces_versioned_result_files_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let output = bin()
            .args(["run"])
            .arg(&config)
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert!(output.status.success(), "{}", stderr(&output));
    }
    let runs_a = std::fs::read_to_string(out_a.join("runs.csv")).unwrap();
    let runs_b = std::fs::read_to_string(out_b.join("runs.csv")).unwrap();
    assert_eq!(runs_a, runs_b);
    assert!(runs_a.starts_with("schema_version,"));
    // 2 aggregators x 3 seeds data rows plus the header
    assert_eq!(runs_a.lines().count(), 7);
    assert!(out_a.join("summary.csv").exists());
    assert!(out_a.join("trace-seed5.jsonl").exists());
}

#[test]
fn run_reports_config_errors_with_the_offending_key() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &SMALL_CONFIG.replace("[run]", "unknown_key = true\n[run]"),
    );
    let output = bin().args(["run"]).arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("unknown_key"), "{}", stderr(&output));
}

#[test]
fn out_dir_falls_back_to_the_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out = dir.path().join("from-env");
    let output = bin()
        .args(["run"])
        .arg(&config)
        .env("PWM_ENSEMBLE_OUT", &out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(out.join("runs.csv").exists());
}

#[test]
fn replay_reproduces_the_recorded_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out = dir.path().join("out");
    let output = bin()
        .args(["run"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));

    let replayed = bin()
        .args(["replay"])
        .arg(out.join("trace-seed5.jsonl"))
        .arg(&config)
        .output()
        .unwrap();
    assert!(replayed.status.success(), "{}", stderr(&replayed));
    let text = stdout(&replayed);

    // the replayed system error must equal the recorded one for seed 5 / pwm
    let runs = std::fs::read_to_string(out.join("runs.csv")).unwrap();
    let recorded: Vec<&str> = runs
        .lines()
        .find(|l| l.contains(",pwm,5,"))
        .unwrap()
        .split(',')
        .collect();
    // columns: schema_version, sweep_variable, sweep_value, aggregator, seed,
    // n, learners, aggregated, system_error, ...
    let recorded_error: f64 = recorded[8].parse().unwrap();
    let replayed_error: f64 = text
        .lines()
        .find(|l| l.starts_with("system_error"))
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    // the CLI prints six decimals
    assert!(
        (recorded_error - replayed_error).abs() < 5e-7,
        "recorded {recorded_error} vs replayed {replayed_error}"
    );
}

#[test]
fn replay_supports_a_different_aggregator_on_the_same_events() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out = dir.path().join("out");
    bin()
        .args(["run"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();

    // same events, different aggregation rule: a valid comparative run
    let am_config = write_config(
        &dir.path().join("."),
        &SMALL_CONFIG.replace("[\"pwm\", \"am\"]", "[\"am\"]"),
    );
    let output = bin()
        .args(["replay"])
        .arg(out.join("trace-seed5.jsonl"))
        .arg(&am_config)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("aggregator      am"), "{}", stdout(&output));
}

#[test]
fn replay_rejects_unsupported_versions() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out = dir.path().join("out");
    bin()
        .args(["run"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    let trace = out.join("trace-seed5.jsonl");
    let text = std::fs::read_to_string(&trace).unwrap();
    std::fs::write(&trace, text.replacen("\"version\":1", "\"version\":9", 1)).unwrap();
    let output = bin().args(["replay"]).arg(&trace).arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("version"), "{}", stderr(&output));
}
