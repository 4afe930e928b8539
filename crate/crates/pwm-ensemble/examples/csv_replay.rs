//! External data and replay debugging: ingest a CSV file through a schema,
//! run an experiment on it, export the event trace, and re-run the trace to
//! identical metrics.
//!
//! Run with: cargo run --example csv_replay

use std::io::Write;

use pwm_ensemble::config::ExperimentConfig;
use pwm_ensemble::environment::AggregatorKind;
use pwm_ensemble::experiment::{build_events, replay, run_on_events};
use pwm_ensemble::trace::{export_trace, import_trace};

fn main() -> pwm_ensemble::Result<()> {
    let dir = std::env::temp_dir().join("pwm-ensemble-csv-example");
    std::fs::create_dir_all(&dir)?;

    // a small two-learner data set: learner 1's column tracks the label,
    // learner 2's is noise
    let csv_path = dir.join("events.csv");
    let mut file = std::fs::File::create(&csv_path)?;
    writeln!(file, "sensor_a,sensor_b,outcome")?;
    for i in 0..200 {
        let y = if (i * 7) % 3 == 0 { 1 } else { 0 };
        let a = if y == 1 { 0.8 } else { -0.6 } + (i % 5) as f64 * 0.01;
        let b = ((i * 13) % 11) as f64 / 11.0 - 0.5;
        writeln!(file, "{a},{b},{y}")?;
    }

    let schema_path = dir.join("schema.toml");
    std::fs::write(
        &schema_path,
        r#"
            label_column = "outcome"
            label_encoding = "zero_one"

            [[learners]]
            columns = ["sensor_a"]

            [[learners]]
            columns = ["sensor_b"]
        "#,
    )?;

    let config = ExperimentConfig::from_toml_str(&format!(
        r#"
        schema_version = 1

        [stream]
        kind = "csv"
        path = {csv_path:?}
        schema = {schema_path:?}

        [classifier]
        kind = "logistic"

        [run]
        n = 200
        aggregators = ["pwm"]
        seeds = {{ list = [0] }}
    "#
    ))?;

    let events = build_events(&config, None, 0)?;
    let (record, outcome) = run_on_events(&config, &events, AggregatorKind::Pwm, None, 0)?;
    println!("ingested {} rows from {}", events.len(), csv_path.display());
    println!(
        "ensemble error {:.4}, best-classifier error {:.4}",
        record.system_error, record.p_star
    );

    let trace_path = dir.join("trace.jsonl");
    export_trace(&trace_path, &events)?;
    println!(
        "exported {} events to {}",
        import_trace(&trace_path)?.len(),
        trace_path.display()
    );

    let (replayed, replayed_outcome) = replay(&trace_path, &config)?;
    assert_eq!(outcome.metrics, replayed_outcome.metrics);
    println!(
        "replay reproduced the metrics exactly (error {:.4})",
        replayed.system_error
    );
    Ok(())
}
