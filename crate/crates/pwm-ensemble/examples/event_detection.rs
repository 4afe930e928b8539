//! Concept-drift experiment: each learner monitors its own rare event
//! through noise whose level follows a hidden two-state Markov chain.
//! Compares the additive-update ensemble against the multiplicative
//! baselines and against predicting alone.
//!
//! Run with: cargo run --release --example event_detection

use pwm_ensemble::config::ExperimentConfig;
use pwm_ensemble::experiment::{build_events, run_on_events};

fn main() -> pwm_ensemble::Result<()> {
    let config = ExperimentConfig::from_toml_str(
        r#"
        schema_version = 1

        [stream]
        kind = "s2"
        k = 8

        [classifier]
        kind = "logistic"

        [run]
        n = 5000
        aggregators = ["pwm", "pwm_no_bias", "wm", "blum", "trackexp", "am", "alone"]
        seeds = { count = 10, base = 0 }
    "#,
    )?;

    let seeds = config.run.seeds.seeds();
    let aggregators: Vec<_> = config
        .run
        .aggregators
        .iter()
        .map(|name| config.aggregator_params.parse_aggregator(name))
        .collect::<pwm_ensemble::Result<_>>()?;

    println!(
        "distributed event detection, 8 learners, {} slots, {} seeds",
        config.run.n,
        seeds.len()
    );
    println!();
    println!("aggregator    mean error   mean drifts seen");
    for aggregator in aggregators {
        let mut error = 0.0;
        let mut concepts = 0usize;
        for &seed in &seeds {
            let events = build_events(&config, None, seed)?;
            let (record, _) = run_on_events(&config, &events, aggregator, None, seed)?;
            error += record.learner1_error;
            concepts += record.concepts;
        }
        println!(
            "{:<12}  {:.4}       {:.1}",
            aggregator.name(),
            error / seeds.len() as f64,
            concepts as f64 / seeds.len() as f64
        );
    }
    Ok(())
}
