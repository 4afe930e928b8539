//! Recovery after a hard concept drift: a noiseless event-detection stream
//! whose label rule inverts mid-run. Tracks the ensemble's cumulative
//! mistake rate through the flip; the relearning burst is a fixed cost, so
//! the rate decays again on the new concept.
//!
//! Run with: cargo run --example concept_drift_recovery

use pwm_ensemble::aggregators::PwmState;
use pwm_ensemble::classifiers::{LocalClassifier, ThresholdClassifier};
use pwm_ensemble::config::ExperimentConfig;
use pwm_ensemble::environment::{run_learners, AggregatorKind, HarnessConfig};
use pwm_ensemble::experiment::build_events;

fn main() -> pwm_ensemble::Result<()> {
    let config = ExperimentConfig::from_toml_str(
        r#"
        schema_version = 1

        [stream]
        kind = "s2"
        k = 4
        noise_good = 0.0
        noise_bad = 0.0
        switch_prob = 0.0
        flip_label_at = 1500

        [classifier]
        kind = "threshold"

        [run]
        n = 3000
        aggregators = ["pwm"]
        seeds = { list = [3] }
    "#,
    )?;
    let events = build_events(&config, None, 3)?;
    let mut factory =
        |_: usize| Ok(Box::new(ThresholdClassifier::new(0)) as Box<dyn LocalClassifier>);
    let outcome = run_learners(
        &events,
        &HarnessConfig::new(AggregatorKind::Pwm),
        &mut factory,
    )?;

    // replay the recorded vote trace through a fresh aggregator to show the
    // running mistake rate around the drift
    let mut state = PwmState::new(4);
    let mut mistakes = 0u64;
    println!("slot   cum. rate   weights");
    for (i, (s, y)) in outcome.vote_trace.iter().enumerate() {
        if state.predict(s)? != *y {
            mistakes += 1;
        }
        state.update(s, *y)?;
        let slot = i as u64 + 1;
        if slot.is_multiple_of(500) || slot == 1600 {
            println!(
                "{slot:>5}  {:.4}      {:?}",
                mistakes as f64 / slot as f64,
                state.weights().weights()
            );
        }
    }

    println!();
    println!("per-concept totals (all learners):");
    for (concept, stats) in &outcome.metrics.per_concept {
        println!(
            "  concept {concept}: {} slots, {} ensemble mistakes",
            stats.slots, stats.system_mistakes
        );
    }
    println!();
    println!("overall error {:.4}", outcome.metrics.system_error);
    Ok(())
}
