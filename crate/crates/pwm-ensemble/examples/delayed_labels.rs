//! Labels arriving late and out of order: the extended aggregator parks
//! prediction vectors until their label shows up, then replays the update
//! with its current weights. Sweeps the maximum delay and prints the
//! delayed-label bound next to the measured error.
//!
//! Run with: cargo run --release --example delayed_labels

use pwm_ensemble::config::ExperimentConfig;
use pwm_ensemble::environment::AggregatorKind;
use pwm_ensemble::experiment::{build_events, run_on_events};

fn main() -> pwm_ensemble::Result<()> {
    let config = ExperimentConfig::from_toml_str(
        r#"
        schema_version = 1

        [stream]
        kind = "s1"
        k = 4
        relevant = 4

        [classifier]
        kind = "logistic"

        [environment]
        max_delay = 0

        [run]
        n = 2000
        aggregators = ["epwm", "alone"]
        seeds = { count = 20, base = 0 }

        [sweep]
        variable = "max_delay"
        grid = [0.0, 5.0, 10.0, 20.0, 40.0]
    "#,
    )?;
    let seeds = config.run.seeds.seeds();

    println!("uniform label delays on a drifting stream, {} seeds", seeds.len());
    println!();
    println!("max_delay  ensemble  alone    delayed-bound");
    for &d in &config.sweep.as_ref().unwrap().grid.clone() {
        let (mut ensemble, mut alone, mut bound) = (0.0, 0.0, (0.0, 0usize));
        for &seed in &seeds {
            let events = build_events(&config, Some(d), seed)?;
            let (record, _) =
                run_on_events(&config, &events, AggregatorKind::ExtendedPwm, Some(d), seed)?;
            ensemble += record.system_error;
            alone += run_on_events(&config, &events, AggregatorKind::Alone, Some(d), seed)?
                .0
                .learner1_error;
            if let Some(b) = record.bound_delayed.or(record.bound_b) {
                bound.0 += b;
                bound.1 += 1;
            }
        }
        let count = seeds.len() as f64;
        println!(
            "{:>9}  {:.4}    {:.4}   {:.4}",
            d as u64,
            ensemble / count,
            alone / count,
            bound.0 / bound.1 as f64
        );
    }
    println!();
    println!("delays cost at most max_delay/N extra mistake probability.");
    Ok(())
}
