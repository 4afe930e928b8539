//! Asynchronous learners: instances arrive with per-learner probability;
//! absent learners abstain (their vote enters as zero) and the extended
//! aggregator keeps separate weight vectors for fully-synchronized and
//! partially-observed slots. Sweeps the arrival probability and reports the
//! realized synchronization index alongside its bound.
//!
//! Run with: cargo run --release --example async_learners

use pwm_ensemble::config::ExperimentConfig;
use pwm_ensemble::environment::AggregatorKind;
use pwm_ensemble::experiment::single_run;

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

        [classifier]
        kind = "threshold"

        [run]
        n = 4000
        aggregators = ["epwm", "alone"]
        seeds = { count = 20, base = 0 }

        [sweep]
        variable = "arrival_prob"
        grid = [0.5, 0.7, 0.9, 1.0]
    "#,
    )?;
    let seeds = config.run.seeds.seeds();

    println!(
        "noiseless event detection under partial arrivals, {} seeds",
        seeds.len()
    );
    println!("(alpha = fraction of slots missing at least one learner)");
    println!();
    println!("arrival  ensemble  alone    alpha    bound (B + alpha)");
    for &p in &config.sweep.as_ref().unwrap().grid.clone() {
        let (mut ensemble, mut alone, mut alpha) = (0.0, 0.0, 0.0);
        let mut bound = (0.0, 0usize);
        for &seed in &seeds {
            let (record, _) = single_run(&config, AggregatorKind::ExtendedPwm, Some(p), seed)?;
            ensemble += record.system_error;
            alpha += record.alpha;
            if let Some(b) = record.bound_async.or(record.bound_b) {
                bound.0 += b;
                bound.1 += 1;
            }
            alone += single_run(&config, AggregatorKind::Alone, Some(p), seed)?
                .0
                .learner1_error;
        }
        let count = seeds.len() as f64;
        println!(
            "{p:<7.2}  {:.4}    {:.4}   {:.4}   {:.4}",
            ensemble / count,
            alone / count,
            alpha / count,
            bound.0 / bound.1 as f64
        );
    }
    println!();
    println!("unlike delays or missing labels, desynchronization leaves a");
    println!("residual error floor: absent votes are information gone for good.");
    Ok(())
}
