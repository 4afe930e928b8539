//! Minimal tour of the core aggregator: integer weights, sign predictions,
//! and mistake-driven additive updates on a hand-written vote sequence.
//!
//! Run with: cargo run --example pwm_walkthrough

use pwm_ensemble::aggregators::PwmState;
use pwm_ensemble::types::{BinaryLabel, PredictionVector};

fn main() -> pwm_ensemble::Result<()> {
    // three learners; learner 3 is consistently wrong, which earns it a
    // negative weight that the ensemble then exploits
    let rounds = [
        ([1, 1, -1], 1),
        ([1, -1, -1], 1),
        ([-1, 1, 1], -1),
        ([1, 1, -1], 1),
        ([-1, -1, 1], -1),
        ([1, -1, -1], 1),
        ([-1, 1, 1], -1),
        ([1, 1, -1], 1),
    ];

    let mut state = PwmState::new(3);
    println!("slot  votes        label  prediction  weights after update");
    for (slot, (votes, label)) in rounds.iter().enumerate() {
        let labels: Vec<BinaryLabel> = votes
            .iter()
            .map(|&v| BinaryLabel::from_value(v))
            .collect::<pwm_ensemble::Result<_>>()?;
        let s = PredictionVector::from_labels(&labels);
        let y = BinaryLabel::from_value(*label)?;
        let prediction = state.predict(&s)?;
        let updated = state.update(&s, y)?;
        println!(
            "{:>4}  {:>2} {:>2} {:>2}    {:>2}     {:>2} {}      {:?}",
            slot + 1,
            votes[0],
            votes[1],
            votes[2],
            label,
            prediction.value(),
            if updated { "(update)" } else { "        " },
            state.weights().weights(),
        );
    }

    println!();
    println!("final weights: {:?}", state.weights().weights());
    println!("learner 3 voted against the label every round and now carries");
    println!("a negative weight, contributing as if it were always right.");
    Ok(())
}
