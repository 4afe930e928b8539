//! All aggregation rules head to head on two synthetic vote streams: one
//! with a single perfect expert hiding among coin-flippers, one where the
//! informative expert flips mid-stream (a hard concept drift).
//!
//! Run with: cargo run --example baseline_shootout

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pwm_ensemble::aggregators::{
    average_majority, BlumState, PwmState, TrackExpState, WmState,
};
use pwm_ensemble::types::{BinaryLabel, PredictionVector};

fn coin(rng: &mut ChaCha8Rng) -> BinaryLabel {
    if rng.gen::<bool>() {
        BinaryLabel::Plus
    } else {
        BinaryLabel::Minus
    }
}

/// votes[expert] tracks the label (or its negation after the flip); the
/// rest are independent coins
fn make_trace(
    n: usize,
    k: usize,
    expert: usize,
    flip_at: Option<usize>,
    seed: u64,
) -> Vec<(PredictionVector, BinaryLabel)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|slot| {
            let label = coin(&mut rng);
            let votes: Vec<BinaryLabel> = (0..k)
                .map(|i| {
                    if i != expert {
                        coin(&mut rng)
                    } else if flip_at.is_some_and(|f| slot >= f) {
                        label.flipped()
                    } else {
                        label
                    }
                })
                .collect();
            (PredictionVector::from_labels(&votes), label)
        })
        .collect()
}

fn shootout(name: &str, trace: &[(PredictionVector, BinaryLabel)], k: usize) {
    let mut pwm = PwmState::new(k);
    let mut wm = WmState::new(k, 0.5).unwrap();
    let mut blum = BlumState::new(k, 0.5, 1.5).unwrap();
    let mut trackexp = TrackExpState::new(k, 0.5, 0.25).unwrap();
    let mut mistakes = [0u64; 5];
    for (s, y) in trace {
        if pwm.predict(s).unwrap() != *y {
            mistakes[0] += 1;
        }
        pwm.update(s, *y).unwrap();
        if wm.step(s, *y).unwrap() != *y {
            mistakes[1] += 1;
        }
        if blum.step(s, *y).unwrap() != *y {
            mistakes[2] += 1;
        }
        if trackexp.step(s, *y).unwrap() != *y {
            mistakes[3] += 1;
        }
        if average_majority(s).unwrap() != *y {
            mistakes[4] += 1;
        }
    }
    println!("{name} ({} slots):", trace.len());
    for (scheme, m) in ["pwm", "wm", "blum", "trackexp", "am"].iter().zip(mistakes) {
        println!(
            "  {scheme:<9} {m:>4} mistakes ({:.1}%)",
            100.0 * m as f64 / trace.len() as f64
        );
    }
    println!("  final additive weights: {:?}", pwm.weights().weights());
}

fn main() {
    let k = 5;
    shootout(
        "one perfect expert among coins",
        &make_trace(1000, k, 2, None, 7),
        k,
    );
    println!();
    shootout(
        "expert turns adversarial at slot 500",
        &make_trace(1000, k, 2, Some(500), 7),
        k,
    );
    println!();
    println!("after the flip the additive rule drives the expert's weight");
    println!("negative and recovers; multiplicative rules can only shrink it.");
}
