//! The hindsight benchmark: exhaustive search for the integer weight vector
//! with the fewest mistakes on a recorded vote trace.
//!
//! Run with: cargo run --example static_oracle

use pwm_ensemble::aggregators::optimal_static_oracle;
use pwm_ensemble::metrics::classifier_error_rates;
use pwm_ensemble::types::{BinaryLabel, PredictionVector};

fn vector(entries: &[i8]) -> PredictionVector {
    PredictionVector::from_entries(entries.to_vec()).unwrap()
}

fn label(v: i64) -> BinaryLabel {
    BinaryLabel::from_value(v).unwrap()
}

fn main() -> pwm_ensemble::Result<()> {
    // parity-style trace: no single classifier is much better than chance,
    // yet one instance of the four patterns is unavoidable for any
    // hyperplane over the votes
    let parity = vec![
        (vector(&[1, 1, 1]), label(-1)),
        (vector(&[1, 1, -1]), label(1)),
        (vector(&[1, -1, 1]), label(1)),
        (vector(&[1, -1, -1]), label(-1)),
    ];
    let result = optimal_static_oracle(&parity, 5)?;
    let (rates, p_star, v_star) = classifier_error_rates(&parity)?;
    println!("parity trace over 2 learners:");
    println!("  per-classifier error rates: {rates:?} (best {p_star}, count {v_star})");
    println!(
        "  optimal static weights {:?}: {} mistakes out of {} (exact: {})",
        result.optimal_weights.weights(),
        result.mistakes,
        parity.len(),
        result.exact
    );

    // an always-wrong learner is as useful as an always-right one: the
    // oracle flips it with a negative weight
    let inverted = vec![
        (vector(&[1, -1, 1]), label(1)),
        (vector(&[1, 1, -1]), label(-1)),
        (vector(&[1, -1, -1]), label(1)),
        (vector(&[1, 1, 1]), label(-1)),
    ];
    let result = optimal_static_oracle(&inverted, 5)?;
    println!();
    println!("learner 1 always wrong, learner 2 uninformative:");
    println!(
        "  optimal static weights {:?}: {} mistakes (learner 1 inverted)",
        result.optimal_weights.weights(),
        result.mistakes
    );

    // enumeration cost grows exponentially with the learner count; the
    // budget guard turns a hopeless call into advice
    let wide = vec![(
        PredictionVector::from_labels(&[BinaryLabel::Plus; 9]),
        label(1),
    )];
    match optimal_static_oracle(&wide, 5) {
        Err(e) => println!("\n9 learners at cap 5: {e}"),
        Ok(_) => unreachable!(),
    }
    let narrow = optimal_static_oracle(&wide, 1)?;
    println!(
        "9 learners at cap 1 still enumerable: {} mistakes (exact: {})",
        narrow.mistakes, narrow.exact
    );
    Ok(())
}
