//! Offline oracle for the best static aggregation rule in hindsight.
//!
//! Exhaustively enumerates every integer weight vector in
//! `[-weight_cap, weight_cap]^(K+1)` and returns a mistake minimizer over
//! the given trace. Every linear-threshold rule over at most four binary
//! votes is realizable with integer weights within cap 5, so in that regime
//! the result is the true optimum; outside it the count is still a valid
//! upper estimate of the optimal mistakes.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::types::{BinaryLabel, PredictionVector, WeightVector};

/// Maximum number of candidate weight vectors a single oracle call may
/// enumerate.
pub const ENUMERATION_BUDGET: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticOracleResult {
    /// Lexicographically smallest mistake minimizer found.
    pub optimal_weights: WeightVector,
    pub mistakes: u64,
    /// True when the enumeration provably covers the optimum.
    pub exact: bool,
}

/// Regime in which the enumeration is declared to find the true optimum.
pub fn exact_regime(k: usize, weight_cap: i64) -> bool {
    k <= 4 && weight_cap >= 5
}

pub fn optimal_static_oracle(
    trace: &[(PredictionVector, BinaryLabel)],
    weight_cap: i64,
) -> Result<StaticOracleResult> {
    if trace.is_empty() {
        return Err(Error::InvalidArgument("empty trace".into()));
    }
    if weight_cap < 1 {
        return Err(Error::InvalidArgument(format!(
            "weight_cap must be >= 1, got {weight_cap}"
        )));
    }
    let k = trace[0].0.learner_count();
    let dims = k + 1;
    for (s, _) in trace {
        if s.learner_count() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                got: s.learner_count(),
            });
        }
        if s.has_abstentions() {
            return Err(Error::AbstentionNotAllowed);
        }
    }
    let span = 2 * weight_cap as u128 + 1;
    let candidates = span.checked_pow(dims as u32).unwrap_or(u128::MAX);
    if candidates > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            candidates,
            limit: ENUMERATION_BUDGET,
        });
    }

    // Distinct vote patterns with their label counts; a trace of length N
    // collapses to at most 2^K patterns.
    let mut counts: HashMap<&[i8], (u64, u64)> = HashMap::new();
    for (s, y) in trace {
        let entry = counts.entry(s.entries()).or_insert((0, 0));
        match y {
            BinaryLabel::Plus => entry.0 += 1,
            BinaryLabel::Minus => entry.1 += 1,
        }
    }
    let patterns: Vec<(&[i8], u64, u64)> = counts
        .into_iter()
        .map(|(s, (plus, minus))| (s, plus, minus))
        .collect();

    // Odometer enumeration in lexicographic order, keeping partial inner
    // products per pattern so each step only recomputes the changed suffix.
    let mut weights = vec![-weight_cap; dims];
    // partial[p][d] = dot product of weights[..d] with pattern p
    let mut partial = vec![vec![0i64; dims + 1]; patterns.len()];
    let refresh = |weights: &[i64], partial: &mut Vec<Vec<i64>>, from: usize| {
        for (row, &(entries, _, _)) in partial.iter_mut().zip(&patterns) {
            for d in from..dims {
                row[d + 1] = row[d] + weights[d] * entries[d] as i64;
            }
        }
    };
    refresh(&weights, &mut partial, 0);

    let mut best_mistakes = u64::MAX;
    let mut best_weights = weights.clone();
    loop {
        let mut mistakes = 0;
        for (row, &(_, plus, minus)) in partial.iter().zip(&patterns) {
            let score = row[dims];
            mistakes += if score >= 0 { minus } else { plus };
            if mistakes >= best_mistakes {
                break;
            }
        }
        // strict improvement keeps the first (lexicographically smallest)
        // minimizer
        if mistakes < best_mistakes {
            best_mistakes = mistakes;
            best_weights.copy_from_slice(&weights);
            if mistakes == 0 {
                break;
            }
        }
        // advance the odometer
        let mut pos = dims;
        while pos > 0 && weights[pos - 1] == weight_cap {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        weights[pos - 1] += 1;
        for w in weights.iter_mut().skip(pos) {
            *w = -weight_cap;
        }
        refresh(&weights, &mut partial, pos - 1);
    }

    Ok(StaticOracleResult {
        optimal_weights: WeightVector::from_weights(best_weights),
        mistakes: best_mistakes,
        exact: exact_regime(k, weight_cap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vector(entries: &[i8]) -> PredictionVector {
        PredictionVector::from_entries(entries.to_vec()).unwrap()
    }

    fn label(v: i64) -> BinaryLabel {
        BinaryLabel::from_value(v).unwrap()
    }

    #[test]
    fn perfect_learner_gives_zero_mistakes() {
        // learner 1 always equals the label
        let trace: Vec<_> = [(1i64, -1i64), (-1, 1), (1, 1), (-1, -1)]
            .into_iter()
            .map(|(a, b)| {
                (
                    vector(&[1, b as i8, a as i8]),
                    label(b),
                )
            })
            .collect();
        let r = optimal_static_oracle(&trace, 5).unwrap();
        assert_eq!(r.mistakes, 0);
        assert!(r.exact);
    }

    #[test]
    fn xor_trace_costs_exactly_one_mistake() {
        let trace = vec![
            (vector(&[1, 1, 1]), label(-1)),
            (vector(&[1, 1, -1]), label(1)),
            (vector(&[1, -1, 1]), label(1)),
            (vector(&[1, -1, -1]), label(-1)),
        ];
        let r = optimal_static_oracle(&trace, 3).unwrap();
        assert_eq!(r.mistakes, 1);
    }

    #[test]
    fn single_instance_is_always_fit() {
        let trace = vec![(vector(&[1, -1, 1, -1]), label(-1))];
        let r = optimal_static_oracle(&trace, 5).unwrap();
        assert_eq!(r.mistakes, 0);
    }

    #[test]
    fn tie_break_is_lexicographically_smallest() {
        // every weight vector that predicts +1 on (1,1) fits; the smallest
        // in enumeration order is (-cap, cap): score = -cap + cap = 0 -> +1
        let trace = vec![(vector(&[1, 1]), label(1))];
        let r = optimal_static_oracle(&trace, 2).unwrap();
        assert_eq!(r.mistakes, 0);
        assert_eq!(r.optimal_weights.weights(), &[-2, 2]);
    }

    #[test]
    fn budget_is_enforced_with_advice() {
        let trace = vec![(
            PredictionVector::from_labels(&[BinaryLabel::Plus; 8]),
            label(1),
        )];
        match optimal_static_oracle(&trace, 5) {
            Err(Error::BudgetExceeded { candidates, .. }) => {
                assert_eq!(candidates, 11u128.pow(9));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn inputs_are_validated() {
        assert!(optimal_static_oracle(&[], 5).is_err());
        let trace = vec![(vector(&[1, 0, 1]), label(1))];
        assert!(matches!(
            optimal_static_oracle(&trace, 5),
            Err(Error::AbstentionNotAllowed)
        ));
        let trace = vec![(vector(&[1, 1, 1]), label(1))];
        assert!(optimal_static_oracle(&trace, 0).is_err());
    }

    #[test]
    fn exactness_flag_tracks_the_declared_regime() {
        let trace = vec![(
            PredictionVector::from_labels(&[BinaryLabel::Plus; 5]),
            label(1),
        )];
        let r = optimal_static_oracle(&trace, 2).unwrap();
        assert!(!r.exact);
        assert!(exact_regime(4, 5));
        assert!(!exact_regime(5, 5));
        assert!(!exact_regime(4, 4));
    }

    fn arb_trace(k: usize, len: usize) -> impl Strategy<Value = Vec<(PredictionVector, BinaryLabel)>> {
        prop::collection::vec(
            (prop::collection::vec(prop::bool::ANY, k), prop::bool::ANY),
            1..=len,
        )
        .prop_map(|items| {
            items
                .into_iter()
                .map(|(votes, y)| {
                    let labels: Vec<BinaryLabel> = votes
                        .into_iter()
                        .map(|b| if b { BinaryLabel::Plus } else { BinaryLabel::Minus })
                        .collect();
                    (
                        PredictionVector::from_labels(&labels),
                        if y { BinaryLabel::Plus } else { BinaryLabel::Minus },
                    )
                })
                .collect()
        })
    }

    proptest! {
        // the oracle is at least as good as following any single classifier
        #[test]
        fn oracle_beats_the_best_single_classifier(trace in arb_trace(3, 30)) {
            let r = optimal_static_oracle(&trace, 5).unwrap();
            let (_, p_star, _) = crate::metrics::classifier_error_rates(&trace).unwrap();
            let best_single = (p_star * trace.len() as f64).round() as u64;
            prop_assert!(r.mistakes <= best_single);
        }

        // a static rule's mistake count does not depend on trace order
        #[test]
        fn oracle_is_permutation_invariant(trace in arb_trace(2, 20), seed in 0u64..1000) {
            let r1 = optimal_static_oracle(&trace, 4).unwrap();
            let mut shuffled = trace.clone();
            // cheap deterministic shuffle
            let n = shuffled.len();
            for i in 0..n {
                let j = ((seed as usize).wrapping_mul(31).wrapping_add(i * 17)) % n;
                shuffled.swap(i, j);
            }
            let r2 = optimal_static_oracle(&shuffled, 4).unwrap();
            prop_assert_eq!(r1.mistakes, r2.mistakes);
            prop_assert_eq!(r1.optimal_weights, r2.optimal_weights);
        }
    }
}
