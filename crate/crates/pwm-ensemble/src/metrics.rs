//! Empirical mistake accounting, per learner and system-wide.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aggregators::StaticOracleResult;
use crate::error::{Error, Result};
use crate::types::{BinaryLabel, PredictionVector};

/// Slot and mistake counts for one concept segment.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptStats {
    pub slots: u64,
    /// Final-prediction mistakes summed over all learners in the segment.
    pub system_mistakes: u64,
}

/// Summary of an oracle call attached to a finished run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub error: f64,
    pub exact: bool,
    pub weights: Vec<i64>,
}

impl OracleSummary {
    pub fn new(result: &StaticOracleResult, n: u64) -> Self {
        OracleSummary {
            error: result.mistakes as f64 / n as f64,
            exact: result.exact,
            weights: result.optimal_weights.weights().to_vec(),
        }
    }
}

/// Everything measured over one finished run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub n: u64,
    pub k: usize,
    /// Final-prediction mistakes of each learner over all N slots.
    pub per_learner_mistakes: Vec<u64>,
    pub per_learner_error: Vec<f64>,
    /// Mean of the per-learner error rates.
    pub system_error: f64,
    /// Local-classifier disagreements with the ground truth.
    pub classifier_mistakes: Vec<u64>,
    pub classifier_error: Vec<f64>,
    /// Error rate of the most accurate local classifier.
    pub best_classifier_error: f64,
    /// How many classifiers achieve it.
    pub best_classifier_count: usize,
    /// Per learner: label observations that revealed a prediction error.
    pub observed_errors: Vec<u64>,
    /// Slots in which every learner observed an instance.
    pub sync_slots: u64,
    /// Synchronization index `(N - M) / N`.
    pub alpha: f64,
    pub per_concept: BTreeMap<u64, ConceptStats>,
    /// Filled in when the static-oracle pass ran.
    pub oracle: Option<OracleSummary>,
}

/// Exact per-classifier error rates from a vote trace, plus the best rate
/// and the number of classifiers achieving it (ties all counted).
pub fn classifier_error_rates(
    trace: &[(PredictionVector, BinaryLabel)],
) -> Result<(Vec<f64>, f64, usize)> {
    if trace.is_empty() {
        return Err(Error::InvalidArgument("empty trace".into()));
    }
    let k = trace[0].0.learner_count();
    let mut mistakes = vec![0u64; k];
    for (s, y) in trace {
        if s.learner_count() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                got: s.learner_count(),
            });
        }
        for (i, m) in mistakes.iter_mut().enumerate() {
            if s.learner_entry(i + 1) as i64 != y.value() {
                *m += 1;
            }
        }
    }
    let n = trace.len() as f64;
    let rates: Vec<f64> = mistakes.iter().map(|&m| m as f64 / n).collect();
    let best = rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let count = rates.iter().filter(|&&r| r == best).count();
    Ok((rates, best, count))
}

/// Raw counters accumulated by the harness while a run is in flight.
#[derive(Clone, Debug, Default)]
pub struct RunAccumulator {
    pub n: u64,
    pub k: usize,
    pub per_learner_mistakes: Vec<u64>,
    pub observed_errors: Vec<u64>,
    pub sync_slots: u64,
    pub per_concept: BTreeMap<u64, ConceptStats>,
}

impl RunAccumulator {
    pub fn new(k: usize) -> Self {
        RunAccumulator {
            k,
            per_learner_mistakes: vec![0; k],
            observed_errors: vec![0; k],
            ..Default::default()
        }
    }
}

/// Turn the accumulated counters and the realized vote trace into the final
/// metrics record.
pub fn finalize(
    acc: RunAccumulator,
    vote_trace: &[(PredictionVector, BinaryLabel)],
) -> Result<RunMetrics> {
    if acc.n == 0 {
        return Err(Error::InvalidArgument("run produced no slots".into()));
    }
    let n = acc.n as f64;
    let per_learner_error: Vec<f64> = acc
        .per_learner_mistakes
        .iter()
        .map(|&m| m as f64 / n)
        .collect();
    let system_error = per_learner_error.iter().sum::<f64>() / acc.k as f64;
    let (classifier_error, best_classifier_error, best_classifier_count) =
        classifier_error_rates(vote_trace)?;
    let classifier_mistakes = classifier_error
        .iter()
        .map(|r| (r * n).round() as u64)
        .collect();
    Ok(RunMetrics {
        n: acc.n,
        k: acc.k,
        per_learner_mistakes: acc.per_learner_mistakes,
        per_learner_error,
        system_error,
        classifier_mistakes,
        classifier_error,
        best_classifier_error,
        best_classifier_count,
        observed_errors: acc.observed_errors,
        sync_slots: acc.sync_slots,
        alpha: (acc.n - acc.sync_slots) as f64 / n,
        per_concept: acc.per_concept,
        oracle: None,
    })
}
