//! Domain types shared by every other module: labels, local predictions,
//! prediction/weight vectors, and the sign convention used throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binary class label. There is no third value; "0" is not a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinaryLabel {
    Minus,
    Plus,
}

impl BinaryLabel {
    pub fn value(self) -> i64 {
        match self {
            BinaryLabel::Minus => -1,
            BinaryLabel::Plus => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            BinaryLabel::Minus => BinaryLabel::Plus,
            BinaryLabel::Plus => BinaryLabel::Minus,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            1 => Ok(BinaryLabel::Plus),
            -1 => Ok(BinaryLabel::Minus),
            other => Err(Error::InvalidArgument(format!(
                "label value must be -1 or +1, got {other}"
            ))),
        }
    }
}

/// The sign convention of the decision rule: `sign(0) = +1`.
pub fn sign(v: f64) -> Result<BinaryLabel> {
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "sign of non-finite value {v}"
        )));
    }
    Ok(if v >= 0.0 {
        BinaryLabel::Plus
    } else {
        BinaryLabel::Minus
    })
}

/// Integer counterpart of [`sign`], used where the aggregation score is an
/// exact integer.
pub fn sign_i64(v: i64) -> BinaryLabel {
    if v >= 0 {
        BinaryLabel::Plus
    } else {
        BinaryLabel::Minus
    }
}

/// One learner's local prediction. `Abstain` exists only for the
/// asynchronous setting; synchronous paths reject it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalPrediction {
    Label(BinaryLabel),
    Abstain,
}

impl LocalPrediction {
    /// Encoding used inside prediction vectors: -1, 0 (abstain), or +1.
    pub fn entry(self) -> i8 {
        match self {
            LocalPrediction::Label(l) => l.value() as i8,
            LocalPrediction::Abstain => 0,
        }
    }
}

/// The shared `(K+1)`-entry local prediction vector. Entry 0 is the virtual
/// learner and is always `+1`; entries `1..=K` are `-1`, `+1`, or `0` when
/// that learner abstained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionVector {
    entries: Vec<i8>,
}

impl PredictionVector {
    /// Build from per-learner predictions (abstentions allowed).
    pub fn from_predictions(predictions: &[LocalPrediction]) -> Self {
        let mut entries = Vec::with_capacity(predictions.len() + 1);
        entries.push(1);
        entries.extend(predictions.iter().map(|p| p.entry()));
        PredictionVector { entries }
    }

    /// Build from definite per-learner labels (no abstentions).
    pub fn from_labels(labels: &[BinaryLabel]) -> Self {
        let mut entries = Vec::with_capacity(labels.len() + 1);
        entries.push(1);
        entries.extend(labels.iter().map(|l| l.value() as i8));
        PredictionVector { entries }
    }

    /// Build from raw entries including the leading virtual-learner entry.
    pub fn from_entries(entries: Vec<i8>) -> Result<Self> {
        if entries.first() != Some(&1) {
            return Err(Error::InvalidArgument(
                "entry 0 of a prediction vector must be +1".into(),
            ));
        }
        if entries.iter().any(|&e| !(-1..=1).contains(&e)) {
            return Err(Error::InvalidArgument(
                "prediction vector entries must be -1, 0, or +1".into(),
            ));
        }
        Ok(PredictionVector { entries })
    }

    /// Number of learners `K` (the virtual entry is not counted).
    pub fn learner_count(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// Entry for learner `i` in `1..=K`.
    pub fn learner_entry(&self, i: usize) -> i8 {
        self.entries[i]
    }

    pub fn has_abstentions(&self) -> bool {
        self.entries[1..].contains(&0)
    }

    /// Copy containing only the virtual entry and the first `keep` learners.
    /// Models an aggregator that listens to a subset of the ensemble.
    pub fn take_first(&self, keep: usize) -> Self {
        PredictionVector {
            entries: self.entries[..=keep.min(self.learner_count())].to_vec(),
        }
    }
}

/// Integer aggregation weights `(w_0, ..., w_K)` of one learner. Entries stay
/// integers forever: an update adds `-1`, `0`, or `+1` per entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    weights: Vec<i64>,
}

impl WeightVector {
    /// All-zero vector for `k` learners plus the virtual entry.
    pub fn zeros(k: usize) -> Self {
        WeightVector {
            weights: vec![0; k + 1],
        }
    }

    pub fn from_weights(weights: Vec<i64>) -> Self {
        WeightVector { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Sum of absolute weights; bounds the attainable score magnitude.
    pub fn l1_norm(&self) -> i64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    /// Add `y * s` to every entry (the mistake-driven update step).
    pub(crate) fn add_scaled(&mut self, s: &PredictionVector, y: BinaryLabel) {
        for (w, &e) in self.weights.iter_mut().zip(s.entries()) {
            *w += y.value() * e as i64;
        }
    }

    /// Same update but leaving entry 0 untouched (bias-free variant).
    pub(crate) fn add_scaled_no_bias(&mut self, s: &PredictionVector, y: BinaryLabel) {
        for (w, &e) in self.weights.iter_mut().zip(s.entries()).skip(1) {
            *w += y.value() * e as i64;
        }
    }
}

/// Signed integer inner product of a weight vector and a prediction vector.
/// Abstain entries contribute nothing.
pub fn inner_product(w: &WeightVector, s: &PredictionVector) -> Result<i64> {
    if w.len() != s.entries().len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            got: s.entries().len(),
        });
    }
    Ok(w.weights()
        .iter()
        .zip(s.entries())
        .map(|(&w, &e)| w * e as i64)
        .sum())
}

/// One learner's observation for one time slot, with the shared label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledInstance {
    /// Slot index, starting at 1.
    pub time_slot: u64,
    pub features: Vec<f64>,
    pub label: BinaryLabel,
}
