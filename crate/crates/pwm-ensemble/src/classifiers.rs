//! Pluggable local classifiers producing the per-learner predictions.
//!
//! Aggregators never look inside a classifier; the harness drives everything
//! through [`LocalClassifier`], so any conforming implementation can be
//! plugged in per learner.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{sign, BinaryLabel, LocalPrediction};

/// A local classifier owned by one learner. `predict` must not mutate state;
/// `learn` is the only mutator and may be a no-op for static classifiers.
pub trait LocalClassifier: Send {
    fn predict(&self, features: &[f64]) -> Result<LocalPrediction>;

    fn learn(&mut self, features: &[f64], label: BinaryLabel) -> Result<()>;

    /// Flat snapshot of the model parameters, for reproducible warm starts.
    fn snapshot(&self) -> Vec<f64>;

    fn restore(&mut self, snapshot: &[f64]) -> Result<()>;
}

/// Online logistic regression trained by single-sample gradient steps on the
/// logistic loss, with labels mapped -1 -> 0, +1 -> 1. Predicts `+1` exactly
/// when the linear score is non-negative (probability one half), matching
/// the shared sign convention.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OnlineLogisticRegression {
    coefficients: Vec<f64>,
    intercept: f64,
    learning_rate: f64,
}

/// Per-coordinate step clip; keeps coefficients finite on wild inputs.
const MAX_STEP: f64 = 10.0;

impl OnlineLogisticRegression {
    pub fn new(dimension: usize, learning_rate: f64) -> Result<Self> {
        if learning_rate <= 0.0 || !learning_rate.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "learning_rate must be positive, got {learning_rate}"
            )));
        }
        Ok(OnlineLogisticRegression {
            coefficients: vec![0.0; dimension],
            intercept: 0.0,
            learning_rate,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    fn score(&self, features: &[f64]) -> Result<f64> {
        if features.len() != self.coefficients.len() {
            return Err(Error::LengthMismatch {
                expected: self.coefficients.len(),
                got: features.len(),
            });
        }
        Ok(self.intercept
            + self
                .coefficients
                .iter()
                .zip(features)
                .map(|(c, x)| c * x)
                .sum::<f64>())
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl LocalClassifier for OnlineLogisticRegression {
    fn predict(&self, features: &[f64]) -> Result<LocalPrediction> {
        Ok(LocalPrediction::Label(sign(self.score(features)?)?))
    }

    fn learn(&mut self, features: &[f64], label: BinaryLabel) -> Result<()> {
        let p = sigmoid(self.score(features)?);
        let target = if label == BinaryLabel::Plus { 1.0 } else { 0.0 };
        let residual = target - p;
        let clip = |step: f64| step.clamp(-MAX_STEP, MAX_STEP);
        self.intercept += clip(self.learning_rate * residual);
        for (c, &x) in self.coefficients.iter_mut().zip(features) {
            *c += clip(self.learning_rate * residual * x);
        }
        Ok(())
    }

    fn snapshot(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.coefficients.len() + 2);
        out.push(self.learning_rate);
        out.push(self.intercept);
        out.extend_from_slice(&self.coefficients);
        out
    }

    fn restore(&mut self, snapshot: &[f64]) -> Result<()> {
        if snapshot.len() != self.coefficients.len() + 2 {
            return Err(Error::LengthMismatch {
                expected: self.coefficients.len() + 2,
                got: snapshot.len(),
            });
        }
        self.learning_rate = snapshot[0];
        self.intercept = snapshot[1];
        self.coefficients.copy_from_slice(&snapshot[2..]);
        Ok(())
    }
}

/// Static threshold on one feature dimension: predicts `+1` exactly when
/// `features[dimension_index] >= threshold`. `learn` is a no-op.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdClassifier {
    pub threshold: f64,
    pub dimension_index: usize,
}

impl ThresholdClassifier {
    pub fn new(dimension_index: usize) -> Self {
        ThresholdClassifier {
            threshold: 0.0,
            dimension_index,
        }
    }
}

impl LocalClassifier for ThresholdClassifier {
    fn predict(&self, features: &[f64]) -> Result<LocalPrediction> {
        let x = features.get(self.dimension_index).ok_or(Error::InvalidArgument(
            format!(
                "dimension index {} out of range for {} features",
                self.dimension_index,
                features.len()
            ),
        ))?;
        Ok(LocalPrediction::Label(sign(x - self.threshold)?))
    }

    fn learn(&mut self, _features: &[f64], _label: BinaryLabel) -> Result<()> {
        Ok(())
    }

    fn snapshot(&self) -> Vec<f64> {
        vec![self.threshold, self.dimension_index as f64]
    }

    fn restore(&mut self, snapshot: &[f64]) -> Result<()> {
        if snapshot.len() != 2 {
            return Err(Error::LengthMismatch {
                expected: 2,
                got: snapshot.len(),
            });
        }
        self.threshold = snapshot[0];
        self.dimension_index = snapshot[1] as usize;
        Ok(())
    }
}
