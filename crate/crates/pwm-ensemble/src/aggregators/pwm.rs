//! The synchronous perceptron-style weighted majority aggregator.
//!
//! Prediction is the sign of the integer inner product between the weight
//! vector and the shared prediction vector; on a mistake every weight moves
//! by `label * entry`, so the weight of each learner that voted correctly
//! rises by one and the weight of each learner that voted wrongly drops by
//! one. Weights start at zero and stay integers forever.

use crate::error::{Error, Result};
use crate::types::{inner_product, sign_i64, BinaryLabel, PredictionVector, WeightVector};

use super::StateSnapshot;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwmState {
    weights: WeightVector,
    frozen_bias: bool,
}

impl PwmState {
    /// Fresh state for `k` learners; all weights zero.
    pub fn new(k: usize) -> Self {
        PwmState {
            weights: WeightVector::zeros(k),
            frozen_bias: false,
        }
    }

    /// Variant with the virtual-learner weight pinned at zero, reproducing
    /// the classical majority schemes whose separating hyperplane passes
    /// through the origin.
    pub fn with_frozen_bias(k: usize) -> Self {
        PwmState {
            weights: WeightVector::zeros(k),
            frozen_bias: true,
        }
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// Final prediction for a fully-populated prediction vector.
    pub fn predict(&self, s: &PredictionVector) -> Result<BinaryLabel> {
        if s.has_abstentions() {
            return Err(Error::AbstentionNotAllowed);
        }
        Ok(sign_i64(inner_product(&self.weights, s)?))
    }

    /// Mistake-driven update for the vector used in the prediction being
    /// corrected. Returns whether the weights changed.
    pub fn update(&mut self, s: &PredictionVector, label: BinaryLabel) -> Result<bool> {
        if self.predict(s)? == label {
            return Ok(false);
        }
        if self.frozen_bias {
            self.weights.add_scaled_no_bias(s, label);
        } else {
            self.weights.add_scaled(s, label);
        }
        Ok(true)
    }

    pub fn snapshot(&self) -> StateSnapshot {
        let mut ints = vec![self.frozen_bias as i64];
        ints.extend_from_slice(self.weights.weights());
        StateSnapshot {
            version: super::SNAPSHOT_VERSION,
            kind: "pwm".into(),
            ints,
            reals: vec![],
        }
    }

    pub fn restore(snapshot: &StateSnapshot) -> Result<Self> {
        snapshot.check("pwm")?;
        if snapshot.ints.len() < 2 {
            return Err(Error::InvalidArgument("truncated pwm snapshot".into()));
        }
        Ok(PwmState {
            frozen_bias: snapshot.ints[0] != 0,
            weights: WeightVector::from_weights(snapshot.ints[1..].to_vec()),
        })
    }
}
