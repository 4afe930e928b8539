//! Stable Gaussian source: balanced labels, each learner observing the label
//! through unit-variance Gaussian noise centered at `label * mu`. The
//! concept never drifts, which makes this family the reference case for
//! studying how tight the mistake bounds are.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::rng::{substream, Stream};
use crate::types::BinaryLabel;

use super::{SlotSample, StreamSource};

pub struct GaussianSource {
    k: usize,
    mu: f64,
    rng: ChaCha8Rng,
}

impl GaussianSource {
    pub fn new(k: usize, mu: f64, seed: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument("need at least one learner".into()));
        }
        if mu < 0.0 || !mu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "mu must be non-negative, got {mu}"
            )));
        }
        Ok(GaussianSource {
            k,
            mu,
            rng: substream(seed, Stream::Source),
        })
    }
}

impl StreamSource for GaussianSource {
    fn learner_count(&self) -> usize {
        self.k
    }

    fn feature_dimension(&self) -> usize {
        1
    }

    fn next_slot(&mut self) -> Result<SlotSample> {
        let label = if self.rng.gen::<f64>() < 0.5 {
            BinaryLabel::Plus
        } else {
            BinaryLabel::Minus
        };
        let normal = Normal::new(label.value() as f64 * self.mu, 1.0).unwrap();
        let features = (0..self.k)
            .map(|_| vec![normal.sample(&mut self.rng)])
            .collect();
        Ok(SlotSample {
            features,
            label,
            concept: 0,
        })
    }
}
