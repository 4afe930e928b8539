//! Distributed event-detection source with Markov-modulated noise.
//!
//! Each learner monitors its own rare local event and observes it through
//! additive Gaussian noise whose level depends on a hidden two-state
//! (good/bad) Markov chain; every state switch is a concept drift. How the
//! shared label relates to the local events is configurable; the default
//! calls the slot positive when at least one local event fired.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{substream, Stream};
use crate::types::BinaryLabel;

use super::{SlotSample, StreamSource};

/// How the shared label is derived from the per-learner events.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventLabelRule {
    /// Positive when at least one local event fired.
    #[default]
    AnyEvent,
    /// Positive only when every local event fired.
    AllEvents,
}

pub struct EventDetectionSource {
    k: usize,
    event_prob: f64,
    switch_prob: f64,
    noise_std_good: f64,
    noise_std_bad: f64,
    label_rule: EventLabelRule,
    /// Negate labels from this slot index on (a single hand-placed drift,
    /// useful for two-concept experiments).
    flip_label_at: Option<u64>,
    bad_state: Vec<bool>,
    rng: ChaCha8Rng,
    concept: u64,
    slot: u64,
}

impl EventDetectionSource {
    /// Family defaults: event probability 0.05, switch probability 0.01,
    /// noise variances 0.5 (good) and 1 (bad).
    pub fn new(k: usize, seed: u64) -> Result<Self> {
        Self::with_params(
            k,
            0.05,
            0.01,
            0.5f64.sqrt(),
            1.0,
            EventLabelRule::AnyEvent,
            None,
            seed,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_params(
        k: usize,
        event_prob: f64,
        switch_prob: f64,
        noise_std_good: f64,
        noise_std_bad: f64,
        label_rule: EventLabelRule,
        flip_label_at: Option<u64>,
        seed: u64,
    ) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument("need at least one learner".into()));
        }
        for (name, p) in [("event_prob", event_prob), ("switch_prob", switch_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        for (name, s) in [
            ("noise_std_good", noise_std_good),
            ("noise_std_bad", noise_std_bad),
        ] {
            if s < 0.0 || !s.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be non-negative, got {s}"
                )));
            }
        }
        Ok(EventDetectionSource {
            k,
            event_prob,
            switch_prob,
            noise_std_good,
            noise_std_bad,
            label_rule,
            flip_label_at,
            bad_state: vec![false; k],
            rng: substream(seed, Stream::Source),
            concept: 0,
            slot: 0,
        })
    }

    pub fn bad_state(&self) -> &[bool] {
        &self.bad_state
    }
}

impl StreamSource for EventDetectionSource {
    fn learner_count(&self) -> usize {
        self.k
    }

    fn feature_dimension(&self) -> usize {
        1
    }

    fn next_slot(&mut self) -> Result<SlotSample> {
        let events: Vec<bool> = (0..self.k)
            .map(|_| self.rng.gen::<f64>() < self.event_prob)
            .collect();
        let features: Vec<Vec<f64>> = events
            .iter()
            .zip(&self.bad_state)
            .map(|(&event, &bad)| {
                let std = if bad {
                    self.noise_std_bad
                } else {
                    self.noise_std_good
                };
                let noise = if std > 0.0 {
                    Normal::new(0.0, std).unwrap().sample(&mut self.rng)
                } else {
                    0.0
                };
                vec![if event { 1.0 } else { -1.0 } + noise]
            })
            .collect();
        let positive = match self.label_rule {
            EventLabelRule::AnyEvent => events.iter().any(|&e| e),
            EventLabelRule::AllEvents => events.iter().all(|&e| e),
        };
        let mut label = if positive {
            BinaryLabel::Plus
        } else {
            BinaryLabel::Minus
        };
        if let Some(flip) = self.flip_label_at {
            if self.slot >= flip {
                label = label.flipped();
            }
        }
        let concept = self.concept;
        // advance the hidden states; any switch is one drift event, and so is
        // crossing the label-flip boundary
        let mut drifted = false;
        for bad in &mut self.bad_state {
            if self.rng.gen::<f64>() < self.switch_prob {
                *bad = !*bad;
                drifted = true;
            }
        }
        self.slot += 1;
        if self.flip_label_at == Some(self.slot) {
            drifted = true;
        }
        if drifted {
            self.concept += 1;
        }
        Ok(SlotSample {
            features,
            label,
            concept,
        })
    }
}
