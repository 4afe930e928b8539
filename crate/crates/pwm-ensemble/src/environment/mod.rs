//! The distributed-environment simulator.
//!
//! [`schedule`] composes a stream source with three independent imperfection
//! models — per-learner label delays, missing labels, and instance arrivals —
//! into a slot-by-slot event sequence. [`run_learners`] then drives a full
//! ensemble over that sequence.

mod runner;

pub use runner::{run_learners, AggregatorKind, HarnessConfig, RunOutcome};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{substream, Stream};
use crate::streams::StreamSource;
use crate::types::BinaryLabel;

/// Per-learner label delay model. Every realized delay is bounded by the
/// learner's declared maximum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DelayModel {
    /// Labels arrive at the end of their own slot.
    None,
    /// Fixed delay per learner.
    Deterministic { delays: Vec<u64> },
    /// Uniform on `[0, max_i]` per learner, drawn independently per slot.
    Uniform { max: Vec<u64> },
}

impl DelayModel {
    /// Same maximum for every learner, uniformly distributed delays.
    pub fn uniform(k: usize, max: u64) -> Self {
        DelayModel::Uniform {
            max: vec![max; k],
        }
    }

    pub fn max_delays(&self, k: usize) -> Vec<u64> {
        match self {
            DelayModel::None => vec![0; k],
            DelayModel::Deterministic { delays } => delays.clone(),
            DelayModel::Uniform { max } => max.clone(),
        }
    }

    fn validate(&self, k: usize) -> Result<()> {
        let len = match self {
            DelayModel::None => return Ok(()),
            DelayModel::Deterministic { delays } => delays.len(),
            DelayModel::Uniform { max } => max.len(),
        };
        if len != k {
            return Err(Error::LengthMismatch { expected: k, got: len });
        }
        Ok(())
    }

    fn sample(&self, learner: usize, rng: &mut ChaCha8Rng) -> u64 {
        match self {
            DelayModel::None => 0,
            DelayModel::Deterministic { delays } => delays[learner],
            DelayModel::Uniform { max } => {
                if max[learner] == 0 {
                    0
                } else {
                    rng.gen_range(0..=max[learner])
                }
            }
        }
    }
}

/// Each learner observes each label independently with probability `mu`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelObservationModel {
    pub mu: f64,
}

impl LabelObservationModel {
    pub fn always() -> Self {
        LabelObservationModel { mu: 1.0 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "label probability must lie in (0, 1], got {}",
                self.mu
            )));
        }
        Ok(())
    }
}

/// Each learner observes an instance at each slot independently with its own
/// probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrivalModel {
    pub probabilities: Vec<f64>,
}

impl ArrivalModel {
    pub fn always(k: usize) -> Self {
        ArrivalModel {
            probabilities: vec![1.0; k],
        }
    }

    pub fn uniform(k: usize, p: f64) -> Self {
        ArrivalModel {
            probabilities: vec![p; k],
        }
    }

    fn validate(&self, k: usize) -> Result<()> {
        if self.probabilities.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                got: self.probabilities.len(),
            });
        }
        if self.probabilities.iter().any(|p| !(*p > 0.0 && *p <= 1.0)) {
            return Err(Error::InvalidArgument(
                "arrival probabilities must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// What one learner sees at one slot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerObservation {
    pub arrived: bool,
    /// The instance generated for this learner (observed only when
    /// `arrived`; kept either way so metrics can score the classifier on
    /// every slot).
    pub features: Vec<f64>,
    /// Slot at the end of which this learner observes the label, if ever.
    pub label_release: Option<u64>,
}

/// The full per-slot record delivered by the environment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamEvent {
    /// 1-based slot index.
    pub time_slot: u64,
    pub label: BinaryLabel,
    pub concept: u64,
    pub learners: Vec<LearnerObservation>,
}

impl StreamEvent {
    /// One learner's view of this slot as a labeled instance.
    pub fn labeled_instance(&self, learner: usize) -> crate::types::LabeledInstance {
        crate::types::LabeledInstance {
            time_slot: self.time_slot,
            features: self.learners[learner].features.clone(),
            label: self.label,
        }
    }
}

/// Draw the full event sequence for `n` slots. Deterministic given the
/// source's seed and `env_seed`; the three imperfection models draw from
/// independent substreams, so they compose without interfering.
pub fn schedule(
    source: &mut dyn StreamSource,
    delays: &DelayModel,
    labels: &LabelObservationModel,
    arrivals: &ArrivalModel,
    n: u64,
    env_seed: u64,
) -> Result<Vec<StreamEvent>> {
    if n < 1 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    let k = source.learner_count();
    delays.validate(k)?;
    labels.validate()?;
    arrivals.validate(k)?;

    let mut delay_rng = substream(env_seed, Stream::Delays);
    let mut label_rng = substream(env_seed, Stream::LabelFlags);
    let mut arrival_rng = substream(env_seed, Stream::Arrivals);

    let mut events = Vec::with_capacity(n as usize);
    for slot in 1..=n {
        let sample = source.next_slot()?;
        let learners = (0..k)
            .map(|i| {
                let arrived = arrival_rng.gen::<f64>() < arrivals.probabilities[i];
                let observed = label_rng.gen::<f64>() < labels.mu;
                let delay = delays.sample(i, &mut delay_rng);
                LearnerObservation {
                    arrived,
                    features: sample.features[i].clone(),
                    label_release: observed.then_some(slot + delay),
                }
            })
            .collect();
        events.push(StreamEvent {
            time_slot: slot,
            label: sample.label,
            concept: sample.concept,
            learners,
        });
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::GaussianSource;

    fn ideal_events(k: usize, n: u64, seed: u64) -> Vec<StreamEvent> {
        let mut src = GaussianSource::new(k, 1.0, seed).unwrap();
        schedule(
            &mut src,
            &DelayModel::None,
            &LabelObservationModel::always(),
            &ArrivalModel::always(k),
            n,
            seed,
        )
        .unwrap()
    }

    #[test]
    fn ideal_models_observe_everything_immediately() {
        for event in ideal_events(3, 50, 1) {
            for learner in &event.learners {
                assert!(learner.arrived);
                assert_eq!(learner.label_release, Some(event.time_slot));
            }
        }
    }

    #[test]
    fn schedule_is_deterministic() {
        assert_eq!(ideal_events(2, 30, 9), ideal_events(2, 30, 9));
    }

    #[test]
    fn realized_delays_stay_within_bounds() {
        let mut src = GaussianSource::new(2, 1.0, 4).unwrap();
        let delays = DelayModel::Uniform { max: vec![5, 0] };
        let events = schedule(
            &mut src,
            &delays,
            &LabelObservationModel::always(),
            &ArrivalModel::always(2),
            200,
            4,
        )
        .unwrap();
        for e in &events {
            let d0 = e.learners[0].label_release.unwrap() - e.time_slot;
            assert!(d0 <= 5);
            assert_eq!(e.learners[1].label_release, Some(e.time_slot));
        }
        // the uniform draw actually spreads over the range
        assert!(events
            .iter()
            .any(|e| e.learners[0].label_release.unwrap() > e.time_slot));
    }

    #[test]
    fn label_observation_rate_matches_mu() {
        let mut src = GaussianSource::new(1, 1.0, 8).unwrap();
        let n = 10_000u64;
        let events = schedule(
            &mut src,
            &DelayModel::None,
            &LabelObservationModel { mu: 0.5 },
            &ArrivalModel::always(1),
            n,
            8,
        )
        .unwrap();
        let observed = events
            .iter()
            .filter(|e| e.learners[0].label_release.is_some())
            .count();
        let frac = observed as f64 / n as f64;
        // binomial standard error at mu = 0.5 is 0.005
        assert!((frac - 0.5).abs() < 0.02, "observed fraction {frac}");
    }

    #[test]
    fn full_arrivals_mean_zero_alpha() {
        let events = ideal_events(4, 100, 3);
        let all = events
            .iter()
            .filter(|e| e.learners.iter().all(|l| l.arrived))
            .count();
        assert_eq!(all, 100);
    }

    #[test]
    fn invalid_models_are_rejected() {
        let mut src = GaussianSource::new(2, 1.0, 1).unwrap();
        assert!(schedule(
            &mut src,
            &DelayModel::Deterministic { delays: vec![1] },
            &LabelObservationModel::always(),
            &ArrivalModel::always(2),
            10,
            1,
        )
        .is_err());
        let mut src = GaussianSource::new(2, 1.0, 1).unwrap();
        assert!(schedule(
            &mut src,
            &DelayModel::None,
            &LabelObservationModel { mu: 0.0 },
            &ArrivalModel::always(2),
            10,
            1,
        )
        .is_err());
    }
}
