//! Drives a full ensemble over a scheduled event sequence.
//!
//! Per slot: arriving learners ask their classifier for a local prediction,
//! the shared prediction vector (with zeros for abstainers) is formed, every
//! learner outputs a final prediction (scored against the ground truth for
//! all N slots, whether or not it will ever see the label), and then each
//! learner independently processes whatever labels the environment releases
//! to it at this slot.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aggregators::{
    average_majority, BlumState, ExtendedPwmState, PwmState, TrackExpState, WmState,
};
use crate::classifiers::LocalClassifier;
use crate::error::{Error, Result};
use crate::metrics::{finalize, RunAccumulator, RunMetrics};
use crate::types::{BinaryLabel, LocalPrediction, PredictionVector};

use super::StreamEvent;

/// Which aggregation scheme every learner runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AggregatorKind {
    /// Additive mistake-driven weighted majority (synchronous path).
    Pwm,
    /// Same, with the virtual-learner weight pinned at zero.
    PwmNoBias,
    /// The delayed/missing/asynchronous-capable extension.
    ExtendedPwm,
    /// Multiplicative weighted majority.
    Wm { beta: f64 },
    /// Blum's promote/demote variant.
    Blum { beta: f64, gamma: f64 },
    /// Multiplicative update followed by weight sharing.
    TrackExp { beta: f64, share_alpha: f64 },
    /// Unweighted majority vote.
    AverageMajority,
    /// Each learner follows its own local classifier.
    Alone,
}

impl AggregatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            AggregatorKind::Pwm => "pwm",
            AggregatorKind::PwmNoBias => "pwm_no_bias",
            AggregatorKind::ExtendedPwm => "epwm",
            AggregatorKind::Wm { .. } => "wm",
            AggregatorKind::Blum { .. } => "blum",
            AggregatorKind::TrackExp { .. } => "trackexp",
            AggregatorKind::AverageMajority => "am",
            AggregatorKind::Alone => "alone",
        }
    }

    /// Whether the scheme copes with abstentions and delayed labels.
    fn handles_imperfect_environment(&self) -> bool {
        matches!(self, AggregatorKind::ExtendedPwm | AggregatorKind::Alone)
    }
}

/// Configuration of one harness run.
#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub aggregator: AggregatorKind,
    /// Aggregate only the local predictions of the first `j` learners.
    pub aggregate_first: Option<usize>,
    /// Declared per-learner maximum label delays; bounds the pending stores.
    /// Empty means no delays.
    pub max_delays: Vec<u64>,
    /// Record every learner's weight vector after every slot (integer-weight
    /// schemes only).
    pub record_trajectories: bool,
}

impl HarnessConfig {
    pub fn new(aggregator: AggregatorKind) -> Self {
        HarnessConfig {
            aggregator,
            aggregate_first: None,
            max_delays: Vec::new(),
            record_trajectories: false,
        }
    }
}

/// Everything a finished run hands back.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub metrics: RunMetrics,
    /// Per slot: the full hypothetical vote vector (what every classifier
    /// would have predicted) and the true label. This is the trace behind
    /// the per-classifier rates and the static-oracle benchmark.
    pub vote_trace: Vec<(PredictionVector, BinaryLabel)>,
    /// Per slot, per learner: flattened integer weights (present only when
    /// requested and the scheme uses integer weights).
    pub trajectories: Option<Vec<Vec<Vec<i64>>>>,
}

enum AggState {
    Pwm(PwmState),
    Epwm(ExtendedPwmState),
    Wm(WmState),
    Blum(BlumState),
    TrackExp(TrackExpState),
    Am,
    Alone,
}

impl AggState {
    fn build(kind: &AggregatorKind, k: usize) -> Result<Self> {
        Ok(match *kind {
            AggregatorKind::Pwm => AggState::Pwm(PwmState::new(k)),
            AggregatorKind::PwmNoBias => AggState::Pwm(PwmState::with_frozen_bias(k)),
            AggregatorKind::ExtendedPwm => AggState::Epwm(ExtendedPwmState::new(k)),
            AggregatorKind::Wm { beta } => AggState::Wm(WmState::new(k, beta)?),
            AggregatorKind::Blum { beta, gamma } => AggState::Blum(BlumState::new(k, beta, gamma)?),
            AggregatorKind::TrackExp { beta, share_alpha } => {
                AggState::TrackExp(TrackExpState::new(k, beta, share_alpha)?)
            }
            AggregatorKind::AverageMajority => AggState::Am,
            AggregatorKind::Alone => AggState::Alone,
        })
    }

    fn integer_weights(&self) -> Option<Vec<i64>> {
        match self {
            AggState::Pwm(state) => Some(state.weights().weights().to_vec()),
            AggState::Epwm(state) => {
                let mut w = state.weights_sync().weights().to_vec();
                w.extend_from_slice(state.weights_async().weights());
                Some(w)
            }
            _ => None,
        }
    }
}

struct Learner {
    classifier: Box<dyn LocalClassifier>,
    agg: AggState,
    /// Own observed instances awaiting their label (classifier training
    /// under delay).
    pending_features: BTreeMap<u64, Vec<f64>>,
    /// release slot -> source slots whose labels arrive then
    releases: BTreeMap<u64, Vec<u64>>,
}

fn validate(events: &[StreamEvent], config: &HarnessConfig) -> Result<(usize, usize)> {
    if events.is_empty() {
        return Err(Error::Config("no events to run".into()));
    }
    let k = events[0].learners.len();
    if k == 0 {
        return Err(Error::Config("events carry no learners".into()));
    }
    let effective = config.aggregate_first.unwrap_or(k);
    if effective < 1 || effective > k {
        return Err(Error::Config(format!(
            "aggregate_first must lie in 1..={k}, got {effective}"
        )));
    }
    if !config.max_delays.is_empty() && config.max_delays.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: config.max_delays.len(),
        });
    }
    let strict = !config.aggregator.handles_imperfect_environment();
    let dims: Vec<usize> = events[0]
        .learners
        .iter()
        .map(|l| l.features.len())
        .collect();
    for (idx, event) in events.iter().enumerate() {
        if event.learners.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                got: event.learners.len(),
            });
        }
        for (i, learner) in event.learners.iter().enumerate() {
            if learner.features.len() != dims[i] {
                return Err(Error::Config(format!(
                    "slot {}: learner {i} feature dimension changed from {} to {}",
                    event.time_slot,
                    dims[i],
                    learner.features.len()
                )));
            }
        }
        if event.time_slot != idx as u64 + 1 {
            return Err(Error::Config(format!(
                "event stream must cover slots 1..=N contiguously; \
                 found slot {} at position {idx}",
                event.time_slot
            )));
        }
        for (i, learner) in event.learners.iter().enumerate() {
            if let Some(release) = learner.label_release {
                if release < event.time_slot {
                    return Err(Error::Config(format!(
                        "label for slot {} released in the past ({release})",
                        event.time_slot
                    )));
                }
                let max = config.max_delays.get(i).copied().unwrap_or(0);
                if release - event.time_slot > max {
                    return Err(Error::Config(format!(
                        "slot {}: learner {i} delay {} exceeds declared maximum {max}",
                        event.time_slot,
                        release - event.time_slot
                    )));
                }
            }
            if strict {
                if !learner.arrived {
                    return Err(Error::Config(format!(
                        "aggregator {} requires synchronous learners, but learner {i} \
                         misses slot {}; use the extended aggregator",
                        config.aggregator.name(),
                        event.time_slot
                    )));
                }
                if matches!(learner.label_release, Some(r) if r != event.time_slot) {
                    return Err(Error::Config(format!(
                        "aggregator {} cannot process delayed labels; \
                         use the extended aggregator",
                        config.aggregator.name()
                    )));
                }
            }
        }
    }
    Ok((k, effective))
}

/// Run one ensemble over a scheduled event sequence.
pub fn run_learners(
    events: &[StreamEvent],
    config: &HarnessConfig,
    classifier_factory: &mut dyn FnMut(usize) -> Result<Box<dyn LocalClassifier>>,
) -> Result<RunOutcome> {
    let (k, effective) = validate(events, config)?;
    let n = events.len() as u64;

    let mut learners = Vec::with_capacity(k);
    for i in 0..k {
        let mut releases: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for event in events {
            if let Some(release) = event.learners[i].label_release {
                releases.entry(release).or_default().push(event.time_slot);
            }
        }
        learners.push(Learner {
            classifier: classifier_factory(i)?,
            agg: AggState::build(&config.aggregator, effective)?,
            pending_features: BTreeMap::new(),
            releases,
        });
    }

    let mut acc = RunAccumulator::new(k);
    acc.n = n;
    let mut vote_trace = Vec::with_capacity(events.len());
    let mut trajectories: Option<Vec<Vec<Vec<i64>>>> =
        (config.record_trajectories && learners.iter().all(|l| l.agg.integer_weights().is_some()))
            .then(Vec::new);

    for event in events {
        let slot = event.time_slot;

        // local predictions; the hypothetical vote is computed for every
        // learner so classifier accuracy is measurable on all N slots
        let mut hypothetical = Vec::with_capacity(k);
        let mut actual = Vec::with_capacity(k);
        for (i, learner) in learners.iter_mut().enumerate() {
            let observation = &event.learners[i];
            let vote = match learner.classifier.predict(&observation.features)? {
                LocalPrediction::Label(l) => l,
                LocalPrediction::Abstain => {
                    return Err(Error::Config(
                        "local classifiers must return definite predictions; \
                         abstention is injected by the arrival model"
                            .into(),
                    ))
                }
            };
            hypothetical.push(vote);
            actual.push(if observation.arrived {
                LocalPrediction::Label(vote)
            } else {
                LocalPrediction::Abstain
            });
            if observation.arrived {
                learner
                    .pending_features
                    .insert(slot, observation.features.clone());
            }
        }
        let shared = PredictionVector::from_predictions(&actual).take_first(effective);
        vote_trace.push((PredictionVector::from_labels(&hypothetical), event.label));

        // final predictions
        let mut slot_mistakes = 0u64;
        for (i, learner) in learners.iter_mut().enumerate() {
            let prediction = match &mut learner.agg {
                AggState::Pwm(state) => state.predict(&shared)?,
                AggState::Epwm(state) => state.predict_and_store(slot, shared.clone())?,
                AggState::Wm(state) => state.predict(&shared)?,
                AggState::Blum(state) => state.predict(&shared)?,
                AggState::TrackExp(state) => state.predict(&shared)?,
                AggState::Am => average_majority(&shared)?,
                AggState::Alone => {
                    if event.learners[i].arrived {
                        hypothetical[i]
                    } else {
                        // no own instance: degenerate sign(0) prediction
                        BinaryLabel::Plus
                    }
                }
            };
            if prediction != event.label {
                acc.per_learner_mistakes[i] += 1;
                slot_mistakes += 1;
            }
        }

        if event.learners.iter().all(|l| l.arrived) {
            acc.sync_slots += 1;
        }
        let concept = acc.per_concept.entry(event.concept).or_default();
        concept.slots += 1;
        concept.system_mistakes += slot_mistakes;

        // label releases, independently per learner
        for (i, learner) in learners.iter_mut().enumerate() {
            let due = learner.releases.remove(&slot).unwrap_or_default();
            for m in due {
                let label = events[m as usize - 1].label;
                let observed_error = match &mut learner.agg {
                    // labels reach the synchronous schemes in their own slot,
                    // so `shared` is the vector that produced the prediction
                    AggState::Pwm(state) => state.update(&shared, label)?,
                    AggState::Epwm(state) => state.observe_label(m, label)?,
                    AggState::Wm(state) => state.step(&shared, label)? != label,
                    AggState::Blum(state) => state.step(&shared, label)? != label,
                    AggState::TrackExp(state) => state.step(&shared, label)? != label,
                    AggState::Am => false,
                    AggState::Alone => match learner.pending_features.get(&m) {
                        Some(features) => match learner.classifier.predict(features)? {
                            LocalPrediction::Label(l) => l != label,
                            LocalPrediction::Abstain => false,
                        },
                        None => false,
                    },
                };
                if observed_error {
                    acc.observed_errors[i] += 1;
                }
                if let Some(features) = learner.pending_features.remove(&m) {
                    learner.classifier.learn(&features, label)?;
                }
            }

            // drop state that can no longer receive a label
            let max_delay = config.max_delays.get(i).copied().unwrap_or(0);
            let oldest_kept = slot.saturating_sub(max_delay) + 1;
            if let AggState::Epwm(state) = &mut learner.agg {
                state.prune_pending_before(oldest_kept);
            }
            learner.pending_features = learner.pending_features.split_off(&oldest_kept);
        }

        if let Some(t) = trajectories.as_mut() {
            t.push(
                learners
                    .iter()
                    .map(|l| l.agg.integer_weights().expect("integer-weight scheme"))
                    .collect(),
            );
        }
    }

    let metrics = finalize(acc, &vote_trace)?;
    Ok(RunOutcome {
        metrics,
        vote_trace,
        trajectories,
    })
}
