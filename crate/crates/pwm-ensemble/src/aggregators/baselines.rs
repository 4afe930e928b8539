//! Multiplicative-update baselines and the unweighted majority vote.
//!
//! These keep one positive real weight per learner (no virtual learner and
//! no bias entry) and predict the sign of the weighted vote sum, with ties
//! resolved to `+1` like everywhere else in the crate.

use crate::error::{Error, Result};
use crate::types::{sign, BinaryLabel, PredictionVector};

use super::StateSnapshot;

fn check_votes(s: &PredictionVector, k: usize) -> Result<()> {
    if s.learner_count() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: s.learner_count(),
        });
    }
    if s.has_abstentions() {
        return Err(Error::AbstentionNotAllowed);
    }
    Ok(())
}

fn weighted_vote(weights: &[f64], s: &PredictionVector) -> Result<BinaryLabel> {
    let sum: f64 = weights
        .iter()
        .enumerate()
        .map(|(i, w)| w * s.learner_entry(i + 1) as f64)
        .sum();
    sign(sum)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "beta must lie in (0, 1), got {beta}"
        )));
    }
    Ok(())
}

/// Unweighted majority vote over the learner entries (the virtual entry is
/// excluded).
pub fn average_majority(s: &PredictionVector) -> Result<BinaryLabel> {
    if s.has_abstentions() {
        return Err(Error::AbstentionNotAllowed);
    }
    let sum: i64 = s.entries()[1..].iter().map(|&e| e as i64).sum();
    Ok(crate::types::sign_i64(sum))
}

/// Weighted majority: on an ensemble mistake, the weight of every learner
/// that disagreed with the label is multiplied by `beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct WmState {
    weights: Vec<f64>,
    beta: f64,
}

impl WmState {
    pub fn new(k: usize, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(WmState {
            weights: vec![1.0; k],
            beta,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn predict(&self, s: &PredictionVector) -> Result<BinaryLabel> {
        check_votes(s, self.weights.len())?;
        weighted_vote(&self.weights, s)
    }

    /// One round: predict, then demote the disagreeing learners if the
    /// ensemble got it wrong.
    pub fn step(&mut self, s: &PredictionVector, label: BinaryLabel) -> Result<BinaryLabel> {
        let prediction = self.predict(s)?;
        if prediction != label {
            for (i, w) in self.weights.iter_mut().enumerate() {
                if s.learner_entry(i + 1) as i64 != label.value() {
                    *w *= self.beta;
                }
            }
        }
        Ok(prediction)
    }

    pub fn snapshot(&self) -> StateSnapshot {
        let mut reals = vec![self.beta];
        reals.extend_from_slice(&self.weights);
        StateSnapshot {
            version: super::SNAPSHOT_VERSION,
            kind: "wm".into(),
            ints: vec![],
            reals,
        }
    }

    pub fn restore(snapshot: &StateSnapshot) -> Result<Self> {
        snapshot.check("wm")?;
        if snapshot.reals.len() < 2 {
            return Err(Error::InvalidArgument("truncated wm snapshot".into()));
        }
        Ok(WmState {
            beta: snapshot.reals[0],
            weights: snapshot.reals[1..].to_vec(),
        })
    }
}

/// Blum's variant: disagreeing learners are demoted by `beta` on every
/// round, and agreeing learners are promoted by `gamma` when the ensemble
/// makes a mistake.
#[derive(Clone, Debug, PartialEq)]
pub struct BlumState {
    weights: Vec<f64>,
    beta: f64,
    gamma: f64,
}

impl BlumState {
    pub fn new(k: usize, beta: f64, gamma: f64) -> Result<Self> {
        check_beta(beta)?;
        if gamma < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "gamma must be >= 1, got {gamma}"
            )));
        }
        Ok(BlumState {
            weights: vec![1.0; k],
            beta,
            gamma,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn predict(&self, s: &PredictionVector) -> Result<BinaryLabel> {
        check_votes(s, self.weights.len())?;
        weighted_vote(&self.weights, s)
    }

    pub fn step(&mut self, s: &PredictionVector, label: BinaryLabel) -> Result<BinaryLabel> {
        let prediction = self.predict(s)?;
        let mistake = prediction != label;
        for (i, w) in self.weights.iter_mut().enumerate() {
            let agrees = s.learner_entry(i + 1) as i64 == label.value();
            if !agrees {
                *w *= self.beta;
            } else if mistake {
                *w *= self.gamma;
            }
        }
        Ok(prediction)
    }

    pub fn snapshot(&self) -> StateSnapshot {
        let mut reals = vec![self.beta, self.gamma];
        reals.extend_from_slice(&self.weights);
        StateSnapshot {
            version: super::SNAPSHOT_VERSION,
            kind: "blum".into(),
            ints: vec![],
            reals,
        }
    }

    pub fn restore(snapshot: &StateSnapshot) -> Result<Self> {
        snapshot.check("blum")?;
        if snapshot.reals.len() < 3 {
            return Err(Error::InvalidArgument("truncated blum snapshot".into()));
        }
        Ok(BlumState {
            beta: snapshot.reals[0],
            gamma: snapshot.reals[1],
            weights: snapshot.reals[2..].to_vec(),
        })
    }
}

/// Weight-sharing variant: after a multiplicative update, every learner
/// donates a `share_alpha` fraction of its weight to a common pool that is
/// redistributed equally, which keeps demoted learners recoverable after a
/// concept change.
#[derive(Clone, Debug, PartialEq)]
pub struct TrackExpState {
    weights: Vec<f64>,
    beta: f64,
    share_alpha: f64,
}

impl TrackExpState {
    pub fn new(k: usize, beta: f64, share_alpha: f64) -> Result<Self> {
        check_beta(beta)?;
        if !(0.0..=1.0).contains(&share_alpha) {
            return Err(Error::InvalidArgument(format!(
                "share_alpha must lie in [0, 1], got {share_alpha}"
            )));
        }
        Ok(TrackExpState {
            weights: vec![1.0; k],
            beta,
            share_alpha,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn predict(&self, s: &PredictionVector) -> Result<BinaryLabel> {
        check_votes(s, self.weights.len())?;
        weighted_vote(&self.weights, s)
    }

    pub fn step(&mut self, s: &PredictionVector, label: BinaryLabel) -> Result<BinaryLabel> {
        let prediction = self.predict(s)?;
        if prediction != label {
            for (i, w) in self.weights.iter_mut().enumerate() {
                if s.learner_entry(i + 1) as i64 != label.value() {
                    *w *= self.beta;
                }
            }
            self.share();
        }
        Ok(prediction)
    }

    /// Redistribution phase, run after each multiplicative update.
    fn share(&mut self) {
        let k = self.weights.len() as f64;
        let pool: f64 = self.share_alpha * self.weights.iter().sum::<f64>();
        for w in &mut self.weights {
            *w = (1.0 - self.share_alpha) * *w + pool / k;
        }
    }

    pub fn snapshot(&self) -> StateSnapshot {
        let mut reals = vec![self.beta, self.share_alpha];
        reals.extend_from_slice(&self.weights);
        StateSnapshot {
            version: super::SNAPSHOT_VERSION,
            kind: "trackexp".into(),
            ints: vec![],
            reals,
        }
    }

    pub fn restore(snapshot: &StateSnapshot) -> Result<Self> {
        snapshot.check("trackexp")?;
        if snapshot.reals.len() < 3 {
            return Err(Error::InvalidArgument("truncated trackexp snapshot".into()));
        }
        Ok(TrackExpState {
            beta: snapshot.reals[0],
            share_alpha: snapshot.reals[1],
            weights: snapshot.reals[2..].to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn vector(entries: &[i8]) -> PredictionVector {
        PredictionVector::from_entries(entries.to_vec()).unwrap()
    }

    #[test]
    fn average_majority_examples() {
        assert_eq!(
            average_majority(&vector(&[1, 1, 1, -1])).unwrap(),
            BinaryLabel::Plus
        );
        assert_eq!(
            average_majority(&vector(&[1, -1, -1])).unwrap(),
            BinaryLabel::Minus
        );
        // even split resolves to +1
        assert_eq!(
            average_majority(&vector(&[1, 1, -1])).unwrap(),
            BinaryLabel::Plus
        );
        assert!(average_majority(&vector(&[1, 0, 1])).is_err());
    }

    #[test]
    fn wm_correct_ensemble_never_updates() {
        let mut state = WmState::new(3, 0.5).unwrap();
        let p = state
            .step(&vector(&[1, 1, 1, -1]), BinaryLabel::Plus)
            .unwrap();
        assert_eq!(p, BinaryLabel::Plus);
        assert_eq!(state.weights(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn wm_mistake_demotes_disagreeing_learners() {
        let mut state = WmState::new(2, 0.5).unwrap();
        let p = state.step(&vector(&[1, -1, -1]), BinaryLabel::Plus).unwrap();
        assert_eq!(p, BinaryLabel::Minus);
        assert_eq!(state.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn blum_rules() {
        // correct ensemble, one disagreeing learner demoted
        let mut state = BlumState::new(3, 0.5, 1.5).unwrap();
        state
            .step(&vector(&[1, 1, 1, -1]), BinaryLabel::Plus)
            .unwrap();
        assert_eq!(state.weights(), &[1.0, 1.0, 0.5]);

        // ensemble mistake: agreeing learner promoted, disagreeing demoted
        let mut state = BlumState::new(2, 0.5, 1.5).unwrap();
        state.weights = vec![0.1, 1.0];
        state.step(&vector(&[1, 1, -1]), BinaryLabel::Plus).unwrap();
        assert_relative_eq!(state.weights()[0], 0.15);
        assert_relative_eq!(state.weights()[1], 0.5);

        // everyone agrees and the ensemble is correct: no change
        let mut state = BlumState::new(2, 0.5, 1.5).unwrap();
        state.step(&vector(&[1, 1, 1]), BinaryLabel::Plus).unwrap();
        assert_eq!(state.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn trackexp_sharing_formula() {
        let mut state = TrackExpState::new(2, 0.5, 0.25).unwrap();
        state.weights = vec![0.5, 1.5];
        state.share();
        assert_relative_eq!(state.weights()[0], 0.625);
        assert_relative_eq!(state.weights()[1], 1.375);
    }

    #[test]
    fn trackexp_uniform_weights_are_a_sharing_fixed_point() {
        let mut state = TrackExpState::new(2, 0.5, 0.25).unwrap();
        state.share();
        assert_eq!(state.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn trackexp_with_zero_sharing_matches_wm() {
        let mut wm = WmState::new(3, 0.5).unwrap();
        let mut te = TrackExpState::new(3, 0.5, 0.0).unwrap();
        let trace = [
            (vector(&[1, 1, -1, -1]), BinaryLabel::Plus),
            (vector(&[1, -1, -1, 1]), BinaryLabel::Minus),
            (vector(&[1, 1, 1, 1]), BinaryLabel::Minus),
            (vector(&[1, -1, 1, -1]), BinaryLabel::Plus),
        ];
        for (s, y) in trace.iter().cycle().take(24) {
            assert_eq!(wm.step(s, *y).unwrap(), te.step(s, *y).unwrap());
            assert_eq!(wm.weights(), te.weights());
        }
    }

    #[test]
    fn beta_of_one_would_freeze_weights_and_is_rejected() {
        // the multiplicative identity makes the scheme a no-op; the
        // constructor range check excludes it
        assert!(WmState::new(2, 1.0).is_err());
        assert!(WmState::new(2, 0.0).is_err());
    }

    #[test]
    fn weights_stay_positive() {
        let mut state = BlumState::new(2, 0.5, 1.5).unwrap();
        for i in 0..200 {
            let y = if i % 3 == 0 {
                BinaryLabel::Plus
            } else {
                BinaryLabel::Minus
            };
            state.step(&vector(&[1, 1, -1]), y).unwrap();
            assert!(state.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn snapshots_round_trip() {
        let mut state = TrackExpState::new(2, 0.5, 0.25).unwrap();
        state.step(&vector(&[1, -1, -1]), BinaryLabel::Plus).unwrap();
        let restored = TrackExpState::restore(&state.snapshot()).unwrap();
        assert_eq!(restored, state);
    }
}
