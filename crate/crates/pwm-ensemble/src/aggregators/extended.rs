//! The extended aggregator for distributed operation: delayed and
//! out-of-order labels, missing labels, and asynchronous learners.
//!
//! Two weight vectors are kept. The synchronized vector aggregates slots in
//! which every learner voted; the asynchronous vector aggregates slots with
//! abstainers (absent votes enter the inner product as zero, so abstainer
//! weights are never touched). Prediction vectors are parked until their
//! label arrives; the update then recomputes the prediction the learner
//! would make *now*, with the current weights, which makes out-of-order
//! label arrival well defined.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::types::{inner_product, sign_i64, BinaryLabel, PredictionVector, WeightVector};

use super::StateSnapshot;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedPwmState {
    weights_sync: WeightVector,
    weights_async: WeightVector,
    pending: BTreeMap<u64, PredictionVector>,
    frozen_bias: bool,
}

impl ExtendedPwmState {
    pub fn new(k: usize) -> Self {
        ExtendedPwmState {
            weights_sync: WeightVector::zeros(k),
            weights_async: WeightVector::zeros(k),
            pending: BTreeMap::new(),
            frozen_bias: false,
        }
    }

    pub fn with_frozen_bias(k: usize) -> Self {
        ExtendedPwmState {
            frozen_bias: true,
            ..Self::new(k)
        }
    }

    pub fn weights_sync(&self) -> &WeightVector {
        &self.weights_sync
    }

    pub fn weights_async(&self) -> &WeightVector {
        &self.weights_async
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    /// Final prediction for slot `time_slot`; parks the vector until its
    /// label arrives. A full vector is scored with the synchronized weights,
    /// a vector with abstainers with the asynchronous ones.
    pub fn predict_and_store(
        &mut self,
        time_slot: u64,
        s: PredictionVector,
    ) -> Result<BinaryLabel> {
        if self.pending.contains_key(&time_slot) {
            return Err(Error::DuplicatePending(time_slot));
        }
        let weights = if s.has_abstentions() {
            &self.weights_async
        } else {
            &self.weights_sync
        };
        let prediction = sign_i64(inner_product(weights, &s)?);
        self.pending.insert(time_slot, s);
        Ok(prediction)
    }

    /// Apply the label for a stored slot. The hypothetical prediction is
    /// recomputed with the current weight vector chosen by the stored
    /// vector's shape; a mismatch triggers the additive update. Returns
    /// whether the weights changed (an observed error).
    pub fn observe_label(&mut self, time_slot: u64, label: BinaryLabel) -> Result<bool> {
        let s = self
            .pending
            .remove(&time_slot)
            .ok_or(Error::MissingPending(time_slot))?;
        let weights = if s.has_abstentions() {
            &mut self.weights_async
        } else {
            &mut self.weights_sync
        };
        let hypothetical = sign_i64(inner_product(weights, &s)?);
        if hypothetical == label {
            return Ok(false);
        }
        if self.frozen_bias {
            weights.add_scaled_no_bias(&s, label);
        } else {
            weights.add_scaled(&s, label);
        }
        Ok(true)
    }

    /// Drop stored vectors for slots older than `oldest_kept`. Such labels
    /// can no longer arrive once the maximum delay has passed, so the
    /// pending store stays bounded even when labels go missing entirely.
    pub fn prune_pending_before(&mut self, oldest_kept: u64) {
        self.pending = self.pending.split_off(&oldest_kept);
    }

    pub fn snapshot(&self) -> StateSnapshot {
        let k1 = self.weights_sync.len() as i64;
        let mut ints = vec![self.frozen_bias as i64, k1, self.pending.len() as i64];
        ints.extend_from_slice(self.weights_sync.weights());
        ints.extend_from_slice(self.weights_async.weights());
        for (slot, s) in &self.pending {
            ints.push(*slot as i64);
            ints.extend(s.entries().iter().map(|&e| e as i64));
        }
        StateSnapshot {
            version: super::SNAPSHOT_VERSION,
            kind: "epwm".into(),
            ints,
            reals: vec![],
        }
    }

    pub fn restore(snapshot: &StateSnapshot) -> Result<Self> {
        snapshot.check("epwm")?;
        let ints = &snapshot.ints;
        let bad = || Error::InvalidArgument("truncated epwm snapshot".into());
        if ints.len() < 3 {
            return Err(bad());
        }
        let (frozen_bias, k1, n_pending) = (ints[0] != 0, ints[1] as usize, ints[2] as usize);
        let mut at = 3;
        let mut take = |len: usize| -> Result<&[i64]> {
            let slice = ints.get(at..at + len).ok_or_else(bad)?;
            at += len;
            Ok(slice)
        };
        let weights_sync = WeightVector::from_weights(take(k1)?.to_vec());
        let weights_async = WeightVector::from_weights(take(k1)?.to_vec());
        let mut pending = BTreeMap::new();
        for _ in 0..n_pending {
            let slot = take(1)?[0] as u64;
            let entries: Vec<i8> = take(k1)?.iter().map(|&v| v as i8).collect();
            pending.insert(slot, PredictionVector::from_entries(entries)?);
        }
        Ok(ExtendedPwmState {
            weights_sync,
            weights_async,
            pending,
            frozen_bias,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregators::PwmState;

    fn vector(entries: &[i8]) -> PredictionVector {
        PredictionVector::from_entries(entries.to_vec()).unwrap()
    }

    #[test]
    fn fresh_state_predicts_plus_on_full_vector() {
        let mut state = ExtendedPwmState::new(2);
        assert_eq!(
            state.predict_and_store(1, vector(&[1, -1, 1])).unwrap(),
            BinaryLabel::Plus
        );
    }

    #[test]
    fn abstentions_route_to_the_async_weights() {
        let mut state = ExtendedPwmState::new(2);
        state.weights_async = WeightVector::from_weights(vec![0, 5, -1]);
        state.weights_sync = WeightVector::from_weights(vec![9, 9, 9]);
        // 0*1 + 5*0 + (-1)*1 = -1
        assert_eq!(
            state.predict_and_store(1, vector(&[1, 0, 1])).unwrap(),
            BinaryLabel::Minus
        );
    }

    #[test]
    fn duplicate_slot_is_rejected() {
        let mut state = ExtendedPwmState::new(2);
        state.predict_and_store(3, vector(&[1, 1, 1])).unwrap();
        assert!(matches!(
            state.predict_and_store(3, vector(&[1, 1, 1])),
            Err(Error::DuplicatePending(3))
        ));
    }

    #[test]
    fn observe_label_updates_like_the_synchronous_rule() {
        let mut state = ExtendedPwmState::new(2);
        state.predict_and_store(1, vector(&[1, 1, -1])).unwrap();
        assert!(state.observe_label(1, BinaryLabel::Minus).unwrap());
        assert_eq!(state.weights_sync().weights(), &[-1, -1, 1]);
        assert_eq!(state.weights_async().weights(), &[0, 0, 0]);
        assert_eq!(state.pending_len(), 0);
    }

    #[test]
    fn matching_hypothetical_prediction_leaves_weights_alone() {
        let mut state = ExtendedPwmState::new(2);
        state.predict_and_store(1, vector(&[1, 0, 1])).unwrap();
        // async weights are zero, hypothetical prediction is +1
        assert!(!state.observe_label(1, BinaryLabel::Plus).unwrap());
        assert_eq!(state.weights_async().weights(), &[0, 0, 0]);
    }

    #[test]
    fn unknown_slot_is_an_error() {
        let mut state = ExtendedPwmState::new(2);
        assert!(matches!(
            state.observe_label(9, BinaryLabel::Plus),
            Err(Error::MissingPending(9))
        ));
    }

    #[test]
    fn out_of_order_labels_apply_cleanly() {
        let mut state = ExtendedPwmState::new(2);
        for slot in 1..=7 {
            state.predict_and_store(slot, vector(&[1, 1, -1])).unwrap();
        }
        assert!(state.observe_label(7, BinaryLabel::Minus).unwrap());
        // slot 5's update sees the weights already moved by slot 7's label
        assert!(!state.observe_label(5, BinaryLabel::Minus).unwrap());
        assert_eq!(state.weights_sync().weights(), &[-1, -1, 1]);
    }

    #[test]
    fn abstainer_weights_are_never_modified() {
        let mut state = ExtendedPwmState::new(3);
        state.predict_and_store(1, vector(&[1, 1, 0, -1])).unwrap();
        state.observe_label(1, BinaryLabel::Minus).unwrap();
        assert_eq!(state.weights_async().weights(), &[-1, -1, 0, 1]);
    }

    #[test]
    fn pruning_bounds_the_pending_store() {
        let mut state = ExtendedPwmState::new(1);
        for slot in 1..=100 {
            state.predict_and_store(slot, vector(&[1, 1])).unwrap();
            // labels never arrive; a maximum delay of 10 means anything older
            // than slot-10 can be discarded
            state.prune_pending_before(slot.saturating_sub(10) + 1);
            assert!(state.pending_len() <= 10);
        }
    }

    // With full vectors and labels arriving in the same slot, the extended
    // aggregator is the synchronous aggregator, step for step.
    #[test]
    fn degenerate_environment_matches_the_synchronous_path() {
        let traces = [
            [(&[1i8, 1, -1], BinaryLabel::Minus)],
            [(&[1i8, -1, -1], BinaryLabel::Plus)],
        ];
        let mut sync = PwmState::new(2);
        let mut ext = ExtendedPwmState::new(2);
        for (slot, &(entries, y)) in traces.iter().flatten().cycle().take(40).enumerate() {
            let s = vector(entries);
            let p1 = sync.predict(&s).unwrap();
            let p2 = ext.predict_and_store(slot as u64, s.clone()).unwrap();
            assert_eq!(p1, p2);
            sync.update(&s, y).unwrap();
            ext.observe_label(slot as u64, y).unwrap();
            assert_eq!(sync.weights(), ext.weights_sync());
            assert_eq!(ext.weights_async().weights(), &[0, 0, 0]);
        }
    }

    #[test]
    fn snapshot_round_trip_preserves_pending() {
        let mut state = ExtendedPwmState::new(2);
        state.predict_and_store(4, vector(&[1, 0, 1])).unwrap();
        state.predict_and_store(5, vector(&[1, 1, 1])).unwrap();
        state.observe_label(5, BinaryLabel::Minus).unwrap();
        let snap = state.snapshot();
        let restored = ExtendedPwmState::restore(&snap).unwrap();
        assert_eq!(restored, state);
    }
}
