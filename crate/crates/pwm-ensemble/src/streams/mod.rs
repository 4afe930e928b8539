//! Synthetic drifting stream generators and CSV ingestion.
//!
//! A source emits, per time slot, one feature vector per learner plus the
//! shared label, and reports the identity of the concept that generated the
//! slot. Concept identifiers start at 0 and increment by one at every drift
//! event. All sources are deterministic functions of their seed.

mod csv;
mod events;
mod gaussian;
mod rotating;

pub use csv::{CsvSchema, CsvSource, LabelEncoding, LearnerColumns};
pub use events::{EventDetectionSource, EventLabelRule};
pub use gaussian::GaussianSource;
pub use rotating::RotatingHyperplaneSource;

use crate::error::Result;
use crate::types::BinaryLabel;

/// One emitted slot: per-learner feature vectors, the shared label, and the
/// generating concept.
#[derive(Clone, Debug, PartialEq)]
pub struct SlotSample {
    pub features: Vec<Vec<f64>>,
    pub label: BinaryLabel,
    pub concept: u64,
}

/// A seeded generator of labeled slots.
pub trait StreamSource: Send {
    fn learner_count(&self) -> usize;

    /// Dimensionality of each learner's feature vector.
    fn feature_dimension(&self) -> usize;

    fn next_slot(&mut self) -> Result<SlotSample>;
}
