//! Ensemble aggregation rules: the additive mistake-driven weighted majority
//! (the scheme under study), its extension for delayed labels and
//! asynchronous learners, the multiplicative baselines, and the offline
//! optimal-static-weights oracle.

mod baselines;
mod extended;
mod oracle;
mod pwm;

pub use baselines::{average_majority, BlumState, TrackExpState, WmState};
pub use extended::ExtendedPwmState;
pub use oracle::{optimal_static_oracle, StaticOracleResult, ENUMERATION_BUDGET};
pub use pwm::PwmState;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SNAPSHOT_VERSION: u32 = 1;

/// Flat, versioned dump of an aggregator state for checkpoint/restore.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub version: u32,
    pub kind: String,
    pub ints: Vec<i64>,
    pub reals: Vec<f64>,
}

impl StateSnapshot {
    pub(crate) fn check(&self, kind: &str) -> Result<()> {
        if self.version != SNAPSHOT_VERSION {
            return Err(Error::Version {
                found: self.version,
                supported: SNAPSHOT_VERSION,
            });
        }
        if self.kind != kind {
            return Err(Error::InvalidArgument(format!(
                "snapshot kind mismatch: expected {kind}, got {}",
                self.kind
            )));
        }
        Ok(())
    }
}
