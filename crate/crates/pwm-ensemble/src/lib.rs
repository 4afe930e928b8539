//! Distributed online ensemble classification of drifting data streams.
//!
//! A set of learners observes correlated streams, exchanges binary local
//! predictions each slot, and aggregates them with an integer-weighted
//! majority rule trained by mistake-driven additive updates. The crate
//! bundles the aggregator and its distributed-environment extension,
//! multiplicative-update baselines, synthetic drifting sources, a seeded
//! environment simulator (label delays, missing labels, asynchronous
//! arrivals), calculators for the worst-case mistake-probability bounds, and
//! an experiment harness with reproducible seed sweeps.
//!
//! Start with the runnable programs under `examples/`; each one exercises a
//! single capability end to end.

pub mod aggregators;
pub mod bounds;
pub mod classifiers;
pub mod config;
pub mod environment;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod rng;
pub mod streams;
pub mod trace;
pub mod types;

pub use error::{Error, Result};
