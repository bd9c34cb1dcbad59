//! Semantic-aware radio resource allocation.
//!
//! Computes the semantic spectral efficiency (S-SE) of text semantic
//! communication links, assigns channels and per-word symbol counts to
//! maximize network S-SE, and compares the result with conventional
//! systems (Shannon bound, LTE and NR CQI tables) converted to the
//! semantic domain through a bits-per-word transform factor.
//!
//! Module map:
//! - [`channel`]: geometry, pathloss, shadowing, Rayleigh fading, SNR
//! - [`similarity`]: the ξ(k, γ) lookup surface
//! - [`metrics`]: semantic rate and S-SE, equivalent S-SE of bit pipes
//! - [`link_adaptation`]: Shannon and CQI-table spectral efficiency
//! - [`allocator`]: per-pair k search, Hungarian matching, brute-force oracle
//! - [`scenario`], [`harness`]: configuration, Monte-Carlo runs, CSV

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocator;
pub mod channel;
pub mod error;
pub mod exec;
pub mod harness;
pub mod hungarian;
pub mod link_adaptation;
pub mod metrics;
pub mod scenario;
pub mod similarity;
pub mod units;

pub use allocator::{Assignment, Constraints, PairPlan};
pub use channel::{LinkRealization, NetworkDrop, RadioParams};
pub use error::{Error, Result};
pub use exec::Execution;
pub use harness::{SweepRecord, Series, RecordParam};
pub use link_adaptation::{CqiTable, CqiTables, SystemKind};
pub use metrics::{SourceStats, TransformFactor};
pub use scenario::{ScenarioConfig, SweepParam};
pub use similarity::SimilaritySurface;
