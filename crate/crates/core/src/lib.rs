//! Coverage probability of UAV-to-UAV links sharing spectrum with the cellular
//! uplink: exact and approximate stochastic-geometry analysis plus a Monte Carlo
//! simulator used to validate both.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis_approx;
pub mod analysis_exact;
pub mod channel;
pub mod config;
pub mod curve;
pub mod error;
pub mod montecarlo;
pub mod power;
pub mod quad;
pub mod specfun;

pub use channel::{
    AntennaConfig, Condition, Heights, LinkClass, LinkGeometry, LinkParams, LosModelParams, PropagationTable,
    RingPartition, U2UDistanceDist,
};
pub use config::{load_config, ModeKind, Scenario, ScenarioConfig, SharingMode};
pub use curve::{CoverageCurve, Target};
pub use error::{Error, Result};
pub use power::PowerControlParams;
pub use specfun::FunctionAccuracy;
