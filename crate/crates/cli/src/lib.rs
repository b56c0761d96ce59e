//! Command-line driver: sweeps, figure recipes and CSV/SVG emission.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod emit;
pub mod error;
pub mod presets;
pub mod run;
pub mod sweep;

pub use error::{CliError, Result};
pub use run::{run, ResultTable, RunRequest, SweepPoint, Track};
pub use sweep::{Range, SweepSpec};
