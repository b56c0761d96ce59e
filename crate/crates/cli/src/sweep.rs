//! Parsing of the `start:stop:step` ranges used by `--sweep` and `--thresholds`.

use crate::error::{CliError, Result};
use skyshare_core::curve::linear_grid;
use skyshare_core::ScenarioConfig;
use std::str::FromStr;

/// Inclusive range `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Result<Vec<f64>> {
        let grid = linear_grid(self.start, self.stop, self.step).map_err(|e| CliError::Config(e.to_string()))?;
        // trims float noise such as 0.30000000000000004 from the step products
        Ok(grid.into_iter().map(|v| format!("{v:.12e}").parse().expect("formatted float parses")).collect())
    }
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Config(format!("range `{s}` must look like start:stop:step"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
        let range = Range { start: num(parts[0])?, stop: num(parts[1])?, step: num(parts[2])? };
        if !(range.step > 0.0) {
            return Err(CliError::Config(format!("range `{s}` needs a positive step")));
        }
        if range.stop < range.start {
            return Err(CliError::Config(format!("range `{s}` has stop below start")));
        }
        Ok(range)
    }
}

/// One swept configuration parameter, addressed by its dotted path.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub range: Range,
}

impl SweepSpec {
    /// Configurations for every sweep value, checked against `base`.
    pub fn configs(&self, base: &ScenarioConfig) -> Result<Vec<(f64, ScenarioConfig)>> {
        self.range
            .values()?
            .into_iter()
            .map(|v| Ok((v, base.with_param(&self.param, v).map_err(|e| CliError::Config(e.to_string()))?)))
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let (param, range) = s
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("sweep `{s}` must look like key=start:stop:step")))?;
        let param = param.trim();
        if param.is_empty() {
            return Err(CliError::Config(format!("sweep `{s}` names no parameter")));
        }
        Ok(SweepSpec { param: param.to_string(), range: range.parse()? })
    }
}
