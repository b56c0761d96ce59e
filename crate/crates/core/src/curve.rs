use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which receiver a coverage curve describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Typical U2U receiver.
    U2u,
    /// Typical BS receiving GUE uplink.
    Gue,
    /// GUE uplink with no UAV interference.
    GueBaseline,
}

/// Coverage probability over a threshold grid; thresholds are in dB for SINR
/// curves and in bit/s for rate curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageCurve {
    pub thresholds: Vec<f64>,
    pub coverage: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
}

impl CoverageCurve {
    pub fn new(thresholds: Vec<f64>, coverage: Vec<f64>, stderr: Option<Vec<f64>>) -> Result<Self> {
        if thresholds.len() != coverage.len() || stderr.as_ref().is_some_and(|s| s.len() != coverage.len()) {
            return Err(Error::domain("CoverageCurve", "lists must have equal length"));
        }
        Ok(Self { thresholds, coverage, stderr })
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// Largest absolute pointwise difference to `other` (same grid assumed).
    pub fn max_abs_diff(&self, other: &CoverageCurve) -> f64 {
        self.coverage
            .iter()
            .zip(&other.coverage)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Threshold at which coverage crosses `level`, linearly interpolated.
    pub fn quantile_threshold(&self, level: f64) -> Option<f64> {
        for i in 1..self.len() {
            let (c0, c1) = (self.coverage[i - 1], self.coverage[i]);
            if c0 >= level && c1 <= level {
                if c0 == c1 {
                    return Some(self.thresholds[i - 1]);
                }
                let w = (c0 - level) / (c0 - c1);
                return Some(self.thresholds[i - 1] + w * (self.thresholds[i] - self.thresholds[i - 1]));
            }
        }
        None
    }
}

/// Evenly spaced grid from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::domain("linear_grid", "need step > 0 and start <= stop"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

/// dB to linear.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
