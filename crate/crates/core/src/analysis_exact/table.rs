//! Piecewise Chebyshev interpolation in t = ln s, built lazily segment by segment.
//!
//! Interference functionals and their scaled derivatives sⁿ·Iⁿ(s) are smooth
//! in ln s: their nearest complex singularities sit at distance π from the
//! real axis. Segments of width 2 with 16 nodes therefore interpolate them to
//! roughly 1e-13 relative accuracy.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

pub(crate) type Sampler = dyn Fn(f64, &mut [f64]) -> Result<()> + Send + Sync;

const SEGMENT_WIDTH: f64 = 2.0;
const NODES: usize = 16;
const MAX_SEGMENT_INDEX: i64 = 400;

pub struct LogChebTable {
    dim: usize,
    sampler: Box<Sampler>,
    segments: RwLock<HashMap<i64, Arc<Vec<f64>>>>,
}

impl std::fmt::Debug for LogChebTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LogChebTable")
            .field("dim", &self.dim)
            .field("segments", &self.segments.read().map(|s| s.len()).unwrap_or(0))
            .finish()
    }
}

impl LogChebTable {
    /// `sampler(t, out)` must fill `out` (length `dim`) with the tabulated functions at t.
    pub fn new(dim: usize, sampler: Box<Sampler>) -> Self {
        Self { dim, sampler, segments: RwLock::new(HashMap::new()) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn segment(&self, k: i64) -> Result<Arc<Vec<f64>>> {
        if let Some(seg) = self.segments.read().expect("table lock").get(&k) {
            return Ok(seg.clone());
        }
        if k.abs() > MAX_SEGMENT_INDEX {
            return Err(Error::Tolerance {
                context: "interference table".into(),
                msg: format!("argument e^{} outside the supported range", k as f64 * SEGMENT_WIDTH),
            });
        }
        let a = k as f64 * SEGMENT_WIDTH;
        let mut values = vec![0.0; NODES * self.dim];
        let mut buf = vec![0.0; self.dim];
        for j in 0..NODES {
            let x = (PI * (j as f64 + 0.5) / NODES as f64).cos();
            let t = a + 0.5 * SEGMENT_WIDTH * (x + 1.0);
            (self.sampler)(t, &mut buf)?;
            for d in 0..self.dim {
                if !buf[d].is_finite() {
                    return Err(Error::Tolerance {
                        context: "interference table".into(),
                        msg: format!("non-finite sample at ln s = {t}"),
                    });
                }
                values[d * NODES + j] = buf[d];
            }
        }
        // coefficients via the discrete cosine transform of the node values
        let mut coeffs = vec![0.0; NODES * self.dim];
        for d in 0..self.dim {
            let vals = &values[d * NODES..(d + 1) * NODES];
            for i in 0..NODES {
                let mut acc = 0.0;
                for (j, v) in vals.iter().enumerate() {
                    acc += v * (PI * i as f64 * (j as f64 + 0.5) / NODES as f64).cos();
                }
                let scale = if i == 0 { 1.0 } else { 2.0 };
                coeffs[d * NODES + i] = scale * acc / NODES as f64;
            }
        }
        let seg = Arc::new(coeffs);
        let mut map = self.segments.write().expect("table lock");
        Ok(map.entry(k).or_insert(seg).clone())
    }

    fn locate(t: f64) -> (i64, f64) {
        let k = (t / SEGMENT_WIDTH).floor() as i64;
        let a = k as f64 * SEGMENT_WIDTH;
        let y = 2.0 * (t - a) / SEGMENT_WIDTH - 1.0;
        (k, y)
    }

    fn clenshaw(c: &[f64], y: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ci in c.iter().skip(1).rev() {
            let b0 = 2.0 * y * b1 - b2 + ci;
            b2 = b1;
            b1 = b0;
        }
        y * b1 - b2 + c[0]
    }

    /// All tabulated functions at t.
    pub fn eval(&self, t: f64, out: &mut [f64]) -> Result<()> {
        let (k, y) = Self::locate(t);
        let seg = self.segment(k)?;
        for (d, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = Self::clenshaw(&seg[d * NODES..(d + 1) * NODES], y);
        }
        Ok(())
    }

    /// Functions `first..first + out.len()` at t.
    pub fn eval_range(&self, t: f64, first: usize, out: &mut [f64]) -> Result<()> {
        let (k, y) = Self::locate(t);
        let seg = self.segment(k)?;
        for (i, o) in out.iter_mut().enumerate() {
            let d = first + i;
            *o = Self::clenshaw(&seg[d * NODES..(d + 1) * NODES], y);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_smooth_functions() {
        let table = LogChebTable::new(
            2,
            Box::new(|t: f64, out: &mut [f64]| {
                let s = t.exp();
                out[0] = s.ln_1p();
                out[1] = s / (1.0 + s);
                Ok(())
            }),
        );
        let mut out = [0.0; 2];
        for i in 0..200 {
            let t = -20.0 + 0.2 * i as f64 + 0.0137;
            table.eval(t, &mut out).unwrap();
            let s = t.exp();
            assert!(((out[0] - s.ln_1p()) / s.ln_1p()).abs() < 1e-12);
            assert!(((out[1] - s / (1.0 + s)) / (s / (1.0 + s))).abs() < 1e-12);
        }
        let mut one = [0.0];
        table.eval_range(0.3, 1, &mut one).unwrap();
        assert!((one[0] - 0.3f64.exp() / (1.0 + 0.3f64.exp())).abs() < 1e-13);
    }

    #[test]
    fn propagates_sampler_errors() {
        let table = LogChebTable::new(1, Box::new(|_t, _o: &mut [f64]| Err(Error::domain("x", "boom"))));
        let mut out = [0.0];
        assert!(table.eval(0.0, &mut out).is_err());
    }
}
