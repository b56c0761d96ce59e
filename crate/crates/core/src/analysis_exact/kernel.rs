//! Ring sums of the Ψ kernel for one interferer family and link condition.

use super::psi::PsiKernel;
use crate::channel::{ring_partition, total_gain, zenith_angle, Condition, LinkClass};
use crate::config::Scenario;
use crate::error::Result;

/// Largest supported derivative order plus one.
pub(crate) const MAX_DIM: usize = 10;

/// Piecewise-constant description of one interference functional:
/// H(u) = Σ_i w_i [Ψ(uκ_i, d_{i+1}) − Ψ(uκ_i, d_i)] over the intervals between
/// consecutive `edges`, with u = s·P.
#[derive(Debug, Clone)]
pub struct RingKernel {
    psi: PsiKernel,
    h2: f64,
    edges: Vec<f64>,
    d2: Vec<f64>,
    weight: Vec<f64>,
    kappa: Vec<f64>,
}

impl RingKernel {
    /// Interferers of link class `class` seen in condition `cond`, up to the truncation radius.
    ///
    /// Links ending at a BS get one interval per angular step so the array
    /// gain can be held at its midpoint value.
    pub fn new(scn: &Scenario, class: LinkClass, cond: Condition, order: usize) -> Result<Self> {
        let link = scn.table.get(class, cond);
        let psi = PsiKernel::new(link.nakagami_m, link.alpha, order)?;
        let (h_tx, h_rx) = class.heights(&scn.heights);
        let dh = class.height_diff(&scn.heights).abs();
        let partition = ring_partition(&scn.los, scn.truncation_radius)?;
        let mut edges = vec![0.0];
        let mut weight = Vec::new();
        let mut kappa = Vec::new();
        for (ring, (lo, hi)) in partition.rings().enumerate() {
            let p_los = scn.los.los_in_ring(ring, h_tx, h_rx);
            let w = match cond {
                Condition::LoS => p_los,
                Condition::NLoS => 1.0 - p_los,
            };
            let mut cuts = vec![hi];
            if class.has_bs() && dh > 1e-9 {
                let (a, b) = ((lo / dh).atan(), (hi / dh).atan());
                let n = ((b - a) / scn.gain_angle_step).ceil().max(1.0) as usize;
                cuts = (1..n).map(|j| dh * (a + (b - a) * j as f64 / n as f64).tan()).collect();
                cuts.push(hi);
            }
            let mut inner = lo;
            for outer in cuts {
                // the BS is always the receiving end
                let gain = total_gain(class, zenith_angle(0.5 * (inner + outer), h_rx, h_tx), &scn.antenna);
                edges.push(outer);
                weight.push(w);
                kappa.push(gain / link.ref_path_loss);
                inner = outer;
            }
        }
        Ok(Self::from_parts(psi, dh, edges, weight, kappa))
    }

    /// Kernel over explicit intervals; `edges` has one more entry than `weight` and `kappa`.
    pub fn from_parts(psi: PsiKernel, h: f64, edges: Vec<f64>, weight: Vec<f64>, kappa: Vec<f64>) -> Self {
        assert_eq!(edges.len(), weight.len() + 1);
        assert_eq!(weight.len(), kappa.len());
        let h2 = h * h;
        let d2 = edges.iter().map(|r| r * r + h2).collect();
        Self { psi, h2, edges, d2, weight, kappa }
    }

    pub fn len(&self) -> usize {
        self.weight.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weight.is_empty()
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weight[i]
    }

    pub fn kappa(&self, i: usize) -> f64 {
        self.kappa[i]
    }

    pub fn order(&self) -> usize {
        self.psi.max_order()
    }

    pub fn psi(&self) -> &PsiKernel {
        &self.psi
    }

    /// Index of the interval containing `r` (the last one for r beyond the edges).
    pub fn interval_of(&self, r: f64) -> usize {
        let i = self.edges.partition_point(|&e| e <= r);
        i.saturating_sub(1).min(self.len().saturating_sub(1))
    }

    /// Per-interval contributions u^n ∂ⁿ/∂uⁿ for intervals `lo..hi`, written to
    /// `out[(i - lo) * dim + n]` with dim = order + 1.
    pub fn contributions(&self, u: f64, lo: usize, hi: usize, out: &mut [f64]) {
        let dim = self.order() + 1;
        let mut inner = [0.0; MAX_DIM];
        let mut outer = [0.0; MAX_DIM];
        // Ψ at a shared edge is reused when κ does not change across it
        let mut cached: Option<(usize, f64)> = None;
        for i in lo..hi {
            let slot = &mut out[(i - lo) * dim..(i - lo + 1) * dim];
            let w = self.weight[i];
            if w == 0.0 {
                slot.iter_mut().for_each(|x| *x = 0.0);
                cached = None;
                continue;
            }
            let k = self.kappa[i];
            let v = u * k;
            if cached == Some((i, k)) {
                inner[..dim].copy_from_slice(&outer[..dim]);
            } else {
                self.psi.eval_scaled(v, self.d2[i], &mut inner[..dim]);
            }
            self.psi.eval_scaled(v, self.d2[i + 1], &mut outer[..dim]);
            cached = Some((i + 1, k));
            for n in 0..dim {
                slot[n] = w * (outer[n] - inner[n]);
            }
        }
    }

    /// Scaled derivatives of H over all intervals.
    pub fn eval(&self, u: f64, out: &mut [f64]) {
        let dim = self.order() + 1;
        let mut buf = vec![0.0; self.len() * dim];
        self.contributions(u, 0, self.len(), &mut buf);
        out[..dim].iter_mut().for_each(|x| *x = 0.0);
        // summing from the far end keeps small tails accurate
        for chunk in buf.chunks(dim).rev() {
            for n in 0..dim {
                out[n] += chunk[n];
            }
        }
    }

    /// Contribution of interval `i` restricted to radii in `[r, edges[i+1]]`.
    pub fn partial(&self, u: f64, i: usize, r: f64, out: &mut [f64]) {
        let dim = self.order() + 1;
        let w = self.weight[i];
        if w == 0.0 {
            out[..dim].iter_mut().for_each(|x| *x = 0.0);
            return;
        }
        let mut inner = [0.0; MAX_DIM];
        let mut outer = [0.0; MAX_DIM];
        let v = u * self.kappa[i];
        self.psi.eval_scaled(v, r * r + self.h2, &mut inner[..dim]);
        self.psi.eval_scaled(v, self.d2[i + 1], &mut outer[..dim]);
        for n in 0..dim {
            out[n] = w * (outer[n] - inner[n]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    #[test]
    fn bs_links_are_subdivided_in_angle() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let uu = RingKernel::new(&scn, LinkClass::Uu, Condition::LoS, 0).unwrap();
        let ub = RingKernel::new(&scn, LinkClass::Ub, Condition::LoS, 0).unwrap();
        assert_eq!(*uu.edges().last().unwrap(), scn.truncation_radius);
        assert!(ub.len() > uu.len());
        let dh = 75.0f64;
        for w in ub.edges().windows(2) {
            let step = (w[1] / dh).atan() - (w[0] / dh).atan();
            assert!(step <= scn.gain_angle_step + 1e-12);
        }
    }

    #[test]
    fn sum_is_positive_and_increasing() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let k = RingKernel::new(&scn, LinkClass::Gu, Condition::NLoS, 2).unwrap();
        let mut last = 0.0;
        for e in -12..0 {
            let mut out = [0.0; 3];
            k.eval(10f64.powi(e), &mut out);
            assert!(out[0] > last);
            assert!(out[1] > 0.0 && out[2] < 0.0);
            last = out[0];
        }
    }

    #[test]
    fn partial_covers_whole_interval() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let k = RingKernel::new(&scn, LinkClass::Gb, Condition::LoS, 1).unwrap();
        let i = k.interval_of(30.0);
        assert!(k.edges()[i] <= 30.0 && 30.0 < k.edges()[i + 1]);
        let mut whole = [0.0; 2];
        let mut part = [0.0; 2];
        k.contributions(1e-3, i, i + 1, &mut whole);
        k.partial(1e-3, i, k.edges()[i], &mut part);
        assert!((whole[0] - part[0]).abs() <= 1e-14 * whole[0].abs());
    }
}
