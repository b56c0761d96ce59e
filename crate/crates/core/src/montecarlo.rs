//! Drop-based Monte Carlo simulator of the typical U2U receiver and typical BS.
//!
//! Every drop draws a fresh deployment inside a disc around the receiver at the
//! origin. Drops use independent ChaCha substreams of the master seed, so the
//! result does not depend on the number of worker threads.

use crate::channel::{
    bs_array_gain, zenith_angle, Condition, FadingSampler, LinkClass, U2UDistanceDist,
};
use crate::config::Scenario;
use crate::curve::{db_to_linear, CoverageCurve, Target};
use crate::error::{Error, Result};
use crate::power::tx_power_per_prb;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Extra radius, in GUE serving-distance scales, of the BS disc that feeds GUEs into the window.
const BS_MARGIN_SCALES: f64 = 7.5;

/// Uniform points of a homogeneous PPP in the disc of radius `radius` around the origin.
pub fn sample_ppp_disc<R: Rng + ?Sized>(density: f64, radius: f64, rng: &mut R) -> Result<Vec<[f64; 2]>> {
    if !(density >= 0.0) || !(radius > 0.0) {
        return Err(Error::domain("sample_ppp_disc", "need density >= 0 and radius > 0"));
    }
    let mean = density * PI * radius * radius;
    if mean == 0.0 {
        return Ok(Vec::new());
    }
    let n = Poisson::new(mean).map_err(|e| Error::domain("sample_ppp_disc", e.to_string()))?.sample(rng) as usize;
    Ok((0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let phi = 2.0 * PI * rng.random::<f64>();
            [r * phi.cos(), r * phi.sin()]
        })
        .collect())
}

/// SINR of the typical receiver in one drop, with its components in mW.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrSample {
    pub sinr_linear: f64,
    pub signal: f64,
    pub interference_uav: f64,
    pub interference_gue: f64,
    pub noise: f64,
}

impl SinrSample {
    pub fn new(signal: f64, interference_uav: f64, interference_gue: f64, noise: f64) -> Self {
        Self { sinr_linear: signal / (noise + interference_uav + interference_gue), signal, interference_uav, interference_gue, noise }
    }

    pub fn sinr_db(&self) -> f64 {
        10.0 * self.sinr_linear.log10()
    }
}

/// Kind of transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Uav,
    Gue,
}

/// One transmitter as seen by the typical receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmitter {
    pub kind: NodeKind,
    pub position: [f64; 2],
    pub height: f64,
    /// Per-PRB power, mW.
    pub power: f64,
    /// Condition of the link toward the typical receiver.
    pub cond: Condition,
    pub fading: f64,
    /// Received power at the typical receiver, mW.
    pub received: f64,
}

/// One drop: the serving transmitter and all co-channel interferers.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub target: Target,
    pub receiver_height: f64,
    pub bs_positions: Vec<[f64; 2]>,
    pub serving: Transmitter,
    pub interferers: Vec<Transmitter>,
    pub noise: f64,
}

impl Snapshot {
    pub fn sinr(&self) -> SinrSample {
        let (mut iu, mut ig) = (0.0, 0.0);
        for t in &self.interferers {
            match t.kind {
                NodeKind::Uav => iu += t.received,
                NodeKind::Gue => ig += t.received,
            }
        }
        SinrSample::new(self.serving.received, iu, ig, self.noise)
    }
}

/// LoS probability per ring, precomputed for one link class.
#[derive(Debug, Clone)]
struct LosLookup {
    p: Vec<f64>,
    scale: f64,
}

impl LosLookup {
    fn new(scn: &Scenario, class: LinkClass, radius: f64) -> Self {
        let (h_tx, h_rx) = class.heights(&scn.heights);
        let n = scn.los.ring_index(radius) + 2;
        let p = (0..n).map(|i| scn.los.los_in_ring(i, h_tx, h_rx)).collect();
        Self { p, scale: 1.0 / scn.los.ring_width() }
    }

    fn get(&self, r: f64) -> f64 {
        let i = (r * self.scale).floor().max(0.0) as usize;
        *self.p.get(i).unwrap_or_else(|| self.p.last().unwrap())
    }

    fn draw<R: Rng + ?Sized>(&self, r: f64, rng: &mut R) -> Condition {
        if rng.random::<f64>() < self.get(r) {
            Condition::LoS
        } else {
            Condition::NLoS
        }
    }
}

/// Per-class propagation constants and samplers.
#[derive(Debug, Clone)]
struct ClassModel {
    dh2: f64,
    los: LosLookup,
    ref_loss: [f64; 2],
    half_alpha: [f64; 2],
    fading: [FadingSampler; 2],
}

impl ClassModel {
    fn new(scn: &Scenario, class: LinkClass, radius: f64) -> Self {
        let l = scn.table.get(class, Condition::LoS);
        let n = scn.table.get(class, Condition::NLoS);
        let dh = class.height_diff(&scn.heights);
        Self {
            dh2: dh * dh,
            los: LosLookup::new(scn, class, radius),
            ref_loss: [l.ref_path_loss, n.ref_path_loss],
            half_alpha: [0.5 * l.alpha, 0.5 * n.alpha],
            fading: [FadingSampler::new(l.nakagami_m), FadingSampler::new(n.nakagami_m)],
        }
    }

    /// τ̂ d^α for horizontal distance r.
    fn path_loss(&self, cond: Condition, r: f64) -> f64 {
        let i = cond.index();
        self.ref_loss[i] * (r * r + self.dh2).powf(self.half_alpha[i])
    }
}

/// Precomputed simulator for one scenario and target.
#[derive(Debug, Clone)]
pub struct Simulator {
    scn: Scenario,
    target: Target,
    window: f64,
    u2u: U2UDistanceDist,
    uu: ClassModel,
    gu: ClassModel,
    ub: ClassModel,
    gb: ClassModel,
}

impl Simulator {
    /// Simulator whose interferers live within `window` meters of the receiver.
    pub fn new(scn: &Scenario, target: Target, window: f64) -> Result<Self> {
        if !(window > 0.0) {
            return Err(Error::domain("Simulator", "window radius must be positive"));
        }
        let scn = match target {
            Target::GueBaseline => scn.ground_baseline(),
            _ => scn.clone(),
        };
        let margin = if scn.bs_density > 0.0 { BS_MARGIN_SCALES * scn.sigma_g() } else { 0.0 };
        let reach = window + margin + scn.u2u.max_dist;
        Ok(Self {
            u2u: scn.u2u,
            uu: ClassModel::new(&scn, LinkClass::Uu, reach),
            gu: ClassModel::new(&scn, LinkClass::Gu, reach),
            ub: ClassModel::new(&scn, LinkClass::Ub, reach),
            gb: ClassModel::new(&scn, LinkClass::Gb, reach),
            scn,
            target,
            window,
        })
    }

    fn bs_gain(&self, r: f64, h_other: f64) -> f64 {
        bs_array_gain(zenith_angle(r, self.scn.heights.h_b, h_other), &self.scn.antenna)
    }

    /// Power of a UAV whose own receiver is at a freshly drawn distance.
    fn uav_power<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = self.u2u.sample(rng);
        let cond = self.uu.los.draw(x, rng);
        tx_power_per_prb(self.uu.path_loss(cond, x), &self.scn.pc_uav)
    }

    /// Power of a GUE at distance `x` from its own BS.
    fn gue_power<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        let cond = self.gb.los.draw(x, rng);
        let g = self.bs_gain(x, self.scn.heights.h_g);
        let zeta = if g > 0.0 { self.gb.path_loss(cond, x) / g } else { f64::INFINITY };
        tx_power_per_prb(zeta, &self.scn.pc_gue)
    }

    fn rayleigh<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
        scale * (-2.0 * (1.0 - rng.random::<f64>()).ln()).sqrt()
    }

    /// Transmitter at `pos` seen over class `model`, with receive gain `gain`.
    fn link<R: Rng + ?Sized>(
        &self,
        model: &ClassModel,
        kind: NodeKind,
        pos: [f64; 2],
        height: f64,
        power: f64,
        gain: f64,
        rng: &mut R,
    ) -> Transmitter {
        let r = pos[0].hypot(pos[1]);
        let cond = model.los.draw(r, rng);
        let fading = model.fading[cond.index()].sample(rng);
        let received = power * fading * gain / model.path_loss(cond, r);
        Transmitter { kind, position: pos, height, power, cond, fading, received }
    }

    /// Draw one deployment.
    pub fn snapshot<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Snapshot> {
        let scn = &self.scn;
        let h = scn.heights;
        let sigma = if scn.bs_density > 0.0 { scn.sigma_g() } else { 0.0 };
        let mut interferers = Vec::new();
        let mut bs_positions = Vec::new();
        let uniform_angle = |rng: &mut R| 2.0 * PI * rng.random::<f64>();
        match self.target {
            Target::U2u => {
                let x = self.u2u.sample(rng);
                let phi = uniform_angle(rng);
                let cond = self.uu.los.draw(x, rng);
                let zeta = self.uu.path_loss(cond, x);
                let power = tx_power_per_prb(zeta, &scn.pc_uav);
                let fading = self.uu.fading[cond.index()].sample(rng);
                let serving = Transmitter {
                    kind: NodeKind::Uav,
                    position: [x * phi.cos(), x * phi.sin()],
                    height: h.h_u,
                    power,
                    cond,
                    fading,
                    received: power * fading / zeta,
                };
                for pos in sample_ppp_disc(scn.uav_density_at_uav(), self.window, rng)? {
                    let p = self.uav_power(rng);
                    interferers.push(self.link(&self.uu, NodeKind::Uav, pos, h.h_u, p, 1.0, rng));
                }
                if scn.gue_density_at_uav() > 0.0 {
                    bs_positions = sample_ppp_disc(scn.gue_density_at_uav(), self.window + BS_MARGIN_SCALES * sigma, rng)?;
                    for bs in &bs_positions {
                        let x = Self::rayleigh(sigma, rng);
                        let phi = uniform_angle(rng);
                        let pos = [bs[0] + x * phi.cos(), bs[1] + x * phi.sin()];
                        let p = self.gue_power(x, rng);
                        if pos[0].hypot(pos[1]) <= self.window {
                            interferers.push(self.link(&self.gu, NodeKind::Gue, pos, h.h_g, p, 1.0, rng));
                        }
                    }
                }
                Ok(Snapshot { target: self.target, receiver_height: h.h_u, bs_positions, serving, interferers, noise: scn.noise_mw })
            }
            Target::Gue | Target::GueBaseline => {
                let x = Self::rayleigh(sigma, rng);
                let phi = uniform_angle(rng);
                let cond = self.gb.los.draw(x, rng);
                let g = self.bs_gain(x, h.h_g);
                let zeta = if g > 0.0 { self.gb.path_loss(cond, x) / g } else { f64::INFINITY };
                let power = tx_power_per_prb(zeta, &scn.pc_gue);
                let fading = self.gb.fading[cond.index()].sample(rng);
                let serving = Transmitter {
                    kind: NodeKind::Gue,
                    position: [x * phi.cos(), x * phi.sin()],
                    height: h.h_g,
                    power,
                    cond,
                    fading,
                    received: power * fading / zeta,
                };
                bs_positions = sample_ppp_disc(scn.bs_density, self.window + BS_MARGIN_SCALES * sigma, rng)?;
                for bs in &bs_positions {
                    let x = Self::rayleigh(sigma, rng);
                    let phi = uniform_angle(rng);
                    let pos = [bs[0] + x * phi.cos(), bs[1] + x * phi.sin()];
                    let r = pos[0].hypot(pos[1]);
                    let p = self.gue_power(x, rng);
                    // a GUE closer to the typical BS than to its own would be served by it
                    if r <= self.window && x < r {
                        let gain = self.bs_gain(r, h.h_g);
                        interferers.push(self.link(&self.gb, NodeKind::Gue, pos, h.h_g, p, gain, rng));
                    }
                }
                for pos in sample_ppp_disc(scn.uav_density_at_bs(), self.window, rng)? {
                    let p = self.uav_power(rng);
                    let gain = self.bs_gain(pos[0].hypot(pos[1]), h.h_u);
                    interferers.push(self.link(&self.ub, NodeKind::Uav, pos, h.h_u, p, gain, rng));
                }
                Ok(Snapshot { target: self.target, receiver_height: h.h_b, bs_positions, serving, interferers, noise: scn.noise_mw })
            }
        }
    }

    /// Independent generator of drop `drop` under master seed `seed`.
    pub fn drop_rng(seed: u64, drop: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(drop);
        rng
    }

    /// SINR samples of `n_drops` drops, in drop order.
    pub fn run(&self, n_drops: usize, seed: u64) -> Result<Vec<SinrSample>> {
        if n_drops == 0 {
            return Err(Error::domain("simulate", "need at least one drop"));
        }
        (0..n_drops as u64)
            .into_par_iter()
            .map(|d| Ok(self.snapshot(&mut Self::drop_rng(seed, d))?.sinr()))
            .collect()
    }
}

/// SINR samples at the typical U2U receiver.
pub fn simulate_u2u(scn: &Scenario, n_drops: usize, seed: u64) -> Result<Vec<SinrSample>> {
    Simulator::new(scn, Target::U2u, scn.truncation_radius)?.run(n_drops, seed)
}

/// SINR samples at the typical BS; UAVs are left out for `GueBaseline`.
pub fn simulate_gue(scn: &Scenario, n_drops: usize, seed: u64) -> Result<Vec<SinrSample>> {
    Simulator::new(scn, Target::Gue, scn.truncation_radius)?.run(n_drops, seed)
}

/// Samples for any target.
pub fn simulate(scn: &Scenario, target: Target, n_drops: usize, seed: u64) -> Result<Vec<SinrSample>> {
    Simulator::new(scn, target, scn.truncation_radius)?.run(n_drops, seed)
}

/// Empirical P[SINR > T] with binomial standard errors.
pub fn ccdf_from_samples(samples: &[SinrSample], thresholds_db: &[f64]) -> Result<CoverageCurve> {
    if samples.is_empty() {
        return Err(Error::domain("ccdf_from_samples", "no samples"));
    }
    let n = samples.len() as f64;
    let mut sorted: Vec<f64> = samples.iter().map(|s| s.sinr_linear).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut coverage = Vec::with_capacity(thresholds_db.len());
    let mut stderr = Vec::with_capacity(thresholds_db.len());
    for &t in thresholds_db {
        let lin = db_to_linear(t);
        let above = sorted.len() - sorted.partition_point(|&v| v <= lin);
        let p = above as f64 / n;
        coverage.push(p);
        stderr.push((p * (1.0 - p) / n).sqrt());
    }
    CoverageCurve::new(thresholds_db.to_vec(), coverage, Some(stderr))
}

/// SINR threshold in dB needed for rate `rate_bps` over `bandwidth_hz`.
pub fn rate_to_sinr_db(rate_bps: f64, bandwidth_hz: f64) -> f64 {
    10.0 * (rate_bps / bandwidth_hz * std::f64::consts::LN_2).exp_m1().log10()
}

/// Rate coverage P[B log₂(1 + SINR) > T] from an SINR coverage evaluator.
pub fn rate_ccdf<F>(coverage: F, bandwidth_hz: f64, rate_thresholds: &[f64]) -> Result<CoverageCurve>
where
    F: FnOnce(&[f64]) -> Result<CoverageCurve>,
{
    if !(bandwidth_hz > 0.0) {
        return Err(Error::domain("rate_ccdf", "bandwidth must be positive"));
    }
    let db: Vec<f64> = rate_thresholds.iter().map(|&t| rate_to_sinr_db(t, bandwidth_hz)).collect();
    let curve = coverage(&db)?;
    CoverageCurve::new(rate_thresholds.to_vec(), curve.coverage, curve.stderr)
}

/// Empirical per-PRB UAV power draws under the serving-link law.
pub fn sample_uav_powers(scn: &Scenario, n: usize, seed: u64) -> Result<Vec<f64>> {
    let sim = Simulator::new(scn, Target::U2u, scn.truncation_radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| sim.uav_power(&mut rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    #[test]
    fn ppp_counts_and_radii() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_ppp_disc(0.0, 10.0, &mut rng).unwrap().is_empty());
        let pts = sample_ppp_disc(1.0, 30.0, &mut rng).unwrap();
        assert!(pts.iter().all(|p| p[0].hypot(p[1]) <= 30.0));
        let mean = PI * 900.0;
        assert!((pts.len() as f64 - mean).abs() < 5.0 * mean.sqrt());
    }

    #[test]
    fn ccdf_edges() {
        let s = [SinrSample::new(1.0, 0.0, 0.0, 1.0)];
        let c = ccdf_from_samples(&s, &[-10.0, 10.0]).unwrap();
        assert_eq!(c.coverage, vec![1.0, 0.0]);
        assert!(ccdf_from_samples(&[], &[0.0]).is_err());
    }

    #[test]
    fn run_is_deterministic() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let sim = Simulator::new(&scn, Target::Gue, 3000.0).unwrap();
        let a = sim.run(20, 9).unwrap();
        let b = sim.run(20, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|s| s.sinr_linear > 0.0 && s.interference_gue > 0.0));
    }
}
