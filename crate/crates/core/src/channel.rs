//! Propagation primitives: LoS probability and its ring partition, path loss,
//! BS array gain, Nakagami-m fading and link-distance laws.

use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Link classes, named transmitter then receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkClass {
    /// GUE to BS.
    Gb,
    /// UAV to BS.
    Ub,
    /// GUE to UAV.
    Gu,
    /// UAV to UAV.
    Uu,
}

impl LinkClass {
    pub const ALL: [LinkClass; 4] = [LinkClass::Gb, LinkClass::Ub, LinkClass::Gu, LinkClass::Uu];

    pub fn index(self) -> usize {
        match self {
            LinkClass::Gb => 0,
            LinkClass::Ub => 1,
            LinkClass::Gu => 2,
            LinkClass::Uu => 3,
        }
    }

    pub fn has_bs(self) -> bool {
        matches!(self, LinkClass::Gb | LinkClass::Ub)
    }

    /// Transmitter and receiver heights.
    pub fn heights(self, h: &Heights) -> (f64, f64) {
        match self {
            LinkClass::Gb => (h.h_g, h.h_b),
            LinkClass::Ub => (h.h_u, h.h_b),
            LinkClass::Gu => (h.h_g, h.h_u),
            LinkClass::Uu => (h.h_u, h.h_u),
        }
    }

    /// Absolute height difference between the endpoints.
    pub fn height_diff(self, h: &Heights) -> f64 {
        let (a, b) = self.heights(h);
        (a - b).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    LoS,
    NLoS,
}

impl Condition {
    pub const ALL: [Condition; 2] = [Condition::LoS, Condition::NLoS];

    pub fn index(self) -> usize {
        match self {
            Condition::LoS => 0,
            Condition::NLoS => 1,
        }
    }
}

/// Node heights in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Heights {
    pub h_b: f64,
    pub h_g: f64,
    pub h_u: f64,
}

/// Large-scale parameters of one link class in one condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Reference path loss, linear.
    pub ref_path_loss: f64,
    pub alpha: f64,
    pub nakagami_m: u32,
}

impl LinkParams {
    pub fn ref_path_loss_db(&self) -> f64 {
        10.0 * self.ref_path_loss.log10()
    }
}

/// Nakagami parameters per class, LoS and NLoS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NakagamiTable {
    pub m: [[u32; 2]; 4],
}

impl Default for NakagamiTable {
    fn default() -> Self {
        let mut m = [[1; 2]; 4];
        m[LinkClass::Gb.index()][0] = 3;
        m[LinkClass::Gu.index()][0] = 3;
        m[LinkClass::Ub.index()][0] = 5;
        m[LinkClass::Uu.index()][0] = 5;
        Self { m }
    }
}

/// Reference path loss, exponent and Nakagami m for every class and condition.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationTable {
    entries: [[LinkParams; 2]; 4],
}

impl PropagationTable {
    /// Urban parameter set at carrier `carrier_ghz` and UAV height `h_u`.
    pub fn urban(carrier_ghz: f64, h_u: f64, nakagami: &NakagamiTable) -> Result<Self> {
        if !(carrier_ghz > 0.0) {
            return Err(Error::config("carrier_ghz", "must be positive"));
        }
        if !(h_u >= 1.0) {
            return Err(Error::config("heights.h_u", "must be at least 1 m"));
        }
        let fc = 20.0 * carrier_ghz.log10();
        let uav_nlos_ref = -17.5 + 20.0 * (40.0 * PI * carrier_ghz / 3.0).log10();
        let lh = h_u.log10();
        // (ref dB, alpha) per class for LoS and NLoS
        let raw = [
            [(28.0 + fc, 2.2), (13.54 + fc, 3.9)],
            [(28.0 + fc, 2.2), (uav_nlos_ref, 4.6 - 0.7 * lh)],
            [(30.9 + fc, 2.225 - 0.05 * lh), (32.4 + fc, 4.32 - 0.76 * lh)],
            [(28.0 + fc, 2.2), (uav_nlos_ref, 4.6 - 0.7 * lh)],
        ];
        let mut entries = [[LinkParams { ref_path_loss: 1.0, alpha: 3.0, nakagami_m: 1 }; 2]; 4];
        for class in LinkClass::ALL {
            for cond in Condition::ALL {
                let (db, alpha) = raw[class.index()][cond.index()];
                entries[class.index()][cond.index()] = LinkParams {
                    ref_path_loss: 10f64.powf(db / 10.0),
                    alpha,
                    nakagami_m: nakagami.m[class.index()][cond.index()],
                };
            }
        }
        let table = Self { entries };
        table.validate()?;
        Ok(table)
    }

    /// Table from explicit entries, indexed `[class][condition]`.
    pub fn from_entries(entries: [[LinkParams; 2]; 4]) -> Result<Self> {
        let table = Self { entries };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        for class in LinkClass::ALL {
            let los = self.get(class, Condition::LoS);
            let nlos = self.get(class, Condition::NLoS);
            for (cond, p) in [("los", los), ("nlos", nlos)] {
                let name = format!("{class:?}").to_lowercase();
                if !(p.alpha > 2.0 + 1e-9) {
                    return Err(Error::config(
                        "heights.h_u",
                        format!("path loss exponent of {name} {cond} is {:.6}; exponents must exceed 2", p.alpha),
                    ));
                }
                if p.nakagami_m < 1 {
                    return Err(Error::config(format!("nakagami.{name}.{cond}"), "must be at least 1"));
                }
            }
            if los.nakagami_m < nlos.nakagami_m {
                let name = format!("{class:?}").to_lowercase();
                return Err(Error::config(format!("nakagami.{name}"), "LoS m must not be below NLoS m"));
            }
        }
        Ok(())
    }

    pub fn get(&self, class: LinkClass, cond: Condition) -> LinkParams {
        self.entries[class.index()][cond.index()]
    }
}

/// ITU building-blockage parameters; `a2` is per km².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LosModelParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Default for LosModelParams {
    fn default() -> Self {
        Self { a1: 0.3, a2: 500.0, a3: 20.0 }
    }
}

impl LosModelParams {
    /// Ring width 1000/√(a₁a₂) in meters.
    pub fn ring_width(&self) -> f64 {
        1000.0 / (self.a1 * self.a2).sqrt()
    }

    /// Index of the ring containing horizontal distance `r`.
    pub fn ring_index(&self, r: f64) -> usize {
        let x = r * (self.a1 * self.a2).sqrt() / 1000.0;
        if x <= 0.0 {
            0
        } else {
            x.floor() as usize
        }
    }

    /// LoS probability for a link whose distance falls in ring `ring`.
    pub fn los_in_ring(&self, ring: usize, h_tx: f64, h_rx: f64) -> f64 {
        let k1 = ring as f64;
        let mut p = 1.0;
        for j in 0..ring {
            let h = h_tx - (j as f64 + 0.5) * (h_tx - h_rx) / k1;
            p *= -(-(h * h) / (2.0 * self.a3 * self.a3)).exp_m1();
        }
        p.clamp(0.0, 1.0)
    }
}

/// Horizontal distance and endpoint heights of a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub r2d: f64,
    pub h_tx: f64,
    pub h_rx: f64,
}

impl LinkGeometry {
    pub fn new(r2d: f64, h_tx: f64, h_rx: f64) -> Self {
        Self { r2d, h_tx, h_rx }
    }

    pub fn d3d(&self) -> f64 {
        self.r2d.hypot(self.h_tx - self.h_rx)
    }
}

/// ITU LoS probability; the NLoS probability is its complement.
pub fn los_probability(geom: &LinkGeometry, params: &LosModelParams) -> f64 {
    params.los_in_ring(params.ring_index(geom.r2d), geom.h_tx, geom.h_rx)
}

/// Breakpoints of the piecewise-constant LoS probability.
#[derive(Debug, Clone, PartialEq)]
pub struct RingPartition {
    pub breakpoints: Vec<f64>,
    pub truncation_radius: f64,
}

impl RingPartition {
    /// Number of rings (intervals between consecutive breakpoints).
    pub fn len(&self) -> usize {
        self.breakpoints.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Iterator over `(inner, outer)` radii.
    pub fn rings(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Breakpoints r_i = 1000 i/√(a₁a₂) up to `truncation_radius`, which is appended as the last one.
pub fn ring_partition(params: &LosModelParams, truncation_radius: f64) -> Result<RingPartition> {
    if !(truncation_radius > 0.0) {
        return Err(Error::domain("ring_partition", "truncation radius must be positive"));
    }
    let w = params.ring_width();
    let mut breakpoints = vec![0.0];
    let mut i = 1usize;
    loop {
        let r = w * i as f64;
        if r >= truncation_radius * (1.0 - 1e-12) {
            break;
        }
        breakpoints.push(r);
        i += 1;
    }
    breakpoints.push(truncation_radius);
    Ok(RingPartition { breakpoints, truncation_radius })
}

/// Linear path loss τ̂·d^α.
pub fn path_loss(geom: &LinkGeometry, class: LinkClass, cond: Condition, table: &PropagationTable) -> Result<f64> {
    let d = geom.d3d();
    if !(d > 0.0) {
        return Err(Error::domain("path_loss", "3-D distance must be positive"));
    }
    let p = table.get(class, cond);
    Ok(p.ref_path_loss * d.powf(p.alpha))
}

/// BS uniform linear array with electrical downtilt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaConfig {
    pub n_elements: u32,
    pub downtilt_rad: f64,
    /// Element maximum gain, linear.
    pub element_max_gain: f64,
    pub spacing_wavelengths: f64,
}

impl Default for AntennaConfig {
    fn default() -> Self {
        Self {
            n_elements: 8,
            downtilt_rad: 102f64.to_radians(),
            element_max_gain: 10f64.powf(0.8),
            spacing_wavelengths: 0.5,
        }
    }
}

/// Zenith angle at a BS of height `h_bs` toward a node at `h_other` and horizontal distance `r2d`.
pub fn zenith_angle(r2d: f64, h_bs: f64, h_other: f64) -> f64 {
    r2d.atan2(h_other - h_bs)
}

/// Element pattern times array factor.
pub fn bs_array_gain(zenith_rad: f64, cfg: &AntennaConfig) -> f64 {
    let s = zenith_rad.sin();
    let element = cfg.element_max_gain * s * s;
    let n = cfg.n_elements as f64;
    let x = zenith_rad.cos() - cfg.downtilt_rad.cos();
    let array = if x.abs() < 1e-9 {
        n
    } else {
        let num = (n * PI * x / 2.0).sin();
        let den = (PI * x / 2.0).sin();
        num * num / (n * den * den)
    };
    element * array
}

/// Product of transmitter and receiver antenna gains; UAVs and GUEs are isotropic.
pub fn total_gain(class: LinkClass, zenith_rad: f64, cfg: &AntennaConfig) -> f64 {
    if class.has_bs() {
        bs_array_gain(zenith_rad, cfg)
    } else {
        1.0
    }
}

/// P[ψ > ω] for unit-mean Nakagami-m power fading.
pub fn nakagami_ccdf(omega: f64, m: u32) -> f64 {
    if omega <= 0.0 {
        return 1.0;
    }
    let x = m as f64 * omega;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..m {
        term *= x / i as f64;
        sum += term;
    }
    (sum * (-x).exp()).min(1.0)
}

/// Curve-fitted coefficients of the approximate fading CDF (1 - e^{-bω})^m, m = 1..=10.
pub const FITTED_B: [f64; 10] = [1.0, 1.487, 1.81, 2.052, 2.246, 2.408, 2.546, 2.668, 2.775, 2.872];

pub fn fitted_b(m: u32) -> Result<f64> {
    if (1..=10).contains(&m) {
        Ok(FITTED_B[m as usize - 1])
    } else {
        Err(Error::domain("fitted_b", format!("Nakagami m must be in 1..=10, got {m}")))
    }
}

/// 1 - (1 - e^{-bω})^m with the tabulated b.
pub fn nakagami_ccdf_fitted(omega: f64, m: u32) -> Result<f64> {
    let b = fitted_b(m)?;
    if omega <= 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 - (-(-b * omega).exp_m1()).powi(m as i32))
}

/// Draw a unit-mean Gamma(m, 1/m) fading power.
pub fn sample_fading<R: Rng + ?Sized>(m: u32, rng: &mut R) -> f64 {
    if m == 1 {
        return rand_distr::Exp1.sample(rng);
    }
    let mf = m as f64;
    Gamma::new(mf, 1.0 / mf).expect("valid gamma parameters").sample(rng)
}

/// Fading sampler with pre-built distributions.
#[derive(Debug, Clone)]
pub struct FadingSampler {
    dist: Option<Gamma<f64>>,
}

impl FadingSampler {
    pub fn new(m: u32) -> Self {
        let dist = if m <= 1 {
            None
        } else {
            let mf = m as f64;
            Some(Gamma::new(mf, 1.0 / mf).expect("valid gamma parameters"))
        };
        Self { dist }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.dist {
            None => rand_distr::Exp1.sample(rng),
            Some(g) => g.sample(rng),
        }
    }
}

/// Truncated Rayleigh law of the U2U link distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U2UDistanceDist {
    pub mean_dist: f64,
    pub scale: f64,
    pub max_dist: f64,
}

impl U2UDistanceDist {
    pub fn new(mean_dist: f64, max_dist: f64) -> Result<Self> {
        if !(mean_dist > 0.0) {
            return Err(Error::config("mean_u2u_dist", "must be positive"));
        }
        if !(max_dist > 0.0) {
            return Err(Error::config("max_u2u_dist", "must be positive"));
        }
        Ok(Self {
            mean_dist,
            scale: (2.0 / PI).sqrt() * mean_dist,
            max_dist,
        })
    }

    /// Probability mass kept by the truncation.
    pub fn normalizer(&self) -> f64 {
        -(-self.max_dist * self.max_dist / (2.0 * self.scale * self.scale)).exp_m1()
    }

    pub fn pdf(&self, r: f64) -> f64 {
        u2u_distance_pdf(r, self)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let z = self.normalizer();
        self.scale * (-2.0 * (-u * z).ln_1p()).sqrt()
    }
}

pub fn u2u_distance_pdf(r: f64, dist: &U2UDistanceDist) -> f64 {
    if r < 0.0 || r >= dist.max_dist {
        return 0.0;
    }
    let s2 = dist.scale * dist.scale;
    r * (-r * r / (2.0 * s2)).exp() / (s2 * dist.normalizer())
}

/// Rayleigh scale of the GUE-to-serving-BS distance.
pub fn gue_serving_scale(bs_density: f64) -> f64 {
    1.0 / (2.0 * PI * bs_density).sqrt()
}

pub fn gue_serving_distance_pdf(r: f64, bs_density: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    let s = gue_serving_scale(bs_density);
    r / (s * s) * (-r * r / (2.0 * s * s)).exp()
}

pub fn sample_rayleigh<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    scale * (-2.0 * (1.0 - u).ln()).sqrt()
}
