//! Scenario configuration in boundary units (per-km², dBm, degrees) and its
//! validated SI/linear counterpart.

use crate::channel::{
    gue_serving_scale, AntennaConfig, Heights, LinkClass, LosModelParams, NakagamiTable, PropagationTable,
    U2UDistanceDist,
};
use crate::error::{Error, Result};
use crate::power::PowerControlParams;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Underlay,
    Overlay,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeightsConfig {
    pub h_b: f64,
    pub h_g: f64,
    pub h_u: f64,
}

impl Default for HeightsConfig {
    fn default() -> Self {
        Self { h_b: 25.0, h_g: 1.5, h_u: 100.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NodePowerConfig {
    pub rho_dbm: f64,
    pub epsilon: f64,
    pub p_max_dbm: f64,
}

impl Default for NodePowerConfig {
    fn default() -> Self {
        Self { rho_dbm: -58.0, epsilon: 0.6, p_max_dbm: 24.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PowerConfig {
    pub uav: NodePowerConfig,
    pub gue: NodePowerConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AntennaSettings {
    pub n_elements: u32,
    pub downtilt_deg: f64,
    pub element_gain_dbi: f64,
}

impl Default for AntennaSettings {
    fn default() -> Self {
        Self { n_elements: 8, downtilt_deg: 102.0, element_gain_dbi: 8.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MPair {
    pub los: u32,
    pub nlos: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NakagamiConfig {
    pub gb: MPair,
    pub ub: MPair,
    pub gu: MPair,
    pub uu: MPair,
}

impl Default for NakagamiConfig {
    fn default() -> Self {
        Self {
            gb: MPair { los: 3, nlos: 1 },
            ub: MPair { los: 5, nlos: 1 },
            gu: MPair { los: 3, nlos: 1 },
            uu: MPair { los: 5, nlos: 1 },
        }
    }
}

impl NakagamiConfig {
    fn table(&self) -> NakagamiTable {
        let mut m = [[1; 2]; 4];
        for (class, pair) in [
            (LinkClass::Gb, self.gb),
            (LinkClass::Ub, self.ub),
            (LinkClass::Gu, self.gu),
            (LinkClass::Uu, self.uu),
        ] {
            m[class.index()] = [pair.los, pair.nlos];
        }
        NakagamiTable { m }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub psd_dbm_hz: f64,
    pub noise_figure_db: f64,
    pub prb_bandwidth_khz: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { psd_dbm_hz: -174.0, noise_figure_db: 7.0, prb_bandwidth_khz: 180.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    /// Relative tolerance of the outer distance integrals.
    pub rel_tol: f64,
    /// Radius beyond which interferers are ignored, shared by analysis and simulation.
    pub truncation_radius_m: f64,
    /// Largest zenith-angle change within one constant-gain sub-ring.
    pub gain_angle_step_deg: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-6, truncation_radius_m: 10_000.0, gain_angle_step_deg: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub drops: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { drops: 100_000, seed: 1 }
    }
}

/// Every deployment, channel, spectrum and power-control parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    /// BSs per km².
    pub bs_density: f64,
    /// U2U transmitters per km².
    pub uav_density: f64,
    pub heights: HeightsConfig,
    pub mean_u2u_dist: f64,
    pub max_u2u_dist: f64,
    pub carrier_ghz: f64,
    pub bandwidth_mhz: f64,
    pub n_prbs: u32,
    pub eta_u: f64,
    pub mode: ModeKind,
    pub power: PowerConfig,
    pub antenna: AntennaSettings,
    pub los: LosModelParams,
    pub nakagami: NakagamiConfig,
    pub noise: NoiseConfig,
    pub numerics: NumericsConfig,
    pub sim: SimConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            bs_density: 5.0,
            uav_density: 1.0,
            heights: HeightsConfig::default(),
            mean_u2u_dist: 100.0,
            max_u2u_dist: 500.0,
            carrier_ghz: 2.0,
            bandwidth_mhz: 10.0,
            n_prbs: 50,
            eta_u: 1.0,
            mode: ModeKind::Underlay,
            power: PowerConfig::default(),
            antenna: AntennaSettings::default(),
            los: LosModelParams::default(),
            nakagami: NakagamiConfig::default(),
            noise: NoiseConfig::default(),
            numerics: NumericsConfig::default(),
            sim: SimConfig::default(),
        }
    }
}

fn check(ok: bool, field: &str, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(field, msg))
    }
}

impl ScenarioConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        let cfg: Self = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("configuration serializes")
    }

    /// Copy with the dotted `path` (e.g. `heights.h_u`) set to `value`.
    pub fn with_param(&self, path: &str, value: f64) -> Result<Self> {
        let mut root = self.to_value();
        let mut node = &mut root;
        for key in path.split('.') {
            node = node
                .as_object_mut()
                .and_then(|o| o.get_mut(key))
                .ok_or_else(|| Error::config(path, "no such parameter"))?;
        }
        if !node.is_number() {
            return Err(Error::config(path, "parameter is not numeric"));
        }
        *node = if node.is_u64() || node.is_i64() {
            if value.fract() != 0.0 || value < 0.0 {
                return Err(Error::config(path, "parameter takes a non-negative integer"));
            }
            serde_json::Value::from(value as u64)
        } else {
            serde_json::Value::from(value)
        };
        Self::from_value(root)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.bs_density >= 0.0 && self.bs_density.is_finite(), "bs_density", "must be non-negative")?;
        check(self.uav_density >= 0.0 && self.uav_density.is_finite(), "uav_density", "must be non-negative")?;
        check(self.heights.h_b > 0.0, "heights.h_b", "must be positive")?;
        check(self.heights.h_g > 0.0, "heights.h_g", "must be positive")?;
        check(self.heights.h_u >= 1.0, "heights.h_u", "must be at least 1 m")?;
        check(self.mean_u2u_dist > 0.0, "mean_u2u_dist", "must be positive")?;
        check(self.max_u2u_dist > 0.0, "max_u2u_dist", "must be positive")?;
        check(self.carrier_ghz > 0.0, "carrier_ghz", "must be positive")?;
        check(self.bandwidth_mhz > 0.0, "bandwidth_mhz", "must be positive")?;
        check(self.n_prbs >= 1, "n_prbs", "must be at least 1")?;
        check((0.0..=1.0).contains(&self.eta_u), "eta_u", "must lie in [0, 1]")?;
        if self.mode == ModeKind::Overlay {
            check(self.eta_u > 0.0 && self.eta_u < 1.0, "eta_u", "overlay needs 0 < eta_u < 1")?;
        }
        for (name, p) in [("power.uav", self.power.uav), ("power.gue", self.power.gue)] {
            check((0.0..=1.0).contains(&p.epsilon), &format!("{name}.epsilon"), "must lie in [0, 1]")?;
            check(p.rho_dbm.is_finite(), &format!("{name}.rho_dbm"), "must be finite")?;
            check(p.p_max_dbm.is_finite(), &format!("{name}.p_max_dbm"), "must be finite")?;
        }
        check(self.antenna.n_elements >= 1, "antenna.n_elements", "must be at least 1")?;
        check(
            self.antenna.downtilt_deg > 0.0 && self.antenna.downtilt_deg < 180.0,
            "antenna.downtilt_deg",
            "must lie in (0, 180)",
        )?;
        check(self.antenna.element_gain_dbi.is_finite(), "antenna.element_gain_dbi", "must be finite")?;
        check(self.los.a1 > 0.0, "los.a1", "must be positive")?;
        check(self.los.a2 > 0.0, "los.a2", "must be positive")?;
        check(self.los.a3 > 0.0, "los.a3", "must be positive")?;
        for (name, pair) in [
            ("gb", self.nakagami.gb),
            ("ub", self.nakagami.ub),
            ("gu", self.nakagami.gu),
            ("uu", self.nakagami.uu),
        ] {
            check((1..=10).contains(&pair.los), &format!("nakagami.{name}.los"), "must lie in 1..=10")?;
            check((1..=10).contains(&pair.nlos), &format!("nakagami.{name}.nlos"), "must lie in 1..=10")?;
        }
        check(self.noise.prb_bandwidth_khz > 0.0, "noise.prb_bandwidth_khz", "must be positive")?;
        check(self.numerics.rel_tol > 0.0 && self.numerics.rel_tol < 0.1, "numerics.rel_tol", "must lie in (0, 0.1)")?;
        check(
            self.numerics.truncation_radius_m > 0.0 && self.numerics.truncation_radius_m <= 50_000.0,
            "numerics.truncation_radius_m",
            "must lie in (0, 50000]",
        )?;
        check(
            self.numerics.gain_angle_step_deg > 0.0 && self.numerics.gain_angle_step_deg <= 90.0,
            "numerics.gain_angle_step_deg",
            "must lie in (0, 90]",
        )?;
        check(self.sim.drops >= 1, "sim.drops", "must be at least 1")?;
        // exponents depend on h_u; this also rejects exponents of exactly 2
        PropagationTable::urban(self.carrier_ghz, self.heights.h_u, &self.nakagami.table())?;
        Ok(())
    }
}

/// Read and validate a JSON configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ScenarioConfig::from_json_str(&text)
}

/// Spectrum sharing strategy with the UAV spectrum fraction η_u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SharingMode {
    Underlay { eta_u: f64 },
    Overlay { eta_u: f64 },
}

impl SharingMode {
    pub fn eta_u(&self) -> f64 {
        match *self {
            SharingMode::Underlay { eta_u } | SharingMode::Overlay { eta_u } => eta_u,
        }
    }

    pub fn is_overlay(&self) -> bool {
        matches!(self, SharingMode::Overlay { .. })
    }
}

fn dbm_to_mw(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// Validated scenario in SI and linear units.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    /// BSs per m².
    pub bs_density: f64,
    /// U2U transmitters per m².
    pub uav_density: f64,
    pub heights: Heights,
    pub u2u: U2UDistanceDist,
    pub table: PropagationTable,
    pub los: LosModelParams,
    pub antenna: AntennaConfig,
    pub mode: SharingMode,
    pub pc_uav: PowerControlParams,
    pub pc_gue: PowerControlParams,
    /// Noise power per PRB, mW.
    pub noise_mw: f64,
    pub bandwidth_hz: f64,
    pub truncation_radius: f64,
    pub rel_tol: f64,
    pub gain_angle_step: f64,
    /// When set, UAVs do not interfere at BSs regardless of the mode.
    pub uav_free_ground: bool,
}

impl Scenario {
    pub fn new(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let c = config;
        let table = PropagationTable::urban(c.carrier_ghz, c.heights.h_u, &c.nakagami.table())?;
        let mode = match c.mode {
            ModeKind::Underlay => SharingMode::Underlay { eta_u: c.eta_u },
            ModeKind::Overlay => SharingMode::Overlay { eta_u: c.eta_u },
        };
        let n = c.n_prbs as f64;
        let uav_prbs = (c.eta_u * n).round().max(1.0);
        let noise_dbm = c.noise.psd_dbm_hz + 10.0 * (c.noise.prb_bandwidth_khz * 1e3).log10() + c.noise.noise_figure_db;
        Ok(Self {
            config: c.clone(),
            bs_density: c.bs_density * 1e-6,
            uav_density: c.uav_density * 1e-6,
            heights: Heights { h_b: c.heights.h_b, h_g: c.heights.h_g, h_u: c.heights.h_u },
            u2u: U2UDistanceDist::new(c.mean_u2u_dist, c.max_u2u_dist)?,
            table,
            los: c.los,
            antenna: AntennaConfig {
                n_elements: c.antenna.n_elements,
                downtilt_rad: c.antenna.downtilt_deg.to_radians(),
                element_max_gain: 10f64.powf(c.antenna.element_gain_dbi / 10.0),
                spacing_wavelengths: 0.5,
            },
            mode,
            pc_uav: PowerControlParams {
                rho: dbm_to_mw(c.power.uav.rho_dbm),
                epsilon: c.power.uav.epsilon,
                p_max_total: dbm_to_mw(c.power.uav.p_max_dbm),
                n_prbs_used: uav_prbs,
            },
            pc_gue: PowerControlParams {
                rho: dbm_to_mw(c.power.gue.rho_dbm),
                epsilon: c.power.gue.epsilon,
                p_max_total: dbm_to_mw(c.power.gue.p_max_dbm),
                n_prbs_used: n,
            },
            noise_mw: dbm_to_mw(noise_dbm),
            bandwidth_hz: c.bandwidth_mhz * 1e6,
            truncation_radius: c.numerics.truncation_radius_m,
            rel_tol: c.numerics.rel_tol,
            gain_angle_step: c.numerics.gain_angle_step_deg.to_radians(),
            uav_free_ground: false,
        })
    }

    /// Copy in which UAVs never interfere at BSs (ground-only baseline).
    pub fn ground_baseline(&self) -> Self {
        Self { uav_free_ground: true, ..self.clone() }
    }

    /// Density of UAVs transmitting on the typical PRB.
    pub fn active_uav_density(&self) -> f64 {
        match self.mode {
            SharingMode::Underlay { eta_u } => eta_u * self.uav_density,
            SharingMode::Overlay { .. } => self.uav_density,
        }
    }

    /// Density of UAVs interfering at the typical U2U receiver.
    pub fn uav_density_at_uav(&self) -> f64 {
        self.active_uav_density()
    }

    /// Density of GUEs interfering at the typical U2U receiver.
    pub fn gue_density_at_uav(&self) -> f64 {
        if self.mode.is_overlay() {
            0.0
        } else {
            self.bs_density
        }
    }

    /// Density of UAVs interfering at the typical BS.
    pub fn uav_density_at_bs(&self) -> f64 {
        if self.mode.is_overlay() || self.uav_free_ground {
            0.0
        } else {
            self.active_uav_density()
        }
    }

    /// Rayleigh scale of the GUE serving distance.
    pub fn sigma_g(&self) -> f64 {
        gue_serving_scale(self.bs_density)
    }

    /// Bandwidth used by one U2U link.
    pub fn uav_bandwidth_hz(&self) -> f64 {
        self.mode.eta_u() * self.bandwidth_hz
    }

    /// Bandwidth used by one GUE.
    pub fn gue_bandwidth_hz(&self) -> f64 {
        match self.mode {
            SharingMode::Underlay { .. } => self.bandwidth_hz,
            SharingMode::Overlay { eta_u } => (1.0 - eta_u) * self.bandwidth_hz,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Condition;
    use approx::assert_relative_eq;

    #[test]
    fn empty_object_gives_defaults() {
        let cfg = ScenarioConfig::from_json_str("{}").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.bs_density, 5.0);
        assert_eq!(cfg.heights.h_u, 100.0);
        assert_eq!(cfg.power.uav.epsilon, 0.6);
    }

    #[test]
    fn rejects_out_of_range_eta() {
        let err = ScenarioConfig::from_json_str(r#"{"eta_u": 1.5}"#).unwrap_err();
        assert!(err.to_string().contains("eta_u"), "{err}");
        assert!(err.is_config());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(matches!(ScenarioConfig::from_json_str(r#"{"bogus": 1}"#), Err(Error::Parse(_))));
        assert!(ScenarioConfig::from_json_str(r#"{"heights": {"h_x": 1}}"#).is_err());
    }

    #[test]
    fn height_dependent_exponents() {
        let cfg = ScenarioConfig::from_json_str(r#"{"heights": {"h_u": 150}}"#).unwrap();
        let s = Scenario::new(&cfg).unwrap();
        assert_relative_eq!(s.table.get(LinkClass::Ub, Condition::NLoS).alpha, 3.0767, epsilon = 1e-4);
    }

    #[test]
    fn set_nested_parameter() {
        let cfg = ScenarioConfig::default().with_param("heights.h_u", 50.0).unwrap();
        assert_eq!(cfg.heights.h_u, 50.0);
        let cfg = cfg.with_param("n_prbs", 25.0).unwrap();
        assert_eq!(cfg.n_prbs, 25);
        assert!(ScenarioConfig::default().with_param("heights.nope", 1.0).is_err());
        assert!(ScenarioConfig::default().with_param("eta_u", 2.0).is_err());
    }

    #[test]
    fn derived_units() {
        let s = Scenario::new(&ScenarioConfig::default()).unwrap();
        assert_relative_eq!(10.0 * s.noise_mw.log10(), -114.447, epsilon = 1e-3);
        assert_relative_eq!(10.0 * s.pc_uav.p_max().log10(), 24.0 - 10.0 * 50f64.log10(), epsilon = 1e-9);
        assert_eq!(s.uav_bandwidth_hz(), 10e6);
    }
}
