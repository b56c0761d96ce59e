//! Serving-link laws of the typical receiver and of every interferer.

use crate::channel::{
    bs_array_gain, gue_serving_distance_pdf, ring_partition, zenith_angle, AntennaConfig, Condition, LinkClass,
};
use crate::config::Scenario;
use crate::error::Result;
use crate::power::{tx_power_per_prb, PowerControlParams};
use std::f64::consts::PI;

/// Tail mass of the GUE serving distance left beyond the integration range.
const GUE_TAIL: f64 = 1e-12;
const SCAN_POINTS: usize = 4000;

/// Distance law, LoS split, large-scale loss and transmit power of a serving
/// link, either U2U (`LinkClass::Uu`) or GUE uplink (`LinkClass::Gb`).
#[derive(Debug, Clone)]
pub struct ServingLink {
    class: LinkClass,
    scn: Scenario,
    pc: PowerControlParams,
    upper: f64,
    breaks: Vec<f64>,
}

impl ServingLink {
    pub fn u2u(scn: &Scenario) -> Result<Self> {
        Self::build(scn, LinkClass::Uu, scn.pc_uav, scn.u2u.max_dist)
    }

    pub fn gue(scn: &Scenario) -> Result<Self> {
        let upper = (scn.sigma_g() * (-2.0 * GUE_TAIL.ln()).sqrt()).min(scn.truncation_radius);
        Self::build(scn, LinkClass::Gb, scn.pc_gue, upper)
    }

    fn build(scn: &Scenario, class: LinkClass, pc: PowerControlParams, upper: f64) -> Result<Self> {
        let mut link = Self { class, scn: scn.clone(), pc, upper, breaks: Vec::new() };
        let mut breaks: Vec<f64> = ring_partition(&scn.los, upper)?
            .breakpoints
            .into_iter()
            .filter(|&r| r > 0.0 && r < upper)
            .collect();
        let nulls = link.gain_nulls();
        breaks.extend(nulls.iter().copied());
        for cond in Condition::ALL {
            breaks.extend(link.cap_crossings(cond, &nulls));
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
        link.breaks = breaks;
        Ok(link)
    }

    pub fn class(&self) -> LinkClass {
        self.class
    }

    pub fn power_control(&self) -> &PowerControlParams {
        &self.pc
    }

    /// Upper end of the serving-distance range.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Points in (0, upper) where the integrands have kinks or jumps: LoS ring
    /// edges, antenna nulls and power-cap crossings.
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// Density of the 2-D serving distance.
    pub fn pdf(&self, x: f64) -> f64 {
        match self.class {
            LinkClass::Uu => self.scn.u2u.pdf(x),
            _ => gue_serving_distance_pdf(x, self.scn.bs_density),
        }
    }

    /// Probability of serving condition `cond` at distance `x`.
    pub fn prob(&self, cond: Condition, x: f64) -> f64 {
        let (h_tx, h_rx) = self.class.heights(&self.scn.heights);
        let p = self.scn.los.los_in_ring(self.scn.los.ring_index(x), h_tx, h_rx);
        match cond {
            Condition::LoS => p,
            Condition::NLoS => 1.0 - p,
        }
    }

    /// Antenna gain of the serving link; the BS array for GUE uplinks.
    pub fn gain(&self, x: f64) -> f64 {
        match self.class {
            LinkClass::Uu => 1.0,
            _ => {
                let (h_tx, h_rx) = self.class.heights(&self.scn.heights);
                bs_array_gain(zenith_angle(x, h_rx, h_tx), &self.scn.antenna)
            }
        }
    }

    /// Large-scale loss ζ = τ̂ d^α / g; infinite in an antenna null.
    pub fn zeta(&self, cond: Condition, x: f64) -> f64 {
        let link = self.scn.table.get(self.class, cond);
        let dh = self.class.height_diff(&self.scn.heights);
        let d2 = x * x + dh * dh;
        let g = self.gain(x);
        if g <= 0.0 {
            return f64::INFINITY;
        }
        link.ref_path_loss * d2.powf(0.5 * link.alpha) / g
    }

    /// Per-PRB transmit power under fractional power control.
    pub fn power(&self, cond: Condition, x: f64) -> f64 {
        tx_power_per_prb(self.zeta(cond, x), &self.pc)
    }

    pub fn nakagami_m(&self, cond: Condition) -> u32 {
        self.scn.table.get(self.class, cond).nakagami_m
    }

    fn gain_nulls(&self) -> Vec<f64> {
        if self.class == LinkClass::Uu {
            return Vec::new();
        }
        let (h_tx, h_rx) = self.class.heights(&self.scn.heights);
        array_null_radii(h_rx, h_tx, &self.scn.antenna, self.upper)
    }

    fn saturated(&self, cond: Condition, x: f64) -> bool {
        let zeta = self.zeta(cond, x);
        !zeta.is_finite() || self.pc.rho * zeta.powf(self.pc.epsilon) >= self.pc.p_max()
    }

    /// Distances where the power of branch `cond` reaches or leaves the cap.
    fn cap_crossings(&self, cond: Condition, nulls: &[f64]) -> Vec<f64> {
        if self.pc.epsilon == 0.0 {
            return Vec::new();
        }
        let mut grid: Vec<f64> = (1..SCAN_POINTS).map(|i| self.upper * i as f64 / SCAN_POINTS as f64).collect();
        // saturated pockets around a null can be narrower than the scan step
        for &x0 in nulls.iter().chain(std::iter::once(&0.0)) {
            let mut delta = 1e-9 * self.upper;
            while delta < self.upper / SCAN_POINTS as f64 {
                grid.push(x0 - delta);
                grid.push(x0 + delta);
                delta *= 2.0;
            }
        }
        grid.retain(|&x| x > 0.0 && x < self.upper);
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut out = Vec::new();
        for w in grid.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let sa = self.saturated(cond, a);
            if sa == self.saturated(cond, b) {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if self.saturated(cond, mid) == sa {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    }
}

/// Horizontal distances in (0, r_max) at which the BS array factor vanishes
/// toward a node at height `h_other`.
pub fn array_null_radii(h_bs: f64, h_other: f64, cfg: &AntennaConfig, r_max: f64) -> Vec<f64> {
    let dh = h_other - h_bs;
    if dh == 0.0 {
        return Vec::new();
    }
    let n = cfg.n_elements as i64;
    let ct = cfg.downtilt_rad.cos();
    let mut out = Vec::new();
    for k in -(n - 1)..n {
        if k == 0 {
            continue;
        }
        // cos θ = dh / d must equal cos θ_t + 2k/N
        let c = ct + 2.0 * k as f64 / n as f64;
        if c == 0.0 || c.signum() != dh.signum() || c.abs() >= 1.0 {
            continue;
        }
        let d = dh / c;
        let r = (d * d - dh * dh).sqrt();
        if r > 0.0 && r < r_max {
            out.push(r);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Density of co-channel GUEs seen by the typical BS at distance r.
pub fn interfering_gue_density(r: f64, bs_density: f64) -> f64 {
    bs_density * -(-bs_density * PI * r * r).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    fn rayleigh_mass(r: f64, sigma: f64) -> f64 {
        -(-r * r / (2.0 * sigma * sigma)).exp_m1()
    }

    #[test]
    fn nulls_kill_the_array_factor() {
        let cfg = AntennaConfig::default();
        let radii = array_null_radii(25.0, 1.5, &cfg, 10_000.0);
        assert!(!radii.is_empty());
        for r in radii {
            assert!(bs_array_gain(zenith_angle(r, 25.0, 1.5), &cfg) < 1e-20);
        }
    }

    #[test]
    fn gue_power_saturates_at_nulls() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let link = ServingLink::gue(&scn).unwrap();
        let cap = scn.pc_gue.p_max();
        for r in array_null_radii(25.0, 1.5, &scn.antenna, link.upper()) {
            assert_eq!(link.power(Condition::LoS, r), cap);
            assert!(link.breaks().iter().any(|b| (b - r).abs() < 1e-9));
        }
        let tail = 1.0 - rayleigh_mass(link.upper(), scn.sigma_g());
        assert!(tail < 2e-12);
    }

    #[test]
    fn density_of_interfering_gues_tends_to_bs_density() {
        let l = 5e-6;
        assert!(interfering_gue_density(0.0, l) == 0.0);
        assert!((interfering_gue_density(5000.0, l) - l).abs() < 1e-12);
    }
}
