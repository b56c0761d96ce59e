//! Fractional power control and the mean UAV transmit power.

use crate::channel::{Condition, LinkClass, LosModelParams, PropagationTable, U2UDistanceDist};
use crate::error::{Error, Result};
use crate::specfun::{lower_incomplete_gamma, FunctionAccuracy};

/// Fractional power-control settings of one node class; powers in mW.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerControlParams {
    pub rho: f64,
    pub epsilon: f64,
    pub p_max_total: f64,
    pub n_prbs_used: f64,
}

impl PowerControlParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(Error::domain("PowerControlParams", "rho must be positive"));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::domain("PowerControlParams", "epsilon must lie in [0, 1]"));
        }
        if !(self.p_max_total > 0.0) {
            return Err(Error::domain("PowerControlParams", "p_max_total must be positive"));
        }
        if !(self.n_prbs_used >= 1.0) {
            return Err(Error::domain("PowerControlParams", "n_prbs_used must be at least 1"));
        }
        Ok(())
    }

    /// Per-PRB cap.
    pub fn p_max(&self) -> f64 {
        self.p_max_total / self.n_prbs_used
    }
}

/// min(P^max, ρ ζ^ε) for large-scale loss ζ (linear).
pub fn tx_power_per_prb(zeta: f64, pc: &PowerControlParams) -> f64 {
    let cap = pc.p_max();
    if pc.epsilon == 0.0 {
        return cap.min(pc.rho);
    }
    if !zeta.is_finite() {
        return cap;
    }
    cap.min(pc.rho * zeta.powf(pc.epsilon))
}

/// 3-D distance at which power control reaches the cap on a link with
/// reference loss `ref_path_loss`, exponent `alpha` and antenna gain `gain`.
pub fn saturation_distance_raw(ref_path_loss: f64, alpha: f64, gain: f64, pc: &PowerControlParams) -> Result<f64> {
    if pc.epsilon == 0.0 {
        return Err(Error::domain("saturation_distance", "undefined without compensation (epsilon = 0)"));
    }
    Ok((gain / ref_path_loss).powf(1.0 / alpha) * (pc.p_max() / pc.rho).powf(1.0 / (alpha * pc.epsilon)))
}

/// Saturation distance of the U2U serving link in condition `cond`.
pub fn saturation_distance(cond: Condition, pc: &PowerControlParams, table: &PropagationTable, gain: f64) -> Result<f64> {
    let p = table.get(LinkClass::Uu, cond);
    saturation_distance_raw(p.ref_path_loss, p.alpha, gain, pc)
}

/// Mean per-PRB UAV transmit power over the U2U distance law and link condition.
///
/// Each LoS ring is split at the saturation distance. Below it the power is
/// ρ(τ̂r^α)^ε and integrates to an incomplete-gamma difference; above it the
/// cap applies and the Rayleigh tail integrates in closed form.
pub fn mean_uav_power(
    dist: &U2UDistanceDist,
    pc: &PowerControlParams,
    table: &PropagationTable,
    los: &LosModelParams,
    h_u: f64,
) -> Result<f64> {
    pc.validate()?;
    let cap = pc.p_max();
    if pc.epsilon == 0.0 {
        return Ok(cap.min(pc.rho));
    }
    let acc = FunctionAccuracy::default();
    let two_s2 = 2.0 * dist.scale * dist.scale;
    let z = dist.normalizer();
    let width = los.ring_width();
    let n_rings = (dist.max_dist / width).ceil() as usize;
    let mut total = 0.0;
    for cond in Condition::ALL {
        let link = table.get(LinkClass::Uu, cond);
        let r_m = saturation_distance(cond, pc, table, 1.0)?;
        let shape = 1.0 + link.alpha * pc.epsilon / 2.0;
        let c = two_s2.powf(link.alpha * pc.epsilon / 2.0) * pc.rho * link.ref_path_loss.powf(pc.epsilon) / z;
        for ring in 0..n_rings {
            let lo = ring as f64 * width;
            let hi = ((ring + 1) as f64 * width).min(dist.max_dist);
            if hi <= lo {
                continue;
            }
            let p_los = los.los_in_ring(ring, h_u, h_u);
            let p = match cond {
                Condition::LoS => p_los,
                Condition::NLoS => 1.0 - p_los,
            };
            if p == 0.0 {
                continue;
            }
            let split = r_m.clamp(lo, hi);
            if split > lo {
                let ya = lo * lo / two_s2;
                let yb = split * split / two_s2;
                let g = lower_incomplete_gamma(shape, yb, &acc)? - lower_incomplete_gamma(shape, ya, &acc)?;
                total += p * c * g;
            }
            if hi > split {
                let ya = split * split / two_s2;
                let yb = hi * hi / two_s2;
                total += p * cap * ((-ya).exp() - (-yb).exp()) / z;
            }
        }
    }
    Ok(total)
}
