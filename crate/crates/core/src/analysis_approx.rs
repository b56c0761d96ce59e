//! Approximate coverage: fading CDF replaced by the fitted form (1 − e^{−bω})^m,
//! NLoS UAV links dropped and UAV power replaced by its mean.

use crate::analysis_exact::{
    gue_atoms, mean_uav_atom, serving_integral, Evaluation, Family, FamilySpec, LaplacianModel, ServingLink,
};
use crate::channel::{fitted_b, Condition};
use crate::config::Scenario;
use crate::curve::{db_to_linear, CoverageCurve};
use crate::error::Result;
use rayon::prelude::*;

/// Σ_{i=1}^{m} C(m,i)(−1)^{i+1} e^{−z_i N₀} L(z_i), z_i = i·b·T·ζ/P.
fn binomial_coverage(model: &LaplacianModel, z: f64, m: u32, noise: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    if !z.is_finite() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut binom = 1.0;
    for i in 1..=m {
        binom *= (m - i + 1) as f64 / i as f64;
        let zi = i as f64 * z;
        let log_l = if model.is_trivial() { 0.0 } else { model.log_value(zi)? };
        let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * binom * (log_l - zi * noise).exp();
    }
    Ok(total.clamp(0.0, 1.0))
}

fn approx_curve(
    link: &ServingLink,
    model: &LaplacianModel,
    scn: &Scenario,
    conditions: &[Condition],
    thresholds_db: &[f64],
) -> Result<CoverageCurve> {
    let coverage = thresholds_db
        .par_iter()
        .map(|&t_db| {
            let t = db_to_linear(t_db);
            serving_integral(link, scn.rel_tol, |cond, x| {
                if !conditions.contains(&cond) {
                    return Ok(0.0);
                }
                let m = link.nakagami_m(cond);
                let z = if t == 0.0 { 0.0 } else { fitted_b(m)? * t * link.zeta(cond, x) / link.power(cond, x) };
                binomial_coverage(model, z, m, scn.noise_mw)
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    CoverageCurve::new(thresholds_db.to_vec(), coverage, None)
}

/// Approximate U2U coverage: LoS serving links only, LoS interferers only,
/// UAV interferers at the mean UAV power.
pub fn coverage_u2u_approx(scn: &Scenario, thresholds_db: &[f64]) -> Result<CoverageCurve> {
    let link = ServingLink::u2u(scn)?;
    let mut specs = vec![FamilySpec {
        family: Family::Uu,
        conditions: vec![Condition::LoS],
        density: scn.uav_density_at_uav(),
        atoms: mean_uav_atom(scn)?,
    }];
    if scn.gue_density_at_uav() > 0.0 {
        specs.push(FamilySpec {
            family: Family::Gu,
            conditions: vec![Condition::LoS],
            density: scn.gue_density_at_uav(),
            atoms: gue_atoms(scn)?,
        });
    }
    let model = LaplacianModel::from_families(scn, &specs, 0, Evaluation::Tabulated)?;
    approx_curve(&link, &model, scn, &[Condition::LoS], thresholds_db)
}

/// Approximate GUE uplink coverage: both serving conditions, LoS UAV
/// interferers at the mean UAV power, GUE interference kept in full.
pub fn coverage_gue_approx(scn: &Scenario, thresholds_db: &[f64]) -> Result<CoverageCurve> {
    let link = ServingLink::gue(scn)?;
    let mut specs = Vec::new();
    if scn.uav_density_at_bs() > 0.0 {
        specs.push(FamilySpec {
            family: Family::Ub,
            conditions: vec![Condition::LoS],
            density: scn.uav_density_at_bs(),
            atoms: mean_uav_atom(scn)?,
        });
    }
    specs.push(FamilySpec {
        family: Family::Gg,
        conditions: Condition::ALL.to_vec(),
        density: scn.bs_density,
        atoms: gue_atoms(scn)?,
    });
    let model = LaplacianModel::from_families(scn, &specs, 0, Evaluation::Tabulated)?;
    approx_curve(&link, &model, scn, &Condition::ALL, thresholds_db)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    #[test]
    fn low_threshold_gives_mean_los_probability() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let curve = coverage_u2u_approx(&scn, &[-60.0]).unwrap();
        let link = ServingLink::u2u(&scn).unwrap();
        let p_los = serving_integral(&link, 1e-10, |c, _| Ok(if c == Condition::LoS { 1.0 } else { 0.0 })).unwrap();
        assert!((curve.coverage[0] - p_los).abs() < 1e-3);
    }
}
