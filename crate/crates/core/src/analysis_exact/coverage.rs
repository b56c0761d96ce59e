//! Exact coverage probabilities of the typical U2U link and GUE uplink.

use super::functional::{gue_order, u2u_order, Evaluation, LaplacianModel};
use super::serving::ServingLink;
use crate::channel::Condition;
use crate::config::Scenario;
use crate::curve::{db_to_linear, CoverageCurve};
use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, QuadOptions};
use rayon::prelude::*;
use std::cell::RefCell;

/// Coverage given the serving link, for Nakagami-m signal fading:
/// e^{−N₀s} Σ_{i<m} (−1)ⁱ sⁱDⁱL(s)/i! Σ_{k<m−i} (N₀s)^k/k!.
pub fn conditional_coverage(model: &LaplacianModel, s: f64, m: u32, noise: f64) -> Result<f64> {
    if s == 0.0 {
        return Ok(1.0);
    }
    if !s.is_finite() {
        return Ok(0.0);
    }
    let y = noise * s;
    if y > 745.0 {
        return Ok(0.0);
    }
    let m = m as usize;
    let b = if model.is_trivial() {
        let mut b = vec![0.0; m];
        b[0] = 1.0;
        b
    } else {
        model.scaled_derivatives(s, m - 1)?
    };
    let mut total = 0.0;
    let mut fact = 1.0;
    for (i, bi) in b.iter().enumerate() {
        if i > 0 {
            fact *= i as f64;
        }
        let mut poly = 0.0;
        let mut term = 1.0;
        for k in 0..(m - i) {
            if k > 0 {
                term *= y / k as f64;
            }
            poly += term;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * bi / fact * poly;
    }
    Ok(((-y).exp() * total).clamp(0.0, 1.0))
}

/// ∫ Σ_ν f(x) p^ν(x) g(ν, x) dx over the serving-distance range of `link`.
pub(crate) fn serving_integral<G>(link: &ServingLink, rel_tol: f64, g: G) -> Result<f64>
where
    G: Fn(Condition, f64) -> Result<f64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |x: f64| {
        let f = link.pdf(x);
        if f == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for cond in Condition::ALL {
            let p = link.prob(cond, x);
            if p == 0.0 {
                continue;
            }
            match g(cond, x) {
                Ok(v) => acc += p * v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                }
            }
        }
        f * acc
    };
    let opts = QuadOptions { rel_tol, abs_tol: 1e-10, max_intervals: 4000 };
    let value = integrate_with_breaks(integrand, 0.0, link.upper(), link.breaks(), &opts);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value.map(|v| v.clamp(0.0, 1.0))
}

fn exact_curve(link: &ServingLink, model: &LaplacianModel, scn: &Scenario, thresholds_db: &[f64]) -> Result<CoverageCurve> {
    let coverage = thresholds_db
        .par_iter()
        .map(|&t_db| {
            let t = db_to_linear(t_db);
            serving_integral(link, scn.rel_tol, |cond, x| {
                let m = link.nakagami_m(cond);
                let s = if t == 0.0 { 0.0 } else { m as f64 * t * link.zeta(cond, x) / link.power(cond, x) };
                conditional_coverage(model, s, m, scn.noise_mw)
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    CoverageCurve::new(thresholds_db.to_vec(), coverage, None)
}

/// Exact coverage probability of the typical U2U link over `thresholds_db`.
pub fn coverage_u2u_exact(scn: &Scenario, thresholds_db: &[f64]) -> Result<CoverageCurve> {
    let link = ServingLink::u2u(scn)?;
    let model = LaplacianModel::u2u(scn, u2u_order(scn), Evaluation::Tabulated)?;
    exact_curve(&link, &model, scn, thresholds_db)
}

/// Exact uplink coverage probability of the typical GUE over `thresholds_db`.
pub fn coverage_gue_exact(scn: &Scenario, thresholds_db: &[f64]) -> Result<CoverageCurve> {
    let link = ServingLink::gue(scn)?;
    let model = LaplacianModel::gue(scn, gue_order(scn), Evaluation::Tabulated)?;
    exact_curve(&link, &model, scn, thresholds_db)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::nakagami_ccdf;
    use crate::config::ScenarioConfig;

    #[test]
    fn interference_free_reduces_to_fading_ccdf() {
        let mut cfg = ScenarioConfig::default();
        cfg.bs_density = 0.0;
        cfg.uav_density = 0.0;
        let scn = Scenario::new(&cfg).unwrap();
        let model = LaplacianModel::u2u(&scn, 4, Evaluation::Tabulated).unwrap();
        assert!(model.is_trivial());
        for m in 1..=5 {
            for &s in &[1e9, 1e11, 5e11] {
                let c = conditional_coverage(&model, s, m, scn.noise_mw).unwrap();
                let expect = nakagami_ccdf(scn.noise_mw * s / m as f64, m);
                assert!((c - expect).abs() < 1e-13);
            }
        }
    }
}
