//! Discrete representation of an interferer's transmit-power law.
//!
//! The expectation over the interferer's own serving link is an integral over
//! its serving distance x and condition ν. It is replaced once per scenario
//! by a weighted sum over Gauss–Kronrod nodes, refined until a set of proxy
//! integrands (mass and fractional moments of the power) converge.

use super::serving::ServingLink;
use crate::channel::Condition;
use crate::error::{Error, Result};
use crate::quad::gk15_rule;

const PROXY_EXPONENTS: [f64; 4] = [0.0, 0.25, 0.5, 1.0];
const N_PROXY: usize = 2 * PROXY_EXPONENTS.len();
const MAX_PANELS: usize = 4000;

/// One point of the discretised power law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAtom {
    /// Probability mass.
    pub weight: f64,
    /// Per-PRB transmit power, mW.
    pub power: f64,
    /// Distance of the interferer to its own receiver.
    pub serving_dist: f64,
    /// Condition of the interferer's serving link.
    pub cond: Condition,
}

struct Panel {
    a: f64,
    b: f64,
    value: [f64; N_PROXY],
    err: [f64; N_PROXY],
}

fn proxies(link: &ServingLink, x: f64) -> [f64; N_PROXY] {
    let cap = link.power_control().p_max();
    let f = link.pdf(x);
    let mut out = [0.0; N_PROXY];
    for (c, cond) in Condition::ALL.into_iter().enumerate() {
        let q = f * link.prob(cond, x);
        if q == 0.0 {
            continue;
        }
        let p = link.power(cond, x) / cap;
        for (j, e) in PROXY_EXPONENTS.iter().enumerate() {
            out[c * PROXY_EXPONENTS.len() + j] = q * p.powf(*e);
        }
    }
    out
}

fn panel(link: &ServingLink, a: f64, b: f64) -> Panel {
    let mut value = [0.0; N_PROXY];
    let mut gauss = [0.0; N_PROXY];
    for (x, wk, wg) in gk15_rule(a, b) {
        let p = proxies(link, x);
        for j in 0..N_PROXY {
            value[j] += wk * p[j];
            gauss[j] += wg * p[j];
        }
    }
    let mut err = [0.0; N_PROXY];
    for j in 0..N_PROXY {
        err[j] = (value[j] - gauss[j]).abs();
    }
    Panel { a, b, value, err }
}

/// Atoms for the transmit power of nodes whose serving link follows `link`,
/// accurate to `rel_tol` on the proxy moments.
pub fn power_atoms(link: &ServingLink, rel_tol: f64) -> Result<Vec<PowerAtom>> {
    let mut edges = vec![0.0];
    edges.extend(link.breaks().iter().copied());
    edges.push(link.upper());
    let mut panels: Vec<Panel> = edges.windows(2).map(|w| panel(link, w[0], w[1])).collect();
    loop {
        let mut total = [0.0; N_PROXY];
        let mut err = [0.0; N_PROXY];
        for p in &panels {
            for j in 0..N_PROXY {
                total[j] += p.value[j];
                err[j] += p.err[j];
            }
        }
        let scale: Vec<f64> = total.iter().map(|t| (rel_tol * t.abs()).max(1e-300)).collect();
        let worst = (0..N_PROXY).map(|j| err[j] / scale[j]).fold(0.0, f64::max);
        if worst <= 1.0 {
            break;
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Tolerance {
                context: "power_atoms".into(),
                msg: format!("proxy moments not converged after {} panels", panels.len()),
            });
        }
        let idx = (0..panels.len())
            .max_by(|&x, &y| {
                let ex = (0..N_PROXY).map(|j| panels[x].err[j] / scale[j]).fold(0.0, f64::max);
                let ey = (0..N_PROXY).map(|j| panels[y].err[j] / scale[j]).fold(0.0, f64::max);
                ex.partial_cmp(&ey).unwrap()
            })
            .unwrap();
        let p = panels.swap_remove(idx);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            break;
        }
        panels.push(panel(link, p.a, mid));
        panels.push(panel(link, mid, p.b));
    }
    panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
    let mut atoms = Vec::with_capacity(panels.len() * 30);
    for p in &panels {
        for (x, wk, _) in gk15_rule(p.a, p.b) {
            let f = link.pdf(x);
            for cond in Condition::ALL {
                let weight = wk * f * link.prob(cond, x);
                if weight > 0.0 {
                    atoms.push(PowerAtom { weight, power: link.power(cond, x), serving_dist: x, cond });
                }
            }
        }
    }
    Ok(atoms)
}

/// A single atom carrying all mass at power `power`.
pub fn point_atom(power: f64) -> Vec<PowerAtom> {
    vec![PowerAtom { weight: 1.0, power, serving_dist: 0.0, cond: Condition::LoS }]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Scenario, ScenarioConfig};
    use crate::power::mean_uav_power;

    #[test]
    fn uav_atoms_reproduce_mean_power() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let link = ServingLink::u2u(&scn).unwrap();
        let atoms = power_atoms(&link, 1e-10).unwrap();
        let mass: f64 = atoms.iter().map(|a| a.weight).sum();
        let mean: f64 = atoms.iter().map(|a| a.weight * a.power).sum();
        let reference = mean_uav_power(&scn.u2u, &scn.pc_uav, &scn.table, &scn.los, scn.heights.h_u).unwrap();
        assert!((mass - 1.0).abs() < 1e-10);
        assert!(((mean - reference) / reference).abs() < 1e-8);
    }

    #[test]
    fn gue_atoms_have_unit_mass_and_respect_cap() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let link = ServingLink::gue(&scn).unwrap();
        let atoms = power_atoms(&link, 1e-10).unwrap();
        let mass: f64 = atoms.iter().map(|a| a.weight).sum();
        assert!((mass - 1.0).abs() < 1e-9);
        assert!(atoms.iter().all(|a| a.power <= scn.pc_gue.p_max() && a.power > 0.0));
    }
}
