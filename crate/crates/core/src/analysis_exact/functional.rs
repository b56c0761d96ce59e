//! Interference functionals, Laplace transforms of the aggregate interference
//! and their derivatives.
//!
//! For an interferer family of density λ the Laplace transform is
//! exp(−2πλ J(s)) with J(s) = Σ_ξ Σ_k w_k H_ξ(s P_k): H_ξ is the ring sum of
//! Ψ for interferer condition ξ and (w_k, P_k) are the power atoms. Everything
//! is carried as scaled derivatives sⁿ dⁿ/dsⁿ, which are smooth in ln s and
//! tabulated lazily there.

use super::atoms::{point_atom, power_atoms, PowerAtom};
use super::kernel::{RingKernel, MAX_DIM};
use super::serving::ServingLink;
use super::table::{LogChebTable, Sampler};
use crate::channel::{Condition, LinkClass};
use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::power::mean_uav_power;
use std::f64::consts::PI;
use std::sync::Arc;

/// Relative accuracy of the power atoms.
const ATOM_TOL: f64 = 1e-10;

/// Interferer family as seen by a receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// UAVs at a UAV receiver.
    Uu,
    /// GUEs at a UAV receiver.
    Gu,
    /// UAVs at a BS.
    Ub,
    /// GUEs at a BS, each farther away than its own serving BS.
    Gg,
}

impl Family {
    pub fn class(self) -> LinkClass {
        match self {
            Family::Uu => LinkClass::Uu,
            Family::Gu => LinkClass::Gu,
            Family::Ub => LinkClass::Ub,
            Family::Gg => LinkClass::Gb,
        }
    }
}

/// How J(s) is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    /// Lazy Chebyshev tables in ln s.
    Tabulated,
    /// Ring sums evaluated at every call.
    Direct,
}

/// One family entering a Laplace transform.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub family: Family,
    pub conditions: Vec<Condition>,
    /// Interferers per m².
    pub density: f64,
    pub atoms: Vec<PowerAtom>,
}

/// Laplace transform value and derivatives Dⁱ L(s), i = 0..=order.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianEvaluation {
    pub value: f64,
    pub derivatives: Vec<f64>,
}

enum Source {
    Table(LogChebTable),
    Direct(Box<Sampler>),
}

impl Source {
    fn eval(&self, t: f64, out: &mut [f64]) -> Result<()> {
        match self {
            Source::Table(table) => table.eval(t, out),
            Source::Direct(f) => f(t, out),
        }
    }
}

struct Term {
    family: Family,
    density: f64,
    source: Source,
}

/// Evaluator of exp(−2π Σ_f λ_f J_f(s)) and its derivatives.
pub struct LaplacianModel {
    order: usize,
    terms: Vec<Term>,
}

impl std::fmt::Debug for LaplacianModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LaplacianModel")
            .field("order", &self.order)
            .field("families", &self.terms.iter().map(|t| (t.family, t.density)).collect::<Vec<_>>())
            .finish()
    }
}

/// Scaled derivatives of H for one kernel, tabulated in t = ln u.
fn kernel_table(kernel: Arc<RingKernel>) -> Arc<LogChebTable> {
    let dim = kernel.order() + 1;
    Arc::new(LogChebTable::new(
        dim,
        Box::new(move |t: f64, out: &mut [f64]| {
            kernel.eval(t.exp(), out);
            Ok(())
        }),
    ))
}

/// Tail sums T_b = Σ_{i ≥ b} of the interval contributions for b = 0..=blocks.
fn tail_table(kernel: Arc<RingKernel>, blocks: usize) -> Arc<LogChebTable> {
    let dim = kernel.order() + 1;
    let n = kernel.len();
    Arc::new(LogChebTable::new(
        (blocks + 1) * dim,
        Box::new(move |t: f64, out: &mut [f64]| {
            out.iter_mut().for_each(|x| *x = 0.0);
            let mut c = vec![0.0; n * dim];
            kernel.contributions(t.exp(), 0, n, &mut c);
            let mut acc = [0.0; MAX_DIM];
            for b in (0..n).rev() {
                for k in 0..dim {
                    acc[k] += c[b * dim + k];
                }
                if b <= blocks {
                    out[b * dim..(b + 1) * dim].copy_from_slice(&acc[..dim]);
                }
            }
            Ok(())
        }),
    ))
}

/// Atom positions inside the gg kernel: (weight, ln P, interval index, serving distance).
fn gg_placements(kernel: &RingKernel, atoms: &[PowerAtom]) -> Vec<(f64, f64, usize, f64)> {
    atoms
        .iter()
        .map(|a| (a.weight, a.power.ln(), kernel.interval_of(a.serving_dist), a.serving_dist))
        .collect()
}

fn family_source(
    scn: &Scenario,
    spec: &FamilySpec,
    order: usize,
    mode: Evaluation,
) -> Result<Source> {
    let dim = order + 1;
    let mut kernels = Vec::new();
    for &cond in &spec.conditions {
        kernels.push(Arc::new(RingKernel::new(scn, spec.family.class(), cond, order)?));
    }
    if spec.atoms.iter().any(|a| !(a.power > 0.0)) {
        return Err(Error::domain("laplacian", "power atoms must be positive"));
    }
    let sampler: Box<Sampler> = if spec.family == Family::Gg {
        let parts: Vec<_> = kernels
            .into_iter()
            .map(|k| {
                let placements = gg_placements(&k, &spec.atoms);
                let blocks = placements.iter().map(|p| p.2 + 1).max().unwrap_or(0);
                let tails = match mode {
                    Evaluation::Tabulated => Some(tail_table(k.clone(), blocks)),
                    Evaluation::Direct => None,
                };
                (k, placements, tails)
            })
            .collect();
        Box::new(move |t: f64, out: &mut [f64]| {
            out[..dim].iter_mut().for_each(|x| *x = 0.0);
            let mut buf = [0.0; MAX_DIM];
            let mut part = [0.0; MAX_DIM];
            for (kernel, placements, tails) in &parts {
                let mut direct = Vec::new();
                for &(w, lnp, j, x) in placements {
                    let u = (t + lnp).exp();
                    match tails {
                        Some(tab) => tab.eval_range(t + lnp, (j + 1) * dim, &mut buf[..dim])?,
                        None => {
                            let n = kernel.len();
                            direct.resize((n - j - 1) * dim, 0.0);
                            kernel.contributions(u, j + 1, n, &mut direct);
                            buf[..dim].iter_mut().for_each(|x| *x = 0.0);
                            for chunk in direct.chunks(dim).rev() {
                                for k in 0..dim {
                                    buf[k] += chunk[k];
                                }
                            }
                        }
                    }
                    kernel.partial(u, j, x, &mut part[..dim]);
                    for k in 0..dim {
                        out[k] += w * (buf[k] + part[k]);
                    }
                }
            }
            Ok(())
        })
    } else {
        let atoms: Vec<(f64, f64)> = spec.atoms.iter().map(|a| (a.weight, a.power.ln())).collect();
        let parts: Vec<_> = kernels
            .into_iter()
            .map(|k| {
                let table = match mode {
                    Evaluation::Tabulated => Some(kernel_table(k.clone())),
                    Evaluation::Direct => None,
                };
                (k, table)
            })
            .collect();
        Box::new(move |t: f64, out: &mut [f64]| {
            out[..dim].iter_mut().for_each(|x| *x = 0.0);
            let mut buf = [0.0; MAX_DIM];
            for (kernel, table) in &parts {
                for &(w, lnp) in &atoms {
                    match table {
                        Some(tab) => tab.eval(t + lnp, &mut buf[..dim])?,
                        None => kernel.eval((t + lnp).exp(), &mut buf[..dim]),
                    }
                    for k in 0..dim {
                        out[k] += w * buf[k];
                    }
                }
            }
            Ok(())
        })
    };
    Ok(match mode {
        Evaluation::Tabulated => Source::Table(LogChebTable::new(dim, sampler)),
        Evaluation::Direct => Source::Direct(sampler),
    })
}

/// Scaled Laplacian derivatives bₙ = sⁿ Dⁿ L from scaled exponent derivatives
/// aₙ = sⁿ Dⁿ log L, via Dⁿ L = Σ_{j<n} C(n−1, j) D^{n−j} log L · Dʲ L.
pub fn leibniz_scaled(a: &[f64]) -> Vec<f64> {
    let mut b = vec![0.0; a.len()];
    if a.is_empty() {
        return b;
    }
    b[0] = a[0].exp();
    for n in 1..a.len() {
        let mut binom = 1.0;
        let mut acc = 0.0;
        for j in 0..n {
            acc += binom * a[n - j] * b[j];
            binom *= (n - 1 - j) as f64 / (j + 1) as f64;
        }
        b[n] = acc;
    }
    b
}

impl LaplacianModel {
    /// Model over explicit families; families with zero density are dropped.
    pub fn from_families(scn: &Scenario, specs: &[FamilySpec], order: usize, mode: Evaluation) -> Result<Self> {
        if order + 1 > MAX_DIM {
            return Err(Error::domain("laplacian", format!("derivative order {order} above {}", MAX_DIM - 1)));
        }
        let mut terms = Vec::new();
        for spec in specs {
            if spec.density < 0.0 {
                return Err(Error::domain("laplacian", "densities must be non-negative"));
            }
            if spec.density == 0.0 || spec.conditions.is_empty() || spec.atoms.is_empty() {
                continue;
            }
            terms.push(Term { family: spec.family, density: spec.density, source: family_source(scn, spec, order, mode)? });
        }
        Ok(Self { order, terms })
    }

    /// Exact transform at the typical U2U receiver.
    pub fn u2u(scn: &Scenario, order: usize, mode: Evaluation) -> Result<Self> {
        Self::from_families(scn, &u2u_families(scn)?, order, mode)
    }

    /// Exact transform at the typical BS.
    pub fn gue(scn: &Scenario, order: usize, mode: Evaluation) -> Result<Self> {
        Self::from_families(scn, &gue_families(scn)?, order, mode)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// True when no family contributes, so L ≡ 1.
    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty()
    }

    /// aₙ = sⁿ Dⁿ log L(s), n = 0..out.len(), for s > 0.
    pub fn exponent_scaled(&self, s: f64, out: &mut [f64]) -> Result<()> {
        if out.len() > self.order + 1 {
            return Err(Error::domain("laplacian_derivatives", format!("order {} above model order {}", out.len() - 1, self.order)));
        }
        out.iter_mut().for_each(|x| *x = 0.0);
        if s == 0.0 {
            return Ok(());
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain("laplacian", format!("s must be finite and non-negative, got {s}")));
        }
        let t = s.ln();
        let mut buf = [0.0; MAX_DIM];
        for term in &self.terms {
            term.source.eval(t, &mut buf[..self.order + 1])?;
            for (o, v) in out.iter_mut().zip(&buf) {
                *o -= 2.0 * PI * term.density * v;
            }
        }
        Ok(())
    }

    /// log L(s).
    pub fn log_value(&self, s: f64) -> Result<f64> {
        let mut a = [0.0];
        self.exponent_scaled(s, &mut a)?;
        Ok(a[0])
    }

    /// bₙ = sⁿ Dⁿ L(s) for n = 0..=order.
    pub fn scaled_derivatives(&self, s: f64, order: usize) -> Result<Vec<f64>> {
        let mut a = vec![0.0; order + 1];
        self.exponent_scaled(s, &mut a)?;
        Ok(leibniz_scaled(&a))
    }

    /// L(s) and Dⁱ L(s) for i ≤ order. At s = 0 only the value is defined and returned.
    pub fn evaluate(&self, s: f64, order: usize) -> Result<LaplacianEvaluation> {
        if s == 0.0 {
            return Ok(LaplacianEvaluation { value: 1.0, derivatives: vec![1.0] });
        }
        let b = self.scaled_derivatives(s, order)?;
        let derivatives: Vec<f64> = b.iter().enumerate().map(|(n, v)| v / s.powi(n as i32)).collect();
        Ok(LaplacianEvaluation { value: b[0], derivatives })
    }
}

/// Power atoms of UAV interferers.
pub fn uav_atoms(scn: &Scenario) -> Result<Vec<PowerAtom>> {
    power_atoms(&ServingLink::u2u(scn)?, ATOM_TOL)
}

/// Power atoms of GUE interferers.
pub fn gue_atoms(scn: &Scenario) -> Result<Vec<PowerAtom>> {
    power_atoms(&ServingLink::gue(scn)?, ATOM_TOL)
}

/// Mean per-PRB UAV power as a single atom.
pub fn mean_uav_atom(scn: &Scenario) -> Result<Vec<PowerAtom>> {
    let p = mean_uav_power(&scn.u2u, &scn.pc_uav, &scn.table, &scn.los, scn.heights.h_u)?;
    Ok(point_atom(p))
}

fn u2u_families(scn: &Scenario) -> Result<Vec<FamilySpec>> {
    let both = Condition::ALL.to_vec();
    let mut specs = Vec::new();
    if scn.uav_density_at_uav() > 0.0 {
        specs.push(FamilySpec { family: Family::Uu, conditions: both.clone(), density: scn.uav_density_at_uav(), atoms: uav_atoms(scn)? });
    }
    if scn.gue_density_at_uav() > 0.0 {
        specs.push(FamilySpec { family: Family::Gu, conditions: both, density: scn.gue_density_at_uav(), atoms: gue_atoms(scn)? });
    }
    Ok(specs)
}

fn gue_families(scn: &Scenario) -> Result<Vec<FamilySpec>> {
    let both = Condition::ALL.to_vec();
    let mut specs = Vec::new();
    if scn.uav_density_at_bs() > 0.0 {
        specs.push(FamilySpec { family: Family::Ub, conditions: both.clone(), density: scn.uav_density_at_bs(), atoms: uav_atoms(scn)? });
    }
    if scn.bs_density > 0.0 {
        specs.push(FamilySpec { family: Family::Gg, conditions: both, density: scn.bs_density, atoms: gue_atoms(scn)? });
    }
    Ok(specs)
}

fn max_m(scn: &Scenario, class: LinkClass) -> usize {
    Condition::ALL.iter().map(|&c| scn.table.get(class, c).nakagami_m as usize).max().unwrap_or(1)
}

/// Highest derivative order needed by the exact U2U coverage.
pub fn u2u_order(scn: &Scenario) -> usize {
    max_m(scn, LinkClass::Uu) - 1
}

/// Highest derivative order needed by the exact GUE coverage.
pub fn gue_order(scn: &Scenario) -> usize {
    max_m(scn, LinkClass::Gb) - 1
}

fn single_family(scn: &Scenario, family: Family, cond: Condition, atoms: Vec<PowerAtom>, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain("interference_functional", "s must be non-negative"));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let spec = FamilySpec { family, conditions: vec![cond], density: 1.0, atoms };
    let source = family_source(scn, &spec, 0, Evaluation::Direct)?;
    let mut out = [0.0];
    source.eval(s.ln(), &mut out)?;
    Ok(out[0])
}

/// I^ξ for UAV (`Uu`) or GUE (`Gu`) interferers at a UAV receiver: the
/// expected per-interferer ring sum, averaged over the interferer's power law.
pub fn interference_functional_uu_gu(s: f64, side: LinkClass, cond: Condition, scn: &Scenario) -> Result<f64> {
    match side {
        LinkClass::Uu => single_family(scn, Family::Uu, cond, uav_atoms(scn)?, s),
        LinkClass::Gu => single_family(scn, Family::Gu, cond, gue_atoms(scn)?, s),
        _ => Err(Error::domain("interference_functional_uu_gu", "side must be uu or gu")),
    }
}

/// I^ξ for UAV interferers at the typical BS, with ring-wise array gain.
pub fn interference_functional_ug(s: f64, cond: Condition, scn: &Scenario) -> Result<f64> {
    single_family(scn, Family::Ub, cond, uav_atoms(scn)?, s)
}

/// I^ξ for GUE interferers at the typical BS, normalised so that their Laplace
/// factor is exp(−(2πλ_b)² I).
pub fn interference_functional_gg(s: f64, cond: Condition, scn: &Scenario) -> Result<f64> {
    if !(scn.bs_density > 0.0) {
        return Err(Error::domain("interference_functional_gg", "needs a positive BS density"));
    }
    let j = single_family(scn, Family::Gg, cond, gue_atoms(scn)?, s)?;
    Ok(j / (2.0 * PI * scn.bs_density))
}

/// Laplace transform of the interference at the typical U2U receiver.
pub fn laplacian_u2u(s: f64, scn: &Scenario) -> Result<LaplacianEvaluation> {
    let order = u2u_order(scn);
    LaplacianModel::u2u(scn, order, Evaluation::Direct)?.evaluate(s, order)
}

/// Laplace transform of the interference at the typical BS.
pub fn laplacian_gue(s: f64, scn: &Scenario) -> Result<LaplacianEvaluation> {
    let order = gue_order(scn);
    LaplacianModel::gue(scn, order, Evaluation::Direct)?.evaluate(s, order)
}

/// Dⁱ L(s) for i = 0..=order.
pub fn laplacian_derivatives(model: &LaplacianModel, s: f64, order: usize) -> Result<Vec<f64>> {
    if order > model.order() {
        return Err(Error::domain(
            "laplacian_derivatives",
            format!("order {order} exceeds the available order {}", model.order()),
        ));
    }
    Ok(model.evaluate(s, order)?.derivatives)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    #[test]
    fn leibniz_matches_exponential_of_polynomial() {
        // log L = −c s  ⇒  sⁿ Dⁿ L = (−c s)ⁿ e^{−cs}
        let (c, s) = (0.7, 1.3);
        let a = [-c * s, -c * s, 0.0, 0.0];
        let b = leibniz_scaled(&a);
        for (n, v) in b.iter().enumerate() {
            let expect = (-c * s).powi(n as i32) * (-c * s).exp();
            assert!((v - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn tabulated_matches_direct() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let order = u2u_order(&scn);
        let tab = LaplacianModel::u2u(&scn, order, Evaluation::Tabulated).unwrap();
        let dir = LaplacianModel::u2u(&scn, order, Evaluation::Direct).unwrap();
        for &s in &[1e6, 1e9, 3e11] {
            let mut a = vec![0.0; order + 1];
            let mut b = vec![0.0; order + 1];
            tab.exponent_scaled(s, &mut a).unwrap();
            dir.exponent_scaled(s, &mut b).unwrap();
            for n in 0..=order {
                assert!((a[n] - b[n]).abs() <= 1e-9 * b[n].abs().max(1e-12), "n={n} {a:?} {b:?}");
            }
        }
    }

    #[test]
    fn value_at_zero_is_one() {
        let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
        let model = LaplacianModel::gue(&scn, 2, Evaluation::Tabulated).unwrap();
        assert_eq!(model.evaluate(0.0, 2).unwrap().value, 1.0);
        assert!(laplacian_derivatives(&model, 1.0, 3).is_err());
    }
}
