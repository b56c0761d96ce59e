//! Evaluation of one track and target over an optional parameter sweep.

use crate::error::{CliError, Result};
use crate::sweep::SweepSpec;
use rayon::prelude::*;
use skyshare_core::analysis_approx::{coverage_gue_approx, coverage_u2u_approx};
use skyshare_core::analysis_exact::{coverage_gue_exact, coverage_u2u_exact};
use skyshare_core::montecarlo::{ccdf_from_samples, rate_ccdf, simulate};
use skyshare_core::{CoverageCurve, Scenario, ScenarioConfig, Target};

/// Which evaluator produces the curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Track {
    Exact,
    Approx,
    Sim,
}

impl Track {
    pub fn name(self) -> &'static str {
        match self {
            Track::Exact => "exact",
            Track::Approx => "approx",
            Track::Sim => "sim",
        }
    }
}

pub fn target_name(target: Target) -> &'static str {
    match target {
        Target::U2u => "u2u",
        Target::Gue => "gue",
        Target::GueBaseline => "gue-baseline",
    }
}

/// Everything needed to produce one result table.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub config: ScenarioConfig,
    pub track: Track,
    pub target: Target,
    pub sweep: Option<SweepSpec>,
    /// SINR thresholds in dB, or rate thresholds in bit/s when `rate` is set.
    pub thresholds: Vec<f64>,
    pub rate: bool,
    pub drops: usize,
    pub seed: u64,
}

impl RunRequest {
    /// Request with the simulation settings taken from `config`.
    pub fn new(config: ScenarioConfig, track: Track, target: Target, thresholds: Vec<f64>) -> Self {
        let (drops, seed) = (config.sim.drops, config.sim.seed);
        Self { config, track, target, sweep: None, thresholds, rate: false, drops, seed }
    }
}

/// Curve at one sweep value (`None` when nothing is swept).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: Option<f64>,
    pub curve: CoverageCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub sweep_param: Option<String>,
    pub rate: bool,
    pub points: Vec<SweepPoint>,
}

/// Bandwidth of one link of `target`, used for rate thresholds.
pub fn link_bandwidth(scn: &Scenario, target: Target) -> f64 {
    match target {
        Target::U2u => scn.uav_bandwidth_hz(),
        Target::Gue => scn.gue_bandwidth_hz(),
        // without UAVs the ground users keep the whole band
        Target::GueBaseline => scn.bandwidth_hz,
    }
}

/// SINR coverage of `target` on `thresholds_db` with the chosen track.
pub fn sinr_coverage(
    scn: &Scenario,
    track: Track,
    target: Target,
    thresholds_db: &[f64],
    drops: usize,
    seed: u64,
) -> skyshare_core::Result<CoverageCurve> {
    let ground = || match target {
        Target::GueBaseline => scn.ground_baseline(),
        _ => scn.clone(),
    };
    match (track, target) {
        (Track::Exact, Target::U2u) => coverage_u2u_exact(scn, thresholds_db),
        (Track::Exact, _) => coverage_gue_exact(&ground(), thresholds_db),
        (Track::Approx, Target::U2u) => coverage_u2u_approx(scn, thresholds_db),
        (Track::Approx, _) => coverage_gue_approx(&ground(), thresholds_db),
        (Track::Sim, _) => ccdf_from_samples(&simulate(scn, target, drops, seed)?, thresholds_db),
    }
}

/// Coverage curve of one configuration, as SINR or rate CCDF.
pub fn evaluate(cfg: &ScenarioConfig, req: &RunRequest) -> skyshare_core::Result<CoverageCurve> {
    let scn = Scenario::new(cfg)?;
    let sinr = |db: &[f64]| sinr_coverage(&scn, req.track, req.target, db, req.drops, req.seed);
    if req.rate {
        rate_ccdf(sinr, link_bandwidth(&scn, req.target), &req.thresholds)
    } else {
        sinr(&req.thresholds)
    }
}

/// Evaluate every sweep point of `req`; points run in parallel.
pub fn run(req: &RunRequest) -> Result<ResultTable> {
    if req.thresholds.is_empty() {
        return Err(CliError::Config("no thresholds requested".into()));
    }
    if req.drops == 0 {
        return Err(CliError::Config("drops must be at least 1".into()));
    }
    req.config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let points: Vec<(Option<f64>, ScenarioConfig)> = match &req.sweep {
        Some(s) => s.configs(&req.config)?.into_iter().map(|(v, c)| (Some(v), c)).collect(),
        None => vec![(None, req.config.clone())],
    };
    let param = req.sweep.as_ref().map(|s| s.param.clone());
    let points = points
        .par_iter()
        .map(|(value, cfg)| {
            let label = match (&param, value) {
                (Some(p), Some(v)) => format!("{p}={v}"),
                _ => "base configuration".to_string(),
            };
            let curve = evaluate(cfg, req).map_err(|e| CliError::at(label, e))?;
            Ok(SweepPoint { value: *value, curve })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultTable { sweep_param: param, rate: req.rate, points })
}
