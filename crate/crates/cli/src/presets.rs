//! Figure recipes: fixed job lists over the base configuration.

use crate::emit::{self, series_of, Format, Series};
use crate::error::{CliError, Result};
use crate::run::{run, sinr_coverage, ResultTable, RunRequest, Track};
use crate::sweep::SweepSpec;
use skyshare_core::curve::linear_grid;
use skyshare_core::montecarlo::rate_to_sinr_db;
use skyshare_core::{ModeKind, Scenario, ScenarioConfig, Target};
use std::path::{Path, PathBuf};

pub const PRESETS: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

/// Rate requirement of the command-and-control link, bit/s.
pub const C2_RATE_BPS: f64 = 1e5;
/// Coverage level whose threshold gives the 5th-percentile rate.
const P5_LEVEL: f64 = 0.95;

/// One table of a recipe, written as `<preset>_<name>.csv`.
#[derive(Debug, Clone)]
pub struct Job {
    pub name: String,
    pub label: String,
    pub request: RunRequest,
}

/// One SVG combining the series of several jobs.
#[derive(Debug, Clone)]
pub struct Panel {
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub jobs: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub jobs: Vec<Job>,
    pub panels: Vec<Panel>,
}

/// Row of the rate tradeoff study.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffRow {
    pub uav_density: f64,
    pub mode: ModeKind,
    pub epsilon_u: f64,
    pub p_u2u_rate_below: f64,
    pub gue_rate_p5_bps: f64,
}

fn set(cfg: &ScenarioConfig, path: &str, v: f64) -> Result<ScenarioConfig> {
    cfg.with_param(path, v).map_err(|e| CliError::Config(e.to_string()))
}

fn with_mode(cfg: &ScenarioConfig, mode: ModeKind) -> ScenarioConfig {
    ScenarioConfig { mode, ..cfg.clone() }
}

fn mode_name(mode: ModeKind) -> &'static str {
    match mode {
        ModeKind::Underlay => "underlay",
        ModeKind::Overlay => "overlay",
    }
}

fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    linear_grid(start, stop, step).map_err(|e| CliError::Config(e.to_string()))
}

fn sweep(spec: &str) -> Result<Option<SweepSpec>> {
    spec.parse().map(Some)
}

struct Builder {
    drops: usize,
    seed: u64,
    jobs: Vec<Job>,
}

impl Builder {
    fn push(
        &mut self,
        name: String,
        label: String,
        cfg: ScenarioConfig,
        track: Track,
        target: Target,
        thresholds: Vec<f64>,
    ) -> usize {
        let mut request = RunRequest::new(cfg, track, target, thresholds);
        request.drops = self.drops;
        request.seed = self.seed;
        self.jobs.push(Job { name, label, request });
        self.jobs.len() - 1
    }

    fn last(&mut self) -> &mut RunRequest {
        &mut self.jobs.last_mut().expect("job pushed").request
    }
}

fn panel(name: &str, title: &str, x_label: &str, jobs: Vec<usize>) -> Panel {
    Panel { name: name.into(), title: title.into(), x_label: x_label.into(), jobs }
}

/// The job list of `name`; `fig8` has no jobs and is served by [`tradeoff`].
pub fn preset(name: &str, base: &ScenarioConfig, drops: usize, seed: u64) -> Result<Preset> {
    let mut b = Builder { drops, seed, jobs: Vec::new() };
    let sinr = "SINR threshold [dB]";
    let eight = [1.0, 5.0]
        .into_iter()
        .flat_map(|l| [ModeKind::Underlay, ModeKind::Overlay].into_iter().flat_map(move |m| [0.6, 0.8].map(|e| (l, m, e))));
    let panels = match name {
        "fig2" => {
            let t = grid(-10.0, 30.0, 2.0)?;
            let underlay = set(&with_mode(base, ModeKind::Underlay), "eta_u", 1.0)?;
            let mut panels = Vec::new();
            for target in [Target::U2u, Target::Gue] {
                let tn = crate::run::target_name(target);
                let ids = [Track::Approx, Track::Exact, Track::Sim]
                    .map(|tr| b.push(format!("{tn}_{}", tr.name()), tr.name().into(), underlay.clone(), tr, target, t.clone()));
                panels.push(panel(tn, &format!("{tn} coverage: approximate, exact, simulated"), sinr, ids.to_vec()));
            }
            panels
        }
        "fig3" => {
            let t = grid(-10.0, 30.0, 1.0)?;
            let underlay = with_mode(base, ModeKind::Underlay);
            let mut ids = Vec::new();
            for target in [Target::U2u, Target::Gue, Target::GueBaseline] {
                let tn = crate::run::target_name(target);
                for tr in [Track::Sim, Track::Approx] {
                    let label = format!("{tn} {}", tr.name());
                    ids.push(b.push(format!("{tn}_{}", tr.name()), label, underlay.clone(), tr, target, t.clone()));
                    b.last().sweep = sweep("heights.h_u=50:150:100")?;
                }
            }
            vec![
                panel("u2u", "U2U coverage at two UAV heights", sinr, ids[0..2].to_vec()),
                panel("gue", "GUE coverage at two UAV heights and without UAVs", sinr, ids[2..6].to_vec()),
            ]
        }
        "fig4" => {
            let mut panels = Vec::new();
            let cfg = set(&with_mode(base, ModeKind::Underlay), "eta_u", 1.0)?;
            for target in [Target::U2u, Target::Gue] {
                let tn = crate::run::target_name(target);
                let mut ids = Vec::new();
                for d in [50.0, 100.0, 150.0] {
                    let c = set(&cfg, "mean_u2u_dist", d)?;
                    ids.push(b.push(format!("{tn}_dist{d}"), format!("mean U2U distance {d} m"), c, Track::Approx, target, vec![-5.0]));
                    b.last().sweep = sweep("power.uav.epsilon=0:1:0.1")?;
                }
                panels.push(panel(tn, &format!("{tn} coverage at -5 dB versus UAV power control"), "power.uav.epsilon", ids));
            }
            panels
        }
        "fig5" => {
            let mut panels = Vec::new();
            let cfg = with_mode(base, ModeKind::Underlay);
            for target in [Target::U2u, Target::Gue] {
                let tn = crate::run::target_name(target);
                let mut ids = Vec::new();
                for l in [1.0, 5.0] {
                    for e in [0.6, 0.8] {
                        let c = set(&set(&cfg, "uav_density", l)?, "power.uav.epsilon", e)?;
                        let label = format!("uav density {l}/km2, epsilon {e}");
                        ids.push(b.push(format!("{tn}_lambda{l}_eps{e}"), label, c, Track::Approx, target, vec![-5.0]));
                        b.last().sweep = sweep("eta_u=0.1:0.5:0.4")?;
                    }
                }
                panels.push(panel(tn, &format!("{tn} coverage at -5 dB versus UAV band share"), "eta_u", ids));
            }
            panels
        }
        "fig6" | "fig7" => {
            let (target, rates) = if name == "fig6" {
                (Target::U2u, grid(0.05e6, 10e6, 0.05e6)?)
            } else {
                (Target::Gue, grid(0.5e6, 50e6, 0.5e6)?)
            };
            let tn = crate::run::target_name(target);
            let mut ids = Vec::new();
            for (l, m, e) in eight {
                let c = set(&set(&set(&with_mode(base, m), "eta_u", 0.1)?, "uav_density", l)?, "power.uav.epsilon", e)?;
                let label = format!("{}, epsilon {e}, {l}/km2", mode_name(m));
                ids.push(b.push(format!("{tn}_{}_eps{e}_lambda{l}", mode_name(m)), label, c, Track::Approx, target, rates.clone()));
                b.last().rate = true;
            }
            vec![panel(tn, &format!("{tn} rate CCDF with 10% of the band for UAVs"), "rate threshold [bit/s]", ids)]
        }
        "fig8" => Vec::new(),
        other => return Err(CliError::Config(format!("unknown preset `{other}`; expected one of {}", PRESETS.join(", ")))),
    };
    Ok(Preset { name: name.into(), jobs: b.jobs, panels })
}

/// P[R_u < 100 kbps] and the 5th-percentile GUE rate for λ_u ∈ {1, 5}/km²,
/// both sharing modes and ε_u ∈ {0.6, 0.8}, with η_u = 0.1.
pub fn tradeoff(base: &ScenarioConfig) -> Result<Vec<TradeoffRow>> {
    use rayon::prelude::*;
    let t_grid = grid(-40.0, 30.0, 0.5)?;
    let mut combos = Vec::new();
    for l in [1.0, 5.0] {
        for m in [ModeKind::Underlay, ModeKind::Overlay] {
            for e in [0.6, 0.8] {
                combos.push((l, m, e));
            }
        }
    }
    combos
        .par_iter()
        .map(|&(l, m, e)| {
            let point = format!("uav_density={l}, mode={}, epsilon_u={e}", mode_name(m));
            let cfg = set(&set(&set(&with_mode(base, m), "eta_u", 0.1)?, "uav_density", l)?, "power.uav.epsilon", e)?;
            let scn = Scenario::new(&cfg).map_err(|err| CliError::at(&point, err))?;
            let t_u = rate_to_sinr_db(C2_RATE_BPS, scn.uav_bandwidth_hz());
            let u2u = sinr_coverage(&scn, Track::Approx, Target::U2u, &[t_u], 1, 0).map_err(|err| CliError::at(&point, err))?;
            let gue = sinr_coverage(&scn, Track::Approx, Target::Gue, &t_grid, 1, 0).map_err(|err| CliError::at(&point, err))?;
            let t5 = gue.quantile_threshold(P5_LEVEL).ok_or_else(|| {
                CliError::Config(format!("{point}: GUE coverage does not cross {P5_LEVEL} on [-40, 30] dB"))
            })?;
            Ok(TradeoffRow {
                uav_density: l,
                mode: m,
                epsilon_u: e,
                p_u2u_rate_below: 1.0 - u2u.coverage[0],
                gue_rate_p5_bps: scn.gue_bandwidth_hz() * (1.0 + 10f64.powf(t5 / 10.0)).log2(),
            })
        })
        .collect()
}

pub fn tradeoff_csv(rows: &[TradeoffRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Output { path: "<buffer>".into(), msg: e.to_string() };
    w.write_record(["uav_density", "mode", "epsilon_u", "p_u2u_rate_below_100kbps", "gue_rate_p5_bps"]).map_err(io)?;
    for r in rows {
        w.write_record([
            r.uav_density.to_string(),
            mode_name(r.mode).to_string(),
            r.epsilon_u.to_string(),
            r.p_u2u_rate_below.to_string(),
            r.gue_rate_p5_bps.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output { path: "<buffer>".into(), msg: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs preset `name` and writes its files under `dir`.
pub fn run_preset(
    name: &str,
    base: &ScenarioConfig,
    drops: usize,
    seed: u64,
    dir: &Path,
    formats: &[Format],
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if name == "fig8" {
        let rows = tradeoff(base)?;
        if formats.contains(&Format::Csv) {
            let path = dir.join("fig8_tradeoff.csv");
            emit::write_file(&path, &tradeoff_csv(&rows)?)?;
            written.push(path);
        }
        if formats.contains(&Format::Svg) {
            let points: Vec<(String, f64, f64)> = rows
                .iter()
                .map(|r| {
                    let label = format!("{}, eps {}, {}/km2", mode_name(r.mode), r.epsilon_u, r.uav_density);
                    (label, r.gue_rate_p5_bps, r.p_u2u_rate_below)
                })
                .collect();
            let svg = emit::scatter_svg(
                &points,
                base,
                "5th-percentile GUE rate [bit/s]",
                "P[U2U rate < 100 kbit/s]",
                "U2U outage versus GUE rate",
            );
            let path = dir.join("fig8_tradeoff.svg");
            emit::write_file(&path, &svg)?;
            written.push(path);
        }
        return Ok(written);
    }
    let p = preset(name, base, drops, seed)?;
    let mut tables: Vec<ResultTable> = Vec::with_capacity(p.jobs.len());
    for job in &p.jobs {
        let table = run(&job.request)?;
        if formats.contains(&Format::Csv) {
            let path = dir.join(format!("{}_{}.csv", p.name, job.name));
            emit::write_file(&path, &emit::to_csv(&table)?)?;
            written.push(path);
        }
        tables.push(table);
    }
    if formats.contains(&Format::Svg) {
        for pn in &p.panels {
            let series: Vec<Series> = pn.jobs.iter().flat_map(|&i| series_of(&tables[i], &p.jobs[i].label)).collect();
            let path = dir.join(format!("{}_{}.svg", p.name, pn.name));
            emit::write_file(&path, &emit::series_svg(&series, base, &pn.x_label, &pn.title))?;
            written.push(path);
        }
    }
    Ok(written)
}
