use skyshare_cli::emit::{from_csv, to_csv, to_svg};
use skyshare_cli::presets::preset;
use skyshare_cli::run::{link_bandwidth, run, RunRequest, Track};
use skyshare_cli::sweep::{Range, SweepSpec};
use skyshare_core::{ModeKind, Scenario, ScenarioConfig, Target};
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skyshare"))
}

fn request(track: Track, target: Target, thresholds: Vec<f64>) -> RunRequest {
    let mut req = RunRequest::new(ScenarioConfig::default(), track, target, thresholds);
    req.drops = 300;
    req
}

#[test]
fn two_thresholds_give_two_rows() {
    let table = run(&request(Track::Exact, Target::U2u, vec![0.0, 5.0])).unwrap();
    let csv = to_csv(&table).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "sweep_param,sweep_value,threshold_db,coverage,stderr");
    assert!(lines[1].starts_with(",,0,") && lines[1].ends_with(','));
}

#[test]
fn csv_round_trips() {
    let mut req = request(Track::Sim, Target::Gue, vec![-5.0, 0.0, 7.5]);
    req.sweep = Some("heights.h_u=50:150:50".parse().unwrap());
    let table = run(&req).unwrap();
    let back = from_csv(&to_csv(&table).unwrap()).unwrap();
    assert_eq!(back.sweep_param, table.sweep_param);
    assert_eq!(back.points.len(), 3);
    for (a, b) in table.points.iter().zip(&back.points) {
        assert_eq!(a.value, b.value);
        for i in 0..a.curve.len() {
            assert!((a.curve.coverage[i] - b.curve.coverage[i]).abs() <= 1e-12);
            assert!((a.curve.stderr.as_ref().unwrap()[i] - b.curve.stderr.as_ref().unwrap()[i]).abs() <= 1e-12);
        }
    }
}

#[test]
fn only_simulation_reports_stderr() {
    let sim = to_csv(&run(&request(Track::Sim, Target::U2u, vec![0.0])).unwrap()).unwrap();
    let exact = to_csv(&run(&request(Track::Exact, Target::U2u, vec![0.0])).unwrap()).unwrap();
    let approx = to_csv(&run(&request(Track::Approx, Target::U2u, vec![0.0])).unwrap()).unwrap();
    assert!(!sim.lines().nth(1).unwrap().ends_with(','));
    assert!(exact.lines().nth(1).unwrap().ends_with(','));
    assert!(approx.lines().nth(1).unwrap().ends_with(','));
}

#[test]
fn overlay_gue_matches_baseline_but_not_in_rate() {
    let overlay = ScenarioConfig { mode: ModeKind::Overlay, ..ScenarioConfig::default() }.with_param("eta_u", 0.3).unwrap();
    let mut gue = RunRequest::new(overlay.clone(), Track::Exact, Target::Gue, vec![-5.0, 0.0, 5.0]);
    let mut base = RunRequest::new(overlay.clone(), Track::Exact, Target::GueBaseline, vec![-5.0, 0.0, 5.0]);
    let a = run(&gue).unwrap();
    let b = run(&base).unwrap();
    assert!(a.points[0].curve.max_abs_diff(&b.points[0].curve) <= 1e-12);

    let scn = Scenario::new(&overlay).unwrap();
    assert!((link_bandwidth(&scn, Target::Gue) - 0.7 * link_bandwidth(&scn, Target::GueBaseline)).abs() < 1e-6);
    for r in [&mut gue, &mut base] {
        r.rate = true;
        r.thresholds = vec![1e6, 5e6];
    }
    let a = run(&gue).unwrap();
    let b = run(&base).unwrap();
    assert!(a.points[0].curve.coverage[1] < b.points[0].curve.coverage[1]);
}

#[test]
fn ranges_and_sweeps_parse() {
    let r: Range = "0:1:0.1".parse().unwrap();
    let v = r.values().unwrap();
    assert_eq!(v.len(), 11);
    assert_eq!(v[3], 0.3);
    assert!("1:0:0.1".parse::<Range>().is_err());
    assert!("0:1:0".parse::<Range>().is_err());
    assert!("0:1".parse::<Range>().is_err());
    let s: SweepSpec = "power.uav.epsilon=0:1:0.5".parse().unwrap();
    assert_eq!(s.param, "power.uav.epsilon");
    let err = s.configs(&ScenarioConfig::default()).map(|_| ());
    assert!(err.is_ok());
    let bad: SweepSpec = "heights.nope=0:1:0.5".parse().unwrap();
    assert!(bad.configs(&ScenarioConfig::default()).is_err());
}

#[test]
fn svg_carries_config_hash_and_one_line_per_point() {
    let mut req = request(Track::Exact, Target::U2u, vec![-5.0, 0.0, 5.0]);
    req.sweep = Some("heights.h_u=50:150:50".parse().unwrap());
    let svg = to_svg(&run(&req).unwrap(), &req.config, "test").unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
    let hash = skyshare_cli::emit::config_hash(&req.config);
    assert_eq!(hash.len(), 64);
    assert!(svg.contains(&format!("config-sha256={hash}")));
}

#[test]
fn fig4_recipe_has_expected_shape() {
    let p = preset("fig4", &ScenarioConfig::default(), 1000, 1).unwrap();
    assert_eq!(p.jobs.len(), 6);
    assert_eq!(p.panels.len(), 2);
    let table = run(&p.jobs[1].request).unwrap();
    assert_eq!(table.points.len(), 11);
    let u2u: Vec<f64> = table.points.iter().map(|pt| pt.curve.coverage[0]).collect();
    assert!(u2u.windows(2).all(|w| w[1] >= w[0] - 0.01));
    for name in ["fig2", "fig3", "fig5", "fig6", "fig7", "fig8"] {
        assert!(preset(name, &ScenarioConfig::default(), 1000, 1).is_ok());
    }
    assert!(preset("fig9", &ScenarioConfig::default(), 1000, 1).is_err());
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let status = bin()
            .args(["--track", "sim", "--target", "gue", "--drops", "200", "--thresholds", "-5:5:5", "--format", "csv,svg"])
            .arg("--out")
            .arg(d.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    for f in ["gue_sim.csv", "gue_sim.svg"] {
        assert_eq!(read(dirs[0].path(), f), read(dirs[1].path(), f));
    }
}

#[test]
fn exit_codes_follow_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"eta_u": 1.5}"#).unwrap();
    let out = bin().arg("--config").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eta_u"));

    let out = bin().args(["--sweep", "no_such=0:1:1"]).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = bin().args(["--thresholds", "0:0:1"]).arg("--out").arg(blocker.join("sub")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let ok = bin().args(["--track", "approx", "--thresholds", "0:2:1"]).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("u2u_approx.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}
