//! CSV and SVG output of result tables.

use crate::error::{CliError, Result};
use crate::run::{ResultTable, SweepPoint};
use sha2::{Digest, Sha256};
use skyshare_core::{CoverageCurve, ScenarioConfig};
use std::fmt::Write as _;
use std::path::Path;

/// Output formats selected with `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

/// Parses a comma-separated list such as `csv,svg`.
pub fn parse_formats(s: &str) -> Result<Vec<Format>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let f = match part {
            "csv" => Format::Csv,
            "svg" => Format::Svg,
            other => return Err(CliError::Config(format!("unknown format `{other}`; use csv or svg"))),
        };
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

/// Hex SHA-256 of the canonical JSON form of `cfg`.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let json = serde_json::to_string(&cfg.to_value()).expect("configuration serializes");
    Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn threshold_column(rate: bool) -> &'static str {
    if rate {
        "threshold_bps"
    } else {
        "threshold_db"
    }
}

/// Table as CSV text with the columns sweep_param, sweep_value, threshold, coverage, stderr.
pub fn to_csv(table: &ResultTable) -> Result<String> {
    if table.points.is_empty() {
        return Err(CliError::Config("nothing to emit".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Output { path: "<buffer>".into(), msg: e.to_string() };
    w.write_record(["sweep_param", "sweep_value", threshold_column(table.rate), "coverage", "stderr"]).map_err(io)?;
    let param = table.sweep_param.clone().unwrap_or_default();
    for p in &table.points {
        let value = p.value.map(|v| v.to_string()).unwrap_or_default();
        for (i, (t, c)) in p.curve.thresholds.iter().zip(&p.curve.coverage).enumerate() {
            let se = p.curve.stderr.as_ref().map(|s| s[i].to_string()).unwrap_or_default();
            w.write_record([param.as_str(), value.as_str(), &t.to_string(), &c.to_string(), &se]).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output { path: "<buffer>".into(), msg: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Inverse of [`to_csv`].
pub fn from_csv(text: &str) -> Result<ResultTable> {
    let bad = |msg: String| CliError::Config(format!("malformed result csv: {msg}"));
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    let rate = match header.get(2) {
        Some("threshold_bps") => true,
        Some("threshold_db") => false,
        _ => return Err(bad("unknown threshold column".into())),
    };
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("`{s}` is not a number")));
    let mut param = None;
    let mut points: Vec<SweepPoint> = Vec::new();
    let mut rows: Vec<(Option<f64>, f64, f64, Option<f64>)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if rec.len() != 5 {
            return Err(bad("expected five columns".into()));
        }
        if !rec[0].is_empty() {
            param = Some(rec[0].to_string());
        }
        let value = if rec[1].is_empty() { None } else { Some(num(&rec[1])?) };
        let se = if rec[4].is_empty() { None } else { Some(num(&rec[4])?) };
        rows.push((value, num(&rec[2])?, num(&rec[3])?, se));
    }
    let mut i = 0;
    while i < rows.len() {
        let value = rows[i].0;
        let mut j = i;
        while j < rows.len() && rows[j].0 == value {
            j += 1;
        }
        let chunk = &rows[i..j];
        let stderr = if chunk.iter().all(|r| r.3.is_some()) { Some(chunk.iter().map(|r| r.3.unwrap()).collect()) } else { None };
        let curve = CoverageCurve::new(chunk.iter().map(|r| r.1).collect(), chunk.iter().map(|r| r.2).collect(), stderr)
            .map_err(|e| bad(e.to_string()))?;
        points.push(SweepPoint { value, curve });
        i = j;
    }
    if points.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(ResultTable { sweep_param: param, rate, points })
}

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Axis frame with ticks; returns the mapping from data to pixels.
fn frame(out: &mut String, x_range: (f64, f64), x_label: &str, y_label: &str, title: &str) -> impl Fn(f64, f64) -> (f64, f64) {
    let (x0, x1) = if x_range.1 > x_range.0 { x_range } else { (x_range.0 - 1.0, x_range.0 + 1.0) };
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let _ = writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let (x, y) = (LEFT + f * pw, TOP + ph - f * ph);
        let xv = x0 + f * (x1 - x0);
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#, TOP + ph + 20.0, tick(xv));
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{f:.1}</text>"#, LEFT - 8.0, y + 4.0);
    }
    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 15.0, escape(x_label));
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );
    let _ = writeln!(out, r#"<text x="{:.2}" y="24" font-size="15" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, escape(title));
    move |x: f64, y: f64| (LEFT + (x - x0) / (x1 - x0) * pw, TOP + ph - y.clamp(0.0, 1.0) * ph)
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{}", (v * 100.0).round() / 100.0)
    }
}

/// One labelled polyline of a plot.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// True when every sweep point holds a single threshold, so the natural
/// x axis is the swept parameter.
pub fn is_sweep_view(table: &ResultTable) -> bool {
    table.sweep_param.is_some() && table.points.iter().all(|p| p.curve.len() == 1)
}

/// Polylines of `table`, one per sweep value, or a single line over the swept
/// parameter when each point has one threshold. `prefix` leads every label.
pub fn series_of(table: &ResultTable, prefix: &str) -> Vec<Series> {
    let join = |tail: String| match (prefix.is_empty(), tail.is_empty()) {
        (true, _) => tail,
        (false, true) => prefix.to_string(),
        (false, false) => format!("{prefix}, {tail}"),
    };
    if is_sweep_view(table) {
        let t = table.points[0].curve.thresholds[0];
        let unit = if table.rate { "bit/s" } else { "dB" };
        let points = table.points.iter().map(|p| (p.value.unwrap_or(f64::NAN), p.curve.coverage[0])).collect();
        return vec![Series { label: join(format!("T = {t} {unit}")), points }];
    }
    table
        .points
        .iter()
        .map(|p| {
            let tail = match (&table.sweep_param, p.value) {
                (Some(param), Some(v)) => format!("{param} = {v}"),
                _ => String::new(),
            };
            let points = p.curve.thresholds.iter().copied().zip(p.curve.coverage.iter().copied()).collect();
            Series { label: join(tail), points }
        })
        .collect()
}

/// Default x-axis label for `table`.
pub fn x_label(table: &ResultTable) -> String {
    match &table.sweep_param {
        Some(param) if is_sweep_view(table) => param.clone(),
        _ if table.rate => "rate threshold [bit/s]".to_string(),
        _ => "SINR threshold [dB]".to_string(),
    }
}

/// Line plot of several series with coverage on the y axis.
pub fn series_svg(series: &[Series], config: &ScenarioConfig, x_label: &str, title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(out, "<!-- skyshare config-sha256={} -->", config_hash(config));
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).filter(|x| x.is_finite());
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
    let map = frame(&mut out, (lo, hi), x_label, "coverage probability", title);
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let dash = if k >= COLORS.len() { r#" stroke-dasharray="6 3""# } else { "" };
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|p| p.0.is_finite())
            .map(|&(x, y)| {
                let (px, py) = map(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="2"{dash} points="{}"/>"#, pts.join(" "));
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = W - RIGHT + 10.0;
        let _ = writeln!(out, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#, lx + 20.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11">{}</text>"#, lx + 25.0, ly + 4.0, escape(&s.label));
    }
    out.push_str("</svg>\n");
    out
}

/// Line plot with one coverage curve per sweep value.
pub fn to_svg(table: &ResultTable, config: &ScenarioConfig, title: &str) -> Result<String> {
    if table.points.is_empty() {
        return Err(CliError::Config("nothing to emit".into()));
    }
    Ok(series_svg(&series_of(table, ""), config, &x_label(table), title))
}

/// Labelled points on a frame with y in [0, 1] and free x.
pub fn scatter_svg(points: &[(String, f64, f64)], config: &ScenarioConfig, x_label: &str, y_label: &str, title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(out, "<!-- skyshare config-sha256={} -->", config_hash(config));
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let pad = 0.05 * (hi - lo).max(1e-9);
    let map = frame(&mut out, (lo - pad, hi + pad), x_label, y_label, title);
    for (k, (label, x, y)) in points.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let (px, py) = map(*x, *y);
        let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="5" fill="{color}"/>"#);
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = W - RIGHT + 10.0;
        let _ = writeln!(out, r#"<circle cx="{}" cy="{ly}" r="5" fill="{color}"/>"#, lx + 10.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11">{}</text>"#, lx + 25.0, ly + 4.0, escape(label));
    }
    out.push_str("</svg>\n");
    out
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_file(path: &Path, text: &str) -> Result<()> {
    let err = |e: std::io::Error| CliError::Output { path: path.display().to_string(), msg: e.to_string() };
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(err)?;
        }
    }
    std::fs::write(path, text).map_err(err)
}

/// Writes the table in each format as `<stem>.csv` / `<stem>.svg` under `dir`.
pub fn emit(table: &ResultTable, config: &ScenarioConfig, dir: &Path, stem: &str, formats: &[Format], title: &str) -> Result<Vec<std::path::PathBuf>> {
    let mut written = Vec::new();
    for f in formats {
        let (path, text) = match f {
            Format::Csv => (dir.join(format!("{stem}.csv")), to_csv(table)?),
            Format::Svg => (dir.join(format!("{stem}.svg")), to_svg(table, config, title)?),
        };
        write_file(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}
