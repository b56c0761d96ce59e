use clap::Parser;
use skyshare_cli::emit::{self, parse_formats};
use skyshare_cli::error::{CliError, Result};
use skyshare_cli::presets::{run_preset, PRESETS};
use skyshare_cli::run::{run, target_name, RunRequest, Track};
use skyshare_cli::sweep::{Range, SweepSpec};
use skyshare_core::{load_config, ScenarioConfig, Target};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum TargetArg {
    U2u,
    Gue,
    GueBaseline,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::U2u => Target::U2u,
            TargetArg::Gue => Target::Gue,
            TargetArg::GueBaseline => Target::GueBaseline,
        }
    }
}

/// Coverage and rate CCDFs of UAV-to-UAV links and the ground uplink under
/// shared spectrum.
#[derive(Debug, Parser)]
#[command(name = "skyshare", version)]
struct Args {
    /// JSON scenario file; omitted keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "exact")]
    track: Track,

    #[arg(long, value_enum, default_value = "u2u")]
    target: TargetArg,

    /// Swept parameter as key=start:stop:step, e.g. heights.h_u=50:150:50.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,

    /// Threshold grid start:stop:step, in dB (or bit/s with --rate).
    #[arg(long, allow_hyphen_values = true)]
    thresholds: Option<String>,

    /// Report the rate CCDF instead of the SINR CCDF.
    #[arg(long)]
    rate: bool,

    /// Simulation drops; defaults to the configured value.
    #[arg(long)]
    drops: Option<usize>,

    /// Simulation seed; defaults to the configured value.
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Comma-separated output formats: csv, svg.
    #[arg(long, default_value = "csv")]
    format: String,

    /// Run a figure recipe instead of a single table.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
    preset: Option<String>,
}

const DEFAULT_SINR_GRID: &str = "-10:30:2";
const DEFAULT_RATE_GRID: &str = "100000:10000000:100000";

fn main_inner(args: Args) -> Result<Vec<PathBuf>> {
    let config = match &args.config {
        Some(path) => load_config(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        None => ScenarioConfig::default(),
    };
    let formats = parse_formats(&args.format)?;
    let drops = args.drops.unwrap_or(config.sim.drops);
    let seed = args.seed.unwrap_or(config.sim.seed);
    if let Some(name) = &args.preset {
        return run_preset(name, &config, drops, seed, &args.out, &formats);
    }
    let default_grid = if args.rate { DEFAULT_RATE_GRID } else { DEFAULT_SINR_GRID };
    let thresholds = args.thresholds.as_deref().unwrap_or(default_grid).parse::<Range>()?.values()?;
    let target: Target = args.target.into();
    let mut req = RunRequest::new(config.clone(), args.track, target, thresholds);
    req.sweep = args.sweep.as_deref().map(str::parse::<SweepSpec>).transpose()?;
    req.rate = args.rate;
    req.drops = drops;
    req.seed = seed;
    let table = run(&req)?;
    let stem = format!("{}_{}", target_name(target), args.track.name());
    let kind = if args.rate { "rate" } else { "SINR" };
    let title = format!("{} {kind} coverage ({})", target_name(target), args.track.name());
    emit::emit(&table, &config, &args.out, &stem, &formats, &title)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
