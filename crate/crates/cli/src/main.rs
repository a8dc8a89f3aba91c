//! `bcnf`: sweeps, curves, orbits and the two applications from the command line.

mod apps;
mod error;
mod normal_form;
mod output;
mod parse;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::CliError;
use parse::ValueOrRange;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "BCNF_SEED";

#[derive(Debug, Parser)]
#[command(name = "bcnf", version, about = "Border-collision normal form explorer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// `key = value` config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

/// A point of the normal form. Unset values fall back to the config file.
#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long = "tau-l")]
    tau_l: Option<f64>,
    #[arg(long = "tau-r")]
    tau_r: Option<f64>,
    #[arg(long = "delta-r")]
    delta_r: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "burn-in")]
    burn_in: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify every cell of a (tau_R, delta_R) window.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Classify the attractor at one parameter point.
    #[command(allow_negative_numbers = true)]
    Classify(ClassifyArgs),
    /// Sample a bifurcation curve.
    #[command(allow_negative_numbers = true)]
    Curve(CurveArgs),
    /// Iterates of one orbit, plus optional cycles.
    #[command(allow_negative_numbers = true, alias = "phase")]
    Orbit(OrbitArgs),
    /// Basins of attraction over a rectangle of initial points.
    #[command(allow_negative_numbers = true)]
    Basin(BasinArgs),
    /// The dry-friction oscillator.
    #[command(allow_negative_numbers = true)]
    Friction(FrictionArgs),
    /// The influenza season map.
    #[command(allow_negative_numbers = true)]
    Flu(FluArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long = "tau-l")]
    tau_l: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    /// `tau_min:tau_max,delta_min:delta_max`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse::window)]
    window: Option<((f64, f64), (f64, f64))>,
    /// `NXxNY` cells.
    #[arg(long, value_parser = parse::resolution)]
    res: Option<(usize, usize)>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "burn-in")]
    burn_in: Option<usize>,
    /// Comma-separated curve ids to trace and overlay.
    #[arg(long)]
    curves: Option<String>,
    /// Raster encodings to write.
    #[arg(long, value_delimiter = ',', default_value = "csv,pgm,ppm")]
    formats: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Also count the attractor's connected components.
    #[arg(long)]
    components: bool,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Curve id, e.g. `eta3`, `alpha4:L2R`, or a family name with `--n`/`--k`.
    id: String,
    /// Index for family names such as `kappa`.
    #[arg(long, conflicts_with = "k")]
    n: Option<usize>,
    /// Index for `xi`.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "tau-l")]
    tau_l: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::window)]
    window: Option<((f64, f64), (f64, f64))>,
    /// Number of tau_R columns.
    #[arg(long)]
    columns: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Initial point; a seeded random point when absent.
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
    /// Number of iterates recorded after the burn-in.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated itineraries to solve, e.g. `LLR,LR`.
    #[arg(long)]
    cycles: Option<String>,
}

#[derive(Debug, Args)]
pub struct BasinArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::range)]
    x: Option<(f64, f64)>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::range)]
    y: Option<(f64, f64)>,
    #[arg(long, value_parser = parse::resolution)]
    res: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrictionMode {
    Extract,
    Locus,
    Diagram,
    Trajectory,
    Linear,
}

impl FrictionMode {
    fn name(self) -> &'static str {
        match self {
            FrictionMode::Extract => "extract",
            FrictionMode::Locus => "locus",
            FrictionMode::Diagram => "diagram",
            FrictionMode::Trajectory => "trajectory",
            FrictionMode::Linear => "linear",
        }
    }
}

#[derive(Debug, Args)]
pub struct FrictionArgs {
    #[arg(long, value_enum)]
    mode: Option<FrictionMode>,
    #[arg(long)]
    alpha0: Option<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    /// Forcing amplitude.
    #[arg(long = "f")]
    f: Option<f64>,
    /// Forcing frequency.
    #[arg(long)]
    nu: Option<f64>,
    /// Frequency bracket for grazing, or the diagram's frequency range.
    #[arg(long = "nu-range", value_parser = parse::range)]
    nu_range: Option<(f64, f64)>,
    /// Forcing range of the locus.
    #[arg(long = "f-range", value_parser = parse::range)]
    f_range: Option<(f64, f64)>,
    /// Grid points of the locus, diagram or linear curve.
    #[arg(long)]
    steps: Option<usize>,
    /// Forcing periods discarded per diagram column.
    #[arg(long)]
    transient: Option<u32>,
    /// Section times recorded per diagram column.
    #[arg(long)]
    record: Option<usize>,
    #[arg(long)]
    u0: Option<f64>,
    #[arg(long)]
    v0: Option<f64>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Growth per forcing period of the linear model.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long = "alpha-range", value_parser = parse::range)]
    alpha_range: Option<(f64, f64)>,
    /// Relative tolerance for grazing and extraction.
    #[arg(long)]
    rtol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FluArgs {
    /// A single `k` or a range `lo:hi`.
    #[arg(long, value_parser = parse::value_or_range)]
    k: Option<ValueOrRange>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long = "r0")]
    r0: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    transient: Option<usize>,
    #[arg(long)]
    record: Option<usize>,
}

fn default_seed() -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Config(format!("{SEED_ENV}={s:?} is not a seed"))),
        Err(_) => Ok(0),
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let c = &cli.common;
    let seed = default_seed()?;
    match cli.command {
        Command::Sweep(a) => normal_form::sweep(c, a, seed),
        Command::Classify(a) => normal_form::classify(c, a, seed),
        Command::Curve(a) => normal_form::curve(c, a),
        Command::Orbit(a) => normal_form::orbit(c, a, seed),
        Command::Basin(a) => normal_form::basin(c, a, seed),
        Command::Friction(a) => apps::friction(c, a),
        Command::Flu(a) => apps::flu(c, a),
    }
}

fn main() -> ExitCode {
    output::start_clock();
    let cli = Cli::parse();
    let pool = match cli.common.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| CliError::Runtime(e.to_string())),
        None => rayon::ThreadPoolBuilder::new().build().map_err(|e| CliError::Runtime(e.to_string())),
    };
    let result = pool.and_then(|pool| pool.install(|| dispatch(cli)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bcnf: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("run `bcnf --help` for usage");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
