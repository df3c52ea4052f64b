mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::{overlay, Format, RunConfig, Shape, SignChoice};

/// Bound states of δ-interactions on planar loops and mean-chord inequalities.
///
/// Exit codes: 0 success, 1 bad input, 2 no bound state resolved,
/// 3 an inequality violation was found.
#[derive(Parser)]
#[command(name = "leaky", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the ground-state energy of a curve.
    GroundState(GroundStateArgs),
    /// Evaluate the mean-chord inequalities over a grid of parameters.
    ChordScan(ChordScanArgs),
    /// Second-order perturbation table and expansion audit for a curvature spec.
    Perturb(PerturbArgs),
    /// Sample the ground-state eigenfunction on a square grid.
    FieldMap(FieldMapArgs),
    /// Squared-chord moments of lenses against the circle.
    LensTable(LensTableArgs),
    /// Normalised half-length squared-chord moment of paperclip curves.
    PaperclipProbe(PaperclipArgs),
    /// Write a curve or polygon file.
    MakeCurve(MakeCurveArgs),
}

#[derive(Args)]
struct Common {
    /// JSON file with default values for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::load(self.config.as_deref())?;
        overlay!(cfg, self, [out, format]);
        Ok(cfg)
    }
}

#[derive(Args)]
struct CurveInput {
    /// Sampled curve file.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Curvature spec file; the curve is built and closed on `--grid` points.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Number of samples (resamples a smooth curve file when it differs).
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct GroundStateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: CurveInput,
    /// Coupling strength (default 1).
    #[arg(long)]
    alpha: Option<f64>,
    /// Width of the final κ bracket (default 1e-8).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ChordScanArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: CurveInput,
    /// Equilateral polygon file (scans the discrete families).
    #[arg(long)]
    polygon: Option<PathBuf>,
    /// Arc separations, comma separated (default L/16, 2L/16, ..., L/2).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    u: Option<Vec<f64>>,
    /// Positive exponents, comma separated (default 2).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    p: Option<Vec<f64>>,
    /// Diagonal orders, comma separated (default all up to n/2).
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Which exponent signs to check (default both).
    #[arg(long, value_enum)]
    sign: Option<SignChoice>,
    /// Relative tolerance for equality on curves.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct PerturbArgs {
    #[command(flatten)]
    common: Common,
    /// Curvature spec file; a random five-mode spec is drawn when omitted.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Arc separations, comma separated (default L/2).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    u: Option<Vec<f64>>,
    /// Expansion parameter for the audit.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Seed for the random spec (default 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct FieldMapArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: CurveInput,
    /// Saved ground-state JSON for the same curve; solved afresh when omitted.
    #[arg(long)]
    result: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Half-width of the square window centred at the origin (default 3).
    #[arg(long)]
    extent: Option<f64>,
    /// Grid points per axis (default 41).
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct LensTableArgs {
    #[command(flatten)]
    common: Common,
    /// Lens perimeter (default 2π).
    #[arg(long)]
    length: Option<f64>,
    /// Arc radii, comma separated.
    #[arg(long, value_delimiter = ',')]
    radius: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    u: Option<Vec<f64>>,
    /// Samples for the quadrature column (default 4096).
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct PaperclipArgs {
    #[command(flatten)]
    common: Common,
    /// Segment length of a single paperclip (with --b and --r).
    #[arg(long)]
    a: Option<f64>,
    /// Return-segment length.
    #[arg(long)]
    b: Option<f64>,
    /// Turn radius.
    #[arg(long)]
    r: Option<f64>,
    /// Samples per curve (default 8192).
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct MakeCurveArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    shape: Option<Shape>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    /// Axis ratio of an ellipse.
    #[arg(long)]
    ratio: Option<f64>,
    /// Arc radius of a lens.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Vertex count of a polygon.
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    side: Option<f64>,
    /// Acute interior angle of a rhomboid.
    #[arg(long)]
    angle: Option<f64>,
    /// Size of the random edge-angle perturbation.
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Command {
    fn config(&self) -> Result<RunConfig> {
        Ok(match self {
            Command::GroundState(a) => {
                let mut cfg = a.common.load()?;
                overlay!(cfg, a.input, [curve, spec, grid]);
                overlay!(cfg, a, [alpha, tol]);
                cfg
            }
            Command::ChordScan(a) => {
                let mut cfg = a.common.load()?;
                overlay!(cfg, a.input, [curve, spec, grid]);
                overlay!(cfg, a, [polygon, u, p, m, sign, tol]);
                cfg
            }
            Command::Perturb(a) => {
                let mut cfg = a.common.load()?;
                overlay!(cfg, a, [spec, u, epsilon, seed]);
                cfg
            }
            Command::FieldMap(a) => {
                let mut cfg = a.common.load()?;
                overlay!(cfg, a.input, [curve, spec, grid]);
                overlay!(cfg, a, [result, alpha, tol, extent, samples]);
                cfg
            }
            Command::LensTable(a) => {
                let mut cfg = a.common.load()?;
                overlay!(cfg, a, [length, radius, u, grid]);
                cfg
            }
            Command::PaperclipProbe(a) => {
                let mut cfg = a.common.load()?;
                overlay!(cfg, a, [a, b, r, grid]);
                cfg
            }
            Command::MakeCurve(a) => {
                let mut cfg = RunConfig::load(a.config.as_deref())?;
                overlay!(cfg, a, [out, shape, length, grid, ratio, a, b, r, spec, vertices, side, angle, amplitude, seed]);
                if let Some(radius) = a.radius {
                    cfg.radius = Some(vec![radius]);
                }
                cfg
            }
        })
    }

    fn run(&self) -> Result<commands::Outcome> {
        let cfg = self.config()?;
        match self {
            Command::GroundState(_) => commands::ground_state(&cfg),
            Command::ChordScan(_) => commands::chord_scan(&cfg),
            Command::Perturb(_) => commands::perturb(&cfg),
            Command::FieldMap(_) => commands::field_map(&cfg),
            Command::LensTable(_) => commands::lens_table(&cfg),
            Command::PaperclipProbe(_) => commands::paperclip_probe(&cfg),
            Command::MakeCurve(_) => commands::make_curve(&cfg),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command.run() {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::failure_code(&e))
        }
    }
}
