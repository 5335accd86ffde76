use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Spectral problems for 2x2 canonical systems with periodic spectral measures.
///
/// Exit codes: 0 success, 2 invalid input, 3 numerical breakdown (partial
/// output written), 4 I/O failure. CANON_NUM_THREADS caps sweep parallelism.
#[derive(Debug, Parser)]
#[command(name = "canon", version)]
pub struct Cli {
    /// Read the job from a JSON file: {"command": "...", <flag>: <value>, ...}.
    #[arg(long)]
    pub job: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure -> step Hamiltonian. CSV columns: t_start,t_end,h11,g,h22.
    Inverse(InverseArgs),
    /// Diagonal step Hamiltonian -> moments. CSV columns: k,re,im.
    Direct(DirectArgs),
    /// Moments of the periodized measure. CSV columns: k,re,im.
    Periodize(PeriodizeArgs),
    /// Block-average an h11 profile into steps. CSV columns: t_start,t_end,h11,g,h22.
    DiracApprox(DiracArgs),
    /// Evaluate a closed-form Hamiltonian on a grid. CSV columns: t,h11,g,h22.
    ClosedForm(ClosedFormArgs),
    /// Cross-check both inverse routes and known values. CSV columns:
    /// n,h_toeplitz,h_opuc,h_dense,g_toeplitz,g_opuc,g_dense.
    Validate(ValidateArgs),
    /// Periodization errors over several half-periods. CSV columns:
    /// T,interval_a,interval_b,int_hT,int_href,abs_err.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Tolerances {
    /// Positivity threshold relative to gamma_0.
    #[arg(long, default_value = "1e-13")]
    pub pd_tol: f64,
}

#[derive(Debug, Args)]
pub struct Plot {
    /// Also render the steps as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,

    #[arg(long)]
    pub log_scale: bool,

    /// Reference curve for the SVG, as a closed-form JSON object,
    /// e.g. {"name":"pointmass","alpha":1,"beta":1}.
    #[arg(long)]
    pub reference: Option<String>,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    /// Measure spec: inline JSON or a path to a JSON file.
    #[arg(long)]
    pub measure: String,

    /// Half-period T (accepts `pi`, `2pi`, `pi/2`, ...).
    #[arg(long = "T", alias = "half-period", default_value = "pi", value_parser = real)]
    pub half_period: f64,

    /// Highest step index.
    #[arg(long = "N", alias = "order", conflicts_with = "t_max")]
    pub order: Option<usize>,

    /// Cover [0, t_max] instead of giving N.
    #[arg(long, value_parser = real)]
    pub t_max: Option<f64>,

    #[command(flatten)]
    pub tol: Tolerances,

    #[command(flatten)]
    pub output: Output,

    #[command(flatten)]
    pub plot: Plot,
}

#[derive(Debug, Args)]
pub struct DirectArgs {
    /// Step Hamiltonian: inline JSON or a path to a JSON file.
    #[arg(long, conflicts_with = "steps")]
    pub hamiltonian: Option<String>,

    /// Comma-separated diagonal steps h11 (with --step-length).
    #[arg(long, value_delimiter = ',', requires = "step_length")]
    pub steps: Option<Vec<f64>>,

    #[arg(long, value_parser = real)]
    pub step_length: Option<f64>,

    /// Highest moment index (default: number of steps - 1).
    #[arg(long = "N", alias = "order")]
    pub order: Option<usize>,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PeriodizeArgs {
    #[arg(long)]
    pub measure: String,

    #[arg(long = "T", alias = "half-period", default_value = "pi", value_parser = real)]
    pub half_period: f64,

    #[arg(long = "N", alias = "order")]
    pub order: usize,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DiracArgs {
    /// `exp[:scale[:rate]]` or `poly:c0,c1,...`.
    #[arg(long)]
    pub profile: String,

    /// Block length.
    #[arg(long = "T", alias = "step", value_parser = real)]
    pub step: f64,

    /// Number of blocks.
    #[arg(long = "N", alias = "order")]
    pub order: usize,

    #[command(flatten)]
    pub output: Output,

    #[command(flatten)]
    pub plot: Plot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClosedFormName {
    Pointmass,
    Winkler,
    AtomAtLambda,
    Atoms,
    Homogeneous,
    Bessel,
}

#[derive(Debug, Args)]
pub struct ClosedFormArgs {
    #[arg(value_enum)]
    pub name: ClosedFormName,

    /// `a:b:step`, both ends included.
    #[arg(long, default_value = "0:5:0.01", value_parser = grid)]
    pub grid: Grid,

    #[arg(long, default_value = "1", value_parser = real)]
    pub alpha: f64,

    #[arg(long, default_value = "1", value_parser = real)]
    pub beta: f64,

    #[arg(long, default_value = "1", value_parser = real)]
    pub lambda: f64,

    /// Winkler parameter.
    #[arg(long, default_value = "1", value_parser = real)]
    pub r: f64,

    /// Atom as `location:beta` (repeatable).
    #[arg(long = "atom", value_parser = pair)]
    pub atoms: Vec<(f64, f64)>,

    #[arg(long, default_value = "2", value_parser = real)]
    pub c1: f64,

    #[arg(long, default_value = "1", value_parser = real)]
    pub c2: f64,

    /// Free constant in the homogeneous off-diagonal.
    #[arg(long, default_value = "0", value_parser = real)]
    pub c_free: f64,

    /// Bessel exponent.
    #[arg(long, default_value = "1", value_parser = real)]
    pub m: f64,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub measure: String,

    #[arg(long = "T", alias = "half-period", default_value = "pi", value_parser = real)]
    pub half_period: f64,

    #[arg(long = "N", alias = "order")]
    pub order: usize,

    #[command(flatten)]
    pub tol: Tolerances,

    /// Allowed relative disagreement between routes.
    #[arg(long, default_value = "1e-8")]
    pub route_tol: f64,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub measure: String,

    /// Comma-separated half-periods.
    #[arg(long = "T-list", alias = "half-periods", value_delimiter = ',', required = true, value_parser = real)]
    pub half_periods: Vec<f64>,

    /// `a:b` (repeatable).
    #[arg(long = "interval", required = true, value_parser = pair)]
    pub intervals: Vec<(f64, f64)>,

    /// Closed-form JSON object or a step Hamiltonian JSON file.
    #[arg(long)]
    pub reference: String,

    #[arg(long, value_parser = real)]
    pub t_max: Option<f64>,

    #[command(flatten)]
    pub tol: Tolerances,

    #[command(flatten)]
    pub output: Output,
}

/// A real number, optionally a multiple or fraction of `pi`:
/// `2.5`, `pi`, `2pi`, `2*pi`, `pi/2`, `3pi/4`, `-pi`.
pub fn real(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(at) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| format!("not a number: {text}"));
    };
    let coef = s[..at].trim_end_matches('*');
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| format!("not a number: {text}"))?,
    };
    let rest = &s[at + 2..];
    let den = match rest.strip_prefix('/') {
        Some(d) => d.parse::<f64>().map_err(|_| format!("not a number: {text}"))?,
        None if rest.is_empty() => 1.0,
        None => return Err(format!("not a number: {text}")),
    };
    Ok(coef * std::f64::consts::PI / den)
}

/// `a:b`
pub fn pair(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text.split_once(':').ok_or_else(|| format!("expected a:b, got {text}"))?;
    Ok((real(a)?, real(b)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

/// `a:b:step`, both ends included; `t_i = a + i·step`.
pub fn grid(text: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(format!("expected a:b:step, got {text}"));
    };
    let (a, b, step) = (real(a)?, real(b)?, real(step)?);
    if !(step > 0.0 && b >= a) {
        return Err(format!("grid {text} needs b >= a and step > 0"));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(format!("grid {text} has too many points"));
    }
    Ok(Grid((0..=n).map(|i| a + i as f64 * step).collect()))
}
