use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ppsim",
    version,
    about = "Pseudo-pure state preparation with line-selective pulses"
)]
pub struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SystemArg {
    /// Spin-system JSON file, or the name of a built-in preset.
    #[arg(long)]
    pub system: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the selective-pulse angles that make a target level pseudo-pure.
    Solve(SolveArgs),
    /// Run the pulse cascade and crusher, reporting the prepared deviation matrix.
    Prepare(PrepareArgs),
    /// Execute a pulse program.
    Run(RunArgs),
    /// Stick spectrum of one spin after a readout pulse, as CSV.
    Spectrum(SpectrumArgs),
    /// Simulated tomography of a state.
    Tomo(TomoArgs),
    /// SVG stick plot of every spin's spectrum.
    Plot(PlotArgs),
    /// Hogg's 1-SAT search on a pseudo-pure |00> state.
    Hogg(HoggArgs),
    /// List the built-in spin systems.
    Presets,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// Target basis state as a bitstring, spin 1 first.
    #[arg(long)]
    pub target: String,
    /// Start-grid points per angle.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Newton convergence tolerance on the residual norm.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Upper end of the angle search box in degrees.
    #[arg(long)]
    pub max_angle: Option<f64>,
    /// Seed only from the grid, without the published angle vectors.
    #[arg(long)]
    pub no_published_seeds: bool,
    /// Include the per-start Newton traces.
    #[arg(long)]
    pub traces: bool,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub target: String,
    /// Comma-separated cascade angles in degrees; solved when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub angles: Option<Vec<f64>>,
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// Pulse program source file.
    #[arg(long)]
    pub program: PathBuf,
    /// `thermal`, a basis-state bitstring, or a state JSON file.
    #[arg(long, default_value = "thermal")]
    pub initial: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PulseArg {
    None,
    X90,
    Y90,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// State JSON file, or `thermal`.
    #[arg(long)]
    pub state: String,
    /// Observed spin, 1-based.
    #[arg(long)]
    pub spin: usize,
    #[arg(long, value_enum, default_value = "x90")]
    pub pulse: PulseArg,
}

#[derive(Debug, Args)]
pub struct TomoArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub state: String,
    /// Amplitude noise as a fraction of the largest thermal line.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Noise seed; defaults to PPSIM_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub state: String,
    #[arg(long, value_enum, default_value = "x90")]
    pub pulse: PulseArg,
}

#[derive(Debug, Args)]
pub struct HoggArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// Literals `V<k>` or `!V<k>` joined by `&`.
    #[arg(long)]
    pub formula: String,
    /// Run on this state instead of a freshly prepared |00>.
    #[arg(long)]
    pub state: Option<String>,
}
