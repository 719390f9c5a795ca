use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "squeezed",
    version,
    about = "Two two-level atoms in a broadband squeezed reservoir",
    long_about = "Integrates the master equation, evaluates asymptotic states and scans their \
                  entanglement. Times are in units of 1/gamma0, rates in units of gamma0."
)]
pub struct Cli {
    /// key=value file supplying defaults for any long option
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sampled trajectory rho(t)
    Evolve(EvolveArgs),
    /// Integrate to stationarity and compare with the closed form
    Steady(SteadyArgs),
    /// Concurrence of the unique asymptotic state against N, one column per detuning
    Fig1(ScanArgs),
    /// Dicke-limit concurrence against the antisymmetric fidelity F
    Fig2(Fig2Args),
    /// Dicke-limit concurrence at F = 0 against N, one column per detuning
    Fig3(ScanArgs),
    /// Split the Dicke-limit state into Gibbs, antisymmetric and pure parts
    Decompose(DecomposeArgs),
    /// Critical fidelity and the entanglement thresholds F1, F2
    Thresholds(ThresholdArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct PhysArgs {
    /// Mean photon number
    #[arg(long = "N", allow_negative_numbers = true)]
    pub n: Option<f64>,
    /// Squeezing magnitude |M|
    #[arg(long = "Mabs", allow_negative_numbers = true, conflicts_with = "min_uncertainty")]
    pub m_abs: Option<f64>,
    /// Squeezing phase
    #[arg(long = "Mphase", allow_negative_numbers = true)]
    pub m_phase: Option<f64>,
    /// Set |M| = sqrt(N(N+1))
    #[arg(long = "min-uncertainty")]
    pub min_uncertainty: bool,
    /// Single-atom emission rate
    #[arg(long, allow_negative_numbers = true)]
    pub gamma0: Option<f64>,
    /// Collective damping ratio gamma/gamma0 (1 is the Dicke limit)
    #[arg(long = "gamma-hat", allow_negative_numbers = true)]
    pub gamma_hat: Option<f64>,
    /// Dipole-dipole coupling
    #[arg(long = "omega-dd", allow_negative_numbers = true)]
    pub omega_dd: Option<f64>,
    /// Detuning in units of gamma0
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutArgs {
    /// Output file (stdout when absent)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolverArgs {
    /// Initial step
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long = "rel-tol")]
    pub rel_tol: Option<f64>,
    #[arg(long = "abs-tol")]
    pub abs_tol: Option<f64>,
    /// Give up after this time
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Stationarity threshold on the entrywise l1 norm of d(rho)/dt
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Initial state: e, s, a, g, product(Q,Q) with Q one of 0, 1, +, -, bloch:THETA:PHI, or a JSON file
    #[arg(long)]
    pub init: Option<String>,
    /// Final time
    #[arg(long)]
    pub t: Option<f64>,
    /// Number of intervals between output rows
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SteadyArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutArgs,
    #[arg(long)]
    pub init: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Detunings, one output column each
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub deltas: Option<Vec<f64>>,
    #[arg(long = "n-min")]
    pub n_min: Option<f64>,
    #[arg(long = "n-max")]
    pub n_max: Option<f64>,
    /// Grid size
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Grid size on [0, 1]
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Antisymmetric fidelity F of the initial state
    #[arg(long)]
    pub fidelity: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub out: OutArgs,
}
