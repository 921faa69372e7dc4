use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "geophase",
    version,
    about = "Geometric, dynamical and total phases of coherent and entangled coherent states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phases of a single-mode coherent state.
    Single(SingleArgs),
    /// Phases of a two-mode entangled coherent state.
    Pair(PairArgs),
    /// Sweep one parameter over a grid and write a CSV file.
    Sweep(SweepArgs),
    /// Compare every closed form against the truncated Fock-space oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SingleArgs {
    /// Coherent amplitude |alpha|.
    #[arg(long)]
    pub rho: f64,
    /// Phase of alpha (radians).
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Oscillator angular frequency.
    #[arg(long)]
    pub omega: f64,
    /// Evolution time.
    #[arg(long)]
    pub tau: f64,
}

/// Coherent labels and mixing angles of the entangled state.
#[derive(Debug, Clone, Default, Args)]
pub struct StateArgs {
    #[arg(long, default_value_t = 0.0)]
    pub rho_alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi_alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rho_beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi_beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rho_mu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi_mu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rho_nu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi_nu: f64,
    /// Entanglement angle in [0, pi].
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Relative phase between the two branches.
    #[arg(long, default_value_t = 0.0)]
    pub varphi: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PairArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Use beta = -alpha and nu = -mu, ignoring --rho-beta/--phi-beta/--rho-nu/--phi-nu.
    #[arg(long)]
    pub antipodal: bool,
    #[arg(long)]
    pub omega1: f64,
    #[arg(long)]
    pub omega2: f64,
    #[arg(long)]
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Single-mode coherent state (alpha, omega1).
    Single,
    /// General entangled coherent state.
    Pair,
    /// beta = -alpha, nu = -mu family, closed form.
    Antipodal,
    /// Antipodal family with omega2 = 0.
    OneParticle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweptParam {
    #[value(name = "tau")]
    Tau,
    #[value(name = "theta")]
    Theta,
    #[value(name = "varphi")]
    Varphi,
    #[value(name = "rho_alpha")]
    RhoAlpha,
    #[value(name = "rho_mu")]
    RhoMu,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    /// Parameter to sweep.
    #[arg(long, value_enum)]
    pub param: SweptParam,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub end: f64,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    pub steps: usize,
    /// CSV destination.
    #[arg(long)]
    pub output: PathBuf,
    /// Add a branch-continuous gamma_unwrapped column.
    #[arg(long)]
    pub unwrap: bool,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 1.0)]
    pub omega1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega2: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Largest acceptable analytic-vs-oracle discrepancy per formula family.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// Fixed per-mode Fock truncation (default: automatic).
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, default_value_t = 1e-12)]
    pub trunc_tol: f64,
    #[arg(long, default_value_t = 4096)]
    pub time_steps: usize,
}
