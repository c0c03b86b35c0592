use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Numerical companion to the universal-superposer no-go argument.
#[derive(Debug, Parser)]
#[command(name = "nogo", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Superpose the dependent triple with φ and certify the output rank.
    Verify(VerifyArgs),
    /// Sweep (θ₂₁, θ₃₁) for phase pairs that keep the outputs dependent.
    Scan(ScanArgs),
    /// Run discrimination and cloning on the superposed outputs.
    Demo(DemoArgs),
    /// Build and simulate the discrimination measurement for a state list.
    Usd(UsdArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Geometry {
    /// Hilbert-space dimension (at least 3).
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Coefficient of ψ in ψ₃ = aψ + bψ⊥.
    #[arg(long, default_value_t = FRAC_1_SQRT_2, allow_negative_numbers = true)]
    pub a: f64,
    /// Coefficient of ψ⊥ in ψ₃.
    #[arg(long, default_value_t = FRAC_1_SQRT_2, allow_negative_numbers = true)]
    pub b: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Weights {
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub alpha_mod: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_arg: f64,
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub beta_mod: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta_arg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhasePolicyKind {
    Constant,
    OverlapArg,
    CanonicalHash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuccessPolicyKind {
    Always,
    Constant,
    OverlapScaled,
}

#[derive(Debug, Clone, Args)]
pub struct Policies {
    #[arg(long, value_enum, default_value_t = PhasePolicyKind::Constant)]
    pub phase_policy: PhasePolicyKind,
    /// Phase of the constant policy; also the default for unpinned inputs.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Pin the phase used with ψ₁ (constant policy only).
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta3: Option<f64>,
    #[arg(long, value_enum, default_value_t = SuccessPolicyKind::Always)]
    pub success_policy: SuccessPolicyKind,
    /// Success probability of the constant success policy.
    #[arg(long)]
    pub success_p: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// JSON report path; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Seed {
    #[arg(long, env = "NOGO_SEED", default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub geometry: Geometry,
    #[command(flatten)]
    pub weights: Weights,
    #[command(flatten)]
    pub policies: Policies,
    /// Relative singular-value cutoff for the reported ranks.
    #[arg(long, default_value_t = 1e-9)]
    pub rank_tol: f64,
    #[command(flatten)]
    pub seed: Seed,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub geometry: Geometry,
    #[command(flatten)]
    pub weights: Weights,
    /// Grid spacing in radians, at most 0.1.
    #[arg(long, default_value_t = PI / 180.0)]
    pub grid_step: f64,
    /// Relative singular-value cutoff marking a grid point degenerate.
    #[arg(long, default_value_t = 1e-6)]
    pub scan_tol: f64,
    /// Also write the full grid as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub seed: Seed,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub geometry: Geometry,
    #[command(flatten)]
    pub weights: Weights,
    #[command(flatten)]
    pub policies: Policies,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[command(flatten)]
    pub seed: Seed,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct UsdArgs {
    /// JSON file holding an array of states, each an array of [re, im] pairs.
    #[arg(long)]
    pub states: PathBuf,
    /// Zero-based index of the state to measure; every state when absent.
    #[arg(long)]
    pub truth: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Relative singular-value cutoff for the independence check.
    #[arg(long, default_value_t = 1e-9)]
    pub rank_tol: f64,
    #[command(flatten)]
    pub seed: Seed,
    #[command(flatten)]
    pub output: Output,
}
