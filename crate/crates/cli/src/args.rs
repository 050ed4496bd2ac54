use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgm_tight::prox::ProxFamily;

#[derive(Debug, Parser)]
#[command(name = "pgm-tight", version, about = "Worst-case experiments for the proximal gradient method")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contraction factor rho^2 over a step-size grid.
    Rate(RateArgs),
    /// Run the method and compare every step with its envelope.
    Simulate(SimulateArgs),
    /// Attained versus predicted worst cases on the lower-bound instances.
    Tight(TightArgs),
    /// Exact-rational verification of the proof certificates.
    Certify(CertifyArgs),
    /// The three bound tables evaluated at given parameters.
    Tables(TablesArgs),
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Strong convexity constant (decimal or `p/q`).
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Smoothness constant (decimal or `p/q`).
    #[arg(long = "L", allow_hyphen_values = true)]
    pub l: Option<String>,
    /// Step size, decimal, `p/q`, or `opt` for 2/(L+mu).
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Number of iterations.
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Nonsmooth term.
    #[arg(long, value_enum)]
    pub h: Option<HKind>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid specification; meaning depends on the subcommand.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HKind {
    Zero,
    Nonneg,
    Box,
    L1,
}

impl HKind {
    pub fn family(self) -> ProxFamily {
        match self {
            HKind::Zero => ProxFamily::Zero,
            HKind::Nonneg => ProxFamily::Nonneg,
            HKind::Box => ProxFamily::Box,
            HKind::L1 => ProxFamily::L1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HKind::Zero => "zero",
            HKind::Nonneg => "nonneg",
            HKind::Box => "box",
            HKind::L1 => "l1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Instance {
    /// Random diagonal quadratic plus the chosen `h`.
    Random,
    /// Worst-case quadratic for the given step.
    Qlb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Start {
    Random,
    /// Start at the minimizer.
    Optimum,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Instance::Random)]
    pub instance: Instance,
    #[arg(long, value_enum, default_value_t = Start::Random)]
    pub start: Start,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    Qlb,
    AppendixB,
    Els,
    Unbounded,
}

#[derive(Debug, Args)]
pub struct TightArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub generator: Generator,
    /// Starting point of the one-dimensional instances.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Distance,
    Residual,
    Funcvalue,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Small,
    Large,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = TheoremArg::All)]
    pub theorem: TheoremArg,
    /// Regime to check; every valid regime when absent.
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    /// Corrupts each certificate: `negate-beta`, `multiplier:I:DELTA` or
    /// `sos:I:DELTA`.
    #[arg(long, hide = true)]
    pub mutate: Option<String>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[command(flatten)]
    pub common: Common,
}
