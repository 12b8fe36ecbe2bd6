use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "latfactor", version, about = "Lattice factoring with exact QAOA refinement")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Factor a composite N by collecting smooth relations.
    Factor(FactorArgs),
    /// Build a prime-lattice instance file.
    Instance(InstanceArgs),
    /// Lowest levels of the encoded Hamiltonian.
    Spectrum(SpectrumArgs),
    /// p = 1 QAOA energy over a (gamma, beta) grid, as CSV.
    Landscape(LandscapeArgs),
    /// Optimize p-layer QAOA parameters with model gradient descent.
    Optimize(OptimizeArgs),
    /// Qubit and depth estimates for RSA moduli.
    Estimate(EstimateArgs),
    /// Swap-network schedule for n qubits.
    Schedule(ScheduleArgs),
    /// Largest RSA size a device can touch.
    Touch(TouchArgs),
    /// Encoded-space minimum versus Babai on random instances.
    Compare(CompareArgs),
    /// LLL reduction, Babai rounding and Hamiltonian of an instance.
    Reduce(ReduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Spectrum,
    Qaoa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Weights uniform in 1..=weight-max, precision jitter.
    Widened,
    /// Seeded permutations of the default weight multiset only.
    Stated,
}

#[derive(Args, Debug)]
pub struct FactorArgs {
    pub n: String,
    /// Lattice dimension (default: round(x / log2 x) with x = log2 N).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Precision c (decimal or fraction; default 1.5 for dim ≤ 3, else 4).
    #[arg(long)]
    pub precision: Option<String>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Spectrum)]
    pub strategy: StrategyArg,
    /// Lowest levels per instance for the spectrum strategy.
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// Size of the large prime basis B2 (default 2·dim², 15 for dim 3).
    #[arg(long)]
    pub b2_dim: Option<usize>,
    #[arg(long, value_enum, default_value_t = FamilyArg::Widened)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 1000)]
    pub weight_max: u64,
    /// Precision jitter amplitude (default min(c/2, 2) for the widened family).
    #[arg(long)]
    pub jitter: Option<f64>,
    #[arg(long, default_value_t = 64)]
    pub batch: u64,
    #[arg(long, default_value_t = 100_000)]
    pub max_instances: u64,
    #[arg(long, default_value_t = 256)]
    pub dependency_limit: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the collected relations as JSONL.
    #[arg(long)]
    pub relations: Option<PathBuf>,
    /// Include wall time in the report.
    #[arg(long)]
    pub timing: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InstanceArgs {
    pub n: String,
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub precision: String,
    /// Comma-separated diagonal weights (default: the weight multiset, seeded permutation if --seed).
    #[arg(long, value_delimiter = ',')]
    pub diag: Option<Vec<u64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(short, default_value_t = 10)]
    pub k: usize,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LandscapeArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Gamma range `a:b` (default [0, π/(2σ)]).
    #[arg(long)]
    pub gamma: Option<String>,
    /// Beta range `a:b` (default [π/2, π]).
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub stability: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_evals: Option<usize>,
    /// Shots drawn at the optimum (0 skips sampling).
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    #[arg(long)]
    pub delta: Option<String>,
    /// Write every evaluation as JSONL.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct EstimateArgs {
    #[arg(long)]
    pub bits: Option<u64>,
    #[arg(long)]
    pub table: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScheduleTopology {
    Kn,
    Lnn,
}

#[derive(Args, Debug)]
pub struct ScheduleArgs {
    #[arg(long, value_enum)]
    pub topology: ScheduleTopology,
    #[arg(long)]
    pub n: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TouchArgs {
    #[arg(long)]
    pub qubits: u64,
    /// kn, 2dsl, lnn or others.
    #[arg(long, default_value = "kn")]
    pub topology: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RefinementArg {
    Ideal,
    Sampled,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub precision: String,
    #[arg(long, default_value_t = 40)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bit length of each random modulus (default: inverse of the dimension rule).
    #[arg(long)]
    pub bits: Option<u64>,
    #[arg(long, value_enum, default_value_t = RefinementArg::Ideal)]
    pub refinement: RefinementArg,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// Per-sample CSV.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
