use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 1;

/// Grassmannian U(4)/U(2)² and Bloch coherent states: bases, kernels,
/// operator symbols, Husimi functions and Wehrl entropy.
#[derive(Parser, Debug)]
#[command(name = "grasscs", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Base seed for every random stream.
    #[arg(long, global = true, env = "GRASSCS_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Write the document here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Run data-parallel loops on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    /// Only for `husimi --grid`.
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Enumerate the basis of the irrep λ in canonical order.
    Basis(LambdaArgs),
    /// Reproducing kernel det(σ₀ + Z W†)^λ and its basis expansion.
    Kernel(TwoPointArgs),
    /// Overlap ⟨Z′|Z⟩ of two normalized coherent states.
    Overlap(TwoPointArgs),
    /// Matrix representations of generators and Casimirs.
    Generators(GeneratorArgs),
    /// Coherent-state symbols of the generators.
    Symbols(SymbolArgs),
    /// Spin / pseudospin / canted classification of a point.
    Phase(PhaseArgs),
    /// Husimi function at a point or on a (ϑ₊, ϑ₋) grid.
    Husimi(HusimiArgs),
    /// Wehrl entropy of a state.
    Entropy(EntropyArgs),
    /// Second moment of the Husimi function of a state.
    Moment(MomentArgs),
    /// Conjectured bounds and a numerical search for smaller entropy.
    Conjecture(ConjectureArgs),
    /// Spin-s Bloch coherent-state baseline.
    Su2(Su2Args),
}

#[derive(Args, Debug, Serialize)]
pub struct LambdaArgs {
    #[arg(long, short)]
    pub lambda: u32,
}

/// A point of the Grassmannian.
#[derive(Args, Debug, Serialize, Clone, Default)]
pub struct PointArgs {
    /// θ_a θ_b φ_a φ_b ϑ₊ ϑ₋ β₊ β₋
    #[arg(long, num_args = 8, value_name = "ANGLE", allow_negative_numbers = true, conflicts_with = "matrix")]
    pub angles: Option<Vec<f64>>,
    /// Re z₁₁ Im z₁₁ Re z₁₂ Im z₁₂ Re z₂₁ Im z₂₁ Re z₂₂ Im z₂₂
    #[arg(long, num_args = 8, value_name = "X", allow_negative_numbers = true)]
    pub matrix: Option<Vec<f64>>,
}

/// The second point of a two-point command.
#[derive(Args, Debug, Serialize, Clone, Default)]
pub struct SecondPointArgs {
    #[arg(long, num_args = 8, value_name = "ANGLE", allow_negative_numbers = true, conflicts_with = "matrix_w")]
    pub angles_w: Option<Vec<f64>>,
    #[arg(long, num_args = 8, value_name = "X", allow_negative_numbers = true)]
    pub matrix_w: Option<Vec<f64>>,
}

impl From<SecondPointArgs> for PointArgs {
    fn from(p: SecondPointArgs) -> Self {
        PointArgs {
            angles: p.angles_w,
            matrix: p.matrix_w,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct TwoPointArgs {
    #[arg(long, short)]
    pub lambda: u32,
    #[command(flatten)]
    pub z: PointArgs,
    #[command(flatten)]
    pub w: SecondPointArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct GeneratorArgs {
    #[arg(long, short)]
    pub lambda: u32,
    /// Operator names such as T30, M12, T+0, T-3, S1, P3, R12, Sa3, C1, C2, M2.
    /// Defaults to P3, Sa3, Sb3, C1, C2 and M2.
    #[arg(long = "op", value_name = "NAME")]
    pub ops: Vec<String>,
    /// Include every matrix entry, not just the diagonal.
    #[arg(long)]
    pub full: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolMethod {
    Closed,
    Matrix,
    Both,
}

#[derive(Args, Debug, Serialize)]
pub struct SymbolArgs {
    #[arg(long, short)]
    pub lambda: u32,
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_enum, default_value_t = SymbolMethod::Both)]
    pub method: SymbolMethod,
}

#[derive(Args, Debug, Serialize)]
pub struct PhaseArgs {
    #[arg(long, short)]
    pub lambda: u32,
    #[command(flatten)]
    pub point: PointArgs,
    /// Relative tolerance on ⟨S⃗⟩² and ⟨P⃗⟩² against λ².
    #[arg(long, default_value_t = grasscs_core::operators::DEFAULT_PHASE_TOL)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Lowest,
    Highest,
    Uniform,
    Random,
    Basis,
    Coherent,
    File,
}

#[derive(Args, Debug, Serialize)]
pub struct StateArgs {
    #[arg(long, value_enum, default_value_t = StateKind::Lowest)]
    pub state: StateKind,
    /// Basis label for `--state basis`.
    #[arg(long, value_name = "2J,M,2QA,2QB", value_delimiter = ',', num_args = 4, allow_negative_numbers = true)]
    pub index: Option<Vec<i64>>,
    /// JSON array of [re, im] pairs in canonical basis order.
    #[arg(long, value_name = "PATH")]
    pub state_file: Option<std::path::PathBuf>,
    /// Coherent-state label as eight angles.
    #[arg(long, num_args = 8, value_name = "ANGLE", allow_negative_numbers = true, conflicts_with = "cs_matrix")]
    pub cs_angles: Option<Vec<f64>>,
    /// Coherent-state label as eight matrix reals.
    #[arg(long, num_args = 8, value_name = "X", allow_negative_numbers = true)]
    pub cs_matrix: Option<Vec<f64>>,
}

#[derive(Args, Debug, Serialize)]
pub struct HusimiArgs {
    #[arg(long, short)]
    pub lambda: u32,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub point: PointArgs,
    /// Evaluate on an N×N grid over (ϑ₊, ϑ₋) ∈ [0, π]², the other six
    /// angles taken from `--angles` (zero by default).
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyMethodArg {
    Auto,
    Quadrature,
    Mc,
}

#[derive(Args, Debug, Serialize)]
pub struct EntropyArgs {
    #[arg(long, short)]
    pub lambda: u32,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value_t = EntropyMethodArg::Auto)]
    pub method: EntropyMethodArg,
    #[arg(long, default_value_t = 1_000_000)]
    pub n_samples: u64,
    #[arg(long, default_value_t = grasscs_core::integration::DEFAULT_QUAD_NODES)]
    pub n_nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMethodArg {
    Exact,
    Mc,
}

#[derive(Args, Debug, Serialize)]
pub struct MomentArgs {
    #[arg(long, short)]
    pub lambda: u32,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value_t = MomentMethodArg::Exact)]
    pub method: MomentMethodArg,
    #[arg(long, default_value_t = 1_000_000)]
    pub n_samples: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct ConjectureArgs {
    #[arg(long, short)]
    pub lambda: u32,
    /// Random starting states; 0 prints only the closed forms.
    #[arg(long, default_value_t = 0)]
    pub starts: usize,
    /// Sample size of the independent re-estimate of each optimized state.
    #[arg(long, default_value_t = 1_000_000)]
    pub n_mc: u64,
    /// Fixed sample size inside the optimizer.
    #[arg(long)]
    pub n_inner: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_evals: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinStateKind {
    Lowest,
    Highest,
    Basis,
    Coherent,
    Random,
    File,
}

#[derive(Args, Debug, Serialize)]
pub struct Su2Args {
    /// Twice the spin.
    #[arg(long)]
    pub two_s: u32,
    #[arg(long, value_enum, default_value_t = SpinStateKind::Lowest)]
    pub state: SpinStateKind,
    /// 2k for `--state basis`.
    #[arg(long, allow_negative_numbers = true)]
    pub two_k: Option<i32>,
    #[arg(long, value_name = "PATH")]
    pub state_file: Option<std::path::PathBuf>,
    /// Polar angle of the coherent state and of the symbol point.
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, default_value_t = grasscs_core::su2::DEFAULT_SPHERE_NODES)]
    pub n_nodes: usize,
}
