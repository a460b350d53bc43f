use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::export::FluxFormat;

#[derive(Debug, Parser)]
#[command(name = "masm", version, about = "Multilevel Schwarz preconditioned SN k-eigenvalue solver")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Problem configuration file (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Fixed-order reductions; results are identical at any thread count.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Seed for randomized initial guesses.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub output: PathBuf,
    /// Zero all timings in written reports.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write report.json.
    Solve(SolveArgs),
    /// Run every (np, pc) combination and write compare.json.
    Compare(CompareArgs),
    /// Write a generated problem configuration to problem.json.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PcKind {
    None,
    Ras,
    Masm,
    MasmSub,
}

impl PcKind {
    pub fn name(self) -> &'static str {
        match self {
            PcKind::None => "none",
            PcKind::Ras => "ras",
            PcKind::Masm => "masm",
            PcKind::MasmSub => "masm-sub",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LocalSolverArg {
    Sor,
    Lu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialGuess {
    Ones,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Generator used when no --config is given.
    #[arg(long, value_parser = ["infinite_medium", "infinite-medium", "pure_absorber", "pure-absorber", "mini_lattice", "mini-lattice"], hide_possible_values = true)]
    pub problem: Option<String>,
    /// Elements per axis (infinite_medium, pure_absorber).
    #[arg(long, default_value_t = 4)]
    pub mesh_n: usize,
    /// Element edge length (infinite_medium, pure_absorber).
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    pub sigma_t: Vec<f64>,
    /// Row-major G x G matrix, row = source group.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5])]
    pub sigma_s: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.6])]
    pub nu_sigma_f: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    pub chi: Vec<f64>,
    /// Pins per side (mini_lattice).
    #[arg(long, default_value_t = 4)]
    pub pins: usize,
    /// Elements per pin side (mini_lattice).
    #[arg(long, default_value_t = 4)]
    pub cells_per_pin: usize,
    /// Energy groups (mini_lattice).
    #[arg(long, default_value_t = 2)]
    pub groups: usize,
    /// Pin radius as a fraction of the pitch (mini_lattice).
    #[arg(long, default_value_t = 0.4)]
    pub pin_radius: f64,
    /// Angular quadrature: level-symmetric (ls) or gauss-chebyshev (gc).
    #[arg(long, default_value = "level-symmetric")]
    pub quadrature: String,
    /// SN order for level-symmetric, direction count for gauss-chebyshev.
    #[arg(long, default_value_t = 2)]
    pub order: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-6)]
    pub newton_rtol: f64,
    #[arg(long, default_value_t = 1e-1)]
    pub gmres_rtol: f64,
    #[arg(long, default_value_t = 30)]
    pub gmres_restart: usize,
    #[arg(long, default_value_t = 50)]
    pub max_newton: usize,
    /// Inverse power iterations used as the initial guess.
    #[arg(long, default_value_t = 2)]
    pub power_its: usize,
    #[arg(long, value_enum, default_value_t = InitialGuess::Ones)]
    pub initial: InitialGuess,
}

#[derive(Debug, Clone, Args)]
pub struct PcArgs {
    #[arg(long, value_enum, default_value_t = PcKind::MasmSub)]
    pub pc: PcKind,
    /// Maximum number of levels.
    #[arg(long, default_value_t = 10)]
    pub levels: usize,
    /// Strength threshold.
    #[arg(long, default_value_t = 0.08)]
    pub theta: f64,
    #[arg(long, default_value_t = 200)]
    pub coarsest_size: usize,
    /// Diagonal block coarsened by masm-sub.
    #[arg(long, default_value_t = 0)]
    pub coarsen_block: usize,
    #[arg(long, default_value_t = 1)]
    pub pre_its: usize,
    #[arg(long, default_value_t = 1)]
    pub post_its: usize,
    #[arg(long, default_value_t = 1)]
    pub np1: usize,
    #[arg(long, default_value_t = 4)]
    pub np2: usize,
    /// Overlap layers.
    #[arg(long, default_value_t = 0)]
    pub overlap: usize,
    #[arg(long, value_enum, default_value_t = LocalSolverArg::Sor)]
    pub local_solver: LocalSolverArg,
    #[arg(long, default_value_t = 2)]
    pub sor_sweeps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sor_omega: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub pc: PcArgs,
    /// Also export the scalar flux.
    #[arg(long, value_enum)]
    pub flux: Option<FluxFormat>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub pc: PcArgs,
    /// Total subdomain counts; each is split as np1 x (np / np1).
    #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8])]
    pub np_list: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [PcKind::Masm, PcKind::MasmSub])]
    pub pc_list: Vec<PcKind>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Output file name inside the output directory.
    #[arg(long, default_value = "problem.json")]
    pub file: String,
}
