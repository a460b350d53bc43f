use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use masm_core::discretization::config::{ProblemConfig, QuadratureConfig};
use masm_core::discretization::{Material, ProblemSpec, TransportOperator};
use masm_core::eigensolver::{newton_solve, ConvergenceReport, EigenState, SolverOptions};
use masm_core::multilevel::{setup_masm, setup_masm_sub, CoarsenOptions, LevelSummary, SmootherSetup};
use masm_core::problems::{infinite_medium, mini_lattice, pure_absorber, GeneratorKind, MiniLatticeParams};
use masm_core::schwarz::{hierarchical_partition, unknown_owner, LocalSolverKind, RasPreconditioner, SchwarzOptions};
use masm_core::{Error, IdentityPreconditioner, Preconditioner};

use crate::args::{CompareArgs, GenArgs, GlobalArgs, InitialGuess, LocalSolverArg, PcArgs, PcKind, ProblemArgs, SolveArgs, SolverArgs};
use crate::error::{CliError, CliResult, EXIT_OK};
use crate::export::export_flux;

fn material_from_args(p: &ProblemArgs) -> CliResult<Material> {
    let g = p.sigma_t.len();
    if p.sigma_s.len() != g * g {
        return Err(CliError::Usage(format!("--sigma-s needs {} values for {g} groups", g * g)));
    }
    Ok(Material {
        id: 0,
        sigma_t: p.sigma_t.clone(),
        sigma_s: p.sigma_s.chunks(g).map(|c| c.to_vec()).collect(),
        nu_sigma_f: p.nu_sigma_f.clone(),
        chi: p.chi.clone(),
    })
}

/// Builds a configuration from generator flags.
pub fn generate(p: &ProblemArgs) -> CliResult<ProblemConfig> {
    let kind: GeneratorKind = p
        .problem
        .as_deref()
        .ok_or_else(|| CliError::Usage("no problem source: pass --config FILE or --problem KIND".into()))?
        .parse()?;
    let quadrature = QuadratureConfig {
        kind: p.quadrature.parse()?,
        order: p.order,
    };
    Ok(match kind {
        GeneratorKind::InfiniteMedium => infinite_medium(material_from_args(p)?, p.mesh_n, p.h, quadrature)?,
        GeneratorKind::PureAbsorber => pure_absorber(p.sigma_t.clone(), p.mesh_n, p.h, quadrature)?,
        GeneratorKind::MiniLattice => mini_lattice(&MiniLatticeParams {
            pins: p.pins,
            cells_per_pin: p.cells_per_pin,
            groups: p.groups,
            quadrature,
            pin_radius: p.pin_radius,
        })?,
    })
}

/// Exactly one of `--config` and `--problem` must be given.
pub fn load_problem(global: &GlobalArgs, p: &ProblemArgs) -> CliResult<ProblemConfig> {
    match (&global.config, &p.problem) {
        (Some(_), Some(_)) => Err(CliError::Usage("pass either --config or --problem, not both".into())),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Ok(ProblemConfig::from_json(&text)?)
        }
        (None, _) => generate(p),
    }
}

pub fn solver_options(s: &SolverArgs) -> SolverOptions {
    SolverOptions {
        newton_rtol: s.newton_rtol,
        gmres_rtol: s.gmres_rtol,
        gmres_restart: s.gmres_restart,
        max_newton: s.max_newton,
        n_initial_power: s.power_its,
        ..Default::default()
    }
}

pub fn schwarz_options(pc: &PcArgs) -> SchwarzOptions {
    SchwarzOptions {
        overlap: pc.overlap,
        local_solver: match pc.local_solver {
            LocalSolverArg::Lu => LocalSolverKind::Lu,
            LocalSolverArg::Sor => LocalSolverKind::Sor {
                sweeps: pc.sor_sweeps,
                omega: pc.sor_omega,
            },
        },
    }
}

pub fn coarsen_options(pc: &PcArgs) -> CoarsenOptions {
    CoarsenOptions {
        theta: pc.theta,
        max_levels: pc.levels,
        coarsest_size: pc.coarsest_size,
        pre_its: pc.pre_its,
        post_its: pc.post_its,
        coarsen_block: pc.coarsen_block,
    }
}

/// Everything produced by one solve.
#[derive(Debug)]
pub struct SolveOutcome {
    pub report: ConvergenceReport,
    pub state: Option<EigenState>,
    pub coarsened_rows: usize,
    pub hierarchy: Option<Vec<LevelSummary>>,
    /// Set when the solve did not converge.
    pub failure: Option<Error>,
}

fn initial_guess(kind: InitialGuess, seed: u64, n: usize) -> Vec<f64> {
    match kind {
        InitialGuess::Ones => vec![1.0; n],
        InitialGuess::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| 1.0 + 0.5 * rng.gen_range(-1.0..1.0)).collect()
        }
    }
}

/// Assembles, partitions into `np1 x np2` parts, builds the requested
/// preconditioner inside the solve, and runs Newton.
pub fn solve_problem(
    op: &TransportOperator,
    pc_kind: PcKind,
    pc: &PcArgs,
    np: (usize, usize),
    solver: &SolverArgs,
    seed: u64,
) -> CliResult<SolveOutcome> {
    let spec: &ProblemSpec = op.spec();
    let layout = op.layout();
    let p = op.preconditioning_matrix();
    let opts = solver_options(solver);
    let schwarz = schwarz_options(pc);
    let coarsen = coarsen_options(pc);
    let mut coarsened_rows = 0;
    let mut hierarchy = None;
    let weights = spec.quadrature.weights.clone();
    let psi0 = initial_guess(solver.initial, seed, op.dim());

    let build = || -> masm_core::Result<Box<dyn Preconditioner + '_>> {
        if pc_kind == PcKind::None {
            return Ok(Box::new(IdentityPreconditioner(p.n_rows())));
        }
        let partition = hierarchical_partition(&spec.mesh, np.0, np.1)?;
        let owner = unknown_owner(&partition.vertex_owner, &layout)?;
        let n_parts = partition.n_parts();
        if pc_kind == PcKind::Ras {
            return Ok(Box::new(RasPreconditioner::from_owner(p, &owner, n_parts, &schwarz)?));
        }
        let smoother = SmootherSetup { owner, n_parts, schwarz };
        let h = if pc_kind == PcKind::Masm {
            setup_masm(p, &layout, &coarsen, &smoother)?
        } else {
            setup_masm_sub(p, &layout, &coarsen, &smoother)?
        };
        coarsened_rows = h.coarsened_rows();
        hierarchy = Some(h.summary());
        Ok(Box::new(h))
    };
    let result = newton_solve(op, build, Some(psi0), Some((&layout, &weights)), &opts);
    match result {
        Ok(out) => Ok(SolveOutcome {
            report: out.report,
            state: Some(out.state),
            coarsened_rows,
            hierarchy,
            failure: None,
        }),
        Err(Error::NewtonNotConverged { max, report }) => Ok(SolveOutcome {
            report: (*report).clone(),
            state: None,
            coarsened_rows,
            hierarchy,
            failure: Some(Error::NewtonNotConverged { max, report }),
        }),
        Err(e) => Err(e.into()),
    }
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn cmd_solve(global: &GlobalArgs, args: &SolveArgs) -> CliResult<i32> {
    let config = load_problem(global, &args.problem)?;
    let spec = config.to_spec()?;
    let op = TransportOperator::new(&spec)?;
    let out = solve_problem(&op, args.pc.pc, &args.pc, (args.pc.np1, args.pc.np2), &args.solver, global.seed)?;
    let mut report = out.report.clone();
    if global.no_timing {
        report.mask_timings();
    }
    let path = write_json(&global.output, "report.json", &report)?;
    if let Some(h) = &out.hierarchy {
        write_json(&global.output, "hierarchy.json", h)?;
    }
    if let (Some(format), Some(state)) = (args.flux, &out.state) {
        let phi = op.scalar_flux(&state.psi)?;
        let flux_path = global.output.join(format!("flux.{}", format.extension()));
        export_flux(&phi, &spec.mesh, spec.n_groups(), format, &flux_path)?;
    }
    println!("{}", report.to_json());
    if let Some(e) = out.failure {
        eprintln!("report written to {}", path.display());
        return Err(e.into());
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub np: usize,
    pub pc: String,
    pub iter_newton: usize,
    pub iter_gmres_avg: f64,
    pub time_pcsetup: f64,
    pub time_pcapply: f64,
    pub time_ksp: f64,
    pub time_total: f64,
    /// Percent; `None` when timings are masked (except the baseline row).
    pub eff: Option<f64>,
    pub coarsened_rows: usize,
    pub final_k: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub eff_semantics: &'static str,
    pub baseline_np: usize,
    pub n_blocks: usize,
    pub rows: Vec<ComparisonRow>,
}

pub fn cmd_compare(global: &GlobalArgs, args: &CompareArgs) -> CliResult<i32> {
    if args.np_list.is_empty() || args.pc_list.is_empty() {
        return Err(CliError::Usage("--np-list and --pc-list must be non-empty".into()));
    }
    let np1 = args.pc.np1;
    for &np in &args.np_list {
        if np == 0 || np % np1 != 0 {
            return Err(CliError::Usage(format!("np {np} is not a positive multiple of --np1 {np1}")));
        }
    }
    let config = load_problem(global, &args.problem)?;
    let spec = config.to_spec()?;
    let op = TransportOperator::new(&spec)?;
    let baseline_np = args.np_list[0];
    let mut rows = Vec::new();
    for &pc in &args.pc_list {
        let mut baseline_total = None;
        for &np in &args.np_list {
            let out = solve_problem(&op, pc, &args.pc, (np1, np / np1), &args.solver, global.seed)?;
            let mut r = out.report;
            let total = r.time_total;
            let base = *baseline_total.get_or_insert(total);
            let scale = np as f64 / baseline_np as f64;
            let eff = if np == baseline_np {
                Some(100.0)
            } else if global.no_timing || total == 0.0 {
                None
            } else {
                Some(100.0 * base / (scale * total))
            };
            if global.no_timing {
                r.mask_timings();
            }
            rows.push(ComparisonRow {
                np,
                pc: pc.name().to_string(),
                iter_newton: r.iter_newton,
                iter_gmres_avg: r.iter_gmres_avg,
                time_pcsetup: r.time_pcsetup,
                time_pcapply: r.time_pcapply,
                time_ksp: r.time_ksp,
                time_total: r.time_total,
                eff,
                coarsened_rows: out.coarsened_rows,
                final_k: r.final_k,
                converged: out.failure.is_none(),
            });
        }
    }
    let comparison = Comparison {
        eff_semantics: "desk_analog",
        baseline_np,
        n_blocks: op.layout().n_blocks(),
        rows,
    };
    write_json(&global.output, "compare.json", &comparison)?;
    println!("{}", serde_json::to_string_pretty(&comparison).expect("serializable"));
    Ok(EXIT_OK)
}

pub fn cmd_gen(global: &GlobalArgs, args: &GenArgs) -> CliResult<i32> {
    let config = generate(&args.problem)?;
    config.to_spec()?;
    std::fs::create_dir_all(&global.output).map_err(|e| CliError::io(&global.output, e))?;
    let path = global.output.join(&args.file);
    std::fs::write(&path, config.to_json() + "\n").map_err(|e| CliError::io(&path, e))?;
    println!("{}", path.display());
    Ok(EXIT_OK)
}
