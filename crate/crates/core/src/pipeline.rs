//! Discretize, solve and estimate one mesh level.

use std::time::Instant;

use rayon::prelude::*;

use crate::assembly::{
    assemble_load, assemble_mass, assemble_stiffness, integrate_elementwise, p1_value,
    DirichletMap, QuadratureRule,
};
use crate::config::RunConfig;
use crate::error::Result;
use crate::flux::reconstruct_flux;
use crate::fourier::{CoefficientPair, FourierSettings, ProblemSpec, SpatialPair};
use crate::linalg::{
    factorize_spd, minres_solve, pcg_solve, BlockDiagonalPreconditioner, BlockSystem, CsrMatrix,
    SolverOptions,
};
use crate::majorant::{
    exact_error_mode, friedrichs_unit_square, global_error, global_residuals, half_seminorm,
    majorant_global, majorant_norm_mode, majorant_seminorm_mode, residual1_mode, residual2_mode,
    ConstantsBundle, ErrorMeasure, FluxPair, GlobalReport, MajorantReport, ModeReport,
};
use crate::mesh::Mesh;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub solver: SolverOptions,
    /// Polynomial degree the element quadrature integrates exactly.
    pub quadrature_degree: usize,
    pub fourier: FourierSettings,
    /// Modes run in parallel below this many unknowns per block.
    pub parallel_dof_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            solver: SolverOptions::default(),
            quadrature_degree: 5,
            fourier: FourierSettings::default(),
            parallel_dof_limit: 100_000,
        }
    }
}

/// Matrices and per-mode loads of one level.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: Mesh,
    pub dofs: DirichletMap,
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    /// Spatial source coefficients of harmonics `0..=N`.
    pub source_modes: Vec<SpatialPair>,
    /// `(cos, sin)` load vectors of harmonics `0..=N`.
    pub loads: Vec<(Vec<f64>, Vec<f64>)>,
    pub rule: QuadratureRule,
}

pub fn discretize(problem: &ProblemSpec, n: usize, opts: &SolveOptions) -> Result<Discretization> {
    problem.validate()?;
    let mesh = Mesh::uniform(n)?;
    let dofs = DirichletMap::new(&mesh);
    let stiffness = assemble_stiffness(&mesh, &problem.nu, &dofs)?;
    let mass = assemble_mass(&mesh, &problem.sigma, &dofs)?;
    let rule = QuadratureRule::for_degree(opts.quadrature_degree);
    let source_modes =
        problem
            .source
            .modes(problem.omega, problem.truncation, opts.fourier.samples)?;
    let loads = source_modes
        .iter()
        .map(|f| {
            let c = assemble_load(&mesh, &|x| f.c.eval(x), &rule, &dofs)?;
            let s = assemble_load(&mesh, &|x| f.s.eval(x), &rule, &dofs)?;
            Ok((c, s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Discretization {
        mesh,
        dofs,
        stiffness,
        mass,
        source_modes,
        loads,
        rule,
    })
}

/// Galerkin approximation of one harmonic, as nodal values.
#[derive(Debug, Clone)]
pub struct ModeSolution {
    pub k: usize,
    pub eta: CoefficientPair,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub seconds: f64,
}

/// Mode 0 by preconditioned CG on `K`, modes `k >= 1` by block-preconditioned MINRES.
pub fn solve_mode(
    disc: &Discretization,
    k: usize,
    omega: f64,
    opts: &SolverOptions,
) -> Result<ModeSolution> {
    let start = Instant::now();
    let (load_c, load_s) = &disc.loads[k];
    let (c, s, outcome) = if k == 0 {
        let factor = factorize_spd(&disc.stiffness)?;
        let out = pcg_solve(&disc.stiffness, &factor, load_c, opts)?;
        let c = disc.dofs.expand(&out.solution);
        (c, vec![0.0; disc.mesh.num_nodes()], out)
    } else {
        let system = BlockSystem::new(k, omega, &disc.mass, &disc.stiffness, load_c, load_s)?;
        let pre = BlockDiagonalPreconditioner::new(&system)?;
        let out = minres_solve(&system, &pre, system.rhs(), opts)?;
        let (c, s) = system.split(&out.solution);
        (disc.dofs.expand(c), disc.dofs.expand(s), out)
    };
    Ok(ModeSolution {
        k,
        eta: CoefficientPair { c, s },
        iterations: outcome.iterations,
        residual_history: outcome.residual_history,
        seconds: start.elapsed().as_secs_f64(),
    })
}

struct ModeOutcome {
    report: ModeReport,
    eta_l2: f64,
}

fn estimate_mode(
    problem: &ProblemSpec,
    disc: &Discretization,
    constants: &ConstantsBundle,
    exact_modes: Option<&[SpatialPair]>,
    k: usize,
    opts: &SolveOptions,
) -> Result<ModeOutcome> {
    let sol = solve_mode(disc, k, problem.omega, &opts.solver)?;
    let mesh = &disc.mesh;
    let tau_c = reconstruct_flux(mesh, &sol.eta.c, &problem.nu)?;
    let tau_s = reconstruct_flux(mesh, &sol.eta.s, &problem.nu)?;
    let tau = FluxPair {
        c: &tau_c,
        s: &tau_s,
    };
    let f = &disc.source_modes[k];
    let r1 = residual1_mode(
        k,
        &sol.eta,
        tau,
        f,
        problem.omega,
        &problem.sigma,
        mesh,
        &disc.rule,
    )?;
    let r2 = residual2_mode(&sol.eta, tau, &problem.nu, mesh, &disc.rule)?;
    let exact = exact_modes
        .map(|u| exact_error_mode(&sol.eta, &u[k], mesh, &disc.rule))
        .transpose()?;
    let majorant_semi = majorant_seminorm_mode(k, r1, r2, constants);
    let eff_index = exact
        .filter(|e| e.seminorm() > 0.0)
        .map(|e| majorant_semi / e.seminorm());
    let eta_l2 = integrate_elementwise(mesh, &disc.rule, |t, b, _| {
        let (c, s) = (
            p1_value(mesh, &sol.eta.c, t, b),
            p1_value(mesh, &sol.eta.s, t, b),
        );
        c * c + s * s
    })
    .sqrt();
    Ok(ModeOutcome {
        report: ModeReport {
            k,
            r1,
            r2,
            majorant_semi,
            majorant_norm: majorant_norm_mode(k, r1, r2, constants),
            exact,
            eff_index,
            iterations: sol.iterations,
            solve_seconds: sol.seconds,
        },
        eta_l2,
    })
}

/// Full estimate on the uniform mesh with `n` cells per side.
pub fn solve_level(problem: &ProblemSpec, n: usize, opts: &SolveOptions) -> Result<MajorantReport> {
    let disc = discretize(problem, n, opts)?;
    let big_n = problem.truncation;
    let period = problem.period();
    let constants = ConstantsBundle::new(
        (problem.sigma.lower(), problem.sigma.upper()),
        (problem.nu.lower(), problem.nu.upper()),
        problem.omega,
        big_n,
        friedrichs_unit_square(),
    )?;
    let exact_modes = problem
        .exact
        .as_ref()
        .map(|u| u.modes(problem.omega, big_n, opts.fourier.samples))
        .transpose()?;
    let run = |k: usize| estimate_mode(problem, &disc, &constants, exact_modes.as_deref(), k, opts);
    let outcomes: Vec<ModeOutcome> = if disc.dofs.num_dofs() < opts.parallel_dof_limit {
        (0..=big_n)
            .into_par_iter()
            .map(run)
            .collect::<Result<_>>()?
    } else {
        (0..=big_n).map(run).collect::<Result<_>>()?
    };

    let e_n = problem
        .source
        .remainder_en(big_n, problem.omega, opts.fourier.samples)?;
    let r1: Vec<f64> = outcomes.iter().map(|o| o.report.r1).collect();
    let r2: Vec<f64> = outcomes.iter().map(|o| o.report.r2).collect();
    let (g1, g2) = global_residuals(&r1, &r2, e_n, period);
    let majorant_semi = majorant_global(&r1, &r2, e_n, period, &constants, ErrorMeasure::Seminorm);
    let majorant_norm = majorant_global(&r1, &r2, e_n, period, &constants, ErrorMeasure::Norm);

    let (exact_semi, exact_norm) = match &problem.exact {
        Some(u) => {
            let tail = u.tail(big_n, problem.omega, &opts.fourier)?;
            let errors: Vec<_> = outcomes
                .iter()
                .map(|o| o.report.exact.unwrap_or_default())
                .collect();
            let (s, n) = global_error(&errors, &tail, period, problem.omega);
            (Some(s), Some(n))
        }
        None => (None, None),
    };
    let eta_l2: Vec<f64> = outcomes.iter().map(|o| o.eta_l2).collect();
    let global = GlobalReport {
        r1: g1,
        r2: g2,
        e_n,
        majorant_semi,
        majorant_norm,
        exact_semi,
        exact_norm,
        eff_index: exact_semi.filter(|&e| e > 0.0).map(|e| majorant_semi / e),
        eta_half_seminorm: half_seminorm(&eta_l2, period, problem.omega),
    };
    Ok(MajorantReport {
        problem: problem.name.clone(),
        level: n,
        dofs: disc.dofs.num_dofs(),
        omega: problem.omega,
        period,
        constants,
        modes: outcomes.into_iter().map(|o| o.report).collect(),
        global,
    })
}

/// `solve_level` for each level in order.
pub fn solve_levels(
    problem: &ProblemSpec,
    levels: &[usize],
    opts: &SolveOptions,
) -> Result<Vec<MajorantReport>> {
    levels
        .iter()
        .map(|&n| solve_level(problem, n, opts))
        .collect()
}

pub fn run_example1(levels: &[usize], opts: &SolveOptions) -> Result<Vec<MajorantReport>> {
    solve_levels(&ProblemSpec::example1(), levels, opts)
}

pub fn run_example2(levels: &[usize], opts: &SolveOptions) -> Result<Vec<MajorantReport>> {
    solve_levels(&ProblemSpec::example2(), levels, opts)
}

pub fn run(config: &RunConfig) -> Result<Vec<MajorantReport>> {
    config.validate()?;
    solve_levels(&config.problem, &config.levels, &config.options)
}
