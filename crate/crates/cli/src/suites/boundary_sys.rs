//! `boundary-sys`: the right inverse `ext_B` of a normal boundary system.
//!
//! For each system and each boundary data set `g = (g₁, …, g_n)`:
//! `B^{m_i}(ext_B g) = g_i` for every operator (relative sup residual) and
//! `Tr_j ext_B g = 0` for every order `j ≤ m_n` that the system skips
//! (relative to `max_i ‖g_i‖_∞`). Three systems are exercised: Dirichlet,
//! the pair `(Tr₀, Tr₁)`, and a mixed second-order system on `ℂ²` with
//! variable matrix coefficients.

use tracelab_core::boundary::{ext_boundary, BoundaryOperator, MatrixField, NormalSystem};
use tracelab_core::linalg::CMatrix;
use tracelab_core::trace_ext::trace_m;
use tracelab_core::{Grid64, GridFunction64, NormalSystem64};

use super::common::{sup_diff, TraceSetup};
use super::par_cases;
use super::trace_ext::{boundary_grid, bulk_grid};
use crate::bank::{bank_profiles, sample_vector, Profile};
use crate::config::{tolerances, BankConfig, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check};

/// Names of the exercised systems.
pub const SYSTEMS: &[&str] = &["dirichlet", "trace01", "mixed"];

/// `Tr₀` on scalar functions.
pub fn dirichlet(grid: &Grid64) -> Result<NormalSystem64> {
    Ok(NormalSystem::new(vec![BoundaryOperator::trace(grid, 0, 1)?], None)?)
}

/// `(Tr₀, Tr₁)` on scalar functions.
pub fn trace01(grid: &Grid64) -> Result<NormalSystem64> {
    Ok(NormalSystem::new(vec![BoundaryOperator::trace(grid, 0, 1)?, BoundaryOperator::trace(grid, 1, 1)?], None)?)
}

/// `(Tr₀, b₂(x̃)Tr₂ + b₀(x̃)Tr₀)` on `ℂ²`-valued functions (order 1 skipped).
pub fn mixed(grid: &Grid64, bgrid: &Grid64) -> Result<NormalSystem64> {
    let b2 = MatrixField::from_fn(bgrid, 2, 2, |y| {
        let t = y[0] / 16.0;
        CMatrix::from_real(2, 2, &[2.0 + 0.2 * t.cos(), 0.1, 0.15 * t.sin(), 1.5])
    })?;
    let b0 = MatrixField::from_fn(bgrid, 2, 2, |y| {
        let t = y[0] / 16.0;
        CMatrix::from_real(2, 2, &[0.5, 0.2 * t.sin(), 0.0, 1.0 + 0.1 * t.cos()])
    })?;
    let ops = vec![BoundaryOperator::trace(grid, 0, 2)?, BoundaryOperator::normal(grid, vec![(2, b2), (0, b0)])?];
    Ok(NormalSystem::new(ops, None)?)
}

/// `(Tr₀, [1, ½]·Tr₁)` on `ℂ²`: a rank-one first-order condition, so the
/// projection onto the range of the coretraction is nontrivial.
pub fn projected(grid: &Grid64, bgrid: &Grid64) -> Result<NormalSystem64> {
    let row = MatrixField::constant(bgrid, &CMatrix::from_real(1, 2, &[1.0, 0.5]));
    let ops = vec![BoundaryOperator::trace(grid, 0, 2)?, BoundaryOperator::normal(grid, vec![(1, row)])?];
    Ok(NormalSystem::new(ops, None)?)
}

/// Builds a named system on the setup's grids.
pub fn build_system(name: &str, s: &TraceSetup) -> Result<NormalSystem64> {
    match name {
        "dirichlet" => dirichlet(&s.grid),
        "trace01" => trace01(&s.grid),
        "mixed" => mixed(&s.grid, &s.bgrid),
        "projected" => projected(&s.grid, &s.bgrid),
        other => Err(crate::error::CliError::Config(format!("unknown boundary system `{other}`"))),
    }
}

/// Boundary data for every operator of `system`, drawn consecutively
/// (cyclically) from `profiles` starting at `start`.
pub fn system_data(system: &NormalSystem64, profiles: &[Profile], start: usize, bgrid: &Grid64) -> Vec<GridFunction64> {
    let mut next = start;
    system
        .operators()
        .iter()
        .map(|op| {
            let parts: Vec<Profile> = (0..op.fiber_out())
                .map(|_| {
                    let p = profiles[next % profiles.len()].clone();
                    next += 1;
                    p
                })
                .collect();
            sample_vector(&parts, bgrid)
        })
        .collect()
}

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "boundary-sys".into(),
        grid: bulk_grid(),
        aux_grid: Some(boundary_grid()),
        // `levels` holds the number of data sets per system.
        sweep: Sweep { levels: vec![20], ..Sweep::default() },
        bank: BankConfig { size: 40, seed: 110 },
        tolerances: tolerances(&[("operator_residual", 1e-6), ("skipped_trace", 1e-6)]),
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let aux = cfg.aux()?;
    let setup = TraceSetup::new(&cfg.grid, aux.n_blocks)?;
    let profiles = bank_profiles(&cfg.bank, aux)?;
    let sets = cfg.sweep.levels.first().copied().unwrap_or(20) as usize;
    let op_check = Check::AtMost { bound: cfg.tol("operator_residual")? };
    let skip_check = Check::AtMost { bound: cfg.tol("skipped_trace")? };
    let systems: Vec<(&str, NormalSystem64)> =
        SYSTEMS.iter().map(|&n| Ok((n, build_system(n, &setup)?))).collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for (name, system) in &systems {
        for set in 0..sets {
            jobs.push((*name, system, set));
        }
    }
    Ok(par_cases(&jobs, |&(name, system, set)| {
        let start = set * system.operators().iter().map(|op| op.fiber_out()).sum::<usize>();
        let gs = system_data(system, &profiles, start, &setup.bgrid);
        let base = format!("{name}/set{set:02}");
        let ext = ext_boundary(system, &gs, &setup.eta, &setup.bsys, &setup.sys);
        let f = match ext {
            Ok(f) => f,
            Err(e) => {
                return vec![CaseRecord::rejected(
                    format!("error/{base}"),
                    "evaluation",
                    params![("system", name), ("set", set)],
                    e.to_string(),
                    op_check,
                )]
            }
        };
        let gmax = gs.iter().map(|g| g.max_abs()).fold(0.0, f64::max);
        let mut out = Vec::new();
        for (i, (op, g)) in system.operators().iter().zip(&gs).enumerate() {
            let res = op.apply(&f, &setup.sys).map(|b| sup_diff(&b, g) / g.max_abs());
            out.push(CaseRecord::from_result(
                format!("operator-residual/{base}/op{i}"),
                "operator-residual",
                params![("system", name), ("set", set), ("operator", i), ("order", op.order())],
                res,
                op_check,
            ));
        }
        let orders = system.orders();
        for j in (0..=system.top_order()).filter(|j| !orders.contains(j)) {
            let res = trace_m(&f, j, &setup.sys).map(|t| t.max_abs() / gmax);
            out.push(CaseRecord::from_result(
                format!("skipped-trace/{base}/j{j}"),
                "skipped-trace",
                params![("system", name), ("set", set), ("order", j)],
                res,
                skip_check,
            ));
        }
        out
    }))
}
