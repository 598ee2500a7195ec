//! `kernel-C`: the extended system `C = (C⁰, …, C^a)` of a normal boundary
//! system has the same kernel as the full trace vector `(Tr₀, …, Tr_a)`.
//!
//! Each witness `v` is classified twice — "all `C^j v` small" and "all
//! `Tr_j v` small", both relative to `‖v‖_∞` — and the two predicates must
//! agree. Witnesses are constructed to land on both sides of the kernel:
//! functions with vanishing traces (an interior bump, and a smooth function
//! minus the vector extension of its own traces), extensions of a single
//! trace, extensions of data split by the system's projection, and
//! vanishing-trace functions perturbed by a small extension. A second arm
//! checks that each witness falls on its intended side.

use tracelab_core::boundary::{extended_system_c, kernel_equiv_check};
use tracelab_core::trace_ext::{ext0, ext_m, ext_vector, trace_m};
use tracelab_core::{Complex64, GridFunction64, NormalSystem64};

use super::boundary_sys::build_system;
use super::common::TraceSetup;
use super::par_cases;
use super::trace_ext::{boundary_grid, bulk_grid};
use crate::bank::{bank_profiles, sample_vector, MemberKind, Packet, Profile};
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check};

/// `(system, a)`: the systems whose extended system is tested, with the top
/// order `a` of `C`.
pub const SYSTEMS: &[(&str, usize)] = &[("projected", 2), ("mixed", 3)];

/// Witness constructions, cycled over the sample index.
pub const WITNESS_KINDS: &[&str] = &["vanishing", "interior", "single-trace", "projected-data", "perturbed"];

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "kernel-C".into(),
        grid: bulk_grid(),
        aux_grid: Some(boundary_grid()),
        // `levels` holds the number of witnesses per system.
        sweep: Sweep { levels: vec![50], ..Sweep::default() },
        bank: BankConfig { size: 40, seed: 111 },
        tolerances: tolerances(&[("kernel_tolerance", 1e-8), ("perturbation", 1e-3)]),
    }
}

/// Whether a witness kind is built to lie in the kernel.
fn expected_small(kind: &str) -> bool {
    matches!(kind, "vanishing" | "interior")
}

struct Witnesses<'a> {
    setup: &'a TraceSetup,
    boundary: Vec<Profile>,
    bulk: Vec<Profile>,
    perturbation: f64,
}

impl Witnesses<'_> {
    fn data(&self, r: usize, start: usize) -> GridFunction64 {
        let parts: Vec<Profile> = (0..r).map(|c| self.boundary[(start + c) % self.boundary.len()].clone()).collect();
        sample_vector(&parts, &self.setup.bgrid)
    }

    /// `w − ext(Tr₀ w, …, Tr_a w)` for a smooth band-limited `w`.
    fn vanishing(&self, r: usize, a: usize, start: usize) -> Result<GridFunction64> {
        let parts: Vec<Profile> = (0..r).map(|c| self.bulk[(start + c) % self.bulk.len()].clone()).collect();
        let w = sample_vector(&parts, &self.setup.grid);
        let traces = (0..=a).map(|j| Ok(trace_m(&w, j, &self.setup.sys)?)).collect::<Result<Vec<_>>>()?;
        Ok(w.sub(&ext_vector(&traces, &self.setup.eta, &self.setup.bsys, &self.setup.sys)?)?)
    }

    fn interior(&self, r: usize, i: usize) -> GridFunction64 {
        let y0 = -8.0 + 4.0 * (i % 5) as f64;
        let parts: Vec<Profile> = (0..r)
            .map(|c| Profile {
                label: "interior".into(),
                kind: MemberKind::ModulatedBump,
                packets: vec![Packet {
                    center: vec![20.0, y0],
                    width: vec![1.5, 2.0],
                    freq: vec![0.5 * c as f64, 1.0],
                    amp: (1.0, 0.5 * c as f64),
                }],
            })
            .collect();
        sample_vector(&parts, &self.setup.grid)
    }

    fn build(&self, kind: &str, system: &NormalSystem64, a: usize, i: usize) -> Result<GridFunction64> {
        let s = self.setup;
        let r = system.fiber();
        Ok(match kind {
            "vanishing" => self.vanishing(r, a, i)?,
            "interior" => self.interior(r, i),
            "single-trace" => ext_m(&self.data(r, i), (i / WITNESS_KINDS.len()) % (a + 1), &s.eta, &s.bsys)?,
            "projected-data" => {
                // Data at the orders of the system: π_i g or (1 − π_i) g. Where
                // π_i is the identity the complement vanishes and π_i g is used.
                let mut stack = vec![GridFunction64::zeros(&s.bgrid, r); a + 1];
                let complement = (i / WITNESS_KINDS.len()) % 2 == 1;
                for (k, op) in system.operators().iter().enumerate() {
                    let g = self.data(r, i + 3 * k);
                    let pg = system.projection(k).apply(&g)?;
                    let rest = g.sub(&pg)?;
                    let use_rest = complement && rest.max_abs() > 1e-12 * g.max_abs();
                    stack[op.order()] = if use_rest { rest } else { pg };
                }
                ext_vector(&stack, &s.eta, &s.bsys, &s.sys)?
            }
            "perturbed" => {
                let v = self.vanishing(r, a, i)?;
                let g = self.data(r, i);
                let bump = ext0(&g, &s.eta, &s.bsys)?;
                let scale = self.perturbation * v.max_abs().max(1.0) / bump.max_abs();
                v.add(&bump.scaled(Complex64::new(scale, 0.0)))?
            }
            other => unreachable!("unknown witness kind {other}"),
        })
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let aux = cfg.aux()?;
    let setup = TraceSetup::new(&cfg.grid, aux.n_blocks)?;
    let bulk_cfg = GridConfig { n_blocks: aux.n_blocks, ..cfg.grid.clone() };
    let wit = Witnesses {
        setup: &setup,
        boundary: bank_profiles(&cfg.bank, aux)?,
        bulk: bank_profiles(&cfg.bank, &bulk_cfg)?,
        perturbation: cfg.tol("perturbation")?,
    };
    let tol = cfg.tol("kernel_tolerance")?;
    let count = cfg.sweep.levels.first().copied().unwrap_or(50) as usize;
    let systems: Vec<(&str, usize, NormalSystem64)> =
        SYSTEMS.iter().map(|&(n, a)| Ok((n, a, build_system(n, &setup)?))).collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for (name, a, system) in &systems {
        for i in 0..count {
            jobs.push((*name, *a, system, i));
        }
    }
    let agree = Check::AtLeast { bound: 1.0 };
    Ok(par_cases(&jobs, |&(name, a, system, i)| {
        let kind = WITNESS_KINDS[i % WITNESS_KINDS.len()];
        let base = format!("{name}/w{i:02}");
        let prm = || params![("system", name), ("a", a), ("witness", i), ("kind", kind)];
        let report = (|| -> Result<_> {
            let c = extended_system_c(system, a)?;
            let v = wit.build(kind, system, a, i)?;
            Ok(kernel_equiv_check(&c, &v, &setup.sys, tol)?)
        })();
        let report = match report {
            Ok(r) => r,
            Err(e) => return vec![CaseRecord::rejected(format!("agreement/{base}"), "agreement", prm(), e.to_string(), agree)],
        };
        let mut pr = prm();
        pr.insert("c_small".into(), report.c_small.to_string().into());
        pr.insert("traces_small".into(), report.traces_small.to_string().into());
        let c_max = report.c_residuals.iter().copied().fold(0.0, f64::max) / report.scale;
        let t_max = report.trace_residuals.iter().copied().fold(0.0, f64::max) / report.scale;
        vec![
            CaseRecord::measured(format!("agreement/{base}"), "agreement", pr.clone(), f64::from(u8::from(report.agrees())), agree),
            CaseRecord::measured(
                format!("intended-side/{base}"),
                "intended-side",
                pr.clone(),
                f64::from(u8::from(report.traces_small == expected_small(kind))),
                agree,
            ),
            CaseRecord::measured(format!("c-residual/{base}"), "c-residual", pr.clone(), c_max, Check::Info),
            CaseRecord::measured(format!("trace-residual/{base}"), "trace-residual", pr.clone(), t_max, Check::Info),
            CaseRecord::measured(format!("ratio/{base}"), "ratio", pr, report.ratio(), Check::Info),
        ]
    }))
}
