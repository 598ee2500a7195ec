//! `norm-equivalence`: Besov norms computed with two generators that have
//! distinct ramps agree up to a bounded factor across the `(s, p, q, γ)`
//! sweep and the bank.

use std::f64::consts::PI;

use tracelab_core::lp::{build_generator, build_lp_system, LpGenerator, ProfileParams};
use tracelab_core::norms::{besov_block_norms, besov_from_blocks};

use super::common::{full, num};
use super::par_cases;
use crate::bank::generate_bank;
use crate::config::{tolerances, BankConfig, GridConfig, QValue, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check};

/// Profile of the second generator: a much steeper ramp on a narrower
/// transition band than the standard one.
pub const ALTERNATE_PROFILE: ProfileParams<f64> = ProfileParams { sharpness: 4.0, plateau: 1.1, cutoff: 1.4 };

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "norm-equivalence".into(),
        grid: GridConfig::new(vec![4096], 16.0 * PI, 8),
        aux_grid: None,
        sweep: Sweep {
            p: vec![2.0, 3.0],
            q: vec![QValue::Finite(1.0), QValue::Finite(2.0), QValue::INF],
            s: vec![-0.5, 0.0, 0.5, 1.0, 2.0],
            gamma: vec![-0.5, 0.5, 1.5, 2.5],
            ..Sweep::default()
        },
        bank: BankConfig { size: 50, seed: 102 },
        tolerances: tolerances(&[("ratio_lo", 0.2), ("ratio_hi", 5.0)]),
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let grid = cfg.grid.build()?;
    let sys_a = build_lp_system(LpGenerator::standard(), cfg.grid.n_blocks, &grid)?;
    let sys_b = build_lp_system(build_generator(ALTERNATE_PROFILE)?, cfg.grid.n_blocks, &grid)?;
    let check = Check::Within { lo: cfg.tol("ratio_lo")?, hi: cfg.tol("ratio_hi")? };
    let bank = generate_bank(&cfg.bank, &cfg.grid)?;
    let mut jobs = Vec::new();
    for (i, f) in bank.iter().enumerate() {
        for &p in &cfg.sweep.p {
            for &g in &cfg.sweep.gamma {
                jobs.push((i, f, p, g));
            }
        }
    }
    Ok(par_cases(&jobs, |&(i, f, p, gamma)| {
        let base = format!("f{i:03}/p{}/g{}", num(p), num(gamma));
        let blocks = (|| -> Result<_> {
            let w = full(gamma)?;
            Ok((besov_block_norms(f, p, &w, &sys_a)?, besov_block_norms(f, p, &w, &sys_b)?))
        })();
        let mut out = Vec::new();
        for &s in &cfg.sweep.s {
            for &q in &cfg.sweep.q {
                let id = format!("{base}/s{}/q{}", num(s), q.label());
                let prm = params![("member", i), ("p", p), ("gamma", gamma), ("s", s), ("q", q.label())];
                out.push(match &blocks {
                    Ok((a, b)) => {
                        let ratio = besov_from_blocks(a, s, q.exponent()) / besov_from_blocks(b, s, q.exponent());
                        CaseRecord::measured(id, "generator-ratio", prm, ratio, check)
                    }
                    Err(e) => CaseRecord::rejected(id, "generator-ratio", prm, e.to_string(), check),
                });
            }
        }
        out
    }))
}
