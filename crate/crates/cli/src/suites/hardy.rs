//! `hardy`: the weighted Hardy inequality on the half-line,
//! `‖u‖_{L^p(w_{γ−p})} ≤ C ‖u'‖_{L^p(w_γ)}`.
//!
//! Arms: `γ > p − 1` against the sharp constant `p/(γ−p+1)` (with a 5 %
//! quadrature allowance), `γ < p − 1` for functions vanishing at the origin
//! (bounded ratio), the excluded exponent `γ = p − 1` and nonzero boundary
//! values below the critical exponent (both must be rejected). An
//! informational arm compares the multiplier `M^κ u = |x₁|^κ u` with the
//! corresponding weight shift.

use std::f64::consts::PI;

use tracelab_core::norms::{hardy_ratio, lp_norm, weight_multiply};
use tracelab_core::GridFunction64;

use super::common::{half, num};
use super::par_cases;
use crate::bank::{bank_profiles, MemberKind, Packet, Profile};
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::{CliError, Result};
use crate::params;
use crate::report::{CaseRecord, Check};

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "hardy".into(),
        grid: GridConfig::new(vec![4096], 16.0 * PI, 8),
        aux_grid: None,
        sweep: Sweep {
            pairs: vec![
                (2.0, 1.5),
                (2.0, 2.5),
                (2.0, 4.0),
                (3.0, 2.5),
                (3.0, 3.5),
                (3.0, 5.0),
                (2.0, -0.5),
                (2.0, 0.0),
                (2.0, 0.5),
                (3.0, 0.5),
                (3.0, 1.0),
                (3.0, 1.5),
                (2.0, 1.0),
                (3.0, 2.0),
            ],
            ..Sweep::default()
        },
        bank: BankConfig { size: 50, seed: 105 },
        tolerances: tolerances(&[("sharp_factor", 1.05), ("subcritical_cap", 100.0), ("nonzero_trace", 1e-6)]),
    }
}

/// A unit Gaussian at the origin, used to remove boundary values.
fn origin_gaussian() -> Profile {
    Profile {
        label: "origin".into(),
        kind: MemberKind::ModulatedBump,
        packets: vec![Packet { center: vec![0.0], width: vec![1.0], freq: vec![0.0], amp: (1.0, 0.0) }],
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let grid = cfg.grid.build()?;
    let profiles = bank_profiles(&cfg.bank, &cfg.grid)?;
    let sharp_factor = cfg.tol("sharp_factor")?;
    let sub_cap = Check::AtMost { bound: cfg.tol("subcritical_cap")? };
    let nonzero = cfg.tol("nonzero_trace")?;
    let g0 = origin_gaussian().sample(&grid);
    let mut jobs = Vec::new();
    for (i, prof) in profiles.iter().enumerate() {
        for &(p, gamma) in &cfg.sweep.pairs {
            jobs.push((i, prof, p, gamma));
        }
    }
    Ok(par_cases(&jobs, |&(i, prof, p, gamma)| {
        let f = prof.sample(&grid);
        let at0 = prof.eval(&[0.0]);
        let base = format!("f{i:03}/p{}/g{}", num(p), num(gamma));
        let prm = || params![("member", i), ("p", p), ("gamma", gamma)];
        let crit = p - 1.0;
        let mut out = Vec::new();
        if gamma == crit {
            out.push(CaseRecord::from_result(
                format!("critical/{base}"),
                "critical",
                prm(),
                hardy_ratio(&f, p, gamma).map(|r| r.ratio),
                Check::ExpectRejection,
            ));
        } else if gamma > crit {
            let sharp = p / (gamma - crit);
            let mut pr = prm();
            pr.insert("sharp_constant".into(), sharp.into());
            out.push(CaseRecord::from_result(
                format!("supercritical/{base}"),
                "supercritical",
                pr,
                hardy_ratio(&f, p, gamma).map(|r| r.ratio),
                Check::AtMost { bound: sharp_factor * sharp },
            ));
        } else {
            let u: GridFunction64 = f.sub(&g0.scaled(at0)).expect("same grid");
            let mut pr = prm();
            pr.insert("sharp_constant".into(), (p / (crit - gamma)).into());
            out.push(CaseRecord::from_result(
                format!("subcritical/{base}"),
                "subcritical",
                pr,
                hardy_ratio(&u, p, gamma).map(|r| r.ratio),
                sub_cap,
            ));
            if at0.norm() > nonzero * f.max_abs() {
                out.push(CaseRecord::from_result(
                    format!("nonzero-trace/{base}"),
                    "nonzero-trace",
                    prm(),
                    hardy_ratio(&f, p, gamma).map(|r| r.ratio),
                    Check::ExpectRejection,
                ));
            }
        }
        // M^κ with κ = 1: ‖M u‖_{L^p(w_γ)} against ‖u‖_{L^p(w_{γ+p})}.
        let mk = (|| -> Result<f64> {
            let lhs = lp_norm(&weight_multiply(&f, 1.0)?, p, &half(gamma)?)?.value;
            let rhs = lp_norm(&f, p, &half(gamma + p)?)?.value;
            if rhs == 0.0 {
                return Err(CliError::Infeasible("no mass on the half-line".into()));
            }
            Ok(lhs / rhs)
        })();
        out.push(CaseRecord::from_result(format!("m-kappa/{base}"), "m-kappa", prm(), mk, Check::Info));
        out
    }))
}
