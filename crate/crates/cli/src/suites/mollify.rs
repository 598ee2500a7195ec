//! `mollify`: the rate of boundary-preserving mollification.
//!
//! For `f` with `∂^m f(0) = 0` and `∂^{m+1} f(0) ≠ 0`, the defect of the
//! steepness-`n` cutoff behaves like
//! `‖f − g_n‖_{W^{k,p}(ℝ₊, w_γ)} ~ n^{k−m−1−(γ+1)/p}`: it vanishes as
//! `n → ∞` exactly when `k < m + 1 + (γ+1)/p`, which is the density range
//! of functions vanishing near the boundary. The suite fits the log-log
//! slope over `n = 2³, …, 2⁶`.

use std::f64::consts::PI;

use tracelab_core::trace_ext::mollify_defect_norm;

use super::common::{loglog_slope, num};
use super::par_cases;
use crate::bank::{MemberKind, Packet, Profile};
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::{CliError, Result};
use crate::params;
use crate::report::{CaseRecord, Check};

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "mollify".into(),
        grid: GridConfig::new(vec![512], 16.0 * PI, 4),
        aux_grid: None,
        sweep: Sweep {
            orders: vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
            pairs: vec![(2.0, 0.5), (3.0, 1.5), (2.0, -0.5)],
            levels: vec![3, 4, 5, 6],
            ..Sweep::default()
        },
        bank: BankConfig { size: 0, seed: 0 },
        tolerances: tolerances(&[("slope_tolerance", 0.15)]),
    }
}

/// A localized function with `∂^m f(0) = 0` and `∂^{m+1} f(0) ≠ 0`: an odd
/// `sin(ax)·e^{−x²/2σ²}` for even `m`, an even `cos(ax)·e^{−x²/2σ²}` for
/// odd `m`.
pub fn vanishing_profile(m: usize) -> Profile {
    let (a, sigma) = (0.75, 2.0);
    let packet = |freq: f64, amp: (f64, f64)| Packet { center: vec![0.0], width: vec![sigma], freq: vec![freq], amp };
    let packets = if m % 2 == 0 {
        // sin(ax) = (e^{iax} − e^{−iax})/2i.
        vec![packet(a, (0.0, -0.5)), packet(-a, (0.0, 0.5))]
    } else {
        vec![packet(a, (0.5, 0.0)), packet(-a, (0.5, 0.0))]
    };
    let label = if m % 2 == 0 { "odd" } else { "even" };
    Profile { label: label.into(), kind: MemberKind::ModulatedBump, packets }
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let grid = cfg.grid.build()?;
    let tol = cfg.tol("slope_tolerance")?;
    let mut jobs = Vec::new();
    for &(m, k) in &cfg.sweep.orders {
        for &(p, gamma) in &cfg.sweep.pairs {
            jobs.push((m, k, p, gamma));
        }
    }
    Ok(par_cases(&jobs, |&(m, k, p, gamma)| {
        let expected = k as f64 - m as f64 - 1.0 - (gamma + 1.0) / p;
        let check = Check::Within { lo: expected - tol, hi: expected + tol };
        let base = format!("m{m}/k{k}/p{}/g{}", num(p), num(gamma));
        let prm = || params![("m", m), ("k", k), ("p", p), ("gamma", gamma), ("expected_slope", expected)];
        let prof = vanishing_profile(m);
        let defects = (|| -> Result<Vec<(f64, f64)>> {
            if !prof.fits(&grid, cfg.grid.n_blocks) {
                return Err(CliError::Infeasible("the mollification profile does not fit the grid".into()));
            }
            let f = prof.sample(&grid);
            cfg.sweep
                .levels
                .iter()
                .map(|&e| {
                    let n = 2f64.powi(e as i32);
                    Ok((n, mollify_defect_norm(&f, m, n, k, p, gamma)?))
                })
                .collect()
        })();
        let defects = match defects {
            Ok(d) => d,
            Err(e) => return vec![CaseRecord::rejected(format!("rate/{base}"), "rate", prm(), e.to_string(), check)],
        };
        let (ns, vs): (Vec<f64>, Vec<f64>) = defects.iter().copied().unzip();
        let mut out = vec![CaseRecord::measured(format!("rate/{base}"), "rate", prm(), loglog_slope(&ns, &vs), check)];
        for (n, v) in defects {
            let mut pr = prm();
            pr.insert("n".into(), n.into());
            out.push(CaseRecord::measured(format!("defect/{base}/n{}", num(n)), "defect", pr, v, Check::Info));
        }
        out
    }))
}
