//! `trace-HW`: the slice scaling law behind the trace theorems.
//!
//! For `h` with spectrum in a ball of radius `~R`,
//! `sup_{x₁} ‖h(x₁,·)‖_{L^p(ℝ^{d−1})} ≲ R^{(γ+1)/p} ‖h‖_{L^p(w_γ)}`, and the
//! power is attained by dilates `h(R·)`. The suite measures the ratio on the
//! dilates `R = 2, …, 2⁶` of a few profiles and fits the log-log slope,
//! which must match `(γ+1)/p`. The tangential variables only contribute a
//! fixed factor for separable profiles, so the fit runs on the normal axis.

use std::f64::consts::PI;

use tracelab_core::trace_ext::slice_sup_ratio;

use super::common::{loglog_slope, num};
use super::par_cases;
use crate::bank::{MemberKind, Packet, Profile};
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::{CliError, Result};
use crate::params;
use crate::report::{CaseRecord, Check};

pub fn default_config() -> SuiteConfig {
    let mut pairs = Vec::new();
    for p in [2.0, 3.0] {
        for g in [-0.5, 0.5, 2.5] {
            pairs.push((p, g));
        }
    }
    SuiteConfig {
        suite: "trace-HW".into(),
        grid: GridConfig::new(vec![8192], 16.0 * PI, 8),
        aux_grid: None,
        sweep: Sweep { pairs, levels: (1..=6).collect(), ..Sweep::default() },
        bank: BankConfig { size: 3, seed: 0 },
        tolerances: tolerances(&[("slope_tolerance", 0.15)]),
    }
}

fn gaussian(center: f64, width: f64, freq: f64, amp: (f64, f64)) -> Packet {
    Packet { center: vec![center], width: vec![width], freq: vec![freq], amp }
}

/// Base profiles at unit scale: a broad Gaussian, a modulated Gaussian and a
/// two-scale superposition.
pub fn profiles() -> Vec<Profile> {
    let bump = MemberKind::ModulatedBump;
    vec![
        Profile { label: "gauss".into(), kind: bump, packets: vec![gaussian(0.0, 1.0 / 0.15, 0.0, (1.0, 0.0))] },
        Profile {
            label: "modulated".into(),
            kind: bump,
            packets: vec![
                gaussian(0.0, 1.0 / 0.12, 0.5, (0.5, 0.0)),
                gaussian(0.0, 1.0 / 0.12, -0.5, (0.5, 0.0)),
            ],
        },
        Profile {
            label: "two-scale".into(),
            kind: bump,
            packets: vec![
                gaussian(0.0, 1.0 / 0.2, 0.0, (1.0, 0.0)),
                gaussian(0.0, 1.0 / 0.1, 1.0, (0.25, 0.0)),
                gaussian(0.0, 1.0 / 0.1, -1.0, (0.25, 0.0)),
            ],
        },
    ]
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let grid = cfg.grid.build()?;
    let tol = cfg.tol("slope_tolerance")?;
    let mut jobs = Vec::new();
    for prof in profiles() {
        for &(p, gamma) in &cfg.sweep.pairs {
            jobs.push((prof.clone(), p, gamma));
        }
    }
    Ok(par_cases(&jobs, |(prof, p, gamma)| {
        let (p, gamma) = (*p, *gamma);
        let expected = (gamma + 1.0) / p;
        let check = Check::Within { lo: expected - tol, hi: expected + tol };
        let base = format!("{}/p{}/g{}", prof.label, num(p), num(gamma));
        let prm = || params![("profile", prof.label.as_str()), ("p", p), ("gamma", gamma), ("expected_slope", expected)];
        let ratios = (|| -> Result<Vec<(f64, f64)>> {
            cfg.sweep
                .levels
                .iter()
                .map(|&e| {
                    let r = 2f64.powi(e as i32);
                    let h = prof.dilate(r);
                    if !h.fits(&grid, cfg.grid.n_blocks) {
                        return Err(CliError::Infeasible(format!("dilate R = {r} of `{}` does not fit the grid", prof.label)));
                    }
                    Ok((r, slice_sup_ratio(&h.sample(&grid), p, gamma)?))
                })
                .collect()
        })();
        let ratios = match ratios {
            Ok(r) => r,
            Err(e) => return vec![CaseRecord::rejected(format!("slice-slope/{base}"), "slice-slope", prm(), e.to_string(), check)],
        };
        let (rs, vs): (Vec<f64>, Vec<f64>) = ratios.iter().copied().unzip();
        let mut out = vec![CaseRecord::measured(format!("slice-slope/{base}"), "slice-slope", prm(), loglog_slope(&rs, &vs), check)];
        for (r, v) in ratios {
            let mut pr = prm();
            pr.insert("R".into(), r.into());
            out.push(CaseRecord::measured(format!("slice-ratio/{base}/R{}", num(r)), "slice-ratio", pr, v, Check::Info));
        }
        out
    }))
}
