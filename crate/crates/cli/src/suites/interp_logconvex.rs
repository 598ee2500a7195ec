//! `interp-logconvex`: the multiplicative inequality implied by complex
//! interpolation of weighted Sobolev spaces on the half-line,
//! `‖u‖_{W^{ℓ,p}(w_γ)} ≤ C ‖u‖_{L^p(w_γ)}^{1−θ} ‖u‖_{W^{k,p}(w_γ)}^{θ}` with
//! `θ = ℓ/k`, for every power weight (including `γ ≥ p − 1`).
//!
//! The ratio is evaluated over the bank and over each member's dilates
//! `u(2^e ·)`, `e ∈ −3..=3`, and translates concentrated at distance `2^{−j}`
//! from the boundary; a single bank-wide constant must bound all of them.
//! Variants that do not fit the grid, or carry no mass on the half-line, are
//! listed as skipped.

use std::f64::consts::PI;

use tracelab_core::norms::{lp_norm, sobolev_parts};

use super::common::{full, half, num};
use super::par_cases;
use crate::bank::{bank_profiles, Profile};
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check};

pub fn default_config() -> SuiteConfig {
    let mut pairs = Vec::new();
    for p in [2.0, 3.0] {
        for g in [0.5, 2.5, 4.5] {
            pairs.push((p, g));
        }
    }
    SuiteConfig {
        suite: "interp-logconvex".into(),
        grid: GridConfig::new(vec![16384], 16.0 * PI, 10),
        aux_grid: None,
        sweep: Sweep {
            orders: vec![(2, 1), (4, 2), (3, 1)],
            pairs,
            dilations: (-3..=3).collect(),
            // Boundary distances 2^{−j} of the translates.
            levels: vec![0, 2, 4, 6],
            ..Sweep::default()
        },
        bank: BankConfig { size: 20, seed: 112 },
        tolerances: tolerances(&[("constant_cap", 20.0), ("half_line_mass_min", 1e-6)]),
    }
}

/// The member itself, its dilates and its boundary-approaching translates.
pub fn variants(prof: &Profile, dilations: &[i32], distances: &[u32]) -> Vec<(String, Profile)> {
    let mut out = Vec::new();
    for &e in dilations {
        out.push((format!("dilate{e:+}"), prof.dilate(2f64.powi(e))));
    }
    for &j in distances {
        out.push((format!("near{j}"), prof.recenter_normal(2f64.powi(-(j as i32)))));
    }
    out
}

/// `Σ_{|α|≤k} ‖∂^α u‖` from the parts up to the top order.
fn sobolev_from_parts(parts: &[(Vec<usize>, f64)], k: usize) -> f64 {
    parts.iter().filter(|(a, _)| a.iter().sum::<usize>() <= k).map(|(_, v)| v).sum()
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let grid = cfg.grid.build()?;
    let profiles = bank_profiles(&cfg.bank, &cfg.grid)?;
    let cap = Check::AtMost { bound: cfg.tol("constant_cap")? };
    let min_mass = cfg.tol("half_line_mass_min")?;
    let top = cfg.sweep.orders.iter().map(|&(k, l)| k.max(l)).max().unwrap_or(0);
    let mut jobs = Vec::new();
    for (i, prof) in profiles.iter().enumerate() {
        for (tag, v) in variants(prof, &cfg.sweep.dilations, &cfg.sweep.levels) {
            jobs.push((i, tag, v));
        }
    }
    Ok(par_cases(&jobs, |(i, tag, v)| {
        let i = *i;
        let base = format!("f{i:03}/{tag}");
        if !v.fits(&grid, cfg.grid.n_blocks) {
            return vec![CaseRecord::measured(
                format!("skipped/{base}"),
                "skipped",
                params![("member", i), ("variant", tag.as_str()), ("reason", "does not fit the grid")],
                0.0,
                Check::Info,
            )];
        }
        let u = v.sample(&grid);
        let mut out = Vec::new();
        for &(p, gamma) in &cfg.sweep.pairs {
            let pbase = format!("{base}/p{}/g{}", num(p), num(gamma));
            let prm = || params![("member", i), ("variant", tag.as_str()), ("p", p), ("gamma", gamma)];
            let parts = (|| -> Result<_> {
                let w = half(gamma)?;
                let full_mass = lp_norm(&u, p, &full(gamma)?)?.value;
                Ok((sobolev_parts(&u, top, p, &w)?, full_mass))
            })();
            let (parts, full_mass) = match parts {
                Ok(x) => x,
                Err(e) => {
                    out.push(CaseRecord::rejected(format!("error/{pbase}"), "evaluation", prm(), e.to_string(), cap));
                    continue;
                }
            };
            let lp = parts[0].1;
            if lp <= min_mass * full_mass {
                let mut pr = prm();
                pr.insert("reason".into(), "no mass on the half-line".into());
                out.push(CaseRecord::measured(format!("skipped/{pbase}"), "skipped", pr, lp / full_mass, Check::Info));
                continue;
            }
            for &(k, l) in &cfg.sweep.orders {
                let theta = l as f64 / k as f64;
                let ratio = sobolev_from_parts(&parts, l) / (lp.powf(1.0 - theta) * sobolev_from_parts(&parts, k).powf(theta));
                let mut pr = prm();
                pr.insert("k".into(), k.into());
                pr.insert("l".into(), l.into());
                pr.insert("theta".into(), theta.into());
                out.push(CaseRecord::measured(format!("log-convexity/{pbase}/k{k}l{l}"), "log-convexity", pr, ratio, cap));
            }
        }
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts_are_summed_by_order() {
        let parts = vec![(vec![0], 1.0), (vec![1], 2.0), (vec![2], 4.0)];
        assert_eq!(sobolev_from_parts(&parts, 0), 1.0);
        assert_eq!(sobolev_from_parts(&parts, 1), 3.0);
        assert_eq!(sobolev_from_parts(&parts, 2), 7.0);
    }
}
