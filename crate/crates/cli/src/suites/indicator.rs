//! `indicator`: the half-space indicator as a multiplier on weighted Bessel
//! potential spaces.
//!
//! Bounded arm: inside the range `−1 + (γ+1)/p < s < (γ+1)/p` the ratio
//! `‖1₊f‖_{H^{s,p}(w_γ)}/‖f‖_{H^{s,p}(w_γ)}` stays bounded over the bank
//! (`s` is the midpoint of the range). Divergence arm: above the range, for
//! functions with a nonzero boundary value, the Bessel norm of `1₊f`
//! truncated to the blocks `n ≤ N` grows without bound in `N`; the growth
//! factor from the first to the last truncation level is recorded against
//! its gate. The jump contributes `~2^{N(s−(γ+1)/p)}` to the truncated norm,
//! so with an excess smoothness of `1/2` the growth over six levels
//! approaches `2³` from below.

use std::f64::consts::PI;

use tracelab_core::lp::{apply_multiplier, build_lp_system, LpGenerator, SpectralMultiplier};
use tracelab_core::norms::{bessel_norm, weighted_lp_of_values};
use tracelab_core::trace_ext::indicator_multiply;
use tracelab_core::{Complex64, Grid64, GridFunction64};

use super::common::{full, num};
use super::par_cases;
use crate::bank::{generate_bank, MemberKind, Packet, Profile};
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::{CliError, Result};
use crate::params;
use crate::report::{CaseRecord, Check};

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "indicator".into(),
        grid: GridConfig::new(vec![4096], 16.0 * PI, 8),
        aux_grid: Some(GridConfig::new(vec![65536], 2.0 * PI, 12)),
        sweep: Sweep {
            p: vec![2.0],
            gamma: vec![-0.5, 0.5],
            // Excess smoothness of the divergence arm above (γ+1)/p.
            s: vec![0.5],
            levels: vec![6, 7, 8, 9, 10, 11, 12],
            ..Sweep::default()
        },
        bank: BankConfig { size: 50, seed: 109 },
        tolerances: tolerances(&[("bounded_cap", 50.0), ("growth_min", 10.0)]),
    }
}

fn bump(center: f64, width: f64, freq: f64) -> Packet {
    Packet { center: vec![center], width: vec![width], freq: vec![freq], amp: (1.0, 0.0) }
}

/// Profiles with a nonzero value at the interface.
pub fn trace_profiles() -> Vec<Profile> {
    let kind = MemberKind::ModulatedBump;
    vec![
        Profile { label: "gauss".into(), kind, packets: vec![bump(0.0, 0.6, 0.0)] },
        Profile {
            label: "cos3".into(),
            kind,
            packets: vec![
                Packet { amp: (0.5, 0.0), ..bump(0.0, 0.5, 3.0) },
                Packet { amp: (0.5, 0.0), ..bump(0.0, 0.5, -3.0) },
            ],
        },
        Profile { label: "offset".into(), kind, packets: vec![bump(0.3, 0.5, 0.0)] },
    ]
}

/// `‖(Σ_{n≤N} φ̂_n)(1+|ξ|²)^{s/2} ĥ‖_{L^p(w_γ)}` for every level `N`.
fn truncated_norms(h: &GridFunction64, grid: &Grid64, s: f64, p: f64, gamma: f64, levels: &[u32]) -> Result<Vec<f64>> {
    let w = full(gamma)?;
    let bessel = SpectralMultiplier::bessel(grid, s);
    levels
        .iter()
        .map(|&n| {
            let sys = build_lp_system(LpGenerator::standard(), n as usize, grid)?;
            let cut: Vec<Complex64> = sys.synthesis_symbol().into_iter().map(|v| Complex64::new(v, 0.0)).collect();
            let m = bessel.compose(&SpectralMultiplier::from_scalar(grid, cut, format!("S_{n}"))?)?;
            let g = apply_multiplier(h, &m)?;
            Ok(weighted_lp_of_values(grid, &g.fiber_norms(), p, &w)?)
        })
        .collect()
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let mut out = bounded_arm(cfg)?;
    out.extend(divergence_arm(cfg)?);
    Ok(out)
}

fn bounded_arm(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let bank = generate_bank(&cfg.bank, &cfg.grid)?;
    let check = Check::AtMost { bound: cfg.tol("bounded_cap")? };
    let mut jobs = Vec::new();
    for (i, f) in bank.iter().enumerate() {
        for &p in &cfg.sweep.p {
            for &g in &cfg.sweep.gamma {
                jobs.push((i, f, p, g));
            }
        }
    }
    Ok(par_cases(&jobs, |&(i, f, p, gamma)| {
        let s = (gamma + 1.0) / p - 0.5;
        let ratio = (|| -> Result<f64> {
            let w = full(gamma)?;
            let cut = indicator_multiply(f)?;
            Ok(bessel_norm(&cut, s, p, &w)?.value / bessel_norm(f, s, p, &w)?.value)
        })();
        vec![CaseRecord::from_result(
            format!("bounded/f{i:03}/p{}/g{}", num(p), num(gamma)),
            "bounded",
            params![("member", i), ("p", p), ("gamma", gamma), ("s", s)],
            ratio,
            check,
        )]
    }))
}

fn divergence_arm(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let aux = cfg.aux()?;
    let grid = aux.build()?;
    let levels = &cfg.sweep.levels;
    if levels.len() < 2 || levels.iter().any(|&n| n as usize > aux.n_blocks) {
        return Err(CliError::Config(format!("divergence levels {levels:?} must be at least two and ≤ {}", aux.n_blocks)));
    }
    let check = Check::AtLeast { bound: cfg.tol("growth_min")? };
    let mut jobs = Vec::new();
    for prof in trace_profiles() {
        for &p in &cfg.sweep.p {
            for &g in &cfg.sweep.gamma {
                for &ds in &cfg.sweep.s {
                    jobs.push((prof.clone(), p, g, ds));
                }
            }
        }
    }
    Ok(par_cases(&jobs, |(prof, p, gamma, ds)| {
        let (p, gamma) = (*p, *gamma);
        let s = (gamma + 1.0) / p + ds;
        let base = format!("{}/p{}/g{}/s{}", prof.label, num(p), num(gamma), num(s));
        let prm = || {
            params![
                ("profile", prof.label.as_str()),
                ("p", p),
                ("gamma", gamma),
                ("s", s),
                ("boundary_value", prof.eval(&[0.0]).norm())
            ]
        };
        let norms = (|| -> Result<Vec<f64>> {
            if !prof.fits(&grid, aux.n_blocks) {
                return Err(CliError::Infeasible(format!("profile `{}` does not fit the grid", prof.label)));
            }
            let h = indicator_multiply(&prof.sample(&grid))?;
            truncated_norms(&h, &grid, s, p, gamma, levels)
        })();
        let norms = match norms {
            Ok(v) => v,
            Err(e) => return vec![CaseRecord::rejected(format!("divergence/{base}"), "divergence", prm(), e.to_string(), check)],
        };
        let mut pr = prm();
        pr.insert("level_lo".into(), (levels[0] as usize).into());
        pr.insert("level_hi".into(), (levels[levels.len() - 1] as usize).into());
        let growth = norms[norms.len() - 1] / norms[0];
        let mut out = vec![CaseRecord::measured(format!("divergence/{base}"), "divergence", pr, growth, check)];
        for (n, v) in levels.iter().zip(&norms) {
            let mut pn = prm();
            pn.insert("level".into(), (*n as usize).into());
            out.push(CaseRecord::measured(
                format!("truncated-norm/{base}/N{n:02}"),
                "truncated-norm",
                pn,
                *v,
                Check::Info,
            ));
        }
        out
    }))
}
