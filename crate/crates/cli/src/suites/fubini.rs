//! `fubini`: the mixed-derivative (Fubini) property of weighted Sobolev
//! spaces on the half-space,
//! `W^{k,p}(ℝ^d₊, w_γ) = W^{k,p}(ℝ₊, w_γ; L^p(ℝ^{d−1})) ∩ L^p(ℝ₊, w_γ; W^{k,p}(ℝ^{d−1}))`.
//!
//! The mixed norm `Σ_{j≤k} ‖∂₁^j u‖ + Σ_{j≤k} ‖∂_{x̃}^j u‖` (pure normal and
//! pure tangential derivatives) is compared with the full norm
//! `Σ_{|α|≤k} ‖∂^α u‖`; their ratio must stay in a uniform bracket over the
//! 2-D bank.

use std::f64::consts::PI;

use tracelab_core::norms::sobolev_parts;

use super::common::{half, num};
use super::par_cases;
use crate::bank::generate_bank;
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check};

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "fubini".into(),
        grid: GridConfig::new(vec![256, 256], 16.0 * PI, 4),
        aux_grid: None,
        sweep: Sweep { k: vec![1, 2], pairs: vec![(2.0, 2.5)], ..Sweep::default() },
        bank: BankConfig { size: 30, seed: 113 },
        tolerances: tolerances(&[("ratio_lo", 0.1), ("ratio_hi", 10.0)]),
    }
}

/// `(mixed, full)` norms of order `k` from the parts `(α, ‖∂^α u‖)`.
pub fn mixed_and_full(parts: &[(Vec<usize>, f64)], k: usize) -> (f64, f64) {
    let order = |a: &[usize]| a.iter().sum::<usize>();
    let full = parts.iter().filter(|(a, _)| order(a) <= k).map(|(_, v)| v).sum();
    // Pure normal derivatives ∂₁^j and pure tangential ones (α₁ = 0); the
    // zeroth term belongs to both factors.
    let normal: f64 = parts.iter().filter(|(a, _)| order(a) <= k && order(a) == a[0]).map(|(_, v)| v).sum();
    let tangential: f64 = parts
        .iter()
        .filter(|(a, _)| order(a) <= k && a[0] == 0)
        .map(|(_, v)| v)
        .sum();
    (normal + tangential, full)
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let bank = generate_bank(&cfg.bank, &cfg.grid)?;
    let check = Check::Within { lo: cfg.tol("ratio_lo")?, hi: cfg.tol("ratio_hi")? };
    let top = cfg.sweep.k.iter().copied().max().unwrap_or(0);
    let mut jobs = Vec::new();
    for (i, f) in bank.iter().enumerate() {
        for &(p, g) in &cfg.sweep.pairs {
            jobs.push((i, f, p, g));
        }
    }
    Ok(par_cases(&jobs, |&(i, f, p, gamma)| {
        let base = format!("f{i:03}/p{}/g{}", num(p), num(gamma));
        let parts = half(gamma).and_then(|w| Ok(sobolev_parts(f, top, p, &w)?));
        cfg.sweep
            .k
            .iter()
            .map(|&k| {
                let prm = params![("member", i), ("p", p), ("gamma", gamma), ("k", k)];
                let id = format!("mixed/{base}/k{k}");
                match &parts {
                    Ok(parts) => {
                        let (mixed, full) = mixed_and_full(parts, k);
                        CaseRecord::measured(id, "mixed", prm, mixed / full, check)
                    }
                    Err(e) => CaseRecord::rejected(id, "mixed", prm, e.to_string(), check),
                }
            })
            .collect()
    }))
}
