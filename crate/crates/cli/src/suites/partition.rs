//! `partition`: the Littlewood–Paley blocks sum to one up to `2^N`
//! (telescoping), non-neighbouring blocks are disjoint, and the bank is
//! reproduced by its blocks.

use std::f64::consts::PI;

use tracelab_core::lp::{build_generator, build_lp_system, lp_block, LpGenerator, ProfileParams};

use super::common::plain_lp;
use super::par_cases;
use crate::bank::generate_bank;
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check};

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "partition".into(),
        grid: GridConfig::new(vec![4096], 16.0 * PI, 8),
        aux_grid: Some(GridConfig::new(vec![256, 256], 16.0 * PI, 4)),
        sweep: Sweep::default(),
        bank: BankConfig { size: 50, seed: 101 },
        tolerances: tolerances(&[("telescoping", 1e-12), ("disjointness", 1e-12), ("synthesis", 1e-10)]),
    }
}

/// Generators exercised by the telescoping arm.
fn generators() -> Result<Vec<(&'static str, LpGenerator<f64>)>> {
    Ok(vec![
        ("standard", LpGenerator::standard()),
        ("sharp", build_generator(ProfileParams { sharpness: 4.0, plateau: 1.0, cutoff: 1.5 })?),
        ("narrow", build_generator(ProfileParams { sharpness: 0.5, plateau: 1.1, cutoff: 1.4 })?),
    ])
}

/// `max |Σ_{n≤N} φ̂_n(ξ) − 1|` over a dense sample of `0 ≤ ξ ≤ 2^N`.
fn dense_residual(gen: &LpGenerator<f64>, n_blocks: usize, samples: usize) -> f64 {
    let top = 2f64.powi(n_blocks as i32);
    (0..=samples)
        .map(|i| {
            let xi = top * i as f64 / samples as f64;
            let s: f64 = (0..=n_blocks as i64).map(|n| gen.block(n, xi)).sum();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let tel = Check::AtMost { bound: cfg.tol("telescoping")? };
    let mut cases = Vec::new();
    let grid = cfg.grid.build()?;
    let mut grids = vec![(cfg.grid.clone(), grid.clone())];
    if let Some(aux) = &cfg.aux_grid {
        grids.push((aux.clone(), aux.build()?));
    }
    for (name, gen) in generators()? {
        for (gc, g) in &grids {
            let sys = build_lp_system(gen, gc.n_blocks, g)?;
            let label = format!("{}d", g.dim());
            cases.push(CaseRecord::measured(
                format!("telescoping/{name}/grid-{label}"),
                "telescoping",
                params![("generator", name), ("grid", label.as_str()), ("n_blocks", gc.n_blocks)],
                sys.telescoping_residual(),
                tel,
            ));
        }
        cases.push(CaseRecord::measured(
            format!("telescoping/{name}/dense"),
            "telescoping",
            params![("generator", name), ("grid", "dense radial samples"), ("n_blocks", cfg.grid.n_blocks)],
            dense_residual(&gen, cfg.grid.n_blocks, 200_000),
            tel,
        ));
    }

    let sys = build_lp_system(LpGenerator::standard(), cfg.grid.n_blocks, &grid)?;
    let bank = generate_bank(&cfg.bank, &cfg.grid)?;
    let n = cfg.grid.n_blocks as i64;
    let disjoint = Check::AtMost { bound: cfg.tol("disjointness")? };
    let synth = Check::AtMost { bound: cfg.tol("synthesis")? };
    let indexed: Vec<(usize, _)> = bank.into_iter().enumerate().collect();
    cases.extend(par_cases(&indexed, |(i, f)| {
        let mut out = Vec::new();
        let norm = match plain_lp(f, 2.0) {
            Ok(v) => v,
            Err(e) => return vec![CaseRecord::rejected(format!("disjoint/f{i:03}"), "disjointness", params![("member", *i)], e.to_string(), disjoint)],
        };
        let blocks: Vec<_> = (0..=n).map(|j| lp_block(f, &sys, j)).collect();
        for j in 0..=n {
            let id = format!("disjoint/f{i:03}/j{j:02}");
            let res: Result<f64> = (|| {
                let bj = blocks[j as usize].clone()?;
                let mut worst: f64 = 0.0;
                for k in 0..=n {
                    if (j - k).abs() >= 2 {
                        worst = worst.max(plain_lp(&lp_block(&bj, &sys, k)?, 2.0)? / norm);
                    }
                }
                Ok(worst)
            })();
            out.push(CaseRecord::from_result(id, "disjointness", params![("member", *i), ("j", j as usize)], res, disjoint));
        }
        let res: Result<f64> = (|| {
            let mut sum = tracelab_core::GridFunction64::zeros(&grid, 1);
            for b in &blocks {
                sum = sum.add(b.as_ref().map_err(Clone::clone)?)?;
            }
            Ok(plain_lp(&sum.sub(f)?, 2.0)? / norm)
        })();
        out.push(CaseRecord::from_result(format!("synthesis/f{i:03}"), "synthesis", params![("member", *i)], res, synth));
        out
    }));
    Ok(cases)
}
