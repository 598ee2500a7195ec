//! `trace-ext`: the extension operators are right inverses of the traces.
//!
//! For every boundary datum `g` of the bank: `Tr ext₀ g = g`,
//! `Tr_m ext_m g = g` and `Tr_j ext_m g = 0` for `j < m ≤ 3`. Residuals are
//! relative `L^p(ℝ^{d−1})` norms on the boundary grid, reported for every
//! `(p, γ)` of the sweep; the weighted norm of the extension is recorded
//! alongside (the identities themselves do not depend on `γ`, which is the
//! universality of the construction).

use std::f64::consts::PI;

use tracelab_core::norms::lp_norm;
use tracelab_core::trace_ext::{ext0, ext_m, trace, trace_m};
use tracelab_core::GridFunction64;

use super::common::{full, num, plain_lp, TraceSetup};
use super::par_cases;
use crate::bank::generate_bank;
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check};

/// Bulk grid `256²` on `[−16π, 16π)²`.
pub fn bulk_grid() -> GridConfig {
    GridConfig::new(vec![256, 256], 16.0 * PI, 4)
}

/// Boundary grid; its block count is the extension kernels' top block.
pub fn boundary_grid() -> GridConfig {
    GridConfig::boundary(vec![256], 16.0 * PI, 2)
}

pub(crate) fn pairs() -> Vec<(f64, f64)> {
    let mut v = Vec::new();
    for p in [2.0, 3.0] {
        for g in [-0.5, 0.5, 1.5, 2.5] {
            v.push((p, g));
        }
    }
    v
}

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "trace-ext".into(),
        grid: bulk_grid(),
        aux_grid: Some(boundary_grid()),
        sweep: Sweep { pairs: pairs(), k: vec![0, 1, 2, 3], ..Sweep::default() },
        bank: BankConfig { size: 50, seed: 106 },
        tolerances: tolerances(&[("residual", 1e-7)]),
    }
}

/// Residual functions of one datum.
struct Residuals {
    ext0: GridFunction64,
    /// `(m, Tr_m ext_m g − g)`.
    top: Vec<(usize, GridFunction64)>,
    /// `(m, j, Tr_j ext_m g)` for `j < m`.
    lower: Vec<(usize, usize, GridFunction64)>,
    extensions: Vec<(usize, GridFunction64)>,
}

fn residuals(s: &TraceSetup, g: &GridFunction64, orders: &[usize]) -> Result<Residuals> {
    let e0 = ext0(g, &s.eta, &s.bsys)?;
    let r0 = trace(&e0, &s.sys)?.sub(g)?;
    let mut top = Vec::new();
    let mut lower = Vec::new();
    let mut extensions = vec![(usize::MAX, e0)];
    for &m in orders {
        let e = ext_m(g, m, &s.eta, &s.bsys)?;
        top.push((m, trace_m(&e, m, &s.sys)?.sub(g)?));
        for j in 0..m {
            lower.push((m, j, trace_m(&e, j, &s.sys)?));
        }
        extensions.push((m, e));
    }
    Ok(Residuals { ext0: r0, top, lower, extensions })
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let aux = cfg.aux()?;
    let setup = TraceSetup::new(&cfg.grid, aux.n_blocks)?;
    let bank = generate_bank(&cfg.bank, aux)?;
    let check = Check::AtMost { bound: cfg.tol("residual")? };
    let indexed: Vec<(usize, &GridFunction64)> = bank.iter().enumerate().collect();
    Ok(par_cases(&indexed, |&(i, g)| {
        let res = match residuals(&setup, g, &cfg.sweep.k) {
            Ok(r) => r,
            Err(e) => {
                return vec![CaseRecord::rejected(format!("error/g{i:03}"), "evaluation", params![("member", i)], e.to_string(), check)]
            }
        };
        let mut out = Vec::new();
        for &(p, gamma) in &cfg.sweep.pairs {
            let base = format!("g{i:03}/p{}/g{}", num(p), num(gamma));
            let prm = || params![("member", i), ("p", p), ("gamma", gamma)];
            let gn = match plain_lp(g, p) {
                Ok(v) => v,
                Err(e) => {
                    out.push(CaseRecord::rejected(format!("error/{base}"), "evaluation", prm(), e.to_string(), check));
                    continue;
                }
            };
            let rel = |f: &GridFunction64| plain_lp(f, p).map(|v| v / gn);
            out.push(CaseRecord::from_result(format!("trace-ext0/{base}"), "trace-ext0", prm(), rel(&res.ext0), check));
            for (m, r) in &res.top {
                let mut pr = prm();
                pr.insert("m".into(), (*m).into());
                out.push(CaseRecord::from_result(format!("trace-ext-m/{base}/m{m}"), "trace-ext-m", pr, rel(r), check));
            }
            for (m, j, r) in &res.lower {
                let mut pr = prm();
                pr.insert("m".into(), (*m).into());
                pr.insert("j".into(), (*j).into());
                out.push(CaseRecord::from_result(format!("lower-traces/{base}/m{m}/j{j}"), "lower-traces", pr, rel(r), check));
            }
            for (m, e) in &res.extensions {
                let mut pr = prm();
                let tag = if *m == usize::MAX { "0".to_string() } else { format!("m{m}") };
                pr.insert("extension".into(), tag.clone().into());
                let norm = full(gamma).and_then(|w| Ok(lp_norm(e, p, &w)?.value / gn));
                out.push(CaseRecord::from_result(format!("extension-norm/{base}/{tag}"), "extension-norm", pr, norm, Check::Info));
            }
        }
        out
    }))
}
