//! `vector-trace`: the recursive vector extension reproduces a whole stack
//! of prescribed normal traces, `Tr_j ext(g₀, …, g_m) = g_j` for all `j ≤ m`.
//!
//! Data sets are consecutive runs of the boundary bank; residuals are
//! relative `L^p(ℝ^{d−1})` norms reported for every `(p, γ)` of the sweep.

use tracelab_core::trace_ext::{ext_vector, trace_m};
use tracelab_core::GridFunction64;

use super::common::{num, plain_lp, TraceSetup};
use super::par_cases;
use super::trace_ext::{boundary_grid, bulk_grid, pairs};
use crate::bank::generate_bank;
use crate::config::{tolerances, BankConfig, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check};

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "vector-trace".into(),
        grid: bulk_grid(),
        aux_grid: Some(boundary_grid()),
        // `k` lists the top orders `m` of the data stacks.
        sweep: Sweep { pairs: pairs(), k: vec![1, 3], ..Sweep::default() },
        bank: BankConfig { size: 24, seed: 107 },
        tolerances: tolerances(&[("residual", 1e-7)]),
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let aux = cfg.aux()?;
    let setup = TraceSetup::new(&cfg.grid, aux.n_blocks)?;
    let bank = generate_bank(&cfg.bank, aux)?;
    let check = Check::AtMost { bound: cfg.tol("residual")? };
    let mut jobs = Vec::new();
    for start in 0..bank.len() {
        for &m in &cfg.sweep.k {
            jobs.push((start, m));
        }
    }
    Ok(par_cases(&jobs, |&(start, m)| {
        let members: Vec<usize> = (0..=m).map(|j| (start + j) % bank.len()).collect();
        let gs: Vec<GridFunction64> = members.iter().map(|&i| bank[i].clone()).collect();
        let set = format!("set{start:03}/m{m}");
        let traces = (|| -> Result<Vec<GridFunction64>> {
            let f = ext_vector(&gs, &setup.eta, &setup.bsys, &setup.sys)?;
            (0..=m).map(|j| Ok(trace_m(&f, j, &setup.sys)?.sub(&gs[j])?)).collect()
        })();
        let traces = match traces {
            Ok(t) => t,
            Err(e) => {
                return vec![CaseRecord::rejected(
                    format!("error/{set}"),
                    "evaluation",
                    params![("start", start), ("m", m)],
                    e.to_string(),
                    check,
                )]
            }
        };
        let mut out = Vec::new();
        for &(p, gamma) in &cfg.sweep.pairs {
            for (j, r) in traces.iter().enumerate() {
                let rel = plain_lp(r, p).and_then(|num| Ok(num / plain_lp(&gs[j], p)?));
                out.push(CaseRecord::from_result(
                    format!("vector-trace/{set}/p{}/g{}/j{j}", num(p), num(gamma)),
                    "vector-trace",
                    params![("start", start), ("m", m), ("j", j), ("member", members[j]), ("p", p), ("gamma", gamma)],
                    rel,
                    check,
                ));
            }
        }
        out
    }))
}
