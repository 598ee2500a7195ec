//! `sandwich`: the elementary embeddings between Triebel–Lizorkin, Besov,
//! Bessel potential, Sobolev and Lebesgue norms.
//!
//! Each ordered pair "A ≲ B" becomes an arm whose cases record `‖f‖_A/‖f‖_B`;
//! the arm maximum is the empirical constant of the pair and is held to a
//! bank-wide cap. The ℓ^q-monotonicity of Besov and Triebel–Lizorkin norms
//! holds with constant one and is checked up to float rounding only.

use std::f64::consts::PI;

use tracelab_core::lp::{build_lp_system, LpGenerator};
use tracelab_core::norms::{
    besov_block_norms, besov_from_blocks, bessel_norm, lp_norm, sobolev_norm, triebel_fields, triebel_from_fields,
    Exponent,
};
use tracelab_core::GridFunction64;

use super::common::{full, num};
use super::par_cases;
use crate::bank::generate_bank;
use crate::config::{tolerances, BankConfig, GridConfig, QValue, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check, Params};

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "sandwich".into(),
        grid: GridConfig::new(vec![4096], 16.0 * PI, 8),
        aux_grid: None,
        sweep: Sweep {
            p: vec![2.0, 3.0],
            q: vec![QValue::Finite(1.0), QValue::Finite(2.0), QValue::Finite(4.0), QValue::INF],
            s: vec![-0.5, 0.5, 1.0],
            k: vec![1, 2],
            gamma: vec![-0.5, 0.5, 1.5, 2.5],
            ..Sweep::default()
        },
        bank: BankConfig { size: 50, seed: 103 },
        tolerances: tolerances(&[("constant_cap", 50.0), ("exact_slack", 1e-12)]),
    }
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    sys: tracelab_core::LpSystem64,
    cap: Check,
    exact: Check,
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let grid = cfg.grid.build()?;
    let ctx = Ctx {
        cfg,
        sys: build_lp_system(LpGenerator::standard(), cfg.grid.n_blocks, &grid)?,
        cap: Check::AtMost { bound: cfg.tol("constant_cap")? },
        exact: Check::AtMost { bound: 1.0 + cfg.tol("exact_slack")? },
    };
    let bank = generate_bank(&cfg.bank, &cfg.grid)?;
    let mut jobs = Vec::new();
    for (i, f) in bank.iter().enumerate() {
        for &p in &cfg.sweep.p {
            for &g in &cfg.sweep.gamma {
                jobs.push((i, f, p, g));
            }
        }
    }
    Ok(par_cases(&jobs, |&(i, f, p, gamma)| match member_cases(&ctx, i, f, p, gamma) {
        Ok(v) => v,
        Err(e) => vec![CaseRecord::rejected(
            format!("error/f{i:03}/p{}/g{}", num(p), num(gamma)),
            "evaluation",
            params![("member", i), ("p", p), ("gamma", gamma)],
            e.to_string(),
            ctx.cap,
        )],
    }))
}

fn member_cases(ctx: &Ctx<'_>, i: usize, f: &GridFunction64, p: f64, gamma: f64) -> Result<Vec<CaseRecord>> {
    let sweep = &ctx.cfg.sweep;
    let w = full(gamma)?;
    let ap = w.is_ap(p);
    let fields = triebel_fields(f, p, &w, &ctx.sys)?;
    let blocks = besov_block_norms(f, p, &w, &ctx.sys)?;
    let tri = |s: f64, q: Exponent<f64>| triebel_from_fields(&fields, s, p, q);
    let bes = |s: f64, q: Exponent<f64>| besov_from_blocks(&blocks, s, q);
    let base = format!("f{i:03}/p{}/g{}", num(p), num(gamma));
    let prm = |extra: &[(&str, String)]| -> Params {
        let mut m = params![("member", i), ("p", p), ("gamma", gamma)];
        for (k, v) in extra {
            m.insert(k.to_string(), v.parse::<f64>().map(Into::into).unwrap_or_else(|_| v.clone().into()));
        }
        m
    };
    let mut out = Vec::new();
    let one = Exponent::Finite(1.0);

    // L^p ≲ F^0_{p,1} (any power weight).
    out.push(CaseRecord::measured(
        format!("L<=F0p1/{base}"),
        "L<=F0p1",
        prm(&[]),
        lp_norm(f, p, &w)?.value / tri(0.0, one)?,
        ctx.cap,
    ));

    for &s in &sweep.s {
        let ss = num(s);
        // H^{s,p} between F^s_{p,1} and F^s_{p,∞} (A_p weights).
        if ap {
            let h = bessel_norm(f, s, p, &w)?.value;
            out.push(CaseRecord::measured(format!("H<=Fp1/{base}/s{ss}"), "H<=Fp1", prm(&[("s", ss.clone())]), h / tri(s, one)?, ctx.cap));
            out.push(CaseRecord::measured(
                format!("Finf<=H/{base}/s{ss}"),
                "Finf<=H",
                prm(&[("s", ss.clone())]),
                tri(s, Exponent::Infinity)? / h,
                ctx.cap,
            ));
        }
        for &q in &sweep.q {
            let qe = q.exponent();
            let extra = [("s", ss.clone()), ("q", q.label())];
            let fq = tri(s, qe)?;
            out.push(CaseRecord::measured(
                format!("F<=Bmin/{base}/s{ss}/q{}", q.label()),
                "F<=Bmin",
                prm(&extra),
                fq / bes(s, qe.min_with(p)),
                ctx.cap,
            ));
            out.push(CaseRecord::measured(
                format!("Bmax<=F/{base}/s{ss}/q{}", q.label()),
                "Bmax<=F",
                prm(&extra),
                bes(s, qe.max_with(p)) / fq,
                ctx.cap,
            ));
            // ℓ^q monotonicity against every larger q.
            for &q1 in sweep.q.iter().filter(|q1| q1.value() > q.value()) {
                let extra = [("s", ss.clone()), ("q0", q.label()), ("q1", q1.label())];
                let tag = format!("{base}/s{ss}/q{}-{}", q.label(), q1.label());
                out.push(CaseRecord::measured(
                    format!("B-q-monotone/{tag}"),
                    "B-q-monotone",
                    prm(&extra),
                    bes(s, q1.exponent()) / bes(s, qe),
                    ctx.exact,
                ));
                out.push(CaseRecord::measured(
                    format!("F-q-monotone/{tag}"),
                    "F-q-monotone",
                    prm(&extra),
                    tri(s, q1.exponent())? / fq,
                    ctx.exact,
                ));
            }
        }
    }

    // W^{k,p} between F^k_{p,1} and F^k_{p,∞} (A_p weights).
    if ap {
        for &k in &sweep.k {
            let kk = k.to_string();
            let sw = sobolev_norm(f, k, p, &w)?.value;
            let s = k as f64;
            out.push(CaseRecord::measured(format!("W<=Fp1/{base}/k{kk}"), "W<=Fp1", prm(&[("k", kk.clone())]), sw / tri(s, one)?, ctx.cap));
            out.push(CaseRecord::measured(
                format!("Finf<=W/{base}/k{kk}"),
                "Finf<=W",
                prm(&[("k", kk)]),
                tri(s, Exponent::Infinity)? / sw,
                ctx.cap,
            ));
        }
    }
    Ok(out)
}
