//! `sobolev-embedding`: dilation consistency of the weighted
//! Triebel–Lizorkin Sobolev embedding.
//!
//! For a tuple with `s₀ − (d+γ₀)/p₀ = s₁ − (d+γ₁)/p₁` both norms scale alike
//! under `f ↦ f(λ·)`, so the target/source ratio stays within a bounded
//! factor over `λ ∈ 2^{−3..3}`. Shifting the target smoothness by `±1/2`
//! breaks the balance; the ratio then drifts like `λ^{±1/2}`, i.e. by a
//! factor approaching `2^{3} = 8` over the same range.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use tracelab_core::lp::{build_lp_system, LpGenerator};
use tracelab_core::norms::{triebel_fields, triebel_from_fields};

use super::common::{full, monotonicity_breaks, num, variation};
use super::par_cases;
use crate::bank::{MemberKind, Packet, Profile};
use crate::config::{tolerances, BankConfig, EmbeddingTuple, GridConfig, QValue, SuiteConfig, Sweep};
use crate::error::Result;
use crate::params;
use crate::report::{CaseRecord, Check};

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "sobolev-embedding".into(),
        grid: GridConfig::new(vec![16384], 32.0 * PI, 9),
        aux_grid: None,
        sweep: Sweep {
            q: vec![QValue::Finite(2.0)],
            dilations: (-3..=3).collect(),
            tuples: vec![
                EmbeddingTuple { source: [2.0, 2.0, 2.0], target: [1.0, 2.0, 0.0] },
                EmbeddingTuple { source: [1.0, 2.0, 0.5], target: [0.75, 3.0, 0.5] },
                EmbeddingTuple { source: [1.5, 2.0, 1.5], target: [0.75, 4.0, 1.0] },
            ],
            ..Sweep::default()
        },
        bank: BankConfig { size: 3, seed: 0 },
        tolerances: tolerances(&[
            ("admissible_variation_max", 4.0),
            ("broken_variation_min", 8.0),
            ("broken_shift", 0.5),
            ("monotonicity_breaks_max", 0.0),
        ]),
    }
}

fn cosine(center: f64, width: f64, freq: f64) -> Vec<Packet> {
    // cos(freq·x) = (e^{i freq x} + e^{−i freq x})/2, phases referred to the centre.
    let ph = freq * center;
    vec![
        Packet { center: vec![center], width: vec![width], freq: vec![freq], amp: (0.5 * ph.cos(), 0.5 * ph.sin()) },
        Packet { center: vec![center], width: vec![width], freq: vec![-freq], amp: (0.5 * ph.cos(), -0.5 * ph.sin()) },
    ]
}

/// The dilation families: modulated Gaussians whose dilates over
/// `λ ∈ 2^{−3..3}` keep their spectrum away from the origin, so that every
/// dilate lies in the range where the inhomogeneous norms scale like their
/// homogeneous counterparts.
pub fn families() -> Vec<Profile> {
    vec![
        Profile { label: "mod16".into(), kind: MemberKind::ModulatedBump, packets: cosine(0.0, 1.0, 16.0) },
        Profile { label: "shift".into(), kind: MemberKind::ModulatedBump, packets: cosine(1.0, FRAC_1_SQRT_2, 8.0) },
        Profile { label: "mod20".into(), kind: MemberKind::ModulatedBump, packets: cosine(-0.5, 0.8, 20.0) },
    ]
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let grid = cfg.grid.build()?;
    let sys = build_lp_system(LpGenerator::standard(), cfg.grid.n_blocks, &grid)?;
    let adm = Check::AtMost { bound: cfg.tol("admissible_variation_max")? };
    let broken = Check::AtLeast { bound: cfg.tol("broken_variation_min")? };
    let mono = Check::AtMost { bound: cfg.tol("monotonicity_breaks_max")? };
    let shift = cfg.tol("broken_shift")?;
    let fams = families();
    let mut jobs = Vec::new();
    for (t, tuple) in cfg.sweep.tuples.iter().enumerate() {
        for fam in &fams {
            for &q in &cfg.sweep.q {
                jobs.push((t, *tuple, fam, q));
            }
        }
    }
    Ok(par_cases(&jobs, |&(t, tuple, fam, q)| {
        let [s0, p0, g0] = tuple.source;
        let [s1, p1, g1] = tuple.target;
        let base = format!("t{t}/{}/q{}", fam.label, q.label());
        let prm = || {
            params![
                ("tuple", t),
                ("family", fam.label.as_str()),
                ("q", q.label()),
                ("s0", s0),
                ("p0", p0),
                ("gamma0", g0),
                ("s1", s1),
                ("p1", p1),
                ("gamma1", g1)
            ]
        };
        // ratios[v][λ] for v = admissible, +shift, −shift.
        let ratios = (|| -> Result<[Vec<f64>; 3]> {
            let (w0, w1) = (full(g0)?, full(g1)?);
            let mut out: [Vec<f64>; 3] = Default::default();
            for &e in &cfg.sweep.dilations {
                let f = fam.dilate(2f64.powi(e)).sample(&grid);
                let src = triebel_from_fields(&triebel_fields(&f, p0, &w0, &sys)?, s0, p0, q.exponent())?;
                let tf = triebel_fields(&f, p1, &w1, &sys)?;
                for (v, ds) in [0.0, shift, -shift].into_iter().enumerate() {
                    out[v].push(triebel_from_fields(&tf, s1 + ds, p1, q.exponent())? / src);
                }
            }
            Ok(out)
        })();
        let ratios = match ratios {
            Ok(r) => r,
            Err(e) => return vec![CaseRecord::rejected(format!("error/{base}"), "evaluation", prm(), e.to_string(), adm)],
        };
        let mut out = Vec::new();
        for (v, (arm, check)) in [("admissible", adm), ("broken+", broken), ("broken-", broken)].into_iter().enumerate() {
            let mut p = prm();
            p.insert("target_shift".into(), [0.0, shift, -shift][v].into());
            out.push(CaseRecord::measured(format!("{arm}/{base}"), arm, p.clone(), variation(&ratios[v]), check));
            if v > 0 {
                let arm_m = format!("{arm}-monotone");
                out.push(CaseRecord::measured(
                    format!("{arm_m}/{base}"),
                    &arm_m,
                    p.clone(),
                    monotonicity_breaks(&ratios[v]) as f64,
                    mono,
                ));
            }
            for (e, r) in cfg.sweep.dilations.iter().zip(&ratios[v]) {
                let mut pe = p.clone();
                pe.insert("dilation_exponent".into(), (*e).into());
                out.push(CaseRecord::measured(format!("ratio-{arm}/{base}/e{}", num(*e as f64)), &format!("ratio-{arm}"), pe, *r, Check::Info));
            }
        }
        out
    }))
}
