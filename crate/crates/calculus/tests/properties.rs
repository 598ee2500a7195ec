//! Invariants of the rule engine, checked by property-based testing and, where
//! a random search could be vacuous, by exhaustive enumeration over a grid that
//! also asserts how many non-trivial instances were exercised.

use std::collections::HashMap;

use proptest::prelude::*;
use tracelab_calculus::types::{excluded_gamma_index, is_muckenhoupt, q_frac, q_int};
use tracelab_calculus::{
    embedding_depth, embeds_with, interpolate, parse_space, run_query, trace_space, validate_params, BoundaryConditions, Domain, EngineConfig,
    Exponent, Family, NormalSystemSignature, Outcome, ParamSet, SpaceDescriptor, Truth, Q,
};

fn p_values() -> Vec<Q> {
    vec![q_frac(3, 2), q_int(2), q_frac(5, 2), q_int(3), q_int(4)]
}

fn half_space(family: Family, s: Q, p: Q, gamma: Q, bc: Option<BoundaryConditions>) -> SpaceDescriptor {
    SpaceDescriptor::raw(family, ParamSet::new(p, Exponent::Finite(p), s, gamma, 2, 1), Domain::HalfSpace, bc)
}

fn bc_variants() -> Vec<Option<BoundaryConditions>> {
    bc_variants_on(1)
}

fn bc_variants_on(r: u32) -> Vec<Option<BoundaryConditions>> {
    vec![
        None,
        Some(BoundaryConditions::Vanishing),
        Some(BoundaryConditions::Normal(NormalSystemSignature::traces(vec![0], r))),
        Some(BoundaryConditions::Normal(NormalSystemSignature::traces(vec![1], r))),
        Some(BoundaryConditions::Normal(NormalSystemSignature::new(vec![0, 2], vec![1, 1]))),
        Some(BoundaryConditions::Normal(NormalSystemSignature::traces(vec![0, 1, 3], r))),
    ]
}

/// The left endpoint carries exactly the right endpoint's conditions that are
/// meaningful at its own smoothness.
fn left_endpoint(family: Family, s0: Q, right: &SpaceDescriptor) -> SpaceDescriptor {
    let p = &right.params;
    let bc = right.bc.as_ref().and_then(|bc| bc.active_at(p.p, p.gamma, s0));
    half_space(family, s0, p.p, p.gamma, bc)
}

fn fired(outcome: &Outcome) -> Option<&SpaceDescriptor> {
    match outcome {
        Outcome::Space { space } => Some(space),
        _ => None,
    }
}

/// `Some(true)` if both iterated and direct interpolation fire and agree,
/// `Some(false)` if both fire and disagree, `None` otherwise.
fn reiteration_agrees(a: &SpaceDescriptor, b: &SpaceDescriptor, t1: Q, t2: Q) -> Option<bool> {
    let c = interpolate(a, b, t1);
    let c = fired(&c.outcome)?.clone();
    let iterated = interpolate(&c, b, t2);
    let direct = interpolate(a, b, (Q::from_integer(1) - t2) * t1 + t2);
    match (fired(&iterated.outcome), fired(&direct.outcome)) {
        (Some(x), Some(y)) => Some(x == y),
        _ => None,
    }
}

fn gamma_strategy() -> impl Strategy<Value = Q> {
    (-7i64..48).prop_map(|n| q_frac(n, 8))
}

fn theta_strategy() -> impl Strategy<Value = Q> {
    (2i64..=12).prop_flat_map(|den| (1..den).prop_map(move |num| q_frac(num, den)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reiteration_on_the_sobolev_scale(
        pi in 0usize..5, gamma in gamma_strategy(), k_top in 2i64..=8, k0 in 0i64..=4,
        bci in 0usize..6, t1 in theta_strategy(), t2 in theta_strategy(),
    ) {
        let p = p_values()[pi];
        prop_assume!(k0 < k_top && excluded_gamma_index(p, gamma).is_none());
        let b = half_space(Family::Sobolev, q_int(k_top), p, gamma, bc_variants()[bci].clone());
        let a = left_endpoint(Family::Sobolev, q_int(k0), &b);
        if let Some(agree) = reiteration_agrees(&a, &b, t1, t2) {
            prop_assert!(agree, "a = {a}, b = {b}, θ₁ = {t1}, θ₂ = {t2}");
        }
    }

    #[test]
    fn reiteration_on_the_bessel_scale(
        pi in 0usize..5, gnum in -7i64..8, s0n in -3i64..12, s1n in 1i64..40,
        bci in 0usize..6, t1 in theta_strategy(), t2 in theta_strategy(),
    ) {
        let p = p_values()[pi];
        let gamma = q_frac(gnum, 8);
        prop_assume!(is_muckenhoupt(p, gamma));
        let (s0, s1) = (q_frac(s0n, 4), q_frac(s0n, 4) + q_frac(s1n, 4));
        let b = half_space(Family::BesselPotential, s1, p, gamma, bc_variants()[bci].clone());
        let a = left_endpoint(Family::BesselPotential, s0, &b);
        if let Some(agree) = reiteration_agrees(&a, &b, t1, t2) {
            prop_assert!(agree, "a = {a}, b = {b}, θ₁ = {t1}, θ₂ = {t2}");
        }
    }

    #[test]
    fn trace_threshold_matches_condition_resolution(
        pi in 0usize..5, gamma in gamma_strategy(), k_top in 2i64..=8, m in 0u32..6, ell in 1i64..8,
    ) {
        let p = p_values()[pi];
        prop_assume!(ell < k_top && excluded_gamma_index(p, gamma).is_none());
        let bc = BoundaryConditions::Normal(NormalSystemSignature::traces(vec![m], 1));
        let b = half_space(Family::Sobolev, q_int(k_top), p, gamma, Some(bc));
        prop_assume!(b.params.trace_exists(m));
        let a = half_space(Family::Lebesgue, q_int(0), p, gamma, None);
        let r = interpolate(&a, &b, q_frac(ell, k_top));
        let out = fired(&r.outcome);
        prop_assert!(out.is_some(), "{}", r.outcome);
        let out = out.unwrap();
        let keeps_m = out.bc.is_some();
        let trace_rejected = trace_space(&out.without_bc(), m).is_rejected();
        prop_assert_eq!(trace_rejected, !keeps_m, "result {}", out);
    }

    #[test]
    fn validation_excludes_exactly_the_lattice(pi in 0usize..5, j in 1i64..6, eps_num in 1i64..1000) {
        let p = p_values()[pi];
        let on = q_int(j) * p - q_int(1);
        let eps = q_frac(eps_num, 1_000_000);
        let w = |gamma: Q| half_space(Family::Sobolev, q_int(2), p, gamma, None);
        prop_assert!(validate_params(&w(on)).is_rejected());
        prop_assert!(!validate_params(&w(on + eps)).is_rejected());
        prop_assert!(!validate_params(&w(on - eps)).is_rejected());
    }

    #[test]
    fn rendering_round_trips_through_the_parser(
        fi in 0usize..5, pi in 0usize..5, sn in 0i64..24, qi in 0usize..4, gamma in gamma_strategy(),
        dim in 1u32..5, r in 1u32..4, di in 0usize..3, bci in 0usize..6,
    ) {
        let family = [Family::Besov, Family::TriebelLizorkin, Family::BesselPotential, Family::Sobolev, Family::Lebesgue][fi];
        let domain = [Domain::FullSpace, Domain::HalfSpace, Domain::BoundaryHyperplane][di];
        let p = p_values()[pi];
        let q = [Exponent::Finite(q_int(1)), Exponent::Finite(q_frac(7, 3)), Exponent::Finite(p), Exponent::Infinity][qi];
        let s = match family {
            Family::Sobolev => q_int(sn / 4),
            Family::Lebesgue => q_int(0),
            _ => q_frac(sn - 4, 4),
        };
        let gamma = if domain == Domain::BoundaryHyperplane { q_int(0) } else { gamma };
        let conditions_allowed = domain == Domain::HalfSpace && matches!(family, Family::Sobolev | Family::BesselPotential);
        let bc = if conditions_allowed { bc_variants_on(r)[bci].clone() } else { None };
        let desc = SpaceDescriptor::raw(family, ParamSet::new(p, q, s, gamma, dim, r), domain, bc);
        let text = desc.render();
        let parsed = parse_space(&text).map_err(|e| TestCaseError::fail(e.annotate(&text)))?;
        prop_assert_eq!(parsed, desc);
    }

    #[test]
    fn identical_queries_give_identical_results(
        pi in 0usize..5, gamma in gamma_strategy(), k in 0i64..6, m in 0u32..4, t in theta_strategy(),
    ) {
        let p = p_values()[pi];
        let w = half_space(Family::Sobolev, q_int(k), p, gamma, None).render();
        let queries = [
            format!("validate {w}"),
            format!("trace m={m} {w}"),
            format!("trace-vector m={m} {w}"),
            format!("interpolate theta={t} L[p={p},gamma={gamma},dom=half] W[k={},p={p},gamma={gamma},bc=tr{{{m}}}]", k + 2),
            format!("embeds {w} L[p={p},gamma={gamma},dom=half]"),
            format!("density W[k={k},p={p},gamma={gamma},bc=tr{{{m}}}]"),
        ];
        for query in &queries {
            let a = run_query(query).map_err(|e| TestCaseError::fail(e.annotate(query)))?;
            let b = std::thread::spawn({
                let query = query.clone();
                move || run_query(&query).unwrap()
            })
            .join()
            .unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.to_json(), b.to_json());
        }
    }
}

/// Enumerates a grid of reiteration chains and checks that the invariant is
/// exercised (both rules fire) on many of them.
#[test]
fn reiteration_grid_is_exercised() {
    let thetas: Vec<Q> = (2..=6).flat_map(|d| (1..d).map(move |n| q_frac(n, d))).collect();
    let (mut agreed, mut total) = (0, 0);
    for p in [q_int(2), q_int(3)] {
        for gamma in [q_int(0), q_frac(1, 2), q_frac(3, 2), q_frac(7, 2)] {
            if excluded_gamma_index(p, gamma).is_some() {
                continue;
            }
            for bc in bc_variants() {
                for k_top in 2..=6 {
                    let b = half_space(Family::Sobolev, q_int(k_top), p, gamma, bc.clone());
                    let a = left_endpoint(Family::Sobolev, q_int(0), &b);
                    for &t1 in &thetas {
                        for &t2 in &thetas {
                            if let Some(agree) = reiteration_agrees(&a, &b, t1, t2) {
                                total += 1;
                                assert!(agree, "a = {a}, b = {b}, θ₁ = {t1}, θ₂ = {t2}");
                                agreed += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert_eq!(agreed, total);
    assert!(total >= 500, "only {total} chains fired");
}

fn embedding_pool() -> Vec<SpaceDescriptor> {
    let mut pool = Vec::new();
    let spaces = [
        "B[s=2,p=2,q=1]", "B[s=2,p=2,q=2]", "B[s=2,p=2,q=inf]", "B[s=1,p=2,q=1]", "B[s=1,p=2,q=inf]",
        "F[s=2,p=2,q=1]", "F[s=2,p=2,q=2]", "F[s=2,p=2,q=inf]", "F[s=1,p=2,q=1]", "F[s=1,p=2,q=inf]",
        "F[s=2,p=2,q=2,gamma=2]", "F[s=1,p=2,q=2]", "F[s=1,p=2,q=5]",
        "H[s=2,p=2]", "H[s=1,p=2]", "H[s=1/2,p=2]", "W[k=2,p=2,dom=full]", "W[k=1,p=2,dom=full]", "L[p=2]",
        "W[k=3,p=2,gamma=5/2]", "W[k=2,p=2,gamma=1/2]", "W[k=2,p=2]", "W[k=1,p=2]", "L[p=2,dom=half]",
        "W[k=2,p=2,bc=tr{0}]", "W[k=3,p=2,gamma=5/2,bc=tr{0}]", "L[p=2,gamma=1/2,dom=half]",
    ];
    for s in spaces {
        pool.push(parse_space(s).unwrap());
    }
    pool
}

/// Monotonicity: chains compose. If A ↪ B in `a` steps and B ↪ C in `b` steps,
/// then A ↪ C is derived within `a + b` steps.
#[test]
fn embedding_chains_compose() {
    let pool = embedding_pool();
    let config = EngineConfig::default();
    let mut depth = HashMap::new();
    for (i, a) in pool.iter().enumerate() {
        for (j, b) in pool.iter().enumerate() {
            if i != j {
                if let Some(d) = embedding_depth(a, b, &config) {
                    depth.insert((i, j), d);
                }
            }
        }
    }
    let mut composed = 0;
    for (&(i, j), &dij) in &depth {
        for (&(j2, k), &djk) in &depth {
            if j2 != j || k == i {
                continue;
            }
            let r = embeds_with(&pool[i], &pool[k], &EngineConfig { max_embedding_depth: dij + djk });
            assert_eq!(r.outcome, Outcome::Boolean { value: Truth::True }, "{} ↪ {} ↪ {}", pool[i], pool[j], pool[k]);
            composed += 1;
        }
    }
    assert!(depth.len() >= 40 && composed >= 60, "{} edges, {composed} compositions", depth.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn embedding_monotonicity(i in 0usize..27, j in 0usize..27, k in 0usize..27) {
        let pool = embedding_pool();
        let config = EngineConfig::default();
        if let (Some(a), Some(b)) = (embedding_depth(&pool[i], &pool[j], &config), embedding_depth(&pool[j], &pool[k], &config)) {
            if i != k {
                let r = embeds_with(&pool[i], &pool[k], &EngineConfig { max_embedding_depth: a + b });
                prop_assert_eq!(r.outcome, Outcome::Boolean { value: Truth::True });
            }
        }
    }
}
