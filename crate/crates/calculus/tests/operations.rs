//! Worked examples for every engine operation, asserted on structured
//! outcomes rather than on their textual rendering.

use tracelab_calculus::types::{q_frac, q_int};
use tracelab_calculus::{
    density_class, embeds, embeds_with, fubini_split, interpolate, parse_space, trace_space, trace_vector_space, validate_params,
    BoundaryConditions, Domain, EngineConfig, Exponent, Family, NormalSystemSignature, Outcome, SpaceDescriptor, TestClass, Truth,
};

fn space(s: &str) -> SpaceDescriptor {
    parse_space(s).unwrap_or_else(|e| panic!("{}", e.annotate(s)))
}

fn rejection(outcome: &Outcome) -> &str {
    match outcome {
        Outcome::Rejected { reason } => reason,
        other => panic!("expected a rejection, got {other}"),
    }
}

fn boundary_besov(s: tracelab_calculus::Q, p: i64, q: i64, dim: u32) -> SpaceDescriptor {
    SpaceDescriptor::new(
        Family::Besov,
        tracelab_calculus::ParamSet::new(q_int(p), Exponent::Finite(q_int(q)), s, q_int(0), dim, 1),
        Domain::BoundaryHyperplane,
        None,
    )
    .unwrap()
}

// ---- validate_params -------------------------------------------------------

#[test]
fn sobolev_weight_on_excluded_lattice_is_rejected() {
    let r = validate_params(&space("W[k=2,p=2,gamma=1]"));
    assert_eq!(rejection(&r.outcome), "γ = 1·p−1 excluded");
    assert_eq!(r.rule_ids(), ["params.sobolev_excluded_weights"]);
}

#[test]
fn besov_with_small_weight_is_muckenhoupt() {
    let r = validate_params(&space("B[s=1,p=2,gamma=0.5]"));
    assert_eq!(r.outcome, Outcome::Valid { muckenhoupt: true });
    let r = validate_params(&space("B[s=1,p=2,gamma=1]"));
    assert_eq!(r.outcome, Outcome::Valid { muckenhoupt: false }, "γ = p−1 is the first non-A_p weight");
}

#[test]
fn bessel_potential_outside_muckenhoupt_is_rejected() {
    let r = validate_params(&space("H[s=1,p=2,gamma=3]"));
    assert!(rejection(&r.outcome).starts_with("Bessel potential requires A_p weight"));
    assert_eq!(r.rule_ids(), ["params.bessel_requires_ap"]);
}

#[test]
fn every_result_carries_a_citation() {
    for s in ["W[k=2,p=2,gamma=1]", "B[s=1,p=2,gamma=0.5]", "H[s=1,p=2,gamma=3]", "L[p=4,gamma=7]"] {
        assert!(!validate_params(&space(s)).citations.is_empty(), "{s}");
    }
}

// ---- trace_space -----------------------------------------------------------

#[test]
fn besov_trace_keeps_microscopic_exponent() {
    let r = trace_space(&space("B[s=2,p=2,q=1]"), 0);
    assert_eq!(r.space(), Some(&boundary_besov(q_frac(3, 2), 2, 1, 1)));
}

#[test]
fn triebel_lizorkin_trace_forgets_microscopic_exponent() {
    let r = trace_space(&space("F[s=3,p=3,q=inf,gamma=2,d=3]"), 1);
    assert_eq!(r.space(), Some(&boundary_besov(q_int(1), 3, 3, 2)));
    assert_eq!(r.rule_ids(), ["trace.triebel_lizorkin"]);
}

#[test]
fn trace_at_or_below_threshold_is_rejected() {
    let r = trace_space(&space("W[k=1,p=2]"), 1);
    assert!(rejection(&r.outcome).starts_with("below trace threshold"));
    // Exactly at the threshold: s = m + (γ+1)/p is not enough.
    let r = trace_space(&space("H[s=3/2,p=2,dom=half]"), 1);
    assert!(rejection(&r.outcome).contains("s = 3/2 and m + (γ+1)/p = 3/2"));
}

#[test]
fn sobolev_trace_for_large_weights() {
    let r = trace_space(&space("W[k=3,p=2,gamma=3/2]"), 1);
    assert_eq!(r.space(), Some(&boundary_besov(q_frac(3, 4), 2, 2, 1)));
    assert_eq!(r.rule_ids(), ["trace.sobolev_all_weights"]);
}

// ---- trace_vector_space ----------------------------------------------------

#[test]
fn vector_trace_is_a_product_of_besov_spaces() {
    let r = trace_vector_space(&space("W[k=3,p=2]"), 1);
    let expected = vec![boundary_besov(q_frac(5, 2), 2, 2, 1), boundary_besov(q_frac(3, 2), 2, 2, 1)];
    assert_eq!(r.outcome, Outcome::Product { factors: expected });
    assert_eq!(r.rule_ids()[0], "trace.vector");
}

#[test]
fn vector_trace_of_order_zero_is_the_trace() {
    let d = space("H[s=2,p=2]");
    assert_eq!(trace_vector_space(&d, 0), trace_space(&d, 0));
}

#[test]
fn vector_trace_with_large_weight_is_rejected() {
    // γ = 3 = 2p − 1 sits on the excluded lattice; it would also fail the
    // threshold 2 < 1 + (3+1)/2.
    assert!(trace_vector_space(&space("W[k=2,p=2,gamma=3]"), 1).is_rejected());
    assert!(trace_vector_space(&space("W[k=2,p=2,gamma=29/10]"), 1).is_rejected());
}

// ---- interpolate -----------------------------------------------------------

#[test]
fn lebesgue_sobolev_midpoint() {
    let r = interpolate(&space("L[p=2,gamma=1/2,dom=half]"), &space("W[k=4,p=2,gamma=1/2]"), q_frac(1, 2));
    assert_eq!(r.space(), Some(&space("W[k=2,p=2,gamma=1/2]")));
}

#[test]
fn boundary_condition_survives_when_above_threshold() {
    let r = interpolate(&space("L[p=2,gamma=1/2,dom=half]"), &space("W[k=4,p=2,gamma=1/2,bc=tr{0}]"), q_frac(1, 2));
    assert_eq!(r.space(), Some(&space("W[k=2,p=2,gamma=1/2,bc=tr{0}]")));
}

#[test]
fn dirichlet_condition_retained_for_bessel_midpoint() {
    let r = interpolate(&space("H[s=0,p=2,dom=half]"), &space("H[s=2,p=2,bc=tr{0}]"), q_frac(1, 2));
    let out = r.space().expect("interpolation fires");
    assert_eq!(out.params.smoothness, q_int(1));
    assert_eq!(out.bc, Some(BoundaryConditions::Normal(NormalSystemSignature::traces(vec![0], 1))));
}

#[test]
fn condition_dropped_below_its_threshold() {
    // Order 3 needs smoothness > 3 + 3/4; at ℓ = 2 only order 0 survives.
    let r = interpolate(&space("L[p=2,gamma=1/2,dom=half]"), &space("W[k=4,p=2,gamma=1/2,bc={0:1,3:1}]"), q_frac(1, 2));
    let out = r.space().unwrap();
    assert_eq!(out.bc, Some(BoundaryConditions::Normal(NormalSystemSignature::new(vec![0], vec![1]))));
}

#[test]
fn incompatible_endpoints_report_every_mismatch() {
    let r = interpolate(&space("W[k=1,p=2,gamma=1/2]"), &space("W[k=3,p=3,gamma=1/4,d=3]"), q_frac(1, 2));
    let reason = rejection(&r.outcome);
    for field in ["p: 2 vs 3", "γ: 1/2 vs 1/4", "d: 2 vs 3"] {
        assert!(reason.contains(field), "{reason}");
    }
}

#[test]
fn fractional_smoothness_with_large_weight_is_open() {
    let r = interpolate(&space("L[p=2,gamma=3/2,dom=half]"), &space("W[k=2,p=2,gamma=3/2]"), q_frac(1, 4));
    assert!(rejection(&r.outcome).starts_with("open problem"));
}

#[test]
fn integer_smoothness_with_large_weight_fires() {
    let r = interpolate(&space("L[p=2,gamma=3/2,dom=half]"), &space("W[k=3,p=2,gamma=3/2]"), q_frac(1, 3));
    assert_eq!(r.space(), Some(&space("W[k=1,p=2,gamma=3/2]")));
}

#[test]
fn theta_must_be_strictly_inside_the_unit_interval() {
    let (a, b) = (space("L[p=2,dom=half]"), space("W[k=2,p=2]"));
    assert!(interpolate(&a, &b, q_int(0)).is_rejected());
    assert!(interpolate(&a, &b, q_int(1)).is_rejected());
}

// ---- embeds ----------------------------------------------------------------

#[test]
fn weighted_sobolev_embedding_with_matching_differential_dimension() {
    let r = embeds(&space("F[s=2,p=2,q=2,gamma=2]"), &space("F[s=1,p=2,q=7,gamma=0]"));
    assert_eq!(r.outcome, Outcome::Boolean { value: Truth::True });
    assert_eq!(r.rule_ids(), ["embed.weighted_sobolev"]);
}

#[test]
fn triebel_lizorkin_with_q_one_embeds_into_sobolev() {
    for (k, gamma) in [("1", "0"), ("2", "1/2"), ("3", "-1/2")] {
        let a = space(&format!("F[s={k},p=2,q=1,gamma={gamma}]"));
        let b = space(&format!("W[k={k},p=2,gamma={gamma},dom=full]"));
        assert_eq!(embeds(&a, &b).outcome, Outcome::Boolean { value: Truth::True }, "k = {k}");
    }
}

#[test]
fn besov_microscopic_monotonicity() {
    let r = embeds(&space("B[s=1,p=2,q=1]"), &space("B[s=1,p=2,q=3]"));
    assert_eq!(r.outcome, Outcome::Boolean { value: Truth::True });
    let r = embeds(&space("B[s=1,p=2,q=2]"), &space("B[s=1,p=2,q=inf]"));
    assert_eq!(r.outcome, Outcome::Boolean { value: Truth::True });
}

#[test]
fn non_derivable_embeddings_are_unknown_never_false() {
    let r = embeds(&space("W[k=2,p=2]"), &space("W[k=3,p=2]"));
    assert_eq!(r.outcome, Outcome::Boolean { value: Truth::Unknown });
    assert_eq!(r.rule_ids(), ["embed.sufficient_only"]);
}

#[test]
fn depth_cap_limits_rule_chains() {
    // B^2_{2,1} → F^2_{2,1} → W^2 → W^1 needs three steps.
    let (a, b) = (space("B[s=2,p=2,q=1]"), space("W[k=1,p=2,dom=full]"));
    let shallow = embeds_with(&a, &b, &EngineConfig { max_embedding_depth: 2 });
    let deep = embeds_with(&a, &b, &EngineConfig { max_embedding_depth: 6 });
    assert_eq!(shallow.outcome, Outcome::Boolean { value: Truth::Unknown });
    assert_eq!(deep.outcome, Outcome::Boolean { value: Truth::True });
}

// ---- density_class ---------------------------------------------------------

#[test]
fn derivative_compact_class_inside_weight_window() {
    // k = 2, m = 1: window ((k−m−1)p−1, (k−m)p−1) = (−1, 1).
    let r = density_class(&space("W[k=2,p=2,gamma=1/2,bc=tr{1}]"));
    match r.outcome {
        Outcome::DenseClass { class, .. } => assert_eq!(class, TestClass::DerivativeCompact { m: 1 }),
        other => panic!("{other}"),
    }
}

#[test]
fn vanishing_bessel_space_uses_compact_support() {
    let r = density_class(&space("H[s=3/4,p=2,bc=zero]"));
    match r.outcome {
        Outcome::DenseClass { class, note, .. } => {
            assert_eq!(class, TestClass::CompactInOpenHalfSpace);
            assert!(note.is_none());
        }
        other => panic!("{other}"),
    }
}

#[test]
fn low_smoothness_means_no_trace_conditions() {
    let r = density_class(&space("H[s=1/4,p=2,bc=zero]"));
    match &r.outcome {
        Outcome::DenseClass { note, .. } => assert_eq!(note.as_deref(), Some("no trace conditions; space equals unrestricted space")),
        other => panic!("{other}"),
    }
    assert!(r.rule_ids().contains(&"density.no_conditions"));
}

#[test]
fn density_on_excluded_smoothness_is_rejected() {
    assert!(density_class(&space("H[s=3/2,p=2,bc=zero]")).is_rejected());
}

// ---- fubini_split ----------------------------------------------------------

#[test]
fn mixed_derivative_identity() {
    let r = fubini_split(2, q_int(2), q_int(2), 3, 1);
    match &r.outcome {
        Outcome::Equation { intersection, equals } => {
            assert_eq!(intersection.len(), 2);
            assert_eq!(equals, &space("W[k=2,p=2,gamma=2,d=3]"));
            assert_eq!(intersection[0].inner, space("W[k=2,p=2,gamma=2,d=1]"));
            assert_eq!(intersection[1].outer, space("W[k=2,p=2,d=2,dom=full]"));
        }
        other => panic!("{other}"),
    }
}

#[test]
fn mixed_derivative_trivial_for_order_zero() {
    let r = fubini_split(0, q_int(2), q_int(0), 2, 1);
    match &r.outcome {
        Outcome::Equation { intersection, equals } => {
            assert_eq!(equals.family, Family::Lebesgue);
            assert!(intersection.iter().all(|m| m.outer.family == Family::Lebesgue && m.inner.family == Family::Lebesgue));
        }
        other => panic!("{other}"),
    }
}

#[test]
fn mixed_derivative_on_excluded_weights_is_rejected() {
    assert!(fubini_split(1, q_int(2), q_int(1), 2, 1).is_rejected());
    // γ = 3 = 2p − 1 for p = 2 lies on the excluded lattice as well.
    assert!(fubini_split(2, q_int(2), q_int(3), 2, 1).is_rejected());
    assert!(fubini_split(2, q_int(2), q_int(2), 1, 1).is_rejected(), "d ≥ 2 required");
}
