//! The rule engine: total functions from descriptors to cited results.
//!
//! Every operation returns a [`QueryResult`]; inadmissible input is reported
//! as an [`Outcome::Rejected`] value naming the violated condition, never as
//! an error or panic.

use std::collections::{HashSet, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::result::{MixedSpace, Outcome, QueryResult, RuleCitation, TestClass, Truth};
use crate::types::{
    excluded_gamma_index, fmt_q, q_int, trace_loss, BoundaryConditions, DescriptorError, Domain, Exponent, Family, ParamSet, SpaceDescriptor, Q,
};

/// Tunables of the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Longest chain of single embedding rules `embeds` will compose.
    pub max_embedding_depth: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { max_embedding_depth: 3 }
    }
}

fn cite(id: &str, assumptions: Vec<String>) -> RuleCitation {
    RuleCitation::new(id, assumptions)
}

fn describe_params(p: &ParamSet) -> Vec<String> {
    let mut v = vec![format!("p = {} > 1", fmt_q(&p.p)), format!("γ = {} > −1", fmt_q(&p.gamma))];
    v.push(format!("d = {}, r = {}", p.dim, p.fiber_dim));
    v
}

fn muckenhoupt_assumption(p: &ParamSet) -> String {
    if p.muckenhoupt() {
        format!("γ = {} ∈ (−1, p−1) = (−1, {})", fmt_q(&p.gamma), fmt_q(&(p.p - Q::one())))
    } else {
        format!("γ = {} ≥ p−1 = {}", fmt_q(&p.gamma), fmt_q(&(p.p - Q::one())))
    }
}

/// Checks admissibility; `Ok(muckenhoupt)` or the rejection to return.
fn admissibility(desc: &SpaceDescriptor) -> Result<bool, QueryResult> {
    let p = &desc.params;
    if let Err(e) = desc.structural_check() {
        let id = match e {
            DescriptorError::BesselOutsideMuckenhoupt { .. } => "params.bessel_requires_ap",
            DescriptorError::ConditionsOffHalfSpace
            | DescriptorError::ConditionsOnFamily
            | DescriptorError::MalformedSystem
            | DescriptorError::TargetDimension(..) => "params.boundary_conditions",
            DescriptorError::WeightedBoundarySpace(_) => "params.boundary_unweighted",
            _ => "params.admissible",
        };
        return Err(QueryResult::rejected(e.to_string(), vec![cite(id, vec![desc.render()])]));
    }
    if desc.family == Family::Sobolev {
        if let Some(j) = excluded_gamma_index(p.p, p.gamma) {
            return Err(QueryResult::rejected(
                format!("γ = {j}·p−1 excluded"),
                vec![cite("params.sobolev_excluded_weights", vec![format!("γ = {} = {j}·{} − 1", fmt_q(&p.gamma), fmt_q(&p.p))])],
            ));
        }
        if desc.domain == Domain::FullSpace && !p.muckenhoupt() {
            return Err(QueryResult::rejected(
                format!("Sobolev spaces on the full space require an A_p weight: {}", muckenhoupt_assumption(p)),
                vec![cite("params.full_space_requires_ap", vec![muckenhoupt_assumption(p)])],
            ));
        }
    }
    if desc.family.uses_q() && desc.domain == Domain::HalfSpace && !p.muckenhoupt() {
        return Err(QueryResult::rejected(
            format!("half-space Besov/Triebel–Lizorkin spaces are only modelled for A_p weights: {}", muckenhoupt_assumption(p)),
            vec![cite("params.half_space_factor_norms", vec![muckenhoupt_assumption(p)])],
        ));
    }
    Ok(p.muckenhoupt())
}

/// Whether the rule engine accepts the descriptor at all.
pub fn is_admissible(desc: &SpaceDescriptor) -> bool {
    admissibility(desc).is_ok()
}

/// Classifies the parameters: admissible (with the `A_p` flag) or rejected
/// with the violated condition.
pub fn validate_params(desc: &SpaceDescriptor) -> QueryResult {
    match admissibility(desc) {
        Err(rejection) => rejection,
        Ok(muckenhoupt) => QueryResult::new(
            Outcome::Valid { muckenhoupt },
            vec![cite("params.admissible", describe_params(&desc.params)), cite("params.muckenhoupt", vec![muckenhoupt_assumption(&desc.params)])],
        ),
    }
}

fn threshold_assumption(p: &ParamSet, m: u32) -> String {
    format!("s = {} > m + (γ+1)/p = {}", fmt_q(&p.smoothness), fmt_q(&p.trace_threshold(m)))
}

/// The space of `m`-th order traces `Tr_m f = (∂₁^m f)|_{x₁=0}`.
pub fn trace_space(desc: &SpaceDescriptor, m: u32) -> QueryResult {
    if let Err(rejection) = admissibility(desc) {
        return rejection;
    }
    let p = &desc.params;
    if desc.bc.is_some() {
        return QueryResult::rejected(
            "traces are computed for unconstrained spaces; drop the boundary conditions",
            vec![cite("params.boundary_conditions", vec![desc.render()])],
        );
    }
    if p.dim < 2 {
        return QueryResult::rejected("the trace hyperplane of ℝ^1 is a point; traces need d ≥ 2", vec![cite("params.admissible", vec![format!("d = {}", p.dim)])]);
    }
    let (rule, target_q) = match (desc.family, desc.domain) {
        (_, Domain::BoundaryHyperplane) => {
            return QueryResult::rejected("the space already lives on the boundary hyperplane", vec![cite("params.boundary_unweighted", vec![desc.render()])])
        }
        (Family::Besov, Domain::FullSpace) => ("trace.besov", p.q),
        (Family::Besov, Domain::HalfSpace) => ("trace.besov_half_space", p.q),
        (Family::TriebelLizorkin, Domain::FullSpace) => ("trace.triebel_lizorkin", Exponent::Finite(p.p)),
        (Family::TriebelLizorkin, Domain::HalfSpace) => {
            return QueryResult::rejected(
                "no trace rule for Triebel–Lizorkin spaces on the half-space",
                vec![cite("params.half_space_factor_norms", vec![desc.render()])],
            )
        }
        (Family::BesselPotential, _) => ("trace.bessel_potential", Exponent::Finite(p.p)),
        (Family::Sobolev, _) if p.muckenhoupt() => ("trace.sobolev_muckenhoupt", Exponent::Finite(p.p)),
        (Family::Sobolev, _) => ("trace.sobolev_all_weights", Exponent::Finite(p.p)),
        (Family::Lebesgue, _) => ("trace.threshold", Exponent::Finite(p.p)),
    };
    if !p.trace_exists(m) {
        return QueryResult::rejected(
            format!(
                "below trace threshold: requires s > m + (γ+1)/p, but s = {} and m + (γ+1)/p = {}",
                fmt_q(&p.smoothness),
                fmt_q(&p.trace_threshold(m))
            ),
            vec![cite("trace.threshold", vec![format!("m = {m}"), format!("(γ+1)/p = {}", fmt_q(&p.trace_loss()))])],
        );
    }
    let mut assumptions = vec![threshold_assumption(p, m), format!("m = {m}")];
    if rule != "trace.besov" && rule != "trace.triebel_lizorkin" {
        assumptions.push(muckenhoupt_assumption(p));
    }
    let target = SpaceDescriptor::raw(
        Family::Besov,
        ParamSet::new(p.p, target_q, p.smoothness - p.trace_threshold(m), Q::zero(), p.dim - 1, p.fiber_dim),
        Domain::BoundaryHyperplane,
        None,
    );
    QueryResult::new(Outcome::Space { space: target }, vec![cite(rule, assumptions)])
}

/// The range of `(Tr₀, …, Tr_m)`: the product of the single trace spaces.
pub fn trace_vector_space(desc: &SpaceDescriptor, m: u32) -> QueryResult {
    if m == 0 {
        return trace_space(desc, 0);
    }
    if let Err(rejection) = admissibility(desc) {
        return rejection;
    }
    let mut factors = Vec::new();
    let mut citations = vec![cite("trace.vector", vec![format!("m = {m}")])];
    for j in 0..=m {
        let component = trace_space(desc, j);
        for c in component.citations.iter() {
            if !citations.contains(c) {
                citations.push(c.clone());
            }
        }
        match component.outcome {
            Outcome::Space { space } => factors.push(space),
            Outcome::Rejected { reason } => return QueryResult::rejected(format!("component Tr_{j}: {reason}"), citations),
            other => unreachable!("trace_space returned {other:?}"),
        }
    }
    QueryResult::new(Outcome::Product { factors }, citations)
}

fn with_smoothness(desc: &SpaceDescriptor, family: Family, s: Q, bc: Option<BoundaryConditions>) -> SpaceDescriptor {
    SpaceDescriptor::raw(family, ParamSet { smoothness: s, ..desc.params }, desc.domain, bc)
}

fn mismatches(d0: &SpaceDescriptor, d1: &SpaceDescriptor) -> Vec<String> {
    let (a, b) = (&d0.params, &d1.params);
    let mut out = Vec::new();
    if a.p != b.p {
        out.push(format!("p: {} vs {}", fmt_q(&a.p), fmt_q(&b.p)));
    }
    if a.gamma != b.gamma {
        out.push(format!("γ: {} vs {}", fmt_q(&a.gamma), fmt_q(&b.gamma)));
    }
    if a.dim != b.dim {
        out.push(format!("d: {} vs {}", a.dim, b.dim));
    }
    if a.fiber_dim != b.fiber_dim {
        out.push(format!("r: {} vs {}", a.fiber_dim, b.fiber_dim));
    }
    if d0.domain != d1.domain {
        out.push(format!("domain: {} vs {}", d0.domain.keyword(), d1.domain.keyword()));
    }
    out
}

/// Outcome of trying to match the left endpoint's conditions against the
/// right endpoint's.
enum EndpointConditions {
    /// Left endpoint unconstrained at its own smoothness.
    Free,
    /// Left endpoint carries the right endpoint's conditions.
    Shared,
    Mismatch,
}

fn endpoint_conditions(d0: &SpaceDescriptor, d1: &SpaceDescriptor) -> EndpointConditions {
    let p = &d0.params;
    let left = d0.active_bc();
    let right_at_left = d1.bc.as_ref().and_then(|bc| bc.active_at(p.p, p.gamma, p.smoothness));
    match left {
        None => EndpointConditions::Free,
        Some(l) if Some(&l) == right_at_left.as_ref() => EndpointConditions::Shared,
        Some(_) => EndpointConditions::Mismatch,
    }
}

/// Complex interpolation `[d0, d1]_θ`.
pub fn interpolate(d0: &SpaceDescriptor, d1: &SpaceDescriptor, theta: Q) -> QueryResult {
    for (name, d) in [("left endpoint", d0), ("right endpoint", d1)] {
        if let Err(mut rejection) = admissibility(d) {
            if let Outcome::Rejected { reason } = &mut rejection.outcome {
                *reason = format!("{name}: {reason}");
            }
            return rejection;
        }
    }
    if theta <= Q::zero() || theta >= Q::one() {
        return QueryResult::rejected(format!("θ = {} must lie in (0, 1)", fmt_q(&theta)), vec![cite("interp.symmetry", vec![])]);
    }
    let diff = mismatches(d0, d1);
    if !diff.is_empty() {
        return QueryResult::rejected(format!("incompatible endpoints: {}", diff.join("; ")), vec![cite("params.admissible", diff)]);
    }
    if d0 == d1 {
        return QueryResult::new(Outcome::Space { space: d0.clone() }, vec![cite("interp.identical_endpoints", vec![])]);
    }
    let (s0, s1) = (d0.params.smoothness, d1.params.smoothness);
    if s0 > s1 {
        let mut swapped = interpolate(d1, d0, Q::one() - theta);
        swapped.citations.insert(0, cite("interp.symmetry", vec![format!("θ ↦ 1 − θ = {}", fmt_q(&(Q::one() - theta)))]));
        return swapped;
    }
    if s0 == s1 {
        return QueryResult::rejected("endpoints of equal smoothness with different conditions are not interpolated", vec![cite("interp.identical_endpoints", vec![])]);
    }
    let families = [d0.family, d1.family];
    if families.iter().any(|f| f.uses_q()) {
        return QueryResult::rejected(
            "no complex interpolation rule for Besov or Triebel–Lizorkin endpoints is encoded",
            vec![cite("interp.bessel_scale", vec![])],
        );
    }
    if d0.domain == Domain::BoundaryHyperplane {
        return QueryResult::rejected("no interpolation rule for boundary spaces is encoded", vec![cite("params.boundary_unweighted", vec![])]);
    }
    let sobolev_pair = families.iter().all(|f| matches!(f, Family::Sobolev | Family::Lebesgue));
    if sobolev_pair && d0.domain == Domain::HalfSpace {
        match interpolate_sobolev(d0, d1, theta) {
            Ok(result) => return result,
            Err(SobolevMiss::Fractional) if !d0.params.muckenhoupt() => {
                return QueryResult::rejected(
                    "open problem: fractional intermediate smoothness for γ ≥ p−1",
                    vec![cite("interp.open_fractional", vec![muckenhoupt_assumption(&d0.params), format!("θ·(k₁ − k₀) = {}", fmt_q(&(theta * (s1 - s0))))])],
                )
            }
            Err(SobolevMiss::Fractional) => {}
            Err(SobolevMiss::Rejected(r)) => return r,
        }
    }
    // Bessel potential route (A_p only; W^k = H^k there).
    if !d0.params.muckenhoupt() {
        return QueryResult::rejected("no interpolation rule applies outside A_p for these endpoints", vec![cite("interp.open_fractional", vec![muckenhoupt_assumption(&d0.params)])]);
    }
    let mut citations = Vec::new();
    if families.contains(&Family::Sobolev) {
        citations.push(cite("interp.sobolev_equals_bessel", vec![muckenhoupt_assumption(&d0.params)]));
    }
    let result = interpolate_bessel(d0, d1, theta);
    citations.extend(result.citations);
    let outcome = match result.outcome {
        // For A_p weights H^{k,p} = W^{k,p}; integer smoothness is reported in
        // the Sobolev form so that every space has a single descriptor.
        Outcome::Space { space } if space.family == Family::BesselPotential && space.params.smoothness.is_integer() && space.params.smoothness >= Q::zero() => {
            let equal = cite("interp.sobolev_equals_bessel", vec![muckenhoupt_assumption(&d0.params)]);
            if !citations.contains(&equal) {
                citations.push(equal);
            }
            Outcome::Space { space: SpaceDescriptor::raw(Family::Sobolev, space.params, space.domain, space.bc) }
        }
        other => other,
    };
    QueryResult { outcome, citations }
}

enum SobolevMiss {
    /// `θ(k₁−k₀)` is not an integer (or `k₁−k₀ = 1`): no integer-scale rule.
    Fractional,
    Rejected(QueryResult),
}

fn interpolate_sobolev(d0: &SpaceDescriptor, d1: &SpaceDescriptor, theta: Q) -> Result<QueryResult, SobolevMiss> {
    let p = &d0.params;
    let (k0, k_top) = (p.smoothness, d1.params.smoothness);
    let k1 = k_top - k0;
    let ell = theta * k1;
    if !ell.is_integer() || k1 < q_int(2) {
        return Err(SobolevMiss::Fractional);
    }
    let target = k0 + ell;
    let scale = vec![
        format!("k₀ = {}, k₁ = {}, ℓ = {}", fmt_q(&k0), fmt_q(&k1), fmt_q(&ell)),
        format!("θ = ℓ/k₁ = {}", fmt_q(&theta)),
        format!("γ = {} ∉ {{jp − 1}}", fmt_q(&p.gamma)),
    ];
    let localisation = cite("interp.localisation", vec![]);
    match (&d0.bc, &d1.bc) {
        (_, None) if d0.active_bc().is_none() => {
            let space = with_smoothness(d0, Family::Sobolev, target, None);
            Ok(QueryResult::new(Outcome::Space { space }, vec![cite("interp.sobolev", scale), localisation]))
        }
        (Some(BoundaryConditions::Vanishing) | None, Some(BoundaryConditions::Vanishing)) if d0.bc.is_some() || d0.with_vanishing_is_free() => {
            let bc = BoundaryConditions::Vanishing.active_at(p.p, p.gamma, target);
            let space = with_smoothness(d0, Family::Sobolev, target, bc);
            Ok(QueryResult::new(Outcome::Space { space }, vec![cite("interp.sobolev_vanishing", scale), localisation]))
        }
        (_, Some(BoundaryConditions::Normal(sig))) => {
            let top = sig.top_order().expect("validated systems are nonempty");
            if !d1.params.trace_exists(top) {
                return Err(SobolevMiss::Rejected(QueryResult::rejected(
                    format!(
                        "boundary system is not of type at the right endpoint: requires k₀ + k₁ > m_n + (γ+1)/p, but k₀ + k₁ = {} and m_n + (γ+1)/p = {}",
                        fmt_q(&k_top),
                        fmt_q(&d1.params.trace_threshold(top))
                    ),
                    vec![cite("interp.sobolev_boundary", vec![format!("m_n = {top}")])],
                )));
            }
            if let EndpointConditions::Mismatch = endpoint_conditions(d0, d1) {
                return Err(SobolevMiss::Rejected(no_pairing_rule()));
            }
            let bc = d1.bc.as_ref().and_then(|bc| bc.active_at(p.p, p.gamma, target));
            let mut assumptions = scale;
            assumptions.push(format!("k₀ + k₁ = {} > m_n + (γ+1)/p = {}", fmt_q(&k_top), fmt_q(&d1.params.trace_threshold(top))));
            let space = with_smoothness(d0, Family::Sobolev, target, bc);
            Ok(QueryResult::new(Outcome::Space { space }, vec![cite("interp.sobolev_boundary", assumptions), localisation]))
        }
        _ => Err(SobolevMiss::Rejected(no_pairing_rule())),
    }
}

fn no_pairing_rule() -> QueryResult {
    QueryResult::rejected(
        "no rule for this pairing of boundary conditions: the left endpoint must be unconstrained or carry the right endpoint's conditions",
        vec![cite("interp.sobolev_boundary", vec![])],
    )
}

fn avoids_thresholds(values: &[(&str, Q)], thresholds: &[Q]) -> Result<(), String> {
    for (name, v) in values {
        if let Some(t) = thresholds.iter().find(|t| *t == v) {
            return Err(format!("{name} = {} coincides with the trace threshold {}", fmt_q(v), fmt_q(t)));
        }
    }
    Ok(())
}

fn interpolate_bessel(d0: &SpaceDescriptor, d1: &SpaceDescriptor, theta: Q) -> QueryResult {
    let p = &d0.params;
    let (s0, s1) = (p.smoothness, d1.params.smoothness);
    let s_theta = (Q::one() - theta) * s0 + theta * s1;
    let loss = p.trace_loss();
    let scale = vec![format!("s₀ = {} < s_θ = {} < s₁ = {}", fmt_q(&s0), fmt_q(&s_theta), fmt_q(&s1)), muckenhoupt_assumption(p)];
    let lower_ok = s0 > loss - Q::one();
    let lower = format!("s₀ = {} > −1 + (γ+1)/p = {}", fmt_q(&s0), fmt_q(&(loss - Q::one())));
    let points = [("s₀", s0), ("s_θ", s_theta), ("s₁", s1)];
    match (&d0.bc, &d1.bc) {
        (_, None) if d0.active_bc().is_none() => {
            let space = with_smoothness(d0, Family::BesselPotential, s_theta, None);
            QueryResult::new(Outcome::Space { space }, vec![cite("interp.bessel_scale", scale)])
        }
        (Some(BoundaryConditions::Vanishing) | None, Some(BoundaryConditions::Vanishing))
            if d0.bc.is_some() || d0.with_vanishing_is_free() =>
        {
            let thresholds: Vec<Q> = (0..=s1.ceil().to_integer().max(0)).map(|n| q_int(n) + loss).collect();
            if !lower_ok {
                return QueryResult::rejected(format!("requires {lower}"), vec![cite("interp.bessel_vanishing", vec![])]);
            }
            if let Err(e) = avoids_thresholds(&points, &thresholds) {
                return QueryResult::rejected(format!("excluded smoothness: {e}"), vec![cite("interp.bessel_vanishing", vec![])]);
            }
            let bc = BoundaryConditions::Vanishing.active_at(p.p, p.gamma, s_theta);
            let mut assumptions = scale;
            assumptions.push(lower);
            let space = with_smoothness(d0, Family::BesselPotential, s_theta, bc);
            QueryResult::new(Outcome::Space { space }, vec![cite("interp.bessel_vanishing", assumptions)])
        }
        (_, Some(BoundaryConditions::Normal(sig))) => {
            let top = sig.top_order().expect("validated systems are nonempty");
            if !d1.params.trace_exists(top) {
                return QueryResult::rejected(
                    format!(
                        "boundary system is not of type at the right endpoint: requires s₁ > m_n + (γ+1)/p, but s₁ = {} and m_n + (γ+1)/p = {}",
                        fmt_q(&s1),
                        fmt_q(&d1.params.trace_threshold(top))
                    ),
                    vec![cite("interp.bessel_boundary", vec![format!("m_n = {top}")])],
                );
            }
            if !lower_ok {
                return QueryResult::rejected(format!("requires {lower}"), vec![cite("interp.bessel_boundary", vec![])]);
            }
            let thresholds: Vec<Q> = sig.orders.iter().map(|&m| q_int(i64::from(m)) + loss).collect();
            if let Err(e) = avoids_thresholds(&points, &thresholds) {
                return QueryResult::rejected(format!("excluded smoothness: {e}"), vec![cite("interp.bessel_boundary", vec![])]);
            }
            if let EndpointConditions::Mismatch = endpoint_conditions(d0, d1) {
                return QueryResult::rejected(
                    "no rule for this pairing of boundary conditions: the left endpoint must be unconstrained or carry the right endpoint's conditions",
                    vec![cite("interp.bessel_boundary", vec![])],
                );
            }
            let bc = d1.bc.as_ref().and_then(|bc| bc.active_at(p.p, p.gamma, s_theta));
            let mut assumptions = scale;
            assumptions.push(lower);
            let space = with_smoothness(d0, Family::BesselPotential, s_theta, bc);
            QueryResult::new(Outcome::Space { space }, vec![cite("interp.bessel_boundary", assumptions)])
        }
        _ => QueryResult::rejected(
            "no rule for this pairing of boundary conditions: the left endpoint must be unconstrained or carry the right endpoint's conditions",
            vec![cite("interp.bessel_boundary", vec![])],
        ),
    }
}

impl SpaceDescriptor {
    /// Whether imposing "all traces vanish" on this space changes nothing.
    fn with_vanishing_is_free(&self) -> bool {
        BoundaryConditions::Vanishing.active_at(self.params.p, self.params.gamma, self.params.smoothness).is_none()
    }
}

/// One application of an embedding rule.
#[derive(Clone, Debug)]
struct Step {
    to: SpaceDescriptor,
    rules: Vec<&'static str>,
    assumptions: Vec<String>,
}

fn step(to: SpaceDescriptor, rules: Vec<&'static str>, assumptions: Vec<String>) -> Step {
    Step { to, rules, assumptions }
}

fn q_candidates(a: &SpaceDescriptor, t: &SpaceDescriptor) -> Vec<Exponent> {
    let mut c = Vec::new();
    if t.family.uses_q() {
        c.push(t.params.q);
    }
    c.extend([a.params.q, Exponent::Finite(a.params.p), Exponent::Finite(Q::one()), Exponent::Infinity]);
    let mut seen = Vec::new();
    c.retain(|q| {
        let fresh = !seen.contains(q);
        seen.push(*q);
        fresh
    });
    c
}

fn with_params(a: &SpaceDescriptor, family: Family, params: ParamSet, bc: Option<BoundaryConditions>) -> SpaceDescriptor {
    SpaceDescriptor::raw(family, params, a.domain, bc)
}

fn exp_str(q: &Exponent) -> String {
    q.to_string()
}

/// The smoothness of `a` when it can be viewed as a Bessel potential space
/// `H^{s,p}` (itself, `L^p`, or `W^{k,p}` with an `A_p` weight).
fn bessel_view(a: &SpaceDescriptor) -> Option<Q> {
    let ap = a.params.muckenhoupt();
    match a.family {
        Family::BesselPotential | Family::Lebesgue | Family::Sobolev if ap && a.bc.is_none() => Some(a.params.smoothness),
        _ => None,
    }
}

/// All single-rule successors of `a`, guided by the target `t`.
fn successors(a: &SpaceDescriptor, t: &SpaceDescriptor) -> Vec<Step> {
    let p = a.params;
    let mut out = Vec::new();
    let same_frame = a.params.dim == t.params.dim && a.params.fiber_dim == t.params.fiber_dim;

    if a.bc.is_some() {
        out.push(step(a.without_bc(), vec!["embed.closed_subspace"], vec![]));
    }
    // H^k = W^k for A_p weights (keeping any boundary conditions).
    if p.muckenhoupt() && p.smoothness.is_integer() && !p.smoothness.is_negative() && a.domain != Domain::BoundaryHyperplane {
        let swapped = match a.family {
            Family::BesselPotential => Some(Family::Sobolev),
            Family::Sobolev => Some(Family::BesselPotential),
            _ => None,
        };
        if let Some(f) = swapped {
            out.push(step(with_params(a, f, p, a.bc.clone()), vec!["embed.bessel_equals_sobolev"], vec![muckenhoupt_assumption(&p)]));
        }
    }
    // Lower-order Sobolev norms: W^k ↪ W^j for every j < k.
    if a.family == Family::Sobolev && a.bc.is_none() && a.domain != Domain::BoundaryHyperplane {
        for j in 0..p.smoothness.to_integer() {
            let j = q_int(j);
            out.push(step(
                with_params(a, Family::Sobolev, ParamSet { smoothness: j, ..p }, None),
                vec!["embed.sobolev_lower_order"],
                vec![format!("j = {} ≤ k = {}", fmt_q(&j), fmt_q(&p.smoothness))],
            ));
        }
    }
    // Hardy: W^{k}(w_γ) ↪ W^{k−1}(w_{γ−p}) for γ > p − 1.
    if a.family == Family::Sobolev && a.domain == Domain::HalfSpace && a.bc.is_none() && p.gamma > p.p - Q::one() && p.smoothness >= Q::one() {
        let to = with_params(a, Family::Sobolev, ParamSet { smoothness: p.smoothness - Q::one(), gamma: p.gamma - p.p, ..p }, None);
        out.push(step(to, vec!["embed.hardy"], vec![format!("γ = {} > p − 1", fmt_q(&p.gamma)), format!("k = {} ≥ 1", fmt_q(&p.smoothness))]));
    }
    if a.domain == Domain::FullSpace && a.bc.is_none() {
        let q_list = q_candidates(a, t);
        match a.family {
            Family::Besov | Family::TriebelLizorkin => {
                for &q1 in &q_list {
                    if q1 > p.q {
                        out.push(step(
                            with_params(a, a.family, ParamSet { q: q1, ..p }, None),
                            vec!["embed.microscopic_monotone"],
                            vec![format!("q₀ = {} ≤ q₁ = {}", exp_str(&p.q), exp_str(&q1))],
                        ));
                    }
                }
            }
            _ => {}
        }
        let pp = Exponent::Finite(p.p);
        if a.family == Family::Besov {
            for &q1 in &q_list {
                if p.q <= pp.min(q1) {
                    out.push(step(
                        with_params(a, Family::TriebelLizorkin, ParamSet { q: q1, ..p }, None),
                        vec!["embed.microscopic_monotone", "embed.besov_tl_sandwich"],
                        vec![format!("q₀ = {} ≤ min(p, q) = {}", exp_str(&p.q), exp_str(&pp.min(q1)))],
                    ));
                }
            }
        }
        if a.family == Family::TriebelLizorkin {
            for &q1 in &q_list {
                if q1 >= pp.max(p.q) {
                    out.push(step(
                        with_params(a, Family::Besov, ParamSet { q: q1, ..p }, None),
                        vec!["embed.besov_tl_sandwich", "embed.microscopic_monotone"],
                        vec![format!("q₁ = {} ≥ max(p, q) = {}", exp_str(&q1), exp_str(&pp.max(p.q)))],
                    ));
                }
            }
            if p.q == Exponent::Finite(Q::one()) {
                if p.muckenhoupt() {
                    let to = with_params(a, Family::BesselPotential, p, None);
                    out.push(step(to, vec!["embed.tl_bessel_sandwich"], vec!["q = 1".into(), muckenhoupt_assumption(&p)]));
                    if p.smoothness.is_integer() && p.smoothness.is_positive() {
                        let to = with_params(a, Family::Sobolev, p, None);
                        out.push(step(to, vec!["embed.tl_bessel_sandwich"], vec!["q = 1".into(), muckenhoupt_assumption(&p)]));
                    }
                }
                if p.smoothness.is_zero() {
                    out.push(step(with_params(a, Family::Lebesgue, p, None), vec!["embed.tl_lebesgue"], vec!["q = 1".into()]));
                }
            }
        }
        if let Some(s) = bessel_view(a) {
            let to = with_params(a, Family::TriebelLizorkin, ParamSet { q: Exponent::Infinity, smoothness: s, ..p }, None);
            out.push(step(to, vec!["embed.tl_bessel_sandwich"], vec![muckenhoupt_assumption(&p)]));
        }
        // Weighted Sobolev embedding towards the target's (p, γ).
        if a.family.uses_q() && same_frame {
            let (p0, g0, p1, g1) = (p.p, p.gamma, t.params.p, t.params.gamma);
            let d = q_int(i64::from(p.dim));
            let s1 = p.smoothness - (d + g0) / p0 + (d + g1) / p1;
            if p0 <= p1 && g1 * p0 <= g0 * p1 && s1 < p.smoothness && g1 > -Q::one() {
                for &q1 in &q_list {
                    if a.family == Family::Besov && q1 < p.q {
                        continue;
                    }
                    let to = with_params(a, a.family, ParamSet { p: p1, q: q1, smoothness: s1, gamma: g1, ..p }, None);
                    out.push(step(
                        to,
                        vec!["embed.weighted_sobolev"],
                        vec![
                            format!("p₀ = {} ≤ p₁ = {}", fmt_q(&p0), fmt_q(&p1)),
                            format!("γ₁/p₁ = {} ≤ γ₀/p₀ = {}", fmt_q(&(g1 / p1)), fmt_q(&(g0 / p0))),
                            format!("s₀ − (d+γ₀)/p₀ = s₁ − (d+γ₁)/p₁ = {}", fmt_q(&(p.smoothness - (d + g0) / p0))),
                        ],
                    ));
                }
            }
        }
    }
    out.retain(|s| &s.to != a && is_admissible(&s.to));
    out
}

/// Decides `d0 ↪ d1` by searching chains of at most
/// [`EngineConfig::max_embedding_depth`] rules. Answers `true` with the
/// chain's citations, or `unknown`; never `false`.
pub fn embeds_with(d0: &SpaceDescriptor, d1: &SpaceDescriptor, config: &EngineConfig) -> QueryResult {
    embedding_chain(d0, d1, config).0
}

/// `embeds_with` under the default configuration.
pub fn embeds(d0: &SpaceDescriptor, d1: &SpaceDescriptor) -> QueryResult {
    embeds_with(d0, d1, &EngineConfig::default())
}

/// Length of the shortest rule chain proving `d0 ↪ d1`, if one exists within
/// the configured depth.
pub fn embedding_depth(d0: &SpaceDescriptor, d1: &SpaceDescriptor, config: &EngineConfig) -> Option<usize> {
    embedding_chain(d0, d1, config).1
}

fn embedding_chain(d0: &SpaceDescriptor, d1: &SpaceDescriptor, config: &EngineConfig) -> (QueryResult, Option<usize>) {
    for d in [d0, d1] {
        if let Err(rejection) = admissibility(d) {
            return (rejection, None);
        }
    }
    if d0 == d1 {
        return (QueryResult::new(Outcome::Boolean { value: Truth::True }, vec![cite("embed.identity", vec![])]), Some(0));
    }
    let mut seen: HashSet<SpaceDescriptor> = HashSet::from([d0.clone()]);
    let mut queue: VecDeque<(SpaceDescriptor, Vec<Step>)> = VecDeque::from([(d0.clone(), Vec::new())]);
    while let Some((node, path)) = queue.pop_front() {
        if path.len() >= config.max_embedding_depth {
            continue;
        }
        for next in successors(&node, d1) {
            if !seen.insert(next.to.clone()) {
                continue;
            }
            let mut chain = path.clone();
            chain.push(next.clone());
            if next.to == *d1 {
                let depth = chain.len();
                let citations = chain
                    .into_iter()
                    .flat_map(|s| {
                        let assumptions = s.assumptions;
                        let target = s.to.render();
                        s.rules.into_iter().map(move |id| {
                            let mut a = assumptions.clone();
                            a.push(format!("↪ {target}"));
                            cite(id, a)
                        })
                    })
                    .collect();
                return (QueryResult::new(Outcome::Boolean { value: Truth::True }, citations), Some(depth));
            }
            queue.push_back((next.to, chain));
        }
    }
    (
        QueryResult::new(
            Outcome::Boolean { value: Truth::Unknown },
            vec![cite("embed.sufficient_only", vec![format!("no chain of at most {} rules found", config.max_embedding_depth)])],
        ),
        None,
    )
}

/// Names a dense class of test functions for a space with zero traces.
pub fn density_class(desc: &SpaceDescriptor) -> QueryResult {
    if let Err(rejection) = admissibility(desc) {
        return rejection;
    }
    let p = &desc.params;
    let loss = p.trace_loss();
    match (&desc.family, &desc.bc) {
        (Family::BesselPotential, Some(BoundaryConditions::Vanishing)) => {
            let s = p.smoothness;
            if s <= loss - Q::one() {
                return QueryResult::rejected(
                    format!("requires s > −1 + (γ+1)/p, but s = {} and −1 + (γ+1)/p = {}", fmt_q(&s), fmt_q(&(loss - Q::one()))),
                    vec![cite("density.bessel_vanishing", vec![])],
                );
            }
            if (s - loss).is_integer() && s - loss >= Q::zero() {
                return QueryResult::rejected(
                    format!("excluded smoothness: s = {} lies in ℕ₀ + (γ+1)/p", fmt_q(&s)),
                    vec![cite("density.bessel_vanishing", vec![format!("s − (γ+1)/p = {}", fmt_q(&(s - loss)))])],
                );
            }
            let class = match desc.domain {
                Domain::FullSpace => TestClass::CompactOffHyperplane,
                _ => TestClass::CompactInOpenHalfSpace,
            };
            let mut citations = vec![cite(
                "density.bessel_vanishing",
                vec![muckenhoupt_assumption(p), format!("s = {} > −1 + (γ+1)/p, s ∉ ℕ₀ + (γ+1)/p", fmt_q(&s))],
            )];
            let note = if s <= loss {
                citations.push(cite("density.no_conditions", vec![format!("s = {} ≤ (γ+1)/p = {}", fmt_q(&s), fmt_q(&loss))]));
                Some("no trace conditions; space equals unrestricted space".to_string())
            } else {
                None
            };
            QueryResult::new(Outcome::DenseClass { class, closure_in: desc.clone(), note }, citations)
        }
        (Family::Sobolev, Some(BoundaryConditions::Normal(sig))) if sig.pure_traces && sig.orders.len() == 1 => {
            let m = sig.orders[0];
            let (k, mq) = (p.smoothness, q_int(i64::from(m)));
            if k < mq {
                return QueryResult::rejected(format!("requires k ≥ m, but k = {} and m = {m}", fmt_q(&k)), vec![cite("density.boundary_flat", vec![])]);
            }
            let one = Q::one();
            let lower = (k - mq - one) * p.p - one;
            let upper = (k - mq) * p.p - one;
            if k >= mq + one && lower < p.gamma && p.gamma < upper {
                let citations = vec![
                    cite("density.derivative_compact", vec![format!("({}) < γ = {} < ({})", fmt_q(&lower), fmt_q(&p.gamma), fmt_q(&upper)), format!("k = {} ≥ m + 1", fmt_q(&k))]),
                    cite("density.boundary_flat", vec![format!("k = {} ≥ m = {m}", fmt_q(&k))]),
                ];
                return QueryResult::new(Outcome::DenseClass { class: TestClass::DerivativeCompact { m }, closure_in: desc.clone(), note: None }, citations);
            }
            let note = (!p.trace_exists(m)).then(|| format!("Tr_{m} does not exist here, so the condition is empty"));
            QueryResult::new(
                Outcome::DenseClass { class: TestClass::BoundaryFlat { m }, closure_in: desc.clone(), note },
                vec![cite("density.boundary_flat", vec![format!("k = {} ≥ m = {m}", fmt_q(&k)), format!("γ = {} ∉ {{jp − 1}}", fmt_q(&p.gamma))])],
            )
        }
        (_, None) => QueryResult::rejected("density classes are named for spaces with a zero-trace condition set", vec![cite("params.boundary_conditions", vec![])]),
        _ => QueryResult::rejected(
            "no density rule for this combination: use H with bc=zero or W with a single trace condition bc=tr{m}",
            vec![cite("density.boundary_flat", vec![])],
        ),
    }
}

/// The mixed-derivative identity for `W^{k,p}(ℝ^d₊, w_γ; ℂ^r)`.
pub fn fubini_split(k: u32, p: Q, gamma: Q, dim: u32, fiber_dim: u32) -> QueryResult {
    let k_q = q_int(i64::from(k));
    let params = ParamSet::new(p, Exponent::Finite(p), k_q, gamma, dim, fiber_dim);
    let whole = SpaceDescriptor::raw(Family::Sobolev, params, Domain::HalfSpace, None);
    if let Err(rejection) = admissibility(&whole) {
        return rejection;
    }
    if dim < 2 {
        return QueryResult::rejected(format!("requires d ≥ 2, got d = {dim}"), vec![cite("fubini.mixed_derivative", vec![])]);
    }
    let half_line = |s: Q| SpaceDescriptor::raw(Family::Sobolev, ParamSet::new(p, Exponent::Finite(p), s, gamma, 1, fiber_dim), Domain::HalfSpace, None);
    let tangential = |s: Q| SpaceDescriptor::raw(Family::Sobolev, ParamSet::new(p, Exponent::Finite(p), s, Q::zero(), dim - 1, fiber_dim), Domain::FullSpace, None);
    let intersection = vec![
        MixedSpace { outer: tangential(Q::zero()), inner: half_line(k_q) },
        MixedSpace { outer: tangential(k_q), inner: half_line(Q::zero()) },
    ];
    QueryResult::new(
        Outcome::Equation { intersection, equals: whole },
        vec![cite(
            "fubini.mixed_derivative",
            vec![format!("d = {dim} ≥ 2"), format!("k = {k}"), format!("γ = {} ∉ {{jp − 1}}", fmt_q(&gamma)), format!("(γ+1)/p = {}", fmt_q(&trace_loss(p, gamma)))],
        )],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::q_frac;

    fn w(k: i64, p: i64, gamma: Q) -> SpaceDescriptor {
        SpaceDescriptor::raw(Family::Sobolev, ParamSet::new(q_int(p), Exponent::Finite(q_int(p)), q_int(k), gamma, 2, 1), Domain::HalfSpace, None)
    }

    #[test]
    fn hardy_successor_lowers_weight_and_order() {
        let a = w(3, 2, q_frac(5, 2));
        let next = successors(&a, &w(2, 2, q_frac(1, 2)));
        assert!(next.iter().any(|s| s.rules == ["embed.hardy"] && s.to == w(2, 2, q_frac(1, 2))));
    }

    #[test]
    fn successors_are_admissible_and_new() {
        let a = w(2, 3, q_int(1));
        for s in successors(&a, &w(0, 3, q_int(1))) {
            assert!(is_admissible(&s.to));
            assert_ne!(s.to, a);
        }
    }
}
