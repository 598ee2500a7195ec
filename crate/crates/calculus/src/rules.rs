//! Catalog of the rules the engine applies.
//!
//! Each rule has a stable semantic id and a plain-language statement of what
//! it asserts and under which hypotheses. Results cite these ids; the
//! statements are written for this crate and are not reproductions of any
//! source text.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rule {
    pub id: &'static str,
    pub statement: &'static str,
}

const fn rule(id: &'static str, statement: &'static str) -> Rule {
    Rule { id, statement }
}

pub const RULES: &[Rule] = &[
    // Parameter admissibility.
    rule(
        "params.admissible",
        "Spaces are indexed by 1 < p < ∞, 1 ≤ q ≤ ∞, weight exponent γ > −1, dimension d ≥ 1 and fibre ℂ^r with r ≥ 1; Lebesgue spaces have smoothness 0 and Sobolev smoothness is a nonnegative integer.",
    ),
    rule(
        "params.muckenhoupt",
        "The power weight |x₁|^γ belongs to the Muckenhoupt class A_p exactly when −1 < γ < p − 1; every γ > −1 gives an A_∞ weight.",
    ),
    rule(
        "params.bessel_requires_ap",
        "Weighted Bessel potential spaces are defined through Fourier multipliers on L^p(w) and are only considered for A_p weights, −1 < γ < p − 1.",
    ),
    rule(
        "params.sobolev_excluded_weights",
        "Weighted Sobolev spaces on the half-space are treated for γ > −1 with the critical exponents γ = jp − 1 (j = 1, 2, …) excluded, because the trace theory degenerates there.",
    ),
    rule(
        "params.full_space_requires_ap",
        "For γ ≥ p − 1 the weight is not locally integrable against L^p functions across the hyperplane, so Sobolev spaces on all of ℝ^d are only used with A_p weights.",
    ),
    rule(
        "params.half_space_factor_norms",
        "Besov and Triebel–Lizorkin spaces on the half-space are restrictions of full-space spaces; with non-A_p weights their factor-space norms are not modelled here.",
    ),
    rule(
        "params.boundary_conditions",
        "Zero boundary conditions live on the half-space and are attached to Bessel potential or Sobolev spaces; a normal system has strictly increasing orders m₀ < … < m_n and each leading coefficient maps ℂ^r onto a target ℂ^{y_i} with y_i ≤ r.",
    ),
    rule("params.boundary_unweighted", "Spaces on the boundary hyperplane ℝ^{d−1} are unweighted."),
    // Traces.
    rule(
        "trace.threshold",
        "The trace Tr_m = Tr ∘ ∂₁^m of a space with smoothness s and weight |x₁|^γ exists only when s exceeds m + (γ+1)/p; at or below this threshold no trace rule applies.",
    ),
    rule(
        "trace.besov",
        "For γ > −1 and s > m + (γ+1)/p, Tr_m maps the weighted Besov space B^s_{p,q}(ℝ^d, w_γ) continuously onto B^{s−m−(γ+1)/p}_{p,q}(ℝ^{d−1}), with a continuous right inverse ext_m.",
    ),
    rule(
        "trace.besov_half_space",
        "For A_p weights the same Besov trace statement holds on the half-space, with the microscopic index q preserved.",
    ),
    rule(
        "trace.triebel_lizorkin",
        "For γ > −1 and s > m + (γ+1)/p, Tr_m maps F^s_{p,q}(ℝ^d, w_γ) continuously onto B^{s−m−(γ+1)/p}_{p,p}(ℝ^{d−1}); the target does not depend on q.",
    ),
    rule(
        "trace.bessel_potential",
        "For A_p weights and s > m + (γ+1)/p, Tr_m maps H^{s,p}(w_γ) on ℝ^d or ℝ^d₊ continuously onto B^{s−m−(γ+1)/p}_{p,p}(ℝ^{d−1}), with a right inverse ext_m independent of s, p, γ and satisfying Tr_j ∘ ext_m = 0 for j < m.",
    ),
    rule(
        "trace.sobolev_muckenhoupt",
        "For A_p weights and integer k > m + (γ+1)/p, Tr_m maps W^{k,p}(w_γ) on ℝ^d or ℝ^d₊ continuously onto B^{k−m−(γ+1)/p}_{p,p}(ℝ^{d−1}).",
    ),
    rule(
        "trace.sobolev_all_weights",
        "On the half-space, for every γ > −1 outside {jp − 1} and integer k > m + (γ+1)/p, Tr_m maps W^{k,p}(ℝ^d₊, w_γ) continuously onto B^{k−m−(γ+1)/p}_{p,p}(ℝ^{d−1}); the proof reduces the weight by Hardy's inequality to the A_p range.",
    ),
    rule(
        "trace.vector",
        "The vector of traces (Tr₀, …, Tr_m) maps onto the product of the individual trace spaces j = 0, …, m and has a continuous right inverse built from the single extensions.",
    ),
    // Interpolation.
    rule(
        "interp.identical_endpoints",
        "Complex interpolation of a space with itself returns the same space for every θ.",
    ),
    rule(
        "interp.symmetry",
        "Complex interpolation is symmetric: [X₀, X₁]_θ = [X₁, X₀]_{1−θ}; pairs are ordered by increasing smoothness before a rule is applied.",
    ),
    rule(
        "interp.sobolev",
        "For γ > −1 outside {jp − 1}, integers k₀ ≥ 0, k₁ ≥ 2 and ℓ ∈ {1, …, k₁−1}, interpolating W^{k₀,p} and W^{k₀+k₁,p} on the half-space at θ = ℓ/k₁ gives W^{k₀+ℓ,p}.",
    ),
    rule(
        "interp.sobolev_vanishing",
        "Under the same hypotheses the scale of Sobolev spaces with all existing traces vanishing interpolates to W₀^{k₀+ℓ,p} at θ = ℓ/k₁.",
    ),
    rule(
        "interp.sobolev_boundary",
        "For a normal boundary system whose top order m_n satisfies k₀ + k₁ > m_n + (γ+1)/p, interpolating W^{k₀,p} (with or without the conditions) and W_B^{k₀+k₁,p} at θ = ℓ/k₁ gives W_B^{k₀+ℓ,p}, which keeps exactly the conditions B^{m_i} f = 0 with m_i + (γ+1)/p < k₀ + ℓ.",
    ),
    rule(
        "interp.bessel_scale",
        "For A_p weights the Bessel potential spaces H^{s,p}(w_γ), s real, form a complex interpolation scale: [H^{s₀,p}, H^{s₁,p}]_θ = H^{(1−θ)s₀+θs₁,p}.",
    ),
    rule(
        "interp.bessel_vanishing",
        "For A_p weights and −1 + (γ+1)/p < s₀ < s₁ with s₀, s_θ, s₁ not of the form n + (γ+1)/p, the spaces H₀^{s,p} (all existing traces zero) interpolate to H₀^{s_θ,p}.",
    ),
    rule(
        "interp.bessel_boundary",
        "For A_p weights, a normal boundary system with s₁ > m_n + (γ+1)/p, s₀ > −1 + (γ+1)/p and s₀, s_θ, s₁ avoiding every m_i + (γ+1)/p, interpolating H^{s₀,p} (with or without the conditions) and H_B^{s₁,p} gives H_B^{s_θ,p}, keeping the conditions with m_i + (γ+1)/p < s_θ.",
    ),
    rule(
        "interp.sobolev_equals_bessel",
        "For A_p weights and integer k, W^{k,p}(w_γ) and H^{k,p}(w_γ) coincide, so Sobolev endpoints can be interpolated inside the Bessel potential scale.",
    ),
    rule(
        "interp.open_fractional",
        "For γ ≥ p − 1 only integer-smoothness interpolation of weighted Sobolev spaces is known; fractional intermediate smoothness is an open problem and is refused.",
    ),
    rule(
        "interp.localisation",
        "The half-space interpolation identities transfer to bounded C^∞ domains with weight dist(x, ∂O)^γ by localisation; no separate computation is performed for domains.",
    ),
    // Embeddings.
    rule("embed.identity", "Every space embeds into itself."),
    rule(
        "embed.sufficient_only",
        "Embeddings are derived from sufficient conditions only; failing to find a rule chain does not mean the embedding fails.",
    ),
    rule(
        "embed.microscopic_monotone",
        "For γ > −1 and q₀ ≤ q₁, B^s_{p,q₀}(w_γ) ↪ B^s_{p,q₁}(w_γ) and F^s_{p,q₀}(w_γ) ↪ F^s_{p,q₁}(w_γ).",
    ),
    rule(
        "embed.besov_tl_sandwich",
        "For γ > −1, B^s_{p,min(p,q)}(w_γ) ↪ F^s_{p,q}(w_γ) ↪ B^s_{p,max(p,q)}(w_γ).",
    ),
    rule(
        "embed.tl_bessel_sandwich",
        "For A_p weights, F^s_{p,1}(w_γ) ↪ H^{s,p}(w_γ) ↪ F^s_{p,∞}(w_γ), and likewise with W^{k,p} for integer k.",
    ),
    rule("embed.tl_lebesgue", "For every γ > −1, F^0_{p,1}(w_γ) ↪ L^p(w_γ)."),
    rule(
        "embed.weighted_sobolev",
        "For 1 < p₀ ≤ p₁ < ∞, s₀ > s₁, γ₀, γ₁ > −1 with γ₁/p₁ ≤ γ₀/p₀ and s₀ − (d+γ₀)/p₀ = s₁ − (d+γ₁)/p₁: F^{s₀}_{p₀,q₀}(w_{γ₀}) ↪ F^{s₁}_{p₁,q₁}(w_{γ₁}) for all q₀, q₁, and the Besov analogue holds when q₀ ≤ q₁.",
    ),
    rule(
        "embed.sobolev_lower_order",
        "The W^{k,p}(w_γ) norm contains all lower-order derivatives, so W^{k,p}(w_γ) ↪ W^{j,p}(w_γ) for j ≤ k (W^{0,p} = L^p).",
    ),
    rule(
        "embed.hardy",
        "For γ > p − 1 and k ≥ 1, Hardy's inequality gives W^{k,p}(ℝ^d₊, w_γ) ↪ W^{k−1,p}(ℝ^d₊, w_{γ−p}).",
    ),
    rule(
        "embed.bessel_equals_sobolev",
        "For A_p weights and integer k, H^{k,p}(w_γ) = W^{k,p}(w_γ) with equivalent norms.",
    ),
    rule("embed.closed_subspace", "A space with zero boundary conditions is a closed subspace of the unconstrained space."),
    // Density.
    rule(
        "density.no_conditions",
        "If s ≤ (γ+1)/p no trace exists, so H₀^{s,p}(w_γ) is the whole space H^{s,p}(w_γ).",
    ),
    rule(
        "density.bessel_vanishing",
        "For A_p weights, s > −1 + (γ+1)/p and s not of the form n + (γ+1)/p, H₀^{s,p} on ℝ^d is the closure of smooth functions compactly supported away from the hyperplane, and on ℝ^d₊ the closure of C_c^∞ of the open half-space.",
    ),
    rule(
        "density.boundary_flat",
        "For k ≥ m and γ > −1 avoiding jp − 1 for j = 1, …, k−m, the Sobolev space with Tr_m f = 0 is the closure of compactly supported smooth functions on the closed half-space with (∂₁^m f)|_{x₁=0} = 0.",
    ),
    rule(
        "density.derivative_compact",
        "If k ≥ m + 1 and (k−m−1)p − 1 < γ < (k−m)p − 1, so that Tr_m exists but no higher trace does, the space with Tr_m f = 0 is the closure of C^∞_{c,m}: smooth functions whose m-th normal derivative has compact support in the open half-space.",
    ),
    // Fubini.
    rule(
        "fubini.mixed_derivative",
        "For d ≥ 2, k ≥ 0 and γ > −1 outside {jp − 1}, W^{k,p}(ℝ^d₊, w_γ) equals L^p(ℝ^{d−1}; W^{k,p}(ℝ₊, w_γ)) ∩ W^{k,p}(ℝ^{d−1}; L^p(ℝ₊, w_γ)); the proof interpolates the half-line Sobolev scale.",
    ),
];

/// Looks a rule up by id.
pub fn lookup(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_statements_nonempty() {
        for (i, r) in RULES.iter().enumerate() {
            assert!(!r.statement.is_empty(), "{}", r.id);
            assert!(RULES[i + 1..].iter().all(|o| o.id != r.id), "duplicate id {}", r.id);
        }
        assert!(lookup("trace.besov").is_some());
        assert!(lookup("no.such.rule").is_none());
    }
}
