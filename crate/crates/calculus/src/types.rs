//! Exact descriptors of power-weighted function spaces.
//!
//! Every parameter is an exact rational ([`Q`]) so that threshold comparisons
//! such as `s > m + (γ+1)/p` and the exclusion `γ ∈ {jp − 1}` are decided
//! without rounding. The microscopic exponent `q` may be infinite; infinity is
//! its own variant of [`Exponent`], never a sentinel number.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

/// Exact rational parameter type.
pub type Q = Rational64;

/// Shorthand for an integer-valued rational.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(n)
}

/// Shorthand for `n/d`.
pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Renders a rational as `n` or `n/d`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `(γ+1)/p`, the amount of smoothness a trace costs on top of its order.
pub fn trace_loss(p: Q, gamma: Q) -> Q {
    (gamma + Q::one()) / p
}

/// `Some(j)` when `γ = jp − 1` for an integer `j ≥ 1`, the weights excluded
/// from the Sobolev trace and interpolation theory.
pub fn excluded_gamma_index(p: Q, gamma: Q) -> Option<i64> {
    let j = trace_loss(p, gamma);
    (j.is_integer() && j >= Q::one()).then(|| j.to_integer())
}

/// Whether `|x₁|^γ` is a Muckenhoupt `A_p` weight, i.e. `γ ∈ (−1, p−1)`.
pub fn is_muckenhoupt(p: Q, gamma: Q) -> bool {
    gamma > -Q::one() && gamma < p - Q::one()
}

/// The microscopic exponent `q ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Q),
    Infinity,
}

impl Exponent {
    pub fn finite(&self) -> Option<Q> {
        match self {
            Exponent::Finite(q) => Some(*q),
            Exponent::Infinity => None,
        }
    }
}

impl From<Q> for Exponent {
    fn from(q: Q) -> Self {
        Exponent::Finite(q)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => a.cmp(b),
            (Exponent::Finite(_), Exponent::Infinity) => Ordering::Less,
            (Exponent::Infinity, Exponent::Finite(_)) => Ordering::Greater,
            (Exponent::Infinity, Exponent::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(q) => f.write_str(&fmt_q(q)),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Besov,
    TriebelLizorkin,
    BesselPotential,
    Sobolev,
    Lebesgue,
}

impl Family {
    pub fn symbol(self) -> &'static str {
        match self {
            Family::Besov => "B",
            Family::TriebelLizorkin => "F",
            Family::BesselPotential => "H",
            Family::Sobolev => "W",
            Family::Lebesgue => "L",
        }
    }

    /// Whether the microscopic exponent `q` is part of the space's identity.
    pub fn uses_q(self) -> bool {
        matches!(self, Family::Besov | Family::TriebelLizorkin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    FullSpace,
    HalfSpace,
    BoundaryHyperplane,
}

impl Domain {
    pub fn keyword(self) -> &'static str {
        match self {
            Domain::FullSpace => "full",
            Domain::HalfSpace => "half",
            Domain::BoundaryHyperplane => "bdry",
        }
    }
}

/// Identity of a system of normal boundary operators `(B^{m_0}, …, B^{m_n})`:
/// the strictly increasing orders and the fibre dimension of each target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NormalSystemSignature {
    pub orders: Vec<u32>,
    pub target_dims: Vec<u32>,
    /// Every operator is the bare trace `Tr_{m_i} = Tr ∘ ∂₁^{m_i}` (identity
    /// leading coefficient, target dimension equal to the fibre dimension).
    pub pure_traces: bool,
}

impl NormalSystemSignature {
    pub fn new(orders: Vec<u32>, target_dims: Vec<u32>) -> Self {
        Self { orders, target_dims, pure_traces: false }
    }

    /// The system `(Tr_{m_0}, …, Tr_{m_n})` on `ℂ^fiber`.
    pub fn traces(orders: Vec<u32>, fiber: u32) -> Self {
        let target_dims = vec![fiber; orders.len()];
        Self { orders, target_dims, pure_traces: true }
    }

    pub fn top_order(&self) -> Option<u32> {
        self.orders.last().copied()
    }

    fn retain_orders(&self, mut keep: impl FnMut(u32) -> bool) -> Option<Self> {
        let (orders, target_dims): (Vec<u32>, Vec<u32>) =
            self.orders.iter().zip(&self.target_dims).filter(|(&m, _)| keep(m)).map(|(&m, &y)| (m, y)).unzip();
        (!orders.is_empty()).then_some(Self { orders, target_dims, pure_traces: self.pure_traces })
    }
}

/// Zero boundary conditions attached to a half-space descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BoundaryConditions {
    /// `B^{m_i} f = 0` for every operator of the system whose trace exists.
    Normal(NormalSystemSignature),
    /// Every trace `Tr(∂^α f)` that exists vanishes (the `_0` spaces).
    Vanishing,
}

impl BoundaryConditions {
    /// Keeps only the conditions that are meaningful at smoothness `s`, i.e.
    /// those of order `m` with `m + (γ+1)/p < s`. `None` when nothing remains.
    pub fn active_at(&self, p: Q, gamma: Q, s: Q) -> Option<BoundaryConditions> {
        let loss = trace_loss(p, gamma);
        let active = |m: u32| q_int(i64::from(m)) + loss < s;
        match self {
            BoundaryConditions::Normal(sig) => sig.retain_orders(active).map(BoundaryConditions::Normal),
            BoundaryConditions::Vanishing => active(0).then_some(BoundaryConditions::Vanishing),
        }
    }

    /// Orders of the active conditions at smoothness `s`.
    pub fn active_orders(&self, p: Q, gamma: Q, s: Q) -> Vec<u32> {
        match self.active_at(p, gamma, s) {
            None => Vec::new(),
            Some(BoundaryConditions::Normal(sig)) => sig.orders,
            Some(BoundaryConditions::Vanishing) => {
                let loss = trace_loss(p, gamma);
                (0u32..).take_while(|&m| q_int(i64::from(m)) + loss < s).collect()
            }
        }
    }

    fn render(&self) -> String {
        match self {
            BoundaryConditions::Vanishing => "zero".into(),
            BoundaryConditions::Normal(sig) if sig.pure_traces => {
                let orders: Vec<String> = sig.orders.iter().map(u32::to_string).collect();
                format!("tr{{{}}}", orders.join(","))
            }
            BoundaryConditions::Normal(sig) => {
                let pairs: Vec<String> = sig.orders.iter().zip(&sig.target_dims).map(|(m, y)| format!("{m}:{y}")).collect();
                format!("{{{}}}", pairs.join(","))
            }
        }
    }
}

/// The numerical parameters of a space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParamSet {
    pub p: Q,
    pub q: Exponent,
    /// `s` for B/F/H, the integer `k` for W, zero for L.
    pub smoothness: Q,
    pub gamma: Q,
    pub dim: u32,
    /// Dimension `r` of the fibre `X = ℂ^r`.
    pub fiber_dim: u32,
}

impl ParamSet {
    pub fn new(p: Q, q: Exponent, smoothness: Q, gamma: Q, dim: u32, fiber_dim: u32) -> Self {
        Self { p, q, smoothness, gamma, dim, fiber_dim }
    }

    pub fn trace_loss(&self) -> Q {
        trace_loss(self.p, self.gamma)
    }

    /// `m + (γ+1)/p`, the smoothness above which `Tr_m` exists.
    pub fn trace_threshold(&self, m: u32) -> Q {
        q_int(i64::from(m)) + self.trace_loss()
    }

    /// `s > m + (γ+1)/p`.
    pub fn trace_exists(&self, m: u32) -> bool {
        self.smoothness > self.trace_threshold(m)
    }

    pub fn muckenhoupt(&self) -> bool {
        is_muckenhoupt(self.p, self.gamma)
    }
}

/// Violations of the structural invariants of [`SpaceDescriptor`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("integrability p = {0} must satisfy p > 1")]
    IntegrabilityOutOfRange(String),
    #[error("microscopic exponent q = {0} must satisfy q ≥ 1")]
    MicroscopicOutOfRange(String),
    #[error("weight exponent γ = {0} must satisfy γ > −1")]
    WeightOutOfRange(String),
    #[error("dimension d and fibre dimension r must be at least 1")]
    ZeroDimension,
    #[error("Lebesgue spaces carry smoothness 0, got {0}")]
    LebesgueSmoothness(String),
    #[error("Sobolev smoothness must be a nonnegative integer, got {0}")]
    SobolevSmoothness(String),
    #[error("boundary conditions require the half-space domain")]
    ConditionsOffHalfSpace,
    #[error("boundary conditions are only defined for Bessel potential and Sobolev spaces")]
    ConditionsOnFamily,
    #[error("boundary orders must be strictly increasing with one target dimension each")]
    MalformedSystem,
    #[error("target dimension {0} of a normal boundary operator must lie in 1..=r = {1}")]
    TargetDimension(u32, u32),
    #[error("spaces on the boundary hyperplane are unweighted, got γ = {0}")]
    WeightedBoundarySpace(String),
    #[error("Bessel potential requires A_p weight: γ = {gamma} ∉ (−1, p−1) = (−1, {pm1})")]
    BesselOutsideMuckenhoupt { gamma: String, pm1: String },
}

/// Symbolic identity of a function space.
///
/// Fields are public so that arbitrary (possibly inadmissible) descriptors
/// can be handed to the rule engine, which reports violations as values;
/// [`SpaceDescriptor::new`] enforces the structural invariants up front.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceDescriptor {
    pub family: Family,
    pub params: ParamSet,
    pub domain: Domain,
    pub bc: Option<BoundaryConditions>,
}

impl SpaceDescriptor {
    /// Checked constructor: normalizes, then enforces the structural
    /// invariants including the `A_p` restriction for Bessel potential spaces.
    pub fn new(family: Family, params: ParamSet, domain: Domain, bc: Option<BoundaryConditions>) -> Result<Self, DescriptorError> {
        let desc = Self::raw(family, params, domain, bc);
        desc.structural_check()?;
        Ok(desc)
    }

    /// Unchecked constructor: only normalizes (`q := p` for families that do
    /// not use `q`, and `W^0`/`H^0` without conditions become `L`).
    pub fn raw(family: Family, params: ParamSet, domain: Domain, bc: Option<BoundaryConditions>) -> Self {
        Self { family, params, domain, bc }.normalized()
    }

    pub fn normalized(mut self) -> Self {
        let zero_order = self.params.smoothness.is_zero() && self.bc.is_none();
        if zero_order && (self.family == Family::Sobolev || (self.family == Family::BesselPotential && self.params.muckenhoupt())) {
            self.family = Family::Lebesgue;
        }
        if !self.family.uses_q() {
            self.params.q = Exponent::Finite(self.params.p);
        }
        self
    }

    /// The invariants every descriptor must satisfy before any rule applies.
    pub fn structural_check(&self) -> Result<(), DescriptorError> {
        let p = &self.params;
        if p.p <= Q::one() {
            return Err(DescriptorError::IntegrabilityOutOfRange(fmt_q(&p.p)));
        }
        if let Exponent::Finite(q) = p.q {
            if q < Q::one() {
                return Err(DescriptorError::MicroscopicOutOfRange(fmt_q(&q)));
            }
        }
        if p.gamma <= -Q::one() {
            return Err(DescriptorError::WeightOutOfRange(fmt_q(&p.gamma)));
        }
        if p.dim == 0 || p.fiber_dim == 0 {
            return Err(DescriptorError::ZeroDimension);
        }
        match self.family {
            Family::Lebesgue if !p.smoothness.is_zero() => return Err(DescriptorError::LebesgueSmoothness(fmt_q(&p.smoothness))),
            Family::Sobolev if !p.smoothness.is_integer() || p.smoothness.is_negative() => {
                return Err(DescriptorError::SobolevSmoothness(fmt_q(&p.smoothness)))
            }
            _ => {}
        }
        if self.domain == Domain::BoundaryHyperplane && !p.gamma.is_zero() {
            return Err(DescriptorError::WeightedBoundarySpace(fmt_q(&p.gamma)));
        }
        if let Some(bc) = &self.bc {
            if self.domain != Domain::HalfSpace {
                return Err(DescriptorError::ConditionsOffHalfSpace);
            }
            if !matches!(self.family, Family::Sobolev | Family::BesselPotential) {
                return Err(DescriptorError::ConditionsOnFamily);
            }
            if let BoundaryConditions::Normal(sig) = bc {
                let increasing = sig.orders.windows(2).all(|w| w[0] < w[1]);
                if sig.orders.is_empty() || !increasing || sig.orders.len() != sig.target_dims.len() {
                    return Err(DescriptorError::MalformedSystem);
                }
                if let Some(&y) = sig.target_dims.iter().find(|&&y| y == 0 || y > p.fiber_dim) {
                    return Err(DescriptorError::TargetDimension(y, p.fiber_dim));
                }
            }
        }
        if self.family == Family::BesselPotential && !p.muckenhoupt() {
            return Err(DescriptorError::BesselOutsideMuckenhoupt { gamma: fmt_q(&p.gamma), pm1: fmt_q(&(p.p - Q::one())) });
        }
        Ok(())
    }

    pub fn without_bc(&self) -> Self {
        Self { bc: None, ..self.clone() }.normalized()
    }

    /// The boundary conditions that are meaningful at this descriptor's own
    /// smoothness.
    pub fn active_bc(&self) -> Option<BoundaryConditions> {
        self.bc.as_ref().and_then(|bc| bc.active_at(self.params.p, self.params.gamma, self.params.smoothness))
    }

    /// Compact textual form; it is accepted back by the query parser.
    pub fn render(&self) -> String {
        let p = &self.params;
        let mut parts = Vec::new();
        match self.family {
            Family::Sobolev => parts.push(format!("k={}", fmt_q(&p.smoothness))),
            Family::Lebesgue => {}
            _ => parts.push(format!("s={}", fmt_q(&p.smoothness))),
        }
        parts.push(format!("p={}", fmt_q(&p.p)));
        if self.family.uses_q() {
            parts.push(format!("q={}", p.q));
        }
        parts.push(format!("gamma={}", fmt_q(&p.gamma)));
        parts.push(format!("d={}", p.dim));
        parts.push(format!("r={}", p.fiber_dim));
        parts.push(format!("dom={}", self.domain.keyword()));
        if let Some(bc) = &self.bc {
            parts.push(format!("bc={}", bc.render()));
        }
        format!("{}[{}]", self.family.symbol(), parts.join(","))
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for SpaceDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let p = &self.params;
        let mut st = s.serialize_struct("SpaceDescriptor", 10)?;
        st.serialize_field("notation", &self.render())?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("p", &fmt_q(&p.p))?;
        st.serialize_field("q", &p.q)?;
        st.serialize_field("smoothness", &fmt_q(&p.smoothness))?;
        st.serialize_field("gamma", &fmt_q(&p.gamma))?;
        st.serialize_field("dim", &p.dim)?;
        st.serialize_field("fiber_dim", &p.fiber_dim)?;
        st.serialize_field("domain", &self.domain)?;
        st.serialize_field("bc", &self.bc)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: Q, s: Q, gamma: Q) -> ParamSet {
        ParamSet::new(p, Exponent::Finite(p), s, gamma, 2, 1)
    }

    #[test]
    fn exclusion_is_exact() {
        assert_eq!(excluded_gamma_index(q_int(2), q_int(1)), Some(1));
        assert_eq!(excluded_gamma_index(q_int(3), q_int(5)), Some(2));
        assert_eq!(excluded_gamma_index(q_int(2), q_frac(1, 2)), None);
        assert_eq!(excluded_gamma_index(q_int(2), q_int(-1) + q_frac(1, 1_000_000)), None);
        assert_eq!(excluded_gamma_index(q_frac(3, 2), q_frac(1, 2)), Some(1));
    }

    #[test]
    fn infinity_orders_above_every_finite_exponent() {
        assert!(Exponent::Infinity > Exponent::Finite(q_int(1_000_000)));
        assert!(Exponent::Finite(q_int(1)) < Exponent::Finite(q_int(2)));
    }

    #[test]
    fn normalization_fixes_irrelevant_fields() {
        let d = SpaceDescriptor::raw(Family::Sobolev, ParamSet::new(q_int(3), Exponent::Infinity, q_int(2), q_int(0), 2, 1), Domain::HalfSpace, None);
        assert_eq!(d.params.q, Exponent::Finite(q_int(3)));
        let w0 = SpaceDescriptor::raw(Family::Sobolev, params(q_int(2), q_int(0), q_int(5)), Domain::HalfSpace, None);
        assert_eq!(w0.family, Family::Lebesgue);
    }

    #[test]
    fn bessel_outside_ap_is_refused_at_construction() {
        let err = SpaceDescriptor::new(Family::BesselPotential, params(q_int(2), q_int(1), q_int(3)), Domain::FullSpace, None).unwrap_err();
        assert!(matches!(err, DescriptorError::BesselOutsideMuckenhoupt { .. }));
    }

    #[test]
    fn active_conditions_follow_the_threshold() {
        let sig = BoundaryConditions::Normal(NormalSystemSignature::traces(vec![0, 1, 2], 1));
        // (γ+1)/p = 1/2: orders 0 and 1 are active at s = 2, order 2 is not.
        assert_eq!(sig.active_orders(q_int(2), q_int(0), q_int(2)), vec![0, 1]);
        assert_eq!(sig.active_at(q_int(2), q_int(0), q_frac(1, 2)), None);
        assert_eq!(BoundaryConditions::Vanishing.active_orders(q_int(2), q_int(2), q_int(4)), vec![0, 1, 2]);
    }

    #[test]
    fn rendering_is_canonical() {
        let d = SpaceDescriptor::new(
            Family::Sobolev,
            params(q_int(2), q_int(4), q_frac(1, 2)),
            Domain::HalfSpace,
            Some(BoundaryConditions::Normal(NormalSystemSignature::new(vec![0, 2], vec![1, 1]))),
        )
        .unwrap();
        assert_eq!(d.render(), "W[k=4,p=2,gamma=1/2,d=2,r=1,dom=half,bc={0:1,2:1}]");
    }
}
