//! Query results and the rule citations that justify them.

use std::fmt;

use serde::Serialize;

use crate::rules;
use crate::types::SpaceDescriptor;

/// A reference to the rule that produced (or refused) a result, with the
/// parameter conditions that were checked for this query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleCitation {
    pub rule_id: String,
    /// Plain-language statement of the rule.
    pub statement_anchor: String,
    pub assumptions_used: Vec<String>,
}

impl RuleCitation {
    /// Cites a rule from the catalog in [`crate::rules`].
    ///
    /// # Panics
    /// On an unknown id; ids are compile-time constants of this crate.
    pub fn new(rule_id: &str, assumptions_used: Vec<String>) -> Self {
        let rule = rules::lookup(rule_id).unwrap_or_else(|| panic!("unknown rule id {rule_id}"));
        Self { rule_id: rule.id.to_string(), statement_anchor: rule.statement.to_string(), assumptions_used }
    }
}

/// Three-valued answer to an embedding query. The engine only knows
/// sufficient conditions, so it never answers "false".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    True,
    Unknown,
}

/// Classes of test functions named by the density rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum TestClass {
    /// `C_c^∞(ℝ^d₊)`: compact support inside the open half-space.
    CompactInOpenHalfSpace,
    /// `C_c^∞(ℝ^d \ {x₁ = 0})`: compact support away from the hyperplane.
    CompactOffHyperplane,
    /// `{f ∈ C_c^∞(closed half-space) : (∂₁^m f)|_{x₁=0} = 0}`.
    BoundaryFlat { m: u32 },
    /// `C^∞_{c,m}`: smooth up to the boundary with `∂₁^m f` compactly supported
    /// in the open half-space.
    DerivativeCompact { m: u32 },
}

impl fmt::Display for TestClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestClass::CompactInOpenHalfSpace => f.write_str("C_c^inf(open half-space)"),
            TestClass::CompactOffHyperplane => f.write_str("C_c^inf(R^d minus hyperplane)"),
            TestClass::BoundaryFlat { m } => write!(f, "C_c^inf(closed half-space) with d_1^{m} f = 0 on the boundary"),
            TestClass::DerivativeCompact { m } => write!(f, "C^inf_c,{m}(closed half-space)"),
        }
    }
}

/// A vector-valued space `outer(ℝ^{d−1}; inner)` with `inner` a space on the
/// half-line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedSpace {
    pub outer: SpaceDescriptor,
    pub inner: SpaceDescriptor,
}

impl fmt::Display for MixedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<{}>", self.outer, self.inner)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Outcome {
    /// Admissible parameters, with the Muckenhoupt classification.
    Valid { muckenhoupt: bool },
    Space { space: SpaceDescriptor },
    /// A product of spaces (vector traces).
    Product { factors: Vec<SpaceDescriptor> },
    /// `∩ intersection = space`.
    Equation { intersection: Vec<MixedSpace>, equals: SpaceDescriptor },
    /// `class` is dense in `closure_in` (which carries the zero conditions).
    DenseClass { class: TestClass, closure_in: SpaceDescriptor, note: Option<String> },
    Boolean { value: Truth },
    Rejected { reason: String },
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Valid { muckenhoupt: true } => f.write_str("valid (A_p)"),
            Outcome::Valid { muckenhoupt: false } => f.write_str("valid (not A_p)"),
            Outcome::Space { space } => write!(f, "{space}"),
            Outcome::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(" x "))
            }
            Outcome::Equation { intersection, equals } => {
                let parts: Vec<String> = intersection.iter().map(ToString::to_string).collect();
                write!(f, "{} = {equals}", parts.join(" & "))
            }
            Outcome::DenseClass { class, closure_in, .. } => write!(f, "dense {class} in {closure_in}"),
            Outcome::Boolean { value: Truth::True } => f.write_str("true"),
            Outcome::Boolean { value: Truth::Unknown } => f.write_str("unknown"),
            Outcome::Rejected { reason } => write!(f, "rejected: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub outcome: Outcome,
    pub citations: Vec<RuleCitation>,
}

impl QueryResult {
    pub fn new(outcome: Outcome, citations: Vec<RuleCitation>) -> Self {
        debug_assert!(!citations.is_empty(), "every result carries a citation");
        Self { outcome, citations }
    }

    pub fn rejected(reason: impl Into<String>, citations: Vec<RuleCitation>) -> Self {
        Self::new(Outcome::Rejected { reason: reason.into() }, citations)
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self.outcome, Outcome::Rejected { .. })
    }

    pub fn space(&self) -> Option<&SpaceDescriptor> {
        match &self.outcome {
            Outcome::Space { space } => Some(space),
            _ => None,
        }
    }

    pub fn rule_ids(&self) -> Vec<&str> {
        self.citations.iter().map(|c| c.rule_id.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("query results always serialize")
    }
}
