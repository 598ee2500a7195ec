//! Suite configuration: grids, parameter sweeps, bank and tolerances.
//!
//! Every suite has built-in defaults ([`default_config`]). A user file is a
//! partial JSON document merged key by key over those defaults, so
//! `{"bank": {"size": 10}}` changes only the bank size.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tracelab_core::lp::max_admissible_blocks;
use tracelab_core::norms::Exponent;
use tracelab_core::PeriodizedGrid;

use crate::error::{CliError, Result};

/// A periodized grid together with the Littlewood–Paley block count used on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Cells per axis (powers of two); axis 0 is the normal direction.
    pub shape: Vec<usize>,
    /// Half-period `L` of the torus `[−L, L)^d`.
    pub half_period: f64,
    /// Highest block index `N`.
    pub n_blocks: usize,
    /// Cell-centred nodes along axis 0, so that `x₁ = 0` is a cell face.
    /// Bulk grids are offset; boundary-hyperplane grids are not.
    #[serde(default = "offset_default")]
    pub offset: bool,
}

fn offset_default() -> bool {
    true
}

impl GridConfig {
    pub fn new(shape: Vec<usize>, half_period: f64, n_blocks: usize) -> Self {
        Self { shape, half_period, n_blocks, offset: true }
    }

    /// A boundary-hyperplane grid (not offset), as produced by restricting a
    /// bulk grid to `x₁ = 0`.
    pub fn boundary(shape: Vec<usize>, half_period: f64, n_blocks: usize) -> Self {
        Self { shape, half_period, n_blocks, offset: false }
    }

    /// The grid, after checking that it admits `n_blocks`.
    pub fn build(&self) -> Result<PeriodizedGrid<f64>> {
        let grid = PeriodizedGrid::new(self.shape.clone(), self.half_period, self.offset)?;
        let max = max_admissible_blocks(&grid);
        if self.n_blocks > max {
            return Err(CliError::Infeasible(format!(
                "N = {} blocks requested but the grid {:?} (L = {}) admits at most {max}",
                self.n_blocks, self.shape, self.half_period
            )));
        }
        Ok(grid)
    }
}

/// A summability exponent as written in configuration files: a number or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QValue {
    Finite(f64),
    Named(QName),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QName {
    Inf,
}

impl QValue {
    pub const INF: QValue = QValue::Named(QName::Inf);

    pub fn exponent(self) -> Exponent<f64> {
        match self {
            QValue::Finite(q) => Exponent::Finite(q),
            QValue::Named(QName::Inf) => Exponent::Infinity,
        }
    }

    /// `q` as a float (`∞` for `"inf"`), for ordering.
    pub fn value(self) -> f64 {
        match self {
            QValue::Finite(q) => q,
            QValue::Named(QName::Inf) => f64::INFINITY,
        }
    }

    pub fn label(self) -> String {
        match self {
            QValue::Finite(q) => format!("{q}"),
            QValue::Named(QName::Inf) => "inf".into(),
        }
    }
}

/// A source/target parameter pair `(s, p, γ) → (s, p, γ)` for embedding sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingTuple {
    pub source: [f64; 3],
    pub target: [f64; 3],
}

/// Parameter sweep lists. Each suite reads the lists it needs and ignores
/// the others; unused lists stay empty in the defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sweep {
    pub p: Vec<f64>,
    pub q: Vec<QValue>,
    pub s: Vec<f64>,
    pub k: Vec<usize>,
    pub gamma: Vec<f64>,
    /// Order pairs: `(k, ℓ)` for interpolation (θ = ℓ/k), `(m, k)` for mollification.
    pub orders: Vec<(usize, usize)>,
    /// Dilation exponents `e` (λ = 2^e).
    pub dilations: Vec<i32>,
    /// Level lists: truncation levels, frequency radii exponents or mollifier steepness exponents.
    pub levels: Vec<u32>,
    /// Explicit `(p, γ)` pairs where the two lists are not a product.
    pub pairs: Vec<(f64, f64)>,
    pub tuples: Vec<EmbeddingTuple>,
}

/// Size and seed of the deterministic test bank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankConfig {
    pub size: usize,
    pub seed: u64,
}

/// Complete configuration of one suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub grid: GridConfig,
    /// Second grid for suites with an arm that needs a different resolution.
    #[serde(default)]
    pub aux_grid: Option<GridConfig>,
    pub sweep: Sweep,
    pub bank: BankConfig,
    /// Named acceptance thresholds; the names each suite reads are listed in
    /// its defaults.
    pub tolerances: BTreeMap<String, f64>,
}

impl SuiteConfig {
    /// A tolerance by name; missing names are a configuration error.
    pub fn tol(&self, name: &str) -> Result<f64> {
        self.tolerances
            .get(name)
            .copied()
            .ok_or_else(|| CliError::Config(format!("suite `{}` needs tolerance `{name}`", self.suite)))
    }

    pub fn aux(&self) -> Result<&GridConfig> {
        self.aux_grid.as_ref().ok_or_else(|| CliError::Config(format!("suite `{}` needs `aux_grid`", self.suite)))
    }

    /// Defaults of `suite` with `patch` merged over them.
    pub fn with_patch(suite: &str, patch: &serde_json::Value) -> Result<Self> {
        let mut value = serde_json::to_value(default_config(suite)?)?;
        merge(&mut value, patch);
        let cfg: SuiteConfig = serde_json::from_value(value)?;
        if cfg.suite != suite {
            return Err(CliError::Config(format!("configuration names suite `{}` but `{suite}` was requested", cfg.suite)));
        }
        Ok(cfg)
    }

    /// Reads a patch file and merges it over the defaults of `suite`.
    pub fn from_file(suite: &str, path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let patch: serde_json::Value = serde_json::from_str(&text)?;
        Self::with_patch(suite, &patch)
    }
}

/// Recursive object merge: objects merge key by key, everything else replaces.
pub fn merge(base: &mut serde_json::Value, patch: &serde_json::Value) {
    match (base, patch) {
        (serde_json::Value::Object(b), serde_json::Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, p) => *b = p.clone(),
    }
}

/// Built-in configuration of a named suite.
pub fn default_config(suite: &str) -> Result<SuiteConfig> {
    crate::suites::default_config(suite)
}

/// Shorthand used by the suite defaults.
pub(crate) fn tolerances(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
    entries.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patch_overrides_only_named_keys() {
        let base = default_config("partition").unwrap();
        let cfg = SuiteConfig::with_patch("partition", &serde_json::json!({"bank": {"size": 7}})).unwrap();
        assert_eq!(cfg.bank.size, 7);
        assert_eq!(cfg.bank.seed, base.bank.seed);
        assert_eq!(cfg.grid, base.grid);
    }

    #[test]
    fn mismatched_suite_name_is_rejected() {
        let patch = serde_json::json!({"suite": "hardy"});
        assert!(matches!(SuiteConfig::with_patch("partition", &patch), Err(CliError::Config(_))));
    }

    #[test]
    fn q_values_accept_numbers_and_inf() {
        let qs: Vec<QValue> = serde_json::from_str(r#"[1, 2.5, "inf"]"#).unwrap();
        assert_eq!(qs, vec![QValue::Finite(1.0), QValue::Finite(2.5), QValue::INF]);
        assert_eq!(serde_json::to_string(&qs).unwrap(), r#"[1.0,2.5,"inf"]"#);
    }

    #[test]
    fn too_many_blocks_is_infeasible() {
        let g = GridConfig::new(vec![64], 16.0 * std::f64::consts::PI, 9);
        assert!(matches!(g.build(), Err(CliError::Infeasible(_))));
    }
}
