//! Suite reports: per-case records, aggregates, and JSON/CSV emission.
//!
//! Every record stores the measured value (or the rejection reason) together
//! with the check it was held to, so the pass flags can be recomputed from
//! the report alone ([`SuiteReport::recompute_passes`]).

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;
use crate::error::{CliError, Result};

/// Version tag of the JSON report layout.
pub const REPORT_SCHEMA: &str = "tracelab.suite-report/1";

/// A case parameter: a number or a label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Num(f64),
    Text(String),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Num(x) => write!(f, "{x}"),
            Param::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Param {
    fn from(x: f64) -> Self {
        Param::Num(x)
    }
}

impl From<usize> for Param {
    fn from(x: usize) -> Self {
        Param::Num(x as f64)
    }
}

impl From<i32> for Param {
    fn from(x: i32) -> Self {
        Param::Num(f64::from(x))
    }
}

impl From<&str> for Param {
    fn from(s: &str) -> Self {
        Param::Text(s.to_string())
    }
}

impl From<String> for Param {
    fn from(s: String) -> Self {
        Param::Text(s)
    }
}

/// Ordered parameter map of a case.
pub type Params = BTreeMap<String, Param>;

/// Builds a [`Params`] map: `params![("p", 2.0), ("member", "bump")]`.
#[macro_export]
macro_rules! params {
    ($(($k:expr, $v:expr)),* $(,)?) => {{
        let mut m = $crate::report::Params::new();
        $( m.insert($k.to_string(), $crate::report::Param::from($v)); )*
        m
    }};
}

/// The acceptance condition a case is held to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    /// `measured ≤ bound`.
    AtMost { bound: f64 },
    /// `measured ≥ bound`.
    AtLeast { bound: f64 },
    /// `lo ≤ measured ≤ hi`.
    Within { lo: f64, hi: f64 },
    /// The operation must refuse the input.
    ExpectRejection,
    /// Recorded for the aggregates only; not gated.
    Info,
}

impl Check {
    /// Whether the recorded outcome satisfies the check.
    pub fn holds(&self, measured: Option<f64>, rejection: Option<&str>) -> bool {
        match *self {
            Check::AtMost { bound } => measured.is_some_and(|m| m <= bound),
            Check::AtLeast { bound } => measured.is_some_and(|m| m >= bound),
            Check::Within { lo, hi } => measured.is_some_and(|m| lo <= m && m <= hi),
            Check::ExpectRejection => rejection.is_some(),
            Check::Info => true,
        }
    }

    /// Gated checks decide the suite verdict and the exit code.
    pub fn gated(&self) -> bool {
        !matches!(self, Check::Info)
    }

    fn kind(&self) -> &'static str {
        match self {
            Check::AtMost { .. } => "at_most",
            Check::AtLeast { .. } => "at_least",
            Check::Within { .. } => "within",
            Check::ExpectRejection => "expect_rejection",
            Check::Info => "info",
        }
    }

    fn bounds(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            Check::AtMost { bound } => (None, Some(bound)),
            Check::AtLeast { bound } => (Some(bound), None),
            Check::Within { lo, hi } => (Some(lo), Some(hi)),
            Check::ExpectRejection | Check::Info => (None, None),
        }
    }
}

/// One executed case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    /// Unique, sortable identifier within the suite.
    pub id: String,
    /// The arm (sub-experiment) the case belongs to.
    pub arm: String,
    pub params: Params,
    /// `None` when the operation was rejected or produced a non-finite value.
    pub measured: Option<f64>,
    pub rejection: Option<String>,
    pub check: Check,
    pub pass: bool,
}

impl CaseRecord {
    /// A case with a measured value.
    pub fn measured(id: impl Into<String>, arm: &str, params: Params, value: f64, check: Check) -> Self {
        let (measured, rejection) =
            if value.is_finite() { (Some(value), None) } else { (None, Some(format!("non-finite measurement {value}"))) };
        Self::finish(id.into(), arm, params, measured, rejection, check)
    }

    /// A case whose operation refused the input.
    pub fn rejected(id: impl Into<String>, arm: &str, params: Params, reason: impl Into<String>, check: Check) -> Self {
        Self::finish(id.into(), arm, params, None, Some(reason.into()), check)
    }

    /// Records `Ok(value)` as a measurement and `Err(e)` as a rejection.
    pub fn from_result<E: fmt::Display>(
        id: impl Into<String>,
        arm: &str,
        params: Params,
        result: std::result::Result<f64, E>,
        check: Check,
    ) -> Self {
        match result {
            Ok(v) => Self::measured(id, arm, params, v, check),
            Err(e) => Self::rejected(id, arm, params, e.to_string(), check),
        }
    }

    fn finish(id: String, arm: &str, params: Params, measured: Option<f64>, rejection: Option<String>, check: Check) -> Self {
        let pass = check.holds(measured, rejection.as_deref());
        Self { id, arm: arm.to_string(), params, measured, rejection, check, pass }
    }
}

/// Summary of one arm: case counts and the bracket of measured values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub cases: usize,
    pub gated: usize,
    pub passed: usize,
    pub rejected: usize,
    /// Smallest and largest measured value (the empirical constant bracket).
    pub min: Option<f64>,
    pub max: Option<f64>,
}

/// Result of one suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub config: SuiteConfig,
    /// Sorted by case id.
    pub cases: Vec<CaseRecord>,
    /// Keyed by arm.
    pub aggregates: BTreeMap<String, Aggregate>,
    pub wall_time_s: f64,
    /// All gated cases pass.
    pub passed: bool,
}

impl SuiteReport {
    /// Sorts the cases, computes the aggregates and the verdict.
    pub fn assemble(config: SuiteConfig, mut cases: Vec<CaseRecord>, wall_time_s: f64) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        let aggregates = aggregate(&cases);
        let passed = cases.iter().all(|c| c.pass || !c.check.gated());
        Self { schema: REPORT_SCHEMA.into(), suite: config.suite.clone(), config, cases, aggregates, wall_time_s, passed }
    }

    /// Cases of one arm.
    pub fn arm<'a>(&'a self, arm: &'a str) -> impl Iterator<Item = &'a CaseRecord> + 'a {
        self.cases.iter().filter(move |c| c.arm == arm)
    }

    /// Whether every gated case of `arm` passes (and the arm is non-empty).
    pub fn arm_passed(&self, arm: &str) -> bool {
        let mut any = false;
        for c in self.arm(arm) {
            any = true;
            if c.check.gated() && !c.pass {
                return false;
            }
        }
        any
    }

    /// Recomputes every pass flag from the stored values and checks; returns
    /// the ids whose stored flag disagrees.
    pub fn recompute_passes(&self) -> Vec<String> {
        self.cases
            .iter()
            .filter(|c| c.check.holds(c.measured, c.rejection.as_deref()) != c.pass)
            .map(|c| c.id.clone())
            .collect()
    }

    /// Deterministic pretty JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: SuiteReport = serde_json::from_str(text)?;
        if r.schema != REPORT_SCHEMA {
            return Err(CliError::Config(format!("unsupported report schema `{}`", r.schema)));
        }
        Ok(r)
    }

    /// One CSV row per case.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "arm", "params", "measured", "rejection", "check", "lo", "hi", "pass"])?;
        for c in &self.cases {
            let params = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
            let (lo, hi) = c.check.bounds();
            let num = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
            w.write_record([
                c.id.as_str(),
                c.arm.as_str(),
                params.as_str(),
                num(c.measured).as_str(),
                c.rejection.as_deref().unwrap_or(""),
                c.check.kind(),
                num(lo).as_str(),
                num(hi).as_str(),
                if c.pass { "true" } else { "false" },
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Writes the report to `path` in the requested format.
    pub fn emit(&self, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
        let text = match format {
            ReportFormat::Json => self.to_json()? + "\n",
            ReportFormat::Csv => self.to_csv()?,
        };
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Output format of [`SuiteReport::emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

fn aggregate(cases: &[CaseRecord]) -> BTreeMap<String, Aggregate> {
    let mut out: BTreeMap<String, Aggregate> = BTreeMap::new();
    for c in cases {
        let a = out.entry(c.arm.clone()).or_insert(Aggregate { cases: 0, gated: 0, passed: 0, rejected: 0, min: None, max: None });
        a.cases += 1;
        if c.check.gated() {
            a.gated += 1;
            if c.pass {
                a.passed += 1;
            }
        }
        if c.rejection.is_some() {
            a.rejected += 1;
        }
        if let Some(m) = c.measured {
            a.min = Some(a.min.map_or(m, |x| x.min(m)));
            a.max = Some(a.max.map_or(m, |x| x.max(m)));
        }
    }
    out
}
