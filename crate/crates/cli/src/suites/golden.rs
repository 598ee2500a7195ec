//! `golden`: the symbolic calculus against its curated query set.
//!
//! Every line of the golden table names a query, the expected outcome in
//! display form and the first rule the answer must cite. A case passes when
//! both agree exactly.

use std::f64::consts::PI;

use tracelab_calculus::run_query;

use super::par_cases;
use crate::config::{tolerances, BankConfig, GridConfig, SuiteConfig, Sweep};
use crate::error::{CliError, Result};
use crate::params;
use crate::report::{CaseRecord, Check};

/// The curated query table shipped with the calculus crate.
pub const GOLDEN_TABLE: &str = include_str!("../../../calculus/golden/queries.tsv");

/// One line of the golden table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenQuery {
    pub line: usize,
    pub query: String,
    pub expected: String,
    pub rule: String,
}

/// Parses the tab-separated table; `#` starts a comment line.
pub fn parse_table(text: &str) -> Result<Vec<GoldenQuery>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(CliError::Config(format!("golden table line {}: expected 3 tab-separated columns", n + 1)));
        }
        out.push(GoldenQuery {
            line: n + 1,
            query: cols[0].trim().to_string(),
            expected: cols[1].trim().to_string(),
            rule: cols[2].trim().to_string(),
        });
    }
    Ok(out)
}

pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        suite: "golden".into(),
        // The symbolic suite does not sample functions; the grid is unused.
        grid: GridConfig::new(vec![64], PI, 1),
        aux_grid: None,
        sweep: Sweep::default(),
        bank: BankConfig { size: 0, seed: 0 },
        tolerances: tolerances(&[("min_queries", 40.0)]),
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let table = parse_table(GOLDEN_TABLE)?;
    let exact = Check::AtLeast { bound: 1.0 };
    let mut out = par_cases(&table, |q| {
        let id = format!("query/{:03}", q.line);
        let prm = params![("line", q.line), ("query", q.query.as_str()), ("expected", q.expected.as_str())];
        vec![match run_query(&q.query) {
            Ok(res) => {
                let matches = res.outcome.to_string() == q.expected && res.rule_ids().first() == Some(&q.rule.as_str());
                CaseRecord::measured(id, "query", prm, if matches { 1.0 } else { 0.0 }, exact)
            }
            Err(e) => CaseRecord::rejected(id, "query", prm, e.annotate(&q.query), exact),
        }]
    });
    out.push(CaseRecord::measured(
        "table-size",
        "table-size",
        params![("source", "calculus/golden/queries.tsv")],
        table.len() as f64,
        Check::AtLeast { bound: cfg.tol("min_queries")? },
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_parses_and_skips_comments() {
        let t = parse_table("# header\n\nvalidate W[k=1,p=2]\tvalid (A_p)\tparams.admissible\n").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].line, 3);
        assert_eq!(t[0].rule, "params.admissible");
        assert!(parse_table("only\ttwo\n").is_err());
    }
}
