//! Golden query set: every line of `golden/queries.tsv` is run through the
//! parser and engine, and both the displayed outcome and the first cited rule
//! must match exactly.

use tracelab_calculus::run_query;

const GOLDEN: &str = include_str!("../golden/queries.tsv");

#[test]
fn golden_queries_match() {
    let mut failures = Vec::new();
    let mut count = 0;
    for (lineno, line) in GOLDEN.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 3, "line {} must have three tab-separated columns", lineno + 1);
        let (query, expected, rule) = (cols[0], cols[1], cols[2]);
        count += 1;
        let result = match run_query(query) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("line {}: parse error\n{}", lineno + 1, e.annotate(query)));
                continue;
            }
        };
        let got = result.outcome.to_string();
        let first = result.rule_ids().first().map(|s| s.to_string()).unwrap_or_default();
        if got != expected || first != rule {
            failures.push(format!(
                "line {}: {query}\n  expected: {expected} [{rule}]\n  got:      {got} [{first}]",
                lineno + 1
            ));
        }
    }
    assert!(count >= 40, "golden set must hold at least 40 queries, found {count}");
    assert!(failures.is_empty(), "{} golden mismatches:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn golden_queries_are_deterministic() {
    for line in GOLDEN.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let query = line.split('\t').next().unwrap();
        let a = run_query(query).unwrap();
        let b = run_query(query).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{query}");
    }
}
