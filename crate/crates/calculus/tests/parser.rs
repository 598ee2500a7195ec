//! Query grammar: accepted forms, defaults, and position-annotated errors.

use tracelab_calculus::types::{q_frac, q_int};
use tracelab_calculus::{parse_query, parse_space, BoundaryConditions, Domain, Exponent, Family, NormalSystemSignature, Query};

fn error_column(input: &str) -> usize {
    match parse_query(input) {
        Err(e) => e.column,
        Ok(q) => panic!("{input} parsed as {q}"),
    }
}

#[test]
fn defaults_are_filled_in() {
    let w = parse_space("W[k=2,p=3]").unwrap();
    assert_eq!(w.domain, Domain::HalfSpace);
    assert_eq!((w.params.gamma, w.params.dim, w.params.fiber_dim), (q_int(0), 2, 1));
    assert_eq!(w.params.q, Exponent::Finite(q_int(3)));
    let b = parse_space("B[s=1,p=2]").unwrap();
    assert_eq!(b.domain, Domain::FullSpace);
    assert_eq!(b.params.q, Exponent::Finite(q_int(2)));
    let h = parse_space("H[s=1,p=2,bc=zero]").unwrap();
    assert_eq!(h.domain, Domain::HalfSpace);
}

#[test]
fn infinity_and_fractions_are_exact() {
    let f = parse_space("F[s=-1/3,p=1.25,q=inf,gamma=0.125]").unwrap();
    assert_eq!(f.family, Family::TriebelLizorkin);
    assert_eq!(f.params.smoothness, q_frac(-1, 3));
    assert_eq!(f.params.p, q_frac(5, 4));
    assert_eq!(f.params.q, Exponent::Infinity);
    assert_eq!(f.params.gamma, q_frac(1, 8));
}

#[test]
fn boundary_condition_forms() {
    let sys = parse_space("W[k=4,p=2,r=3,bc={0:1,2:3}]").unwrap();
    assert_eq!(sys.bc, Some(BoundaryConditions::Normal(NormalSystemSignature::new(vec![0, 2], vec![1, 3]))));
    let tr = parse_space("W[k=4,p=2,r=2,bc=tr{1,3}]").unwrap();
    assert_eq!(tr.bc, Some(BoundaryConditions::Normal(NormalSystemSignature::traces(vec![1, 3], 2))));
    let zero = parse_space("H[s=1,p=2,bc=zero]").unwrap();
    assert_eq!(zero.bc, Some(BoundaryConditions::Vanishing));
}

#[test]
fn quotes_and_argument_order_are_irrelevant() {
    let a = parse_query(r#"trace m=1 "F[s=3,p=3,q=inf,gamma=2,d=3]""#).unwrap();
    let b = parse_query("trace 'F[s=3,p=3,q=inf,gamma=2,d=3]' m=1").unwrap();
    assert_eq!(a, b);
    assert!(matches!(a, Query::Trace { m: 1, .. }));
}

#[test]
fn displayed_queries_parse_back() {
    for text in [
        "validate W[k=2,p=2,gamma=1/2]",
        "trace m=1 F[s=3,p=3,q=inf,gamma=2,d=3]",
        "trace-vector m=2 W[k=4,p=2]",
        "interpolate theta=1/3 L[p=2,dom=half] W[k=3,p=2,bc=tr{0}]",
        "embeds depth=5 B[s=1,p=2,q=1] H[s=1,p=2]",
        "density H[s=3/4,p=2,bc=zero]",
        "fubini k=2 p=2 gamma=2 d=3 r=2",
    ] {
        let q = parse_query(text).unwrap();
        assert_eq!(parse_query(&q.to_string()).unwrap(), q, "{text}");
    }
}

#[test]
fn errors_point_at_the_offending_column() {
    // Unknown field name starts at column 20.
    assert_eq!(error_column("trace m=1 F[s=3,p=3,qq=inf]"), 20);
    // Missing comma between fields.
    assert_eq!(error_column("trace m=1 F[s=3 p=3]"), 15);
    assert_eq!(error_column("frobnicate W[k=1,p=2]"), 0);
    // Missing required p.
    assert!(error_column("validate W[k=1]") >= 9);
    // Denominator zero.
    assert_eq!(error_column("validate W[k=1,p=2/0]"), 19);
}

#[test]
fn malformed_queries_are_rejected() {
    for bad in [
        "",
        "trace W[k=1,p=2]",
        "trace m=x W[k=1,p=2]",
        "interpolate theta=1/2 W[k=1,p=2]",
        "validate W[k=1,p=2",
        "validate X[s=1,p=2]",
        "validate W[k=1,p=2,dom=sphere]",
        "validate W[k=1,p=2,bc=tr{}]",
        "validate W[k=1,p=2] extra",
        "validate W[k=1,p=2,p=3]",
        "validate W[k=1,p=10000000]",
        "validate W[k=1,p=2.1234567]",
        "fubini k=2 gamma=1",
    ] {
        let err = parse_query(bad).expect_err(bad);
        let annotated = err.annotate(bad);
        assert!(annotated.contains('^'), "{annotated}");
        assert!(err.column <= bad.chars().count(), "{bad}: column {}", err.column);
    }
}
