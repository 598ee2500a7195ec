//! Exact rule engine for power-weighted function spaces.
//!
//! Spaces are described symbolically ([`SpaceDescriptor`]): a family (Besov,
//! Triebel–Lizorkin, Bessel potential, Sobolev, Lebesgue), exact rational
//! parameters `p, q, s, γ`, the dimension, the fibre `ℂ^r`, a domain (full
//! space, half-space or boundary hyperplane) and optional zero boundary
//! conditions. The engine answers trace, vector-trace, interpolation,
//! embedding, density and mixed-derivative queries; each answer carries the
//! rule citations that justify it.
//!
//! ```
//! use tracelab_calculus::run_query;
//!
//! let r = run_query(r#"trace m=1 "F[s=3,p=3,q=inf,gamma=2,d=3]""#).unwrap();
//! assert_eq!(r.outcome.to_string(), "B[s=1,p=3,q=3,gamma=0,d=2,r=1,dom=bdry]");
//! assert_eq!(r.rule_ids(), ["trace.triebel_lizorkin"]);
//! ```

pub mod engine;
pub mod parser;
pub mod result;
pub mod rules;
pub mod types;

pub use engine::{density_class, embedding_depth, embeds, embeds_with, fubini_split, interpolate, is_admissible, trace_space, trace_vector_space, validate_params, EngineConfig};
pub use parser::{parse_query, parse_space, run_query, ParseError, Query};
pub use result::{MixedSpace, Outcome, QueryResult, RuleCitation, TestClass, Truth};
pub use types::{BoundaryConditions, DescriptorError, Domain, Exponent, Family, NormalSystemSignature, ParamSet, SpaceDescriptor, Q};
