//! Compact query grammar.
//!
//! ```text
//! query   := "validate" space
//!          | "trace" "m=" INT space
//!          | "trace-vector" "m=" INT space
//!          | "interpolate" "theta=" RAT space space
//!          | "embeds" ["depth=" INT] space space
//!          | "density" space
//!          | "fubini" "k=" INT "p=" RAT "gamma=" RAT ["d=" INT] ["r=" INT]
//! space   := FAMILY "[" [field ("," field)*] "]"        FAMILY ∈ B F H W L
//! field   := ("s" | "k") "=" RAT | "p=" RAT | "q=" (RAT | "inf")
//!          | "gamma=" RAT | "d=" INT | "r=" INT
//!          | "dom=" ("full" | "half" | "bdry") | "bc=" bc
//! bc      := "zero" | "tr{" INT ("," INT)* "}" | "{" INT [":" INT] ("," INT [":" INT])* "}"
//! RAT     := ["-"] DIGITS ["." DIGITS | "/" DIGITS]
//! ```
//!
//! Named arguments may appear in any order around the spaces. Double or
//! single quotes are ignored, so shell-quoted spaces parse unchanged.
//! Defaults: `q = p`, `gamma = 0`, `d = 2`, `r = 1`; the domain defaults to
//! the half-space for `W` and for spaces with boundary conditions, and to the
//! full space otherwise. `bc={m:y,…}` names a normal system with orders `m`
//! and target dimensions `y` (default `r`); `bc=tr{…}` the bare traces;
//! `bc=zero` the vanishing of every existing trace.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::engine::{self, EngineConfig};
use crate::result::QueryResult;
use crate::types::{q_int, BoundaryConditions, Domain, Exponent, Family, NormalSystemSignature, ParamSet, SpaceDescriptor, Q};

/// Largest numerator or denominator accepted in a literal; keeps all exact
/// arithmetic comfortably inside `i64`.
pub const MAX_LITERAL: i64 = 1_000_000;

/// A malformed query, with the character column where parsing stopped.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at column {column}: {message}")]
pub struct ParseError {
    /// Zero-based character offset into the query.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    /// The query with a caret under the offending column.
    pub fn annotate(&self, input: &str) -> String {
        format!("{input}\n{}^ {}", " ".repeat(self.column), self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Validate(SpaceDescriptor),
    Trace { m: u32, space: SpaceDescriptor },
    TraceVector { m: u32, space: SpaceDescriptor },
    Interpolate { theta: Q, left: SpaceDescriptor, right: SpaceDescriptor },
    Embeds { depth: Option<usize>, left: SpaceDescriptor, right: SpaceDescriptor },
    Density(SpaceDescriptor),
    Fubini { k: u32, p: Q, gamma: Q, dim: u32, fiber_dim: u32 },
}

impl Query {
    pub fn run(&self) -> QueryResult {
        match self {
            Query::Validate(d) => engine::validate_params(d),
            Query::Trace { m, space } => engine::trace_space(space, *m),
            Query::TraceVector { m, space } => engine::trace_vector_space(space, *m),
            Query::Interpolate { theta, left, right } => engine::interpolate(left, right, *theta),
            Query::Embeds { depth, left, right } => {
                let config = depth.map_or_else(EngineConfig::default, |max_embedding_depth| EngineConfig { max_embedding_depth });
                engine::embeds_with(left, right, &config)
            }
            Query::Density(d) => engine::density_class(d),
            Query::Fubini { k, p, gamma, dim, fiber_dim } => engine::fubini_split(*k, *p, *gamma, *dim, *fiber_dim),
        }
    }
}

/// Parses and runs a query.
pub fn run_query(input: &str) -> Result<QueryResult, ParseError> {
    Ok(parse_query(input)?.run())
}

pub fn parse_query(input: &str) -> Result<Query, ParseError> {
    let mut cur = Cursor::new(input);
    let op_col = cur.skip_ws();
    let op = cur.word().ok_or_else(|| cur.error("expected an operation name"))?;
    let mut items = Vec::new();
    loop {
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        items.push(cur.item()?);
    }
    let mut args = Args { items, end: cur.column() };
    let query = match op.as_str() {
        "validate" => Query::Validate(args.space(op_col, "validate")?),
        "trace" => {
            let m = args.int("m")?;
            Query::Trace { m, space: args.space(op_col, "trace")? }
        }
        "trace-vector" => {
            let m = args.int("m")?;
            Query::TraceVector { m, space: args.space(op_col, "trace-vector")? }
        }
        "interpolate" => {
            let theta = args.rational("theta")?;
            let left = args.space(op_col, "interpolate")?;
            let right = args.space(op_col, "interpolate")?;
            Query::Interpolate { theta, left, right }
        }
        "embeds" => {
            let depth = args.optional_int("depth")?.map(|d| d as usize);
            let left = args.space(op_col, "embeds")?;
            let right = args.space(op_col, "embeds")?;
            Query::Embeds { depth, left, right }
        }
        "density" => Query::Density(args.space(op_col, "density")?),
        "fubini" => {
            let k = args.int("k")?;
            let p = args.rational("p")?;
            let gamma = args.rational("gamma")?;
            let dim = args.optional_int("d")?.unwrap_or(2);
            let fiber_dim = args.optional_int("r")?.unwrap_or(1);
            Query::Fubini { k, p, gamma, dim, fiber_dim }
        }
        other => {
            return Err(ParseError {
                column: op_col,
                message: format!("unknown operation `{other}` (expected validate, trace, trace-vector, interpolate, embeds, density or fubini)"),
            })
        }
    };
    args.finish()?;
    Ok(query)
}

/// Parses a single space such as `W[k=2,p=2,gamma=1/2]`.
pub fn parse_space(input: &str) -> Result<SpaceDescriptor, ParseError> {
    let mut cur = Cursor::new(input);
    cur.skip_ws();
    let item = cur.item()?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("unexpected input after the space"));
    }
    match item.kind {
        ItemKind::Space(d) => Ok(d),
        ItemKind::Named { .. } => Err(ParseError { column: item.column, message: "expected a space like W[k=2,p=2]".into() }),
    }
}

#[derive(Clone, Debug)]
enum Value {
    Rational(Q),
    Word(String),
}

#[derive(Clone, Debug)]
enum ItemKind {
    Space(SpaceDescriptor),
    Named { key: String, value: Value },
}

#[derive(Clone, Debug)]
struct Item {
    column: usize,
    kind: ItemKind,
}

struct Args {
    items: Vec<Item>,
    end: usize,
}

impl Args {
    fn take_named(&mut self, key: &str) -> Option<(usize, Value)> {
        let idx = self.items.iter().position(|i| matches!(&i.kind, ItemKind::Named { key: k, .. } if k == key))?;
        let item = self.items.remove(idx);
        match item.kind {
            ItemKind::Named { value, .. } => Some((item.column, value)),
            ItemKind::Space(_) => unreachable!(),
        }
    }

    fn optional_rational(&mut self, key: &str) -> Result<Option<Q>, ParseError> {
        match self.take_named(key) {
            None => Ok(None),
            Some((_, Value::Rational(q))) => Ok(Some(q)),
            Some((column, Value::Word(w))) => Err(ParseError { column, message: format!("`{key}` expects a number, got `{w}`") }),
        }
    }

    fn rational(&mut self, key: &str) -> Result<Q, ParseError> {
        self.optional_rational(key)?.ok_or_else(|| ParseError { column: self.end, message: format!("missing argument `{key}=`") })
    }

    fn optional_int(&mut self, key: &str) -> Result<Option<u32>, ParseError> {
        let column = self.items.iter().find(|i| matches!(&i.kind, ItemKind::Named { key: k, .. } if k == key)).map(|i| i.column);
        match self.optional_rational(key)? {
            None => Ok(None),
            Some(q) => to_u32(q).map(Some).ok_or_else(|| ParseError {
                column: column.unwrap_or(self.end),
                message: format!("`{key}` expects a nonnegative integer"),
            }),
        }
    }

    fn int(&mut self, key: &str) -> Result<u32, ParseError> {
        self.optional_int(key)?.ok_or_else(|| ParseError { column: self.end, message: format!("missing argument `{key}=`") })
    }

    fn space(&mut self, _op_col: usize, op: &str) -> Result<SpaceDescriptor, ParseError> {
        let idx = self
            .items
            .iter()
            .position(|i| matches!(i.kind, ItemKind::Space(_)))
            .ok_or_else(|| ParseError { column: self.end, message: format!("`{op}` expects a space like W[k=2,p=2]") })?;
        match self.items.remove(idx).kind {
            ItemKind::Space(d) => Ok(d),
            ItemKind::Named { .. } => unreachable!(),
        }
    }

    fn finish(self) -> Result<(), ParseError> {
        match self.items.first() {
            None => Ok(()),
            Some(Item { column, kind: ItemKind::Named { key, .. } }) => {
                Err(ParseError { column: *column, message: format!("unexpected or repeated argument `{key}`") })
            }
            Some(Item { column, .. }) => Err(ParseError { column: *column, message: "unexpected extra space".into() }),
        }
    }
}

fn to_u32(q: Q) -> Option<u32> {
    (q.is_integer() && q >= Q::zero()).then(|| u32::try_from(q.to_integer()).ok()).flatten()
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _input: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Self { chars: input.chars().collect(), pos: 0, _input: input }
    }

    fn column(&self) -> usize {
        self.pos
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { column: self.pos, message: message.into() }
    }

    /// Skips whitespace and quotes; returns the new column.
    fn skip_ws(&mut self) -> usize {
        while matches!(self.peek(), Some(c) if c.is_whitespace() || c == '"' || c == '\'') {
            self.pos += 1;
        }
        self.pos
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(match self.peek() {
                Some(found) => format!("expected `{c}`, found `{found}`"),
                None => format!("expected `{c}`, found end of input"),
            }))
        }
    }

    fn word(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn digits(&mut self) -> Option<(String, usize)> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| (self.chars[start..self.pos].iter().collect(), start))
    }

    fn bounded(&self, text: &str, column: usize) -> Result<i64, ParseError> {
        text.parse::<i64>()
            .ok()
            .filter(|v| *v <= MAX_LITERAL)
            .ok_or(ParseError { column, message: format!("literal {text} exceeds {MAX_LITERAL}") })
    }

    fn rational(&mut self) -> Result<Q, ParseError> {
        let start = self.pos;
        let negative = self.eat('-');
        let (int_part, col) = self.digits().ok_or_else(|| self.error("expected a number"))?;
        let mut value = q_int(self.bounded(&int_part, col)?);
        if self.eat('.') {
            let (frac, col) = self.digits().ok_or_else(|| self.error("expected digits after `.`"))?;
            if frac.len() > 6 {
                return Err(ParseError { column: col, message: "at most 6 decimal digits are accepted".into() });
            }
            let scale = 10i64.pow(frac.len() as u32);
            value += Q::new(self.bounded(&frac, col)?, scale);
        } else if self.eat('/') {
            let (den, col) = self.digits().ok_or_else(|| self.error("expected a denominator after `/`"))?;
            let den = self.bounded(&den, col)?;
            if den == 0 {
                return Err(ParseError { column: col, message: "zero denominator".into() });
            }
            value /= q_int(den);
        }
        if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
            return Err(self.error(format!("malformed number starting at column {start}")));
        }
        Ok(if negative { -value } else { value })
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '-' => Ok(Value::Rational(self.rational()?)),
            Some(c) if c.is_ascii_alphabetic() => Ok(Value::Word(self.word().expect("starts with a letter"))),
            Some(c) => Err(self.error(format!("expected a value, found `{c}`"))),
            None => Err(self.error("expected a value, found end of input")),
        }
    }

    /// A `key=value` argument or a space.
    fn item(&mut self) -> Result<Item, ParseError> {
        let column = self.pos;
        let word = self.word().ok_or_else(|| self.error(format!("expected an argument or a space, found `{}`", self.peek().unwrap_or(' '))))?;
        if self.peek() == Some('[') {
            let space = self.space_body(&word, column)?;
            return Ok(Item { column, kind: ItemKind::Space(space) });
        }
        self.expect('=')?;
        let value = self.value()?;
        Ok(Item { column, kind: ItemKind::Named { key: word, value } })
    }

    fn space_body(&mut self, family_word: &str, column: usize) -> Result<SpaceDescriptor, ParseError> {
        let family = match family_word {
            "B" => Family::Besov,
            "F" => Family::TriebelLizorkin,
            "H" => Family::BesselPotential,
            "W" => Family::Sobolev,
            "L" => Family::Lebesgue,
            other => return Err(ParseError { column, message: format!("unknown family `{other}` (expected B, F, H, W or L)") }),
        };
        self.expect('[')?;
        let mut fields = SpaceFields::default();
        if !self.eat(']') {
            loop {
                self.field(&mut fields)?;
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        fields.build(family, column)
    }

    fn field(&mut self, f: &mut SpaceFields) -> Result<(), ParseError> {
        let column = self.pos;
        let key = self.word().ok_or_else(|| self.error("expected a field name"))?;
        self.expect('=')?;
        let dup = || ParseError { column, message: format!("field `{key}` given twice") };
        match key.as_str() {
            "s" | "k" => {
                let v = self.rational()?;
                if f.smoothness.replace((v, column)).is_some() {
                    return Err(ParseError { column, message: "smoothness given twice (use either s or k)".into() });
                }
            }
            "p" => {
                let v = self.rational()?;
                f.p.replace(v).map_or(Ok(()), |_| Err(dup()))?;
            }
            "q" => {
                let v = if self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                    match self.word().as_deref() {
                        Some("inf") => Exponent::Infinity,
                        _ => return Err(ParseError { column, message: "q expects a number or `inf`".into() }),
                    }
                } else {
                    Exponent::Finite(self.rational()?)
                };
                f.q.replace((v, column)).map_or(Ok(()), |_| Err(dup()))?;
            }
            "gamma" => {
                let v = self.rational()?;
                f.gamma.replace(v).map_or(Ok(()), |_| Err(dup()))?;
            }
            "d" | "r" => {
                let vcol = self.pos;
                let v = to_u32(self.rational()?).ok_or(ParseError { column: vcol, message: format!("`{key}` expects a nonnegative integer") })?;
                let slot = if key == "d" { &mut f.dim } else { &mut f.fiber };
                slot.replace(v).map_or(Ok(()), |_| Err(dup()))?;
            }
            "dom" => {
                let vcol = self.pos;
                let domain = match self.word().as_deref() {
                    Some("full") => Domain::FullSpace,
                    Some("half") => Domain::HalfSpace,
                    Some("bdry") => Domain::BoundaryHyperplane,
                    _ => return Err(ParseError { column: vcol, message: "dom expects full, half or bdry".into() }),
                };
                f.domain.replace(domain).map_or(Ok(()), |_| Err(dup()))?;
            }
            "bc" => {
                let bc = self.boundary_conditions()?;
                f.bc.replace(bc).map_or(Ok(()), |_| Err(dup()))?;
            }
            other => {
                return Err(ParseError { column, message: format!("unknown field `{other}` (expected s, k, p, q, gamma, d, r, dom or bc)") });
            }
        }
        Ok(())
    }

    fn order_list(&mut self, with_dims: bool) -> Result<Vec<(u32, Option<u32>)>, ParseError> {
        self.expect('{')?;
        let mut out = Vec::new();
        loop {
            let col = self.pos;
            let m = to_u32(self.rational()?).ok_or(ParseError { column: col, message: "boundary orders are nonnegative integers".into() })?;
            let mut y = None;
            if with_dims && self.eat(':') {
                let col = self.pos;
                y = Some(to_u32(self.rational()?).ok_or(ParseError { column: col, message: "target dimensions are positive integers".into() })?);
            }
            out.push((m, y));
            if self.eat('}') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn boundary_conditions(&mut self) -> Result<RawConditions, ParseError> {
        let column = self.pos;
        if self.peek() == Some('{') {
            return Ok(RawConditions::Normal(self.order_list(true)?));
        }
        match self.word().as_deref() {
            Some("zero") => Ok(RawConditions::Vanishing),
            Some("tr") => Ok(RawConditions::Traces(self.order_list(false)?.into_iter().map(|(m, _)| m).collect())),
            _ => Err(ParseError { column, message: "bc expects zero, tr{m,…} or {m:y,…}".into() }),
        }
    }
}

#[derive(Clone, Debug)]
enum RawConditions {
    Vanishing,
    Traces(Vec<u32>),
    Normal(Vec<(u32, Option<u32>)>),
}

#[derive(Default)]
struct SpaceFields {
    smoothness: Option<(Q, usize)>,
    p: Option<Q>,
    q: Option<(Exponent, usize)>,
    gamma: Option<Q>,
    dim: Option<u32>,
    fiber: Option<u32>,
    domain: Option<Domain>,
    bc: Option<RawConditions>,
}

impl SpaceFields {
    fn build(self, family: Family, column: usize) -> Result<SpaceDescriptor, ParseError> {
        let p = self.p.ok_or(ParseError { column, message: "missing field `p`".into() })?;
        let smoothness = match (family, self.smoothness) {
            (Family::Lebesgue, None) => Q::zero(),
            (Family::Lebesgue, Some((s, _))) => s,
            (_, Some((s, _))) => s,
            (_, None) => return Err(ParseError { column, message: "missing smoothness (`s=` or `k=`)".into() }),
        };
        let q = match self.q {
            Some((q, col)) if !family.uses_q() => {
                let _ = q;
                return Err(ParseError { column: col, message: format!("`q` only applies to B and F spaces, not {}", family.symbol()) });
            }
            Some((q, _)) => q,
            None => Exponent::Finite(p),
        };
        let fiber = self.fiber.unwrap_or(1);
        let bc = self.bc.map(|raw| match raw {
            RawConditions::Vanishing => BoundaryConditions::Vanishing,
            RawConditions::Traces(orders) => BoundaryConditions::Normal(NormalSystemSignature::traces(orders, fiber)),
            RawConditions::Normal(pairs) => {
                let (orders, dims) = pairs.into_iter().map(|(m, y)| (m, y.unwrap_or(fiber))).unzip();
                BoundaryConditions::Normal(NormalSystemSignature::new(orders, dims))
            }
        });
        let domain = self.domain.unwrap_or(if family == Family::Sobolev || bc.is_some() { Domain::HalfSpace } else { Domain::FullSpace });
        let params = ParamSet::new(p, q, smoothness, self.gamma.unwrap_or_else(Q::zero), self.dim.unwrap_or(2), fiber);
        Ok(SpaceDescriptor::raw(family, params, domain, bc))
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::types::fmt_q;
        match self {
            Query::Validate(d) => write!(f, "validate {d}"),
            Query::Trace { m, space } => write!(f, "trace m={m} {space}"),
            Query::TraceVector { m, space } => write!(f, "trace-vector m={m} {space}"),
            Query::Interpolate { theta, left, right } => write!(f, "interpolate theta={} {left} {right}", fmt_q(theta)),
            Query::Embeds { depth: Some(depth), left, right } => write!(f, "embeds depth={depth} {left} {right}"),
            Query::Embeds { depth: None, left, right } => write!(f, "embeds {left} {right}"),
            Query::Density(d) => write!(f, "density {d}"),
            Query::Fubini { k, p, gamma, dim, fiber_dim } => {
                write!(f, "fubini k={k} p={} gamma={} d={dim} r={fiber_dim}", fmt_q(p), fmt_q(gamma))
            }
        }
    }
}
