//! Plain-text instance format.
//!
//! ```text
//! c comment lines and blank lines are ignored
//! p min <n> <m>          header, exactly once, before any n/a line
//! n <id> <demand>        optional; ids are 1-based, unlisted vertices get 0
//! a <u> <v> <length>     exactly m arc lines; length > 0, u != v
//! ```
//!
//! Arcs are read as undirected edges oriented `u → v`. A separate JSON
//! object `{"<id>": <demand>, ...}` (1-based ids) may replace the node
//! lines. Demands must total zero within `1e-9·‖b‖₁`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{DemandVector, LengthGraph};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct Instance<F> {
    pub graph: LengthGraph<F>,
    pub demand: DemandVector<F>,
}

/// Graph plus raw (unchecked) node-line demands.
#[derive(Debug, Clone)]
pub struct ParsedText<F> {
    pub graph: LengthGraph<F>,
    pub demand: Vec<F>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

fn scalar<F: Scalar>(x: f64, line: usize, what: &str) -> Result<F> {
    if !x.is_finite() {
        return Err(parse_err(line, format!("{what} is not finite")));
    }
    F::from_f64(x).ok_or_else(|| parse_err(line, format!("{what} not representable")))
}

fn vertex(tok: Option<&str>, n: usize, line: usize) -> Result<usize> {
    let id: usize = field(tok, line, "vertex id")?;
    if id == 0 || id > n {
        return Err(parse_err(line, format!("vertex id {id} outside 1..={n}")));
    }
    Ok(id - 1)
}

/// Parses the text format without checking demand balance.
pub fn parse_text<F: Scalar>(text: &str) -> Result<ParsedText<F>> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut demand: Vec<F> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate header"));
                }
                let problem: String = field(toks.next(), line, "problem type")?;
                if problem != "min" {
                    return Err(parse_err(line, format!("unsupported problem {problem:?}")));
                }
                let n: usize = field(toks.next(), line, "vertex count")?;
                let m: usize = field(toks.next(), line, "arc count")?;
                header = Some((n, m));
                demand = vec![F::zero(); n];
            }
            "n" | "a" => {
                let (n, _) = header.ok_or_else(|| parse_err(line, "line before header"))?;
                if kind == "n" {
                    let v = vertex(toks.next(), n, line)?;
                    let d: f64 = field(toks.next(), line, "demand")?;
                    demand[v] += scalar(d, line, "demand")?;
                } else {
                    let u = vertex(toks.next(), n, line)?;
                    let v = vertex(toks.next(), n, line)?;
                    let l: f64 = field(toks.next(), line, "length")?;
                    if !(l > 0.0) {
                        return Err(parse_err(line, format!("non-positive length {l}")));
                    }
                    if u == v {
                        return Err(parse_err(line, "self-loop"));
                    }
                    edges.push((u, v, scalar(l, line, "length")?));
                }
            }
            other => return Err(parse_err(line, format!("unknown line type {other:?}"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing `p min n m` header"))?;
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header declares {m} arcs, found {}", edges.len()),
        ));
    }
    Ok(ParsedText {
        graph: LengthGraph::new(n, &edges)?,
        demand,
    })
}

/// Parses a JSON object of 1-based vertex ids to demands.
pub fn parse_demands_json<F: Scalar>(json: &str, n: usize) -> Result<Vec<F>> {
    let map: BTreeMap<String, f64> = serde_json::from_str(json)?;
    let mut b = vec![F::zero(); n];
    for (key, value) in map {
        let id: usize = key
            .trim()
            .parse()
            .map_err(|_| parse_err(0, format!("demand key {key:?} is not a vertex id")))?;
        if id == 0 || id > n {
            return Err(parse_err(0, format!("demand vertex {id} outside 1..={n}")));
        }
        b[id - 1] += scalar(value, 0, "demand")?;
    }
    Ok(b)
}

/// Reads an instance; `demands_json`, when present, replaces node lines.
pub fn read_instance<F: Scalar>(text: &str, demands_json: Option<&str>) -> Result<Instance<F>> {
    let parsed = parse_text::<F>(text)?;
    let values = match demands_json {
        Some(js) => parse_demands_json(js, parsed.graph.num_vertices())?,
        None => parsed.demand,
    };
    Ok(Instance {
        graph: parsed.graph,
        demand: DemandVector::new(values)?,
    })
}

/// Writes `g` and `b` in the text format (values via `{:?}` of `f64`, which
/// round-trips exactly).
pub fn write_instance<F: Scalar>(g: &LengthGraph<F>, b: &[F]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p min {} {}", g.num_vertices(), g.num_edges());
    for (v, d) in b.iter().enumerate() {
        if !d.is_zero() {
            let _ = writeln!(out, "n {} {:?}", v + 1, d.to_f64_lossy());
        }
    }
    for (u, v, l) in g.edges() {
        let _ = writeln!(out, "a {} {} {:?}", u + 1, v + 1, l.to_f64_lossy());
    }
    out
}
