//! JSON file formats.
//!
//! System file:
//!
//! ```json
//! { "n": 2, "q": 1,
//!   "a_edges": [ {"from": 0, "to": 1, "cost": "2.5"} ],
//!   "b_edges": [ {"from": 0, "to": 0} ],
//!   "input_costs": [ "1" ] }
//! ```
//!
//! `a_edges` entry `{"from": j, "to": i}` is the state edge `x_j -> x_i`, i.e.
//! `A[i][j] != 0`; `b_edges` entry `{"from": j, "to": i}` is `u_j -> x_i`,
//! i.e. `B[i][j] != 0`. The example above is
//!
//! ```text
//!   A = [0 0]   B = [1]
//!       [1 0]       [0]
//! ```
//!
//! `cost` defaults to `"1"`. Insertion problems add `a_candidates` and
//! `b_candidates` with the same element shape; for them the `a_edges` /
//! `b_edges` arrays describe the existing pattern and their costs are
//! ignored.
//!
//! Source graphs for the reduction gadgets are `{"n": .., "edges": [[i, j], ..]}`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Digraph};
use crate::insertion::InsertionProblem;
use crate::system::{CostModel, EdgeKind, StructuredSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatErrorKind {
    MalformedJson,
    IndexOutOfRange,
    NegativeCost,
    InvalidCost,
    DuplicateEdge,
    InvalidValue,
}

impl fmt::Display for FormatErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormatErrorKind::MalformedJson => "malformed JSON",
            FormatErrorKind::IndexOutOfRange => "index out of range",
            FormatErrorKind::NegativeCost => "negative cost",
            FormatErrorKind::InvalidCost => "invalid cost",
            FormatErrorKind::DuplicateEdge => "duplicate edge",
            FormatErrorKind::InvalidValue => "invalid value",
        })
    }
}

/// Where in the file an error was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Text { line: usize, column: usize },
    Path(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Text { line, column } => write!(f, "line {line} column {column}"),
            Location::Path(p) => f.write_str(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {location}: {detail}")]
pub struct FormatError {
    pub kind: FormatErrorKind,
    pub location: Location,
    pub detail: String,
}

impl FormatError {
    fn at(kind: FormatErrorKind, path: impl Into<String>, detail: impl Into<String>) -> Self {
        FormatError {
            kind,
            location: Location::Path(path.into()),
            detail: detail.into(),
        }
    }

    fn from_json(e: serde_json::Error) -> Self {
        FormatError {
            kind: FormatErrorKind::MalformedJson,
            location: Location::Text {
                line: e.line(),
                column: e.column(),
            },
            detail: strip_position(&e.to_string()),
        }
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawEdge {
    pub from: usize,
    pub to: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawSystem {
    pub n: usize,
    pub q: usize,
    #[serde(default)]
    pub a_edges: Vec<RawEdge>,
    #[serde(default)]
    pub b_edges: Vec<RawEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_costs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_candidates: Option<Vec<RawEdge>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_candidates: Option<Vec<RawEdge>>,
}

fn parse_cost(raw: Option<&str>, path: &str) -> std::result::Result<Cost, FormatError> {
    let Some(raw) = raw else {
        return Ok(Cost::one());
    };
    raw.parse::<Cost>().map_err(|e| {
        let kind = if matches!(&e, Error::InvalidCost(m) if m.starts_with("negative")) {
            FormatErrorKind::NegativeCost
        } else {
            FormatErrorKind::InvalidCost
        };
        FormatError::at(kind, path, format!("\"{raw}\""))
    })
}

type CostedEdges = Vec<(usize, usize, Cost)>;

impl RawSystem {
    fn edges(
        list: &[RawEdge],
        field: &str,
        prefix: &str,
        tails: usize,
        heads: usize,
        kind: EdgeKind,
        seen: &mut HashSet<(EdgeKind, usize, usize)>,
    ) -> std::result::Result<CostedEdges, FormatError> {
        let mut out = Vec::with_capacity(list.len());
        for (i, e) in list.iter().enumerate() {
            let path = format!("{prefix}{field}[{i}]");
            if e.from >= tails {
                return Err(FormatError::at(
                    FormatErrorKind::IndexOutOfRange,
                    format!("{path}.from"),
                    format!("{} not below {tails}", e.from),
                ));
            }
            if e.to >= heads {
                return Err(FormatError::at(
                    FormatErrorKind::IndexOutOfRange,
                    format!("{path}.to"),
                    format!("{} not below {heads}", e.to),
                ));
            }
            if !seen.insert((kind, e.from, e.to)) {
                return Err(FormatError::at(
                    FormatErrorKind::DuplicateEdge,
                    path,
                    format!("({}, {})", e.from, e.to),
                ));
            }
            out.push((e.from, e.to, parse_cost(e.cost.as_deref(), &format!("{path}.cost"))?));
        }
        Ok(out)
    }

    fn check_header(&self, prefix: &str) -> std::result::Result<(), FormatError> {
        if self.n == 0 {
            return Err(FormatError::at(
                FormatErrorKind::InvalidValue,
                format!("{prefix}n"),
                "state count must be at least 1",
            ));
        }
        Ok(())
    }

    pub(crate) fn to_system(&self, prefix: &str) -> std::result::Result<(StructuredSystem, CostModel), FormatError> {
        self.check_header(prefix)?;
        let mut seen = HashSet::new();
        let a = Self::edges(&self.a_edges, "a_edges", prefix, self.n, self.n, EdgeKind::State, &mut seen)?;
        let b = Self::edges(&self.b_edges, "b_edges", prefix, self.q, self.n, EdgeKind::Input, &mut seen)?;
        let input_costs = match &self.input_costs {
            None => None,
            Some(list) => {
                if list.len() != self.q {
                    return Err(FormatError::at(
                        FormatErrorKind::InvalidValue,
                        format!("{prefix}input_costs"),
                        format!("length {} differs from q = {}", list.len(), self.q),
                    ));
                }
                let mut costs = Vec::with_capacity(list.len());
                for (i, c) in list.iter().enumerate() {
                    costs.push(parse_cost(Some(c), &format!("{prefix}input_costs[{i}]"))?);
                }
                Some(costs)
            }
        };
        let system = StructuredSystem::new(
            self.n,
            self.q,
            a.iter().map(|&(f, t, _)| (f, t)).collect(),
            b.iter().map(|&(f, t, _)| (f, t)).collect(),
        )
        .expect("validated above");
        let edge_costs = a.into_iter().chain(b).map(|(_, _, c)| c).collect();
        Ok((system, CostModel { edge_costs, input_costs }))
    }

    pub(crate) fn to_problem(&self, prefix: &str) -> Result<InsertionProblem> {
        let (base, _) = self.to_system(prefix)?;
        let mut seen = HashSet::new();
        let a = Self::edges(
            self.a_candidates.as_deref().unwrap_or(&[]),
            "a_candidates",
            prefix,
            self.n,
            self.n,
            EdgeKind::State,
            &mut seen,
        )?;
        let b = Self::edges(
            self.b_candidates.as_deref().unwrap_or(&[]),
            "b_candidates",
            prefix,
            self.q,
            self.n,
            EdgeKind::Input,
            &mut seen,
        )?;
        InsertionProblem::normalize(&base, &a, &b)
    }

    pub(crate) fn from_system(s: &StructuredSystem, costs: &CostModel) -> RawSystem {
        let edge = |(from, to): (usize, usize), c: &Cost| RawEdge {
            from,
            to,
            cost: Some(c.to_decimal_string()),
        };
        let na = s.a_edges().len();
        RawSystem {
            n: s.n(),
            q: s.q(),
            a_edges: s
                .a_edges()
                .iter()
                .zip(&costs.edge_costs)
                .map(|(&e, c)| edge(e, c))
                .collect(),
            b_edges: s
                .b_edges()
                .iter()
                .zip(&costs.edge_costs[na..])
                .map(|(&e, c)| edge(e, c))
                .collect(),
            input_costs: costs
                .input_costs
                .as_ref()
                .map(|v| v.iter().map(Cost::to_decimal_string).collect()),
            a_candidates: None,
            b_candidates: None,
        }
    }

    pub(crate) fn from_problem(p: &InsertionProblem) -> RawSystem {
        let base = p.base();
        let zero = Cost::zero();
        let mut raw = RawSystem::from_system(
            base,
            &CostModel {
                edge_costs: vec![zero; base.edge_count()],
                input_costs: None,
            },
        );
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (id, e) in p.system().edges().enumerate() {
            if p.is_base(id) {
                continue;
            }
            let raw_edge = RawEdge {
                from: e.from,
                to: e.to,
                cost: Some(p.costs()[id].to_decimal_string()),
            };
            match e.kind {
                EdgeKind::State => a.push(raw_edge),
                EdgeKind::Input => b.push(raw_edge),
            }
        }
        raw.a_candidates = Some(a);
        raw.b_candidates = Some(b);
        raw
    }
}

pub(crate) fn json_error(e: serde_json::Error) -> FormatError {
    FormatError::from_json(e)
}

pub(crate) fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn from_json<'a, T: Deserialize<'a>>(bytes: &'a [u8]) -> std::result::Result<T, FormatError> {
    serde_json::from_slice(bytes).map_err(FormatError::from_json)
}

/// Parses a system file. Candidate arrays, if present, are ignored.
pub fn parse_system(bytes: &[u8]) -> Result<(StructuredSystem, CostModel)> {
    let raw: RawSystem = from_json(bytes)?;
    Ok(raw.to_system("")?)
}

pub fn render_system(s: &StructuredSystem, costs: &CostModel) -> String {
    to_pretty_json(&RawSystem::from_system(s, costs))
}

/// Parses an insertion problem file and normalizes it.
pub fn parse_problem(bytes: &[u8]) -> Result<InsertionProblem> {
    let raw: RawSystem = from_json(bytes)?;
    raw.to_problem("")
}

pub fn render_problem(p: &InsertionProblem) -> String {
    to_pretty_json(&RawSystem::from_problem(p))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawGraph {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
}

impl RawGraph {
    fn checked(&self, prefix: &str, directed_pairs: bool) -> std::result::Result<Vec<(usize, usize)>, FormatError> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (i, &[a, b]) in self.edges.iter().enumerate() {
            for (slot, v) in [a, b].into_iter().enumerate() {
                if v >= self.n {
                    return Err(FormatError::at(
                        FormatErrorKind::IndexOutOfRange,
                        format!("{prefix}edges[{i}][{slot}]"),
                        format!("{v} not below {}", self.n),
                    ));
                }
            }
            let key = if directed_pairs { (a, b) } else { (a.min(b), a.max(b)) };
            if !seen.insert(key) {
                return Err(FormatError::at(
                    FormatErrorKind::DuplicateEdge,
                    format!("{prefix}edges[{i}]"),
                    format!("({a}, {b})"),
                ));
            }
            out.push((a, b));
        }
        Ok(out)
    }

    pub(crate) fn to_digraph(&self, prefix: &str) -> std::result::Result<Digraph, FormatError> {
        let edges = self.checked(prefix, true)?;
        Ok(Digraph::from_edges(self.n, edges).expect("validated above"))
    }

    /// `n` left and `n` right vertices; `[l, r]` joins left `l` to right `r`.
    pub(crate) fn to_bipartite(&self, prefix: &str) -> std::result::Result<BipartiteGraph, FormatError> {
        let edges = self.checked(prefix, true)?;
        Ok(BipartiteGraph::from_edges(self.n, self.n, edges).expect("validated above"))
    }

    pub(crate) fn to_undirected(&self, prefix: &str) -> std::result::Result<Vec<(usize, usize)>, FormatError> {
        let edges = self.checked(prefix, false)?;
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(FormatError::at(
                    FormatErrorKind::InvalidValue,
                    format!("{prefix}edges[{i}]"),
                    "self-loop in undirected graph",
                ));
            }
        }
        Ok(edges)
    }
}

pub fn parse_digraph(bytes: &[u8]) -> Result<Digraph> {
    let raw: RawGraph = from_json(bytes)?;
    Ok(raw.to_digraph("")?)
}

pub fn parse_bipartite(bytes: &[u8]) -> Result<BipartiteGraph> {
    let raw: RawGraph = from_json(bytes)?;
    Ok(raw.to_bipartite("")?)
}

/// Undirected graph as `(vertex count, edge list)`.
pub fn parse_undirected(bytes: &[u8]) -> Result<(usize, Vec<(usize, usize)>)> {
    let raw: RawGraph = from_json(bytes)?;
    let edges = raw.to_undirected("")?;
    Ok((raw.n, edges))
}

pub fn render_digraph(g: &Digraph) -> String {
    to_pretty_json(&RawGraph {
        n: g.vertex_count(),
        edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
    })
}

pub fn render_bipartite(b: &BipartiteGraph) -> String {
    to_pretty_json(&RawGraph {
        n: b.left_count(),
        edges: b.edges().iter().map(|&(a, c)| [a, c]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind_of(r: Result<(StructuredSystem, CostModel)>) -> FormatErrorKind {
        match r {
            Err(Error::Format(e)) => e.kind,
            other => panic!("expected a format error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_file() {
        let (s, c) = parse_system(br#"{"n":1,"q":1,"b_edges":[{"from":0,"to":0,"cost":"1"}]}"#).unwrap();
        assert_eq!((s.n(), s.q()), (1, 1));
        assert_eq!(s.b_edges(), &[(0, 0)]);
        assert_eq!(c.edge_costs, vec![Cost::one()]);
    }

    #[test]
    fn cost_defaults_to_one() {
        let (_, c) = parse_system(br#"{"n":2,"q":0,"a_edges":[{"from":0,"to":1}]}"#).unwrap();
        assert_eq!(c.edge_costs, vec![Cost::one()]);
    }

    #[test]
    fn negative_cost_is_named() {
        let r = parse_system(br#"{"n":1,"q":1,"b_edges":[{"from":0,"to":0,"cost":"-1"}]}"#);
        let err = r.unwrap_err().to_string();
        assert!(err.starts_with("negative cost"), "{err}");
        assert!(err.contains("b_edges[0].cost"), "{err}");
    }

    #[test]
    fn distinct_error_kinds() {
        assert_eq!(kind_of(parse_system(b"{\"n\":1,")), FormatErrorKind::MalformedJson);
        assert_eq!(
            kind_of(parse_system(br#"{"n":1,"q":1,"b_edges":[{"from":1,"to":0}]}"#)),
            FormatErrorKind::IndexOutOfRange
        );
        assert_eq!(
            kind_of(parse_system(br#"{"n":2,"q":0,"a_edges":[{"from":0,"to":1},{"from":0,"to":1}]}"#)),
            FormatErrorKind::DuplicateEdge
        );
        assert_eq!(
            kind_of(parse_system(br#"{"n":1,"q":0,"a_edges":[{"from":0,"to":0,"cost":"x"}]}"#)),
            FormatErrorKind::InvalidCost
        );
        assert_eq!(kind_of(parse_system(br#"{"n":1,"q":0,"extra":1}"#)), FormatErrorKind::MalformedJson);
    }

    #[test]
    fn malformed_json_carries_position() {
        let err = parse_system(b"{\n  \"n\": 1,\n  \"q\": }").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn round_trip() {
        let s = StructuredSystem::new(3, 2, vec![(0, 1), (2, 2)], vec![(1, 0), (0, 2)]).unwrap();
        let costs = CostModel {
            edge_costs: ["1", "0.5", "2/3", "0"].iter().map(|c| c.parse().unwrap()).collect(),
            input_costs: Some(vec![Cost::one(), Cost::from_integer(7)]),
        };
        let text = render_system(&s, &costs);
        let (s2, c2) = parse_system(text.as_bytes()).unwrap();
        assert_eq!(s2, s);
        assert_eq!(c2, costs);
        assert_eq!(render_system(&s2, &c2), text);
    }

    #[test]
    fn source_graphs() {
        let g = parse_digraph(br#"{"n":3,"edges":[[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(parse_digraph(render_digraph(&g).as_bytes()).unwrap(), g);
        assert!(parse_undirected(br#"{"n":3,"edges":[[0,1],[1,0]]}"#).is_err());
        assert!(parse_undirected(br#"{"n":3,"edges":[[1,1]]}"#).is_err());
        let b = parse_bipartite(br#"{"n":2,"edges":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(b.right_count(), 2);
    }
}
