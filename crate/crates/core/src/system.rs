//! Structured linear systems `x(t+1) = A x(t) + B u(t)` described by the
//! sparsity patterns of `A` (n x n) and `B` (n x q).
//!
//! Edge convention: a state edge `(from: j, to: i)` means `A[i][j] != 0`, an
//! input edge `(from: j, to: i)` means `B[i][j] != 0`. In the system digraph
//! states take vertex ids `0..n` and input `j` takes vertex id `n + j`.
//!
//! ```text
//!   A = [0 0]      state edge x0 -> x1  (A[1][0] != 0)
//!       [1 0]
//!   B = [1]        input edge u0 -> x0  (B[0][0] != 0)
//!       [0]
//! ```

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{self, BipartiteGraph, Digraph, EdgeId};
use crate::matrix::StructuredMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    State,
    Input,
}

/// A state edge `x_from -> x_to` or an input edge `u_from -> x_to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SysEdge {
    pub kind: EdgeKind,
    pub from: usize,
    pub to: usize,
}

impl SysEdge {
    pub fn state(from: usize, to: usize) -> Self {
        SysEdge {
            kind: EdgeKind::State,
            from,
            to,
        }
    }

    pub fn input(from: usize, to: usize) -> Self {
        SysEdge {
            kind: EdgeKind::Input,
            from,
            to,
        }
    }

    /// Tail vertex id in the system digraph of a system with `n` states.
    pub fn tail_vertex(&self, n: usize) -> usize {
        match self.kind {
            EdgeKind::State => self.from,
            EdgeKind::Input => n + self.from,
        }
    }
}

impl fmt::Display for SysEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EdgeKind::State => write!(f, "x{}->x{}", self.from, self.to),
            EdgeKind::Input => write!(f, "u{}->x{}", self.from, self.to),
        }
    }
}

/// Sparsity patterns `(A, B)`. Edge ids run over the state edges first, then
/// the input edges, each in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredSystem {
    n: usize,
    q: usize,
    a_edges: Vec<(usize, usize)>,
    b_edges: Vec<(usize, usize)>,
}

impl StructuredSystem {
    pub fn new(
        n: usize,
        q: usize,
        a_edges: Vec<(usize, usize)>,
        b_edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for &(from, to) in &a_edges {
            for v in [from, to] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, count: n });
                }
            }
            if !seen.insert(SysEdge::state(from, to)) {
                return Err(Error::DuplicateEdge { from, to });
            }
        }
        for &(from, to) in &b_edges {
            if from >= q {
                return Err(Error::VertexOutOfRange { vertex: from, count: q });
            }
            if to >= n {
                return Err(Error::VertexOutOfRange { vertex: to, count: n });
            }
            if !seen.insert(SysEdge::input(from, to)) {
                return Err(Error::DuplicateEdge { from, to });
            }
        }
        Ok(StructuredSystem {
            n,
            q,
            a_edges,
            b_edges,
        })
    }

    pub fn from_sys_edges<I: IntoIterator<Item = SysEdge>>(n: usize, q: usize, edges: I) -> Result<Self> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for e in edges {
            match e.kind {
                EdgeKind::State => a.push((e.from, e.to)),
                EdgeKind::Input => b.push((e.from, e.to)),
            }
        }
        StructuredSystem::new(n, q, a, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn a_edges(&self) -> &[(usize, usize)] {
        &self.a_edges
    }

    pub fn b_edges(&self) -> &[(usize, usize)] {
        &self.b_edges
    }

    pub fn edge_count(&self) -> usize {
        self.a_edges.len() + self.b_edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> SysEdge {
        if id < self.a_edges.len() {
            let (f, t) = self.a_edges[id];
            SysEdge::state(f, t)
        } else {
            let (f, t) = self.b_edges[id - self.a_edges.len()];
            SysEdge::input(f, t)
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = SysEdge> + '_ {
        (0..self.edge_count()).map(|id| self.edge(id))
    }

    pub fn edge_id(&self, edge: SysEdge) -> Option<EdgeId> {
        match edge.kind {
            EdgeKind::State => self.a_edges.iter().position(|&e| e == (edge.from, edge.to)),
            EdgeKind::Input => self
                .b_edges
                .iter()
                .position(|&e| e == (edge.from, edge.to))
                .map(|p| p + self.a_edges.len()),
        }
    }

    /// `D(A, B)`: states `0..n`, inputs `n..n+q`; edge ids coincide with the
    /// system's edge ids.
    pub fn system_digraph(&self) -> Digraph {
        Digraph::from_edges(self.n + self.q, self.edges().map(|e| (e.tail_vertex(self.n), e.to)))
            .expect("validated system")
    }

    /// `D(A)` over the states only.
    pub fn state_digraph(&self) -> Digraph {
        Digraph::from_edges(self.n, self.a_edges.iter().copied()).expect("validated system")
    }

    /// `B(A, B)`: left `X ∪ U` (ids as in the digraph), right `X`; edge ids
    /// coincide with the system's edge ids.
    pub fn system_bipartite(&self) -> BipartiteGraph {
        BipartiteGraph::from_edges(
            self.n + self.q,
            self.n,
            self.edges().map(|e| (e.tail_vertex(self.n), e.to)),
        )
        .expect("validated system")
    }

    /// Generic rank of `[A B]`, i.e. the matching number of `B(A, B)`.
    pub fn generic_rank(&self) -> usize {
        graph::matching_number(&self.system_bipartite())
    }

    pub fn state_matrix(&self) -> StructuredMatrix {
        StructuredMatrix::from_entries(self.n, self.n, self.a_edges.iter().map(|&(j, i)| (i, j)))
            .expect("validated system")
    }

    pub fn input_matrix(&self) -> StructuredMatrix {
        StructuredMatrix::from_entries(self.n, self.q, self.b_edges.iter().map(|&(j, i)| (i, j)))
            .expect("validated system")
    }

    /// The compound pattern `[A B]`, n x (n + q).
    pub fn compound_matrix(&self) -> StructuredMatrix {
        StructuredMatrix::from_entries(
            self.n,
            self.n + self.q,
            self.a_edges
                .iter()
                .map(|&(j, i)| (i, j))
                .chain(self.b_edges.iter().map(|&(j, i)| (i, self.n + j))),
        )
        .expect("validated system")
    }

    /// Copy with the given edge ids removed; remaining edges keep their order.
    pub fn without_edges(&self, removed: &[EdgeId]) -> StructuredSystem {
        let removed: HashSet<EdgeId> = removed.iter().copied().collect();
        let na = self.a_edges.len();
        StructuredSystem {
            n: self.n,
            q: self.q,
            a_edges: (0..na)
                .filter(|id| !removed.contains(id))
                .map(|id| self.a_edges[id])
                .collect(),
            b_edges: (0..self.b_edges.len())
                .filter(|id| !removed.contains(&(id + na)))
                .map(|id| self.b_edges[id])
                .collect(),
        }
    }

    /// Copy with all edges of the given inputs removed. Input ids are kept,
    /// so removed inputs become isolated vertices.
    pub fn without_inputs(&self, removed: &[usize]) -> StructuredSystem {
        let removed: HashSet<usize> = removed.iter().copied().collect();
        StructuredSystem {
            n: self.n,
            q: self.q,
            a_edges: self.a_edges.clone(),
            b_edges: self
                .b_edges
                .iter()
                .copied()
                .filter(|(j, _)| !removed.contains(j))
                .collect(),
        }
    }

    /// Pattern containment `A1 ⊆ A2` and `B1 ⊆ B2` (same dimensions).
    pub fn is_subpattern_of(&self, other: &StructuredSystem) -> bool {
        if self.n != other.n || self.q != other.q {
            return false;
        }
        let theirs: HashSet<SysEdge> = other.edges().collect();
        self.edges().all(|e| theirs.contains(&e))
    }

    /// Whether `||B||_0 > 0`.
    pub fn has_input_edges(&self) -> bool {
        !self.b_edges.is_empty()
    }
}

/// Costs aligned with a system's edge ids, plus optional per-input costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostModel {
    pub edge_costs: Vec<Cost>,
    pub input_costs: Option<Vec<Cost>>,
}

impl CostModel {
    pub fn unit(system: &StructuredSystem) -> Self {
        CostModel {
            edge_costs: vec![Cost::one(); system.edge_count()],
            input_costs: None,
        }
    }

    pub fn validate(&self, system: &StructuredSystem) -> Result<()> {
        if self.edge_costs.len() != system.edge_count() {
            return Err(Error::CostLength {
                got: self.edge_costs.len(),
                expected: system.edge_count(),
            });
        }
        if let Some(ic) = &self.input_costs {
            if ic.len() != system.q() {
                return Err(Error::CostLength {
                    got: ic.len(),
                    expected: system.q(),
                });
            }
        }
        Ok(())
    }

    /// Per-input costs, defaulting to 1 for every input.
    pub fn input_costs_or_unit(&self, q: usize) -> Vec<Cost> {
        self.input_costs
            .clone()
            .unwrap_or_else(|| vec![Cost::one(); q])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    ApproxAlg1,
    Formula,
    Cut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Edges(Vec<SysEdge>),
    Inputs(Vec<usize>),
}

impl Witness {
    pub fn is_empty(&self) -> bool {
        match self {
            Witness::Edges(e) => e.is_empty(),
            Witness::Inputs(i) => i.is_empty(),
        }
    }
}

/// Outcome of a perturbation solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationResult {
    pub status: Status,
    pub witness: Witness,
    pub cost: Cost,
    pub method: Method,
}

impl PerturbationResult {
    pub fn infeasible_edges(method: Method) -> Self {
        PerturbationResult {
            status: Status::Infeasible,
            witness: Witness::Edges(Vec::new()),
            cost: Cost::zero(),
            method,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }

    pub fn edges(&self) -> &[SysEdge] {
        match &self.witness {
            Witness::Edges(e) => e,
            Witness::Inputs(_) => &[],
        }
    }

    pub fn inputs(&self) -> &[usize] {
        match &self.witness {
            Witness::Inputs(i) => i,
            Witness::Edges(_) => &[],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_input_digraph() {
        let s = StructuredSystem::new(1, 1, vec![], vec![(0, 0)]).unwrap();
        let d = s.system_digraph();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edges(), &[(1, 0)]);
    }

    #[test]
    fn diagonal_self_loops() {
        let s = StructuredSystem::new(3, 0, (0..3).map(|i| (i, i)).collect(), vec![]).unwrap();
        let d = s.system_digraph();
        assert_eq!(d.edge_count(), 3);
        assert!(d.edges().iter().all(|&(a, b)| a == b));
        assert_eq!(s.system_bipartite().edge_count(), 3);
    }

    #[test]
    fn identity_input_rank() {
        let s = StructuredSystem::new(3, 3, vec![], (0..3).map(|i| (i, i)).collect()).unwrap();
        assert_eq!(s.generic_rank(), 3);
        assert_eq!(s.compound_matrix().generic_rank(), 3);
        let empty = StructuredSystem::new(3, 0, vec![], vec![]).unwrap();
        assert_eq!(empty.generic_rank(), 0);
    }

    #[test]
    fn matrix_orientation() {
        // x0 -> x1 means A[1][0] != 0
        let s = StructuredSystem::new(2, 1, vec![(0, 1)], vec![(0, 0)]).unwrap();
        assert!(s.state_matrix().is_set(1, 0));
        assert!(s.input_matrix().is_set(0, 0));
        assert!(s.compound_matrix().is_set(0, 2));
    }

    #[test]
    fn rejects_out_of_range_and_duplicates() {
        assert!(StructuredSystem::new(2, 1, vec![(0, 2)], vec![]).is_err());
        assert!(StructuredSystem::new(2, 1, vec![], vec![(1, 0)]).is_err());
        assert!(StructuredSystem::new(2, 1, vec![(0, 1), (0, 1)], vec![]).is_err());
    }

    #[test]
    fn edge_ids_and_removal() {
        let s = StructuredSystem::new(2, 1, vec![(0, 1), (1, 1)], vec![(0, 0)]).unwrap();
        assert_eq!(s.edge(2), SysEdge::input(0, 0));
        assert_eq!(s.edge_id(SysEdge::state(1, 1)), Some(1));
        let t = s.without_edges(&[0, 2]);
        assert_eq!(t.a_edges(), &[(1, 1)]);
        assert!(t.b_edges().is_empty());
        assert!(t.is_subpattern_of(&s));
        assert!(!s.is_subpattern_of(&t));
        assert!(s.without_inputs(&[0]).b_edges().is_empty());
    }
}
