//! Directed and bipartite graph primitives.
//!
//! Graphs carry structure only. Operations that need edge costs or
//! capacities take them as a slice aligned with the edge list, generic over
//! [`Weight`], so the same code runs on exact rationals and on scaled
//! integers.

mod arborescence;
mod assignment;
mod flow;
mod matching;
mod scc;

use std::collections::HashSet;
use std::fmt::Debug;
use std::ops::{Add, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};

pub use arborescence::min_cost_spanning_forest;
pub use assignment::{min_cost_max_matching, CostedMatching};
pub use flow::{min_cut, MinCut};
pub use matching::{matching_number, max_matching};
pub use scc::{reachable_from, scc_decompose, SccDecomposition};

pub type EdgeId = usize;

/// Totally ordered additive weights. Implemented for `i64`, `i128` and
/// `BigRational`.
pub trait Weight: Clone + Ord + Debug + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl<T> Weight for T where T: Clone + Ord + Debug + Zero + Add<Output = T> + Sub<Output = T> {}

/// A simple digraph: no parallel edges, self-loops allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertex_count: usize) -> Self {
        Digraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Digraph::new(vertex_count);
        let mut seen = HashSet::new();
        for (from, to) in edges {
            for v in [from, to] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            if !seen.insert((from, to)) {
                return Err(Error::DuplicateEdge { from, to });
            }
            g.edges.push((from, to));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (usize, usize) {
        self.edges[id]
    }

    /// Outgoing `(edge id, head)` lists in edge order.
    pub fn out_adjacency(&self) -> Vec<Vec<(EdgeId, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (id, &(from, to)) in self.edges.iter().enumerate() {
            adj[from].push((id, to));
        }
        adj
    }
}

/// Bipartite graph with left vertices `0..left` and right vertices `0..right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn from_edges<I>(left: usize, right: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (l, r) in edges {
            if l >= left {
                return Err(Error::VertexOutOfRange {
                    vertex: l,
                    count: left,
                });
            }
            if r >= right {
                return Err(Error::VertexOutOfRange {
                    vertex: r,
                    count: right,
                });
            }
            if !seen.insert((l, r)) {
                return Err(Error::DuplicateEdge { from: l, to: r });
            }
            out.push((l, r));
        }
        Ok(BipartiteGraph {
            left,
            right,
            edges: out,
        })
    }

    pub fn left_count(&self) -> usize {
        self.left
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The graph with the given edges removed. Edge ids are re-numbered.
    pub fn without_edges(&self, removed: &[EdgeId]) -> BipartiteGraph {
        let removed: HashSet<EdgeId> = removed.iter().copied().collect();
        BipartiteGraph {
            left: self.left,
            right: self.right,
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(id, _)| !removed.contains(id))
                .map(|(_, &e)| e)
                .collect(),
        }
    }
}

/// A digraph with a source, a sink and per-edge capacities.
#[derive(Debug, Clone)]
pub struct FlowNetwork<W> {
    pub graph: Digraph,
    pub capacities: Vec<W>,
    pub source: usize,
    pub sink: usize,
}

impl<W: Weight> FlowNetwork<W> {
    pub fn new(graph: Digraph, capacities: Vec<W>, source: usize, sink: usize) -> Result<Self> {
        check_weights(&capacities, graph.edge_count())?;
        let n = graph.vertex_count();
        for v in [source, sink] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, count: n });
            }
        }
        if source == sink {
            return Err(Error::Precondition("source and sink coincide".into()));
        }
        Ok(FlowNetwork {
            graph,
            capacities,
            source,
            sink,
        })
    }
}

pub(crate) fn check_weights<W: Weight>(weights: &[W], edge_count: usize) -> Result<()> {
    if weights.len() != edge_count {
        return Err(Error::CostLength {
            got: weights.len(),
            expected: edge_count,
        });
    }
    if weights.iter().any(|w| *w < W::zero()) {
        return Err(Error::InvalidCost("negative edge weight".into()));
    }
    Ok(())
}
