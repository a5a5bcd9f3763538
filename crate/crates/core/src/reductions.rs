//! Hardness gadgets and brute-force verifiers.
//!
//! * `ham`: Hamiltonian path in a digraph on `n` vertices ⇔ link insertion
//!   optimum at most `2n`.
//! * `ham-fixed`: the same with the input topology fixed.
//! * `preclusion`: link deletion optimum of the gadget = matching preclusion
//!   number of a balanced bipartite graph with a perfect matching.
//! * `clique`: minimal-cost input removal set = `C(k, 2)` ⇔ `k`-clique.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::actuator::{exact_actuator, girth};
use crate::cost::Cost;
use crate::deletion::{d_c, ExactBlocker};
use crate::error::{Error, Result};
use crate::format::{to_pretty_json, FormatError, RawGraph, RawSystem};
use crate::graph::{matching_number, BipartiteGraph, Digraph};
use crate::insertion::{exact_insertion, InsertionProblem};
use crate::matrix::StructuredMatrix;
use crate::system::{CostModel, StructuredSystem, Witness};

/// Simple undirected graph; edges stored as `(min, max)`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut set = HashSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, count: n });
                }
            }
            if a == b {
                return Err(Error::Precondition(format!("self-loop at vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::DuplicateEdge { from: a, to: b });
            }
        }
        let mut edges: Vec<(usize, usize)> = set.into_iter().collect();
        edges.sort_unstable();
        Ok(UndirectedGraph { n, edges })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        UndirectedGraph::new(n, edges).expect("valid complete graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Edges sorted by `(min endpoint, max endpoint)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    Ham,
    HamFixed,
    Preclusion,
    Clique,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Digraph(Digraph),
    Bipartite(BipartiteGraph),
    Undirected { graph: UndirectedGraph, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Insertion(InsertionProblem),
    /// A system with edge costs (link deletion) or input costs (actuator
    /// deletion).
    System { system: StructuredSystem, costs: CostModel },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub kind: ReductionKind,
    pub source: Source,
    pub target: Target,
    pub threshold: Cost,
}

fn binomial2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

fn unit(edges: &[(usize, usize)]) -> Vec<(usize, usize, Cost)> {
    edges.iter().map(|&(f, t)| (f, t, Cost::one())).collect()
}

/// Vertex `v_i` becomes the 2-cycle `v_i^1 = 2i`, `v_i^2 = 2i + 1`; `v_i^1`
/// takes the in-edges of `v_i` and `v_i^2` its out-edges.
fn doubled_edges(g: &Digraph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..g.vertex_count() {
        out.push((2 * i, 2 * i + 1));
        out.push((2 * i + 1, 2 * i));
    }
    for &(i, j) in g.edges() {
        if i != j {
            out.push((2 * i + 1, 2 * j));
        }
    }
    out
}

fn require_vertices(g: &Digraph) -> Result<()> {
    if g.vertex_count() == 0 {
        return Err(Error::Precondition(
            "gadget precondition violated: source graph has no vertices".into(),
        ));
    }
    Ok(())
}

/// Link insertion instance: every doubled edge and one input `u` wired to
/// every `v_i^1` are candidates at unit cost; threshold `2n`.
pub fn gadget_ham(g: &Digraph) -> Result<ReductionInstance> {
    require_vertices(g)?;
    let n = g.vertex_count();
    let inputs: Vec<(usize, usize)> = (0..n).map(|i| (0, 2 * i)).collect();
    let problem = InsertionProblem::from_candidates(2 * n, 1, &unit(&doubled_edges(g)), &unit(&inputs))?;
    Ok(ReductionInstance {
        kind: ReductionKind::Ham,
        source: Source::Digraph(g.clone()),
        target: Target::Insertion(problem),
        threshold: Cost::from_integer(2 * n as u64),
    })
}

/// As [`gadget_ham`], but `u` becomes state `2n` driven by the only input `z`
/// through the existing edge `z -> u`; the edges `u -> v_i^1` are state-edge
/// candidates.
pub fn gadget_ham_fixed_input(g: &Digraph) -> Result<ReductionInstance> {
    require_vertices(g)?;
    let n = g.vertex_count();
    let u = 2 * n;
    let base = StructuredSystem::new(2 * n + 1, 1, vec![], vec![(0, u)])?;
    let mut a = doubled_edges(g);
    a.extend((0..n).map(|i| (u, 2 * i)));
    let problem = InsertionProblem::normalize(&base, &unit(&a), &[])?;
    Ok(ReductionInstance {
        kind: ReductionKind::HamFixed,
        source: Source::Digraph(g.clone()),
        target: Target::Insertion(problem),
        threshold: Cost::from_integer(2 * n as u64),
    })
}

/// Link deletion instance with `A = 0` and `B[i][j] != 0` for each edge
/// `(s_j, s_i)`; unit costs. `r` defaults to `n`.
pub fn gadget_preclusion(b: &BipartiteGraph, r: Option<Cost>) -> Result<ReductionInstance> {
    let n = b.left_count();
    if b.right_count() != n {
        return Err(Error::Precondition(format!(
            "gadget precondition violated: sides differ ({} vs {})",
            n,
            b.right_count()
        )));
    }
    if n == 0 || matching_number(b) < n {
        return Err(Error::Precondition(
            "gadget precondition violated: no perfect matching".into(),
        ));
    }
    let system = StructuredSystem::new(n, n, vec![], b.edges().to_vec())?;
    let costs = CostModel::unit(&system);
    Ok(ReductionInstance {
        kind: ReductionKind::Preclusion,
        source: Source::Bipartite(b.clone()),
        target: Target::System { system, costs },
        threshold: r.unwrap_or_else(|| Cost::from_integer(n as u64)),
    })
}

fn clique_preconditions(g: &UndirectedGraph, k: usize) -> Result<()> {
    let (n, m) = (g.vertex_count(), g.edges().len());
    if k <= 4 {
        return Err(Error::Precondition(format!("gadget precondition violated: k = {k} must exceed 4")));
    }
    if !g.is_connected() {
        return Err(Error::Precondition("gadget precondition violated: graph is not connected".into()));
    }
    if binomial2(k) + n > m + k {
        return Err(Error::Precondition(format!(
            "gadget precondition violated: C(k,2) + n - k = {} exceeds m = {m}",
            binomial2(k) + n - k
        )));
    }
    Ok(())
}

/// The square pattern `C(G)` of size `m + 1`:
///
/// ```text
///   [ In(G)   0 ]   n rows
///   [   0     0 ]   m + 2 + k - n - C(k,2) rows
///   [   1     0 ]   C(k,2) - k - 1 rows, the last of which ends in 1
/// ```
///
/// `In(G)` is the vertex-edge incidence pattern with edges in sorted order.
pub fn clique_matrix(g: &UndirectedGraph, k: usize) -> Result<StructuredMatrix> {
    clique_preconditions(g, k)?;
    let (n, m) = (g.vertex_count(), g.edges().len());
    let size = m + 1;
    let mut c = StructuredMatrix::new(size, size);
    for (col, &(a, b)) in g.edges().iter().enumerate() {
        c.set(a, col)?;
        c.set(b, col)?;
    }
    let ones_start = n + (m + 2 + k - n - binomial2(k));
    for row in ones_start..size {
        for col in 0..m {
            c.set(row, col)?;
        }
    }
    c.set(size - 1, m)?;
    Ok(c)
}

/// Rows of `C(G)` holding the incidence and all-ones blocks, edge columns
/// only.
pub fn clique_girth_matrix(g: &UndirectedGraph, k: usize) -> Result<StructuredMatrix> {
    let c = clique_matrix(g, k)?;
    let (n, m) = (g.vertex_count(), g.edges().len());
    let ones_start = n + (m + 2 + k - n - binomial2(k));
    let rows: Vec<usize> = (0..n).chain(ones_start..m + 1).collect();
    StructuredMatrix::from_entries(
        rows.len(),
        m,
        c.entries()
            .filter(|&(_, col)| col < m)
            .filter_map(|(r, col)| rows.iter().position(|&x| x == r).map(|p| (p, col))),
    )
}

/// Actuator deletion instance `A = C(G)^T`, `B = I`, input costs 1 except
/// `m + 1` for the last input; threshold `C(k, 2)`.
pub fn gadget_clique(g: &UndirectedGraph, k: usize) -> Result<ReductionInstance> {
    let c = clique_matrix(g, k)?;
    let size = c.rows();
    // A = C^T: A[i][j] = C[j][i], i.e. state edge x_j -> x_i for C[j][i] != 0.
    let a_edges: Vec<(usize, usize)> = c.entries().collect();
    let system = StructuredSystem::new(size, size, a_edges, (0..size).map(|i| (i, i)).collect())?;
    let mut input_costs = vec![Cost::one(); size];
    input_costs[size - 1] = Cost::from_integer(size as u64);
    let costs = CostModel {
        edge_costs: vec![Cost::one(); system.edge_count()],
        input_costs: Some(input_costs),
    };
    Ok(ReductionInstance {
        kind: ReductionKind::Clique,
        source: Source::Undirected { graph: g.clone(), k },
        target: Target::System { system, costs },
        threshold: Cost::from_integer(binomial2(k) as u64),
    })
}

/// First Hamiltonian path (as a vertex order) found by depth-first search
/// from the lowest start vertex.
pub fn hamiltonian_path(g: &Digraph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in g.edges() {
        if a != b {
            adj[a].push(b);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    fn extend(adj: &[Vec<usize>], path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if path.len() == used.len() {
            return true;
        }
        let last = *path.last().expect("non-empty");
        for &w in &adj[last] {
            if !used[w] {
                used[w] = true;
                path.push(w);
                if extend(adj, path, used) {
                    return true;
                }
                path.pop();
                used[w] = false;
            }
        }
        false
    }
    for start in 0..n {
        let mut used = vec![false; n];
        used[start] = true;
        let mut path = vec![start];
        if extend(&adj, &mut path, &mut used) {
            return Some(path);
        }
    }
    None
}

/// Smallest edge set (first in lexicographic order among the smallest)
/// whose removal leaves no perfect matching.
pub fn matching_preclusion(b: &BipartiteGraph) -> (usize, Vec<usize>) {
    let target = b.left_count().min(b.right_count());
    let m = b.edge_count();
    for size in 0..=m {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if matching_number(&b.without_edges(&subset)) < target {
                return (size, subset);
            }
            let mut i = size;
            while i > 0 && subset[i - 1] == m - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            subset[i - 1] += 1;
            for j in i..size {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }
    unreachable!("removing every edge leaves no perfect matching")
}

/// First `k`-clique in lexicographic order.
pub fn find_clique(g: &UndirectedGraph, k: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if k > n {
        return None;
    }
    fn grow(g: &UndirectedGraph, k: usize, from: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            return true;
        }
        for v in from..g.vertex_count() {
            if chosen.iter().all(|&c| g.has_edge(c, v)) {
                chosen.push(v);
                if grow(g, k, v + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    grow(g, k, 0, &mut chosen).then_some(chosen)
}

/// Limits for [`verify_equivalence`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyCaps {
    pub ham_vertices: usize,
    pub preclusion_edges: usize,
    pub clique_vertices: usize,
    /// Cap handed to the exact target-side solver.
    pub solver_cap: usize,
}

impl Default for VerifyCaps {
    fn default() -> Self {
        VerifyCaps {
            ham_vertices: 8,
            preclusion_edges: 12,
            clique_vertices: 7,
            solver_cap: 64,
        }
    }
}

/// Both sides of a gadget's claimed equivalence, solved by brute force.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: ReductionKind,
    pub threshold: Cost,
    /// Source-side answer: a Hamiltonian path exists / the preclusion number
    /// is at most the threshold / a `k`-clique exists.
    pub source_holds: bool,
    /// Path order, precluding edge ids or clique vertices.
    pub source_witness: Vec<usize>,
    /// Source-side numeric value where there is one (preclusion number).
    pub source_value: Option<Cost>,
    /// Target-side answer: optimum at most / equal to the threshold.
    pub target_holds: bool,
    pub target_value: Cost,
    pub target_witness: Vec<String>,
    pub passed: bool,
}

fn too_large(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::TooLarge { what, size, cap });
    }
    Ok(())
}

fn witness_strings(w: &Witness) -> Vec<String> {
    match w {
        Witness::Edges(e) => e.iter().map(|e| e.to_string()).collect(),
        Witness::Inputs(i) => i.iter().map(|u| format!("u{u}")).collect(),
    }
}

pub fn verify_equivalence(r: &ReductionInstance, caps: VerifyCaps) -> Result<Certificate> {
    match (&r.source, &r.target) {
        (Source::Digraph(g), Target::Insertion(p)) => {
            too_large("source vertices", g.vertex_count(), caps.ham_vertices)?;
            let path = hamiltonian_path(g);
            let opt = exact_insertion(p, caps.solver_cap)?;
            let target_holds = opt.is_feasible() && opt.cost <= r.threshold;
            let source_holds = path.is_some();
            Ok(Certificate {
                kind: r.kind,
                threshold: r.threshold.clone(),
                source_holds,
                source_witness: path.unwrap_or_default(),
                source_value: None,
                target_holds,
                target_value: opt.cost.clone(),
                target_witness: witness_strings(&opt.witness),
                passed: source_holds == target_holds,
            })
        }
        (Source::Bipartite(b), Target::System { system, costs }) => {
            too_large("source edges", b.edge_count(), caps.preclusion_edges)?;
            let (mp, edges) = matching_preclusion(b);
            let analysis = d_c(system, costs, &ExactBlocker { cap: caps.solver_cap })?;
            let mp = Cost::from_integer(mp as u64);
            let source_holds = mp <= r.threshold;
            let target_holds = analysis.value <= r.threshold;
            Ok(Certificate {
                kind: r.kind,
                threshold: r.threshold.clone(),
                source_holds,
                source_witness: edges,
                passed: source_holds == target_holds && mp == analysis.value,
                source_value: Some(mp),
                target_holds,
                target_witness: analysis.edges.iter().map(|e| e.to_string()).collect(),
                target_value: analysis.value,
            })
        }
        (Source::Undirected { graph, k }, Target::System { system, costs }) => {
            too_large("source vertices", graph.vertex_count(), caps.clique_vertices)?;
            let clique = find_clique(graph, *k);
            let input_costs = costs.input_costs_or_unit(system.q());
            let opt = exact_actuator(system, &input_costs, caps.solver_cap)?;
            let source_holds = clique.is_some();
            let target_holds = opt.cost == r.threshold;
            Ok(Certificate {
                kind: r.kind,
                threshold: r.threshold.clone(),
                source_holds,
                source_witness: clique.unwrap_or_default(),
                source_value: None,
                target_holds,
                target_value: opt.cost,
                target_witness: opt.removal.iter().map(|u| format!("u{u}")).collect(),
                passed: source_holds == target_holds,
            })
        }
        _ => Err(Error::Precondition("reduction source and target do not match".into())),
    }
}

/// Girth of the clique gadget's core block, for cross-checking.
pub fn clique_girth(g: &UndirectedGraph, k: usize, cap: usize) -> Result<Option<usize>> {
    girth(&clique_girth_matrix(g, k)?, cap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    kind: ReductionKind,
    source: RawGraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    threshold: String,
    problem: RawSystem,
}

pub fn render_instance(r: &ReductionInstance) -> String {
    let (source, k) = match &r.source {
        Source::Digraph(g) => (
            RawGraph {
                n: g.vertex_count(),
                edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
            },
            None,
        ),
        Source::Bipartite(b) => (
            RawGraph {
                n: b.left_count(),
                edges: b.edges().iter().map(|&(a, c)| [a, c]).collect(),
            },
            None,
        ),
        Source::Undirected { graph, k } => (
            RawGraph {
                n: graph.vertex_count(),
                edges: graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
            },
            Some(*k),
        ),
    };
    to_pretty_json(&RawInstance {
        kind: r.kind,
        source,
        k,
        threshold: r.threshold.to_decimal_string(),
        problem: target_raw(&r.target),
    })
}

fn target_raw(t: &Target) -> RawSystem {
    match t {
        Target::Insertion(p) => RawSystem::from_problem(p),
        Target::System { system, costs } => RawSystem::from_system(system, costs),
    }
}

/// The target problem file of an instance.
pub fn render_target(r: &ReductionInstance) -> String {
    to_pretty_json(&target_raw(&r.target))
}

/// Rebuilds the gadget from the stored source and checks that it matches the
/// stored problem.
pub fn parse_instance(bytes: &[u8]) -> Result<ReductionInstance> {
    let raw: RawInstance = serde_json::from_slice(bytes).map_err(|e| Error::Format(format_json_error(e)))?;
    let threshold: Cost = raw.threshold.parse().map_err(|_| {
        Error::Precondition(format!("threshold \"{}\" is not a valid cost", raw.threshold))
    })?;
    let rebuilt = match raw.kind {
        ReductionKind::Ham => gadget_ham(&raw.source.to_digraph("source.")?)?,
        ReductionKind::HamFixed => gadget_ham_fixed_input(&raw.source.to_digraph("source.")?)?,
        ReductionKind::Preclusion => gadget_preclusion(&raw.source.to_bipartite("source.")?, Some(threshold.clone()))?,
        ReductionKind::Clique => {
            let k = raw
                .k
                .ok_or_else(|| Error::Precondition("clique instance needs \"k\"".into()))?;
            let graph = UndirectedGraph::new(raw.source.n, raw.source.to_undirected("source.")?)?;
            gadget_clique(&graph, k)?
        }
    };
    if rebuilt.threshold != threshold {
        return Err(Error::Precondition(format!(
            "threshold {} does not match the gadget's {}",
            threshold, rebuilt.threshold
        )));
    }
    if target_raw(&rebuilt.target) != raw.problem {
        return Err(Error::Precondition("stored problem does not match its source".into()));
    }
    Ok(rebuilt)
}

fn format_json_error(e: serde_json::Error) -> FormatError {
    crate::format::json_error(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digraph(n: usize, edges: &[(usize, usize)]) -> Digraph {
        Digraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn insertion(r: &ReductionInstance) -> &InsertionProblem {
        match &r.target {
            Target::Insertion(p) => p,
            _ => panic!("expected an insertion target"),
        }
    }

    #[test]
    fn ham_path_counts() {
        let r = gadget_ham(&digraph(3, &[(0, 1), (1, 2)])).unwrap();
        let p = insertion(&r);
        assert_eq!((p.system().n(), p.system().q()), (6, 1));
        assert_eq!(p.system().a_edges().len(), 6 + 2);
        assert_eq!(p.system().b_edges().len(), 3);
        assert_eq!(r.threshold, Cost::from_integer(6));
        assert!(crate::insertion::feasible(p));
    }

    #[test]
    fn ham_small_optima() {
        let single = gadget_ham(&digraph(1, &[])).unwrap();
        assert_eq!(exact_insertion(insertion(&single), 20).unwrap().cost, Cost::from_integer(2));
        let pair = gadget_ham(&digraph(2, &[])).unwrap();
        assert_eq!(exact_insertion(insertion(&pair), 20).unwrap().cost, Cost::from_integer(5));
        let fixed = gadget_ham_fixed_input(&digraph(2, &[(0, 1)])).unwrap();
        assert_eq!(exact_insertion(insertion(&fixed), 20).unwrap().cost, Cost::from_integer(4));
        let fixed_single = gadget_ham_fixed_input(&digraph(1, &[])).unwrap();
        assert_eq!(exact_insertion(insertion(&fixed_single), 20).unwrap().cost, Cost::from_integer(2));
        let fixed_pair = gadget_ham_fixed_input(&digraph(2, &[])).unwrap();
        assert!(exact_insertion(insertion(&fixed_pair), 20).unwrap().cost > Cost::from_integer(4));
    }

    #[test]
    fn preclusion_gadget_shape() {
        let k22 = BipartiteGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let r = gadget_preclusion(&k22, None).unwrap();
        let Target::System { system, .. } = &r.target else { panic!() };
        assert_eq!((system.n(), system.q(), system.b_edges().len()), (2, 2, 4));
        assert!(system.a_edges().is_empty());
        let cert = verify_equivalence(&r, VerifyCaps::default()).unwrap();
        assert!(cert.passed);
        assert_eq!(cert.target_value, Cost::from_integer(2));
        let no_pm = BipartiteGraph::from_edges(2, 2, [(0, 0), (1, 0)]).unwrap();
        let err = gadget_preclusion(&no_pm, None).unwrap_err();
        assert!(err.to_string().contains("gadget precondition violated"));
    }

    #[test]
    fn clique_preconditions_named() {
        let k5 = UndirectedGraph::complete(5);
        assert!(gadget_clique(&k5, 4).unwrap_err().to_string().contains("must exceed 4"));
        let c6 = UndirectedGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!(gadget_clique(&c6, 5).unwrap_err().to_string().contains("exceeds m"));
        let split = UndirectedGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(gadget_clique(&split, 5).unwrap_err().to_string().contains("not connected"));
    }

    #[test]
    fn k5_blocks() {
        let k5 = UndirectedGraph::complete(5);
        let c = clique_matrix(&k5, 5).unwrap();
        assert_eq!((c.rows(), c.cols()), (11, 11));
        // Incidence rows 0..5, zero rows 5..7, ones rows 7..11.
        for r in 0..5 {
            assert_eq!(c.entries().filter(|&(row, _)| row == r).count(), 4);
        }
        assert_eq!(c.entries().filter(|&(row, _)| (5..7).contains(&row)).count(), 0);
        for r in 7..10 {
            assert_eq!(c.entries().filter(|&(row, _)| row == r).count(), 10);
        }
        assert_eq!(c.entries().filter(|&(row, _)| row == 10).count(), 11);
        assert_eq!(clique_girth(&k5, 5, 16).unwrap(), Some(10));
    }

    #[test]
    fn hamiltonian_search() {
        assert_eq!(hamiltonian_path(&digraph(3, &[(2, 0), (0, 1)])), Some(vec![2, 0, 1]));
        assert_eq!(hamiltonian_path(&digraph(3, &[(0, 1), (0, 2)])), None);
    }

    #[test]
    fn clique_search() {
        let k5 = UndirectedGraph::complete(5);
        assert_eq!(find_clique(&k5, 5), Some(vec![0, 1, 2, 3, 4]));
        let minus = UndirectedGraph::new(5, k5.edges().iter().copied().filter(|&e| e != (0, 1))).unwrap();
        assert_eq!(find_clique(&minus, 5), None);
        assert_eq!(find_clique(&minus, 4), Some(vec![0, 2, 3, 4]));
    }

    #[test]
    fn instance_round_trip() {
        let r = gadget_ham(&digraph(3, &[(0, 1), (2, 1)])).unwrap();
        let text = render_instance(&r);
        assert_eq!(parse_instance(text.as_bytes()).unwrap(), r);
        let tampered = text.replacen("\"threshold\": \"6\"", "\"threshold\": \"5\"", 1);
        assert!(parse_instance(tampered.as_bytes()).is_err());
    }
}
