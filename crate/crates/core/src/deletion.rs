//! Minimal-cost link deletion.
//!
//! The cheapest edge set whose removal destroys structural controllability
//! is the cheaper of two branches: a cut that makes some state
//! input-unreachable, and a 1-blocker of `B(A, B)` that drops its matching
//! number below `n`.

use std::cmp::Reverse;

use rayon::prelude::*;
use serde::Serialize;

use crate::control::{is_structurally_controllable, Checker};
use crate::cost::{Cost, CostScale};
use crate::error::{Error, Result};
use crate::graph::{self, Digraph, EdgeId, FlowNetwork};
use crate::subsets::CostOrdered;
use crate::system::{CostModel, EdgeKind, StructuredSystem, SysEdge};

pub const DEFAULT_BLOCKER_CAP: usize = 20;

/// The reachability branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutBranch {
    pub value: Cost,
    pub edges: Vec<SysEdge>,
    /// The state cut off from the inputs.
    pub state: usize,
}

/// The rank branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockerBranch {
    pub value: Cost,
    pub edges: Vec<SysEdge>,
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Cut,
    Blocker,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeletionAnalysis {
    pub t_cut: CutBranch,
    pub t_bl: BlockerBranch,
    pub value: Cost,
    pub edges: Vec<SysEdge>,
    pub branch: Branch,
}

fn require_controllable(s: &StructuredSystem) -> Result<()> {
    if is_structurally_controllable(s).controllable {
        Ok(())
    } else {
        Err(Error::Precondition("system is not structurally controllable".into()))
    }
}

fn scaled(s: &StructuredSystem, costs: &CostModel) -> Result<(CostScale, Vec<i128>)> {
    costs.validate(s)?;
    CostScale::new(&costs.edge_costs)
}

fn sys_edges(s: &StructuredSystem, mut ids: Vec<EdgeId>) -> Vec<SysEdge> {
    ids.sort_unstable();
    ids.dedup();
    ids.into_iter().map(|id| s.edge(id)).collect()
}

/// Flow network `D(A, B, ū)`: the system digraph plus a virtual source `ū`
/// (vertex `n + q`) with an arc to every input whose capacity is the total
/// cost of that input's edges. Arcs from `ū` get ids `|E| + j`.
fn virtual_source_network(s: &StructuredSystem, w: &[i128]) -> (Digraph, Vec<i128>) {
    let n = s.n();
    let q = s.q();
    let ubar = n + q;
    let mut edges: Vec<(usize, usize)> = s.edges().map(|e| (e.tail_vertex(n), e.to)).collect();
    let mut caps = w.to_vec();
    let na = s.a_edges().len();
    for j in 0..q {
        edges.push((ubar, n + j));
        caps.push(
            s.b_edges()
                .iter()
                .enumerate()
                .filter(|(_, &(u, _))| u == j)
                .map(|(i, _)| w[na + i])
                .sum(),
        );
    }
    (Digraph::from_edges(n + q + 1, edges).expect("valid system"), caps)
}

/// Min cut from `ū` to `x`, mapped to real edges: an arc `ū -> u_j` in the
/// cut stands for all of `u_j`'s edges, at the same total cost.
fn cut_to_state(s: &StructuredSystem, g: &Digraph, caps: &[i128], x: usize) -> (i128, Vec<EdgeId>) {
    let net = FlowNetwork::new(g.clone(), caps.to_vec(), s.n() + s.q(), x).expect("valid network");
    let cut = graph::min_cut(&net);
    let real = s.edge_count();
    let na = s.a_edges().len();
    let mut ids = Vec::new();
    for id in cut.edges {
        if id < real {
            ids.push(id);
        } else {
            let j = id - real;
            ids.extend(
                s.b_edges()
                    .iter()
                    .enumerate()
                    .filter(|(_, &(u, _))| u == j)
                    .map(|(i, _)| na + i),
            );
        }
    }
    (cut.value, ids)
}

fn t_cut_scaled(s: &StructuredSystem, w: &[i128], parallel: bool) -> (i128, Vec<EdgeId>, usize) {
    let (g, caps) = virtual_source_network(s, w);
    let per_state: Vec<(i128, Vec<EdgeId>)> = if parallel {
        (0..s.n())
            .into_par_iter()
            .map(|x| cut_to_state(s, &g, &caps, x))
            .collect()
    } else {
        (0..s.n()).map(|x| cut_to_state(s, &g, &caps, x)).collect()
    };
    let (state, (value, ids)) = per_state
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| (a.0, *i).cmp(&(b.0, *j)))
        .expect("n >= 1");
    (value, ids, state)
}

fn cut_branch(s: &StructuredSystem, costs: &CostModel, parallel: bool) -> Result<CutBranch> {
    require_controllable(s)?;
    let (scale, w) = scaled(s, costs)?;
    let (value, ids, state) = t_cut_scaled(s, &w, parallel);
    Ok(CutBranch {
        value: scale.to_cost(value),
        edges: sys_edges(s, ids),
        state,
    })
}

/// Cheapest edge set whose removal leaves some state input-unreachable. Ties
/// between states go to the lowest state id.
pub fn t_cut(s: &StructuredSystem, costs: &CostModel) -> Result<CutBranch> {
    cut_branch(s, costs, false)
}

/// [`t_cut`] with the per-state min cuts computed in parallel.
pub fn t_cut_parallel(s: &StructuredSystem, costs: &CostModel) -> Result<CutBranch> {
    cut_branch(s, costs, true)
}

fn edge_pairs(s: &StructuredSystem) -> Vec<(usize, usize)> {
    s.edges().map(|e| (e.tail_vertex(s.n()), e.to)).collect()
}

fn full_rank_without(checker: &mut Checker, pairs: &[(usize, usize)], removed: &[EdgeId]) -> bool {
    let mut mask = vec![false; pairs.len()];
    for &r in removed {
        mask[r] = true;
    }
    checker.full_rank(pairs.iter().enumerate().filter(|(i, _)| !mask[*i]).map(|(_, &p)| p))
}

/// For every state, the bundle of all its in-edges; the cheapest one.
fn cheapest_bundle(s: &StructuredSystem, w: &[i128]) -> (i128, Vec<EdgeId>) {
    let mut bundles: Vec<(i128, Vec<EdgeId>)> = vec![(0, Vec::new()); s.n()];
    for (id, e) in s.edges().enumerate() {
        bundles[e.to].0 += w[id];
        bundles[e.to].1.push(id);
    }
    bundles
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| (a.0, *i).cmp(&(b.0, *j)))
        .map(|(_, b)| b)
        .expect("n >= 1")
}

/// Produces a 1-blocker of `B(A, B)` from scaled integer costs.
pub trait Blocker {
    /// Edge ids whose removal leaves no matching covering every state.
    fn block(&self, s: &StructuredSystem, weights: &[i128]) -> Result<Vec<EdgeId>>;

    /// Whether the result is a minimum-cost 1-blocker.
    fn is_exact(&self) -> bool;
}

/// Minimum-cost 1-blocker by cost-ordered subset enumeration.
#[derive(Debug, Clone, Copy)]
pub struct ExactBlocker {
    pub cap: usize,
}

impl Default for ExactBlocker {
    fn default() -> Self {
        ExactBlocker {
            cap: DEFAULT_BLOCKER_CAP,
        }
    }
}

impl Blocker for ExactBlocker {
    fn block(&self, s: &StructuredSystem, w: &[i128]) -> Result<Vec<EdgeId>> {
        if s.edge_count() > self.cap {
            return Err(Error::TooLarge {
                what: "edges",
                size: s.edge_count(),
                cap: self.cap,
            });
        }
        let pairs = edge_pairs(s);
        let mut checker = Checker::new(s.n(), s.q());
        let (bound, bundle) = cheapest_bundle(s, w);
        for (total, subset) in CostOrdered::new(w) {
            if total >= bound {
                break;
            }
            if !full_rank_without(&mut checker, &pairs, &subset) {
                return Ok(subset);
            }
        }
        Ok(bundle)
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// Polynomial 1-blocker with no proven approximation factor: the cheaper of
/// the cheapest in-edge bundle of a state and a greedy peel that keeps
/// removing the cheapest edge of a minimum-cost state-saturating matching,
/// pruned afterwards to a minimal blocker.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicBlocker;

impl HeuristicBlocker {
    fn peel(s: &StructuredSystem, w: &[i128]) -> Vec<EdgeId> {
        let n = s.n();
        let pairs = edge_pairs(s);
        let mut removed: Vec<EdgeId> = Vec::new();
        let mut gone = vec![false; pairs.len()];
        loop {
            let kept: Vec<EdgeId> = (0..pairs.len()).filter(|&i| !gone[i]).collect();
            let b = graph::BipartiteGraph::from_edges(n + s.q(), n, kept.iter().map(|&i| pairs[i]))
                .expect("subset of a valid system");
            let costs: Vec<i128> = kept.iter().map(|&i| w[i]).collect();
            let Ok(m) = graph::min_cost_max_matching(&b, &costs, true) else {
                break;
            };
            let cheapest = m
                .edges
                .iter()
                .map(|&i| kept[i])
                .min_by_key(|&id| (w[id], id))
                .expect("n >= 1");
            gone[cheapest] = true;
            removed.push(cheapest);
        }
        // Put back whatever is not needed, most expensive first.
        let mut checker = Checker::new(n, s.q());
        removed.sort_by_key(|&id| (Reverse(w[id]), id));
        let mut kept_removed: Vec<EdgeId> = removed.clone();
        for id in removed {
            let trial: Vec<EdgeId> = kept_removed.iter().copied().filter(|&r| r != id).collect();
            if !full_rank_without(&mut checker, &pairs, &trial) {
                kept_removed = trial;
            }
        }
        kept_removed.sort_unstable();
        kept_removed
    }
}

impl Blocker for HeuristicBlocker {
    fn block(&self, s: &StructuredSystem, w: &[i128]) -> Result<Vec<EdgeId>> {
        let (bundle_cost, bundle) = cheapest_bundle(s, w);
        let peel = Self::peel(s, w);
        let peel_cost: i128 = peel.iter().map(|&i| w[i]).sum();
        Ok(if peel_cost < bundle_cost { peel } else { bundle })
    }

    fn is_exact(&self) -> bool {
        false
    }
}

/// Minimum-cost 1-blocker of `B(A, B)` (the matching preclusion number under
/// unit costs).
pub fn t_bl_exact(s: &StructuredSystem, costs: &CostModel, cap: usize) -> Result<BlockerBranch> {
    blocker_branch(s, costs, &ExactBlocker { cap })
}

fn blocker_branch(s: &StructuredSystem, costs: &CostModel, blocker: &dyn Blocker) -> Result<BlockerBranch> {
    let (scale, w) = scaled(s, costs)?;
    if s.generic_rank() < s.n() {
        return Ok(BlockerBranch {
            value: Cost::zero(),
            edges: Vec::new(),
            exact: true,
        });
    }
    let ids = blocker.block(s, &w)?;
    Ok(BlockerBranch {
        value: scale.to_cost(ids.iter().map(|&i| w[i]).sum()),
        edges: sys_edges(s, ids),
        exact: blocker.is_exact(),
    })
}

/// Combines both branches; ties go to the cut.
pub fn d_c(s: &StructuredSystem, costs: &CostModel, blocker: &dyn Blocker) -> Result<DeletionAnalysis> {
    let t_cut = t_cut(s, costs)?;
    let t_bl = blocker_branch(s, costs, blocker)?;
    let (value, edges, branch) = if t_bl.value < t_cut.value {
        (t_bl.value.clone(), t_bl.edges.clone(), Branch::Blocker)
    } else {
        (t_cut.value.clone(), t_cut.edges.clone(), Branch::Cut)
    };
    Ok(DeletionAnalysis {
        t_cut,
        t_bl,
        value,
        edges,
        branch,
    })
}

/// Result of the approximation wrapper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Approximation {
    pub value: Cost,
    pub edges: Vec<SysEdge>,
    /// Guaranteed ratio to the optimum, when the blocker has one.
    pub factor: Option<Cost>,
}

/// `min(T_cut, blocker)`. If the blocker is within factor `f` of the
/// cheapest 1-blocker, the result is within `f` of the optimum; `factor`
/// carries the caller-supplied `f`.
pub fn approx_wrap(
    s: &StructuredSystem,
    costs: &CostModel,
    blocker: &dyn Blocker,
    factor: Option<Cost>,
) -> Result<Approximation> {
    let analysis = d_c(s, costs, blocker)?;
    let factor = if blocker.is_exact() { Some(Cost::one()) } else { factor };
    Ok(Approximation {
        value: analysis.value,
        edges: analysis.edges,
        factor,
    })
}

/// Cost strictly above every finite total: the sum of all costs plus one.
pub fn sentinel_cost(costs: &CostModel) -> Cost {
    costs.edge_costs.iter().sum::<Cost>() + Cost::one()
}

/// Like [`d_c`] with state edges made undeletable (sentinel cost), so the
/// answer only uses input edges.
pub fn input_links_only_d_c(
    s: &StructuredSystem,
    costs: &CostModel,
    blocker: &dyn Blocker,
) -> Result<DeletionAnalysis> {
    costs.validate(s)?;
    let sentinel = sentinel_cost(costs);
    let restricted = CostModel {
        edge_costs: s
            .edges()
            .zip(&costs.edge_costs)
            .map(|(e, c)| match e.kind {
                EdgeKind::State => sentinel.clone(),
                EdgeKind::Input => c.clone(),
            })
            .collect(),
        input_costs: costs.input_costs.clone(),
    };
    let analysis = d_c(s, &restricted, blocker)?;
    debug_assert!(analysis.value < sentinel);
    debug_assert!(analysis.edges.iter().all(|e| e.kind == EdgeKind::Input));
    Ok(analysis)
}
