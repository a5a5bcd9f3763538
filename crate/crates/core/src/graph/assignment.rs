use super::{check_weights, BipartiteGraph, EdgeId, Weight};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostedMatching<W> {
    /// Matched edge ids, ascending.
    pub edges: Vec<EdgeId>,
    pub cost: W,
}

struct Arc<W> {
    to: usize,
    cap: u8,
    cost: W,
}

/// Minimum-cost maximum matching by successive shortest augmenting paths.
///
/// With `require_right_perfect`, every right vertex must be matched; an
/// [`Error::Infeasible`] is returned when the matching number falls short.
pub fn min_cost_max_matching<W: Weight>(
    b: &BipartiteGraph,
    costs: &[W],
    require_right_perfect: bool,
) -> Result<CostedMatching<W>> {
    check_weights(costs, b.edge_count())?;
    let left = b.left_count();
    let right = b.right_count();
    let source = 0;
    let sink = left + right + 1;
    let node_count = left + right + 2;

    let mut arcs: Vec<Arc<W>> = Vec::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    let mut add_arc = |arcs: &mut Vec<Arc<W>>, from: usize, to: usize, cost: W| {
        out[from].push(arcs.len());
        arcs.push(Arc {
            to,
            cap: 1,
            cost: cost.clone(),
        });
        out[to].push(arcs.len());
        arcs.push(Arc {
            to: from,
            cap: 0,
            cost: W::zero() - cost,
        });
    };
    for l in 0..left {
        add_arc(&mut arcs, source, 1 + l, W::zero());
    }
    let first_edge_arc = arcs.len();
    for (&(l, r), c) in b.edges().iter().zip(costs) {
        add_arc(&mut arcs, 1 + l, 1 + left + r, c.clone());
    }
    for r in 0..right {
        add_arc(&mut arcs, 1 + left + r, sink, W::zero());
    }

    let mut total = W::zero();
    let mut flow = 0usize;
    loop {
        // Bellman-Ford over the residual graph; arcs relaxed in creation order.
        let mut dist: Vec<Option<W>> = vec![None; node_count];
        let mut via: Vec<usize> = vec![usize::MAX; node_count];
        dist[source] = Some(W::zero());
        for _ in 0..node_count {
            let mut changed = false;
            for v in 0..node_count {
                let Some(dv) = dist[v].clone() else { continue };
                for &a in &out[v] {
                    let arc = &arcs[a];
                    if arc.cap == 0 {
                        continue;
                    }
                    let cand = dv.clone() + arc.cost.clone();
                    let better = match &dist[arc.to] {
                        None => true,
                        Some(d) => cand < *d,
                    };
                    if better {
                        dist[arc.to] = Some(cand);
                        via[arc.to] = a;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let Some(path_cost) = dist[sink].clone() else { break };
        let mut v = sink;
        while v != source {
            let a = via[v];
            arcs[a].cap -= 1;
            arcs[a ^ 1].cap += 1;
            v = arcs[a ^ 1].to;
        }
        total = total + path_cost;
        flow += 1;
    }

    if require_right_perfect && flow < right {
        return Err(Error::Infeasible(format!(
            "matching number {flow} is below the {right} right vertices"
        )));
    }
    let edges: Vec<EdgeId> = (0..b.edge_count())
        .filter(|&id| arcs[first_edge_arc + 2 * id].cap == 0)
        .collect();
    Ok(CostedMatching { edges, cost: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::matching_number;
    use proptest::prelude::*;

    fn is_matching(b: &BipartiteGraph, m: &[EdgeId]) -> bool {
        let mut lu = vec![false; b.left_count()];
        let mut ru = vec![false; b.right_count()];
        m.iter().all(|&e| {
            let (l, r) = b.edges()[e];
            let fresh = !lu[l] && !ru[r];
            lu[l] = true;
            ru[r] = true;
            fresh
        })
    }

    /// Minimum cost over right-saturating matchings, by subset enumeration.
    fn brute_force(b: &BipartiteGraph, costs: &[i64]) -> Option<i64> {
        let m = b.edge_count();
        let mut best: Option<i64> = None;
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != b.right_count() {
                continue;
            }
            let chosen: Vec<EdgeId> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            if !is_matching(b, &chosen) {
                continue;
            }
            let c: i64 = chosen.iter().map(|&e| costs[e]).sum();
            best = Some(best.map_or(c, |x: i64| x.min(c)));
        }
        best
    }

    #[test]
    fn picks_cheaper_input() {
        let b = BipartiteGraph::from_edges(2, 1, [(0, 0), (1, 0)]).unwrap();
        let m = min_cost_max_matching(&b, &[3i64, 1], true).unwrap();
        assert_eq!(m.edges, vec![1]);
        assert_eq!(m.cost, 1);
    }

    #[test]
    fn infeasible_when_right_unsaturated() {
        let b = BipartiteGraph::from_edges(1, 2, [(0, 0), (0, 1)]).unwrap();
        assert!(matches!(
            min_cost_max_matching(&b, &[1i64, 1], true),
            Err(Error::Infeasible(_))
        ));
        let m = min_cost_max_matching(&b, &[2i64, 1], false).unwrap();
        assert_eq!((m.edges, m.cost), (vec![1], 1));
    }

    #[test]
    fn prefers_maximum_over_cheap() {
        // Taking only the zero edge would be cheaper but not maximum.
        let b = BipartiteGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0)]).unwrap();
        let m = min_cost_max_matching(&b, &[0i64, 5, 5], false).unwrap();
        assert_eq!(m.edges, vec![1, 2]);
        assert_eq!(m.cost, 10);
    }

    proptest! {
        #[test]
        fn cost_matches_brute_force(
            (b, costs) in crate::graph::matching::tests::bipartite_strategy(6, 12)
                .prop_flat_map(|b| {
                    let m = b.edge_count();
                    (Just(b), proptest::collection::vec(0i64..10, m))
                })
        ) {
            let expected = brute_force(&b, &costs);
            match min_cost_max_matching(&b, &costs, true) {
                Ok(m) => {
                    prop_assert!(is_matching(&b, &m.edges));
                    prop_assert_eq!(m.edges.len(), b.right_count());
                    let c: i64 = m.edges.iter().map(|&e| costs[e]).sum();
                    prop_assert_eq!(c, m.cost);
                    prop_assert_eq!(Some(m.cost), expected);
                }
                Err(_) => prop_assert_eq!(expected, None),
            }
            let unflagged = min_cost_max_matching(&b, &costs, false).unwrap();
            prop_assert_eq!(unflagged.edges.len(), matching_number(&b));
        }
    }
}
