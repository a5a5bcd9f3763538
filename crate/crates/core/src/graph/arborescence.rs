use super::{check_weights, Digraph, EdgeId, Weight};
use crate::error::Result;

#[derive(Clone)]
struct Arc<W> {
    from: usize,
    to: usize,
    weight: W,
}

/// Minimum arborescence rooted at `root` via Chu-Liu/Edmonds contraction.
///
/// Returns, for every arc chosen, its index in `arcs`; `None` when some
/// vertex cannot be reached. Ties on weight resolve to the lower arc index.
fn min_arborescence<W: Weight>(n: usize, root: usize, arcs: &[Arc<W>]) -> Option<Vec<usize>> {
    // Cheapest entering arc for every non-root vertex.
    let mut best_in: Vec<Option<usize>> = vec![None; n];
    for (i, a) in arcs.iter().enumerate() {
        if a.to == root || a.from == a.to {
            continue;
        }
        let replace = match best_in[a.to] {
            None => true,
            Some(j) => a.weight < arcs[j].weight,
        };
        if replace {
            best_in[a.to] = Some(i);
        }
    }
    if (0..n).any(|v| v != root && best_in[v].is_none()) {
        return None;
    }

    // Find cycles among the chosen arcs.
    const NONE: usize = usize::MAX;
    let mut cycle_id = vec![NONE; n];
    let mut mark = vec![NONE; n];
    let mut cycles = 0;
    for start in 0..n {
        let mut v = start;
        while v != root && mark[v] == NONE && cycle_id[v] == NONE {
            mark[v] = start;
            v = arcs[best_in[v].unwrap()].from;
        }
        if v != root && mark[v] == start && cycle_id[v] == NONE {
            let mut u = v;
            loop {
                cycle_id[u] = cycles;
                u = arcs[best_in[u].unwrap()].from;
                if u == v {
                    break;
                }
            }
            cycles += 1;
        }
    }
    if cycles == 0 {
        let chosen: Vec<usize> = (0..n).filter(|&v| v != root).map(|v| best_in[v].unwrap()).collect();
        return Some(chosen);
    }

    // Contract: cycle c becomes vertex c, other vertices follow.
    let mut new_id = vec![NONE; n];
    let mut next = cycles;
    for v in 0..n {
        new_id[v] = if cycle_id[v] != NONE {
            cycle_id[v]
        } else {
            let id = next;
            next += 1;
            id
        };
    }
    let contracted_n = next;
    let mut contracted: Vec<Arc<W>> = Vec::new();
    let mut origin: Vec<usize> = Vec::new();
    for (i, a) in arcs.iter().enumerate() {
        let (u, v) = (new_id[a.from], new_id[a.to]);
        if u == v {
            continue;
        }
        let weight = if cycle_id[a.to] != NONE {
            a.weight.clone() - arcs[best_in[a.to].unwrap()].weight.clone()
        } else {
            a.weight.clone()
        };
        contracted.push(Arc { from: u, to: v, weight });
        origin.push(i);
    }
    let inner = min_arborescence(contracted_n, new_id[root], &contracted)?;

    // Expand: each cycle keeps all its arcs except the one displaced by the
    // arc that enters it in the contracted solution.
    let mut chosen_in: Vec<Option<usize>> = vec![None; n];
    for &c in &inner {
        let i = origin[c];
        chosen_in[arcs[i].to] = Some(i);
    }
    for v in 0..n {
        if v != root && chosen_in[v].is_none() {
            chosen_in[v] = best_in[v];
        }
    }
    Some((0..n).filter(|&v| v != root).map(|v| chosen_in[v].unwrap()).collect())
}

/// Minimum-cost spanning forest of arborescences rooted in `roots`.
///
/// Every non-root vertex gets exactly one entering edge and is reachable from
/// some root. Edges entering a root are never used. Returns the chosen edge
/// ids (ascending) and their total cost, or `None` when a vertex is
/// unreachable from all roots.
pub fn min_cost_spanning_forest<W: Weight>(
    g: &Digraph,
    costs: &[W],
    roots: &[usize],
) -> Result<Option<(Vec<EdgeId>, W)>> {
    check_weights(costs, g.edge_count())?;
    let n = g.vertex_count();
    for &r in roots {
        if r >= n {
            return Err(crate::error::Error::VertexOutOfRange { vertex: r, count: n });
        }
    }
    let mut is_root = vec![false; n];
    for &r in roots {
        is_root[r] = true;
    }
    let super_root = n;
    let mut arcs = Vec::with_capacity(g.edge_count() + roots.len());
    let mut origin = Vec::with_capacity(g.edge_count());
    for (id, (&(from, to), w)) in g.edges().iter().zip(costs).enumerate() {
        if is_root[to] || from == to {
            continue;
        }
        arcs.push(Arc {
            from,
            to,
            weight: w.clone(),
        });
        origin.push(Some(id));
    }
    for r in 0..n {
        if is_root[r] {
            arcs.push(Arc {
                from: super_root,
                to: r,
                weight: W::zero(),
            });
            origin.push(None);
        }
    }
    let Some(chosen) = min_arborescence(n + 1, super_root, &arcs) else {
        return Ok(None);
    };
    let mut edges: Vec<EdgeId> = chosen.into_iter().filter_map(|i| origin[i]).collect();
    edges.sort_unstable();
    let total = edges
        .iter()
        .fold(W::zero(), |acc, &e| acc + costs[e].clone());
    Ok(Some((edges, total)))
}
