use std::collections::VecDeque;

use super::{EdgeId, FlowNetwork, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut<W> {
    pub value: W,
    /// Edges leaving the source side of the cut, ascending. Zero-capacity
    /// edges that cross are included so that removing the set always
    /// disconnects source from sink.
    pub edges: Vec<EdgeId>,
    /// Vertices on the source side.
    pub source_side: Vec<usize>,
}

/// Minimum s-t cut from an Edmonds-Karp maximum flow.
pub fn min_cut<W: Weight>(net: &FlowNetwork<W>) -> MinCut<W> {
    let g = &net.graph;
    let n = g.vertex_count();
    // Residual arcs: 2*id forward, 2*id+1 backward.
    let mut residual: Vec<W> = Vec::with_capacity(2 * g.edge_count());
    let mut head: Vec<usize> = Vec::with_capacity(2 * g.edge_count());
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(from, to)) in g.edges().iter().enumerate() {
        residual.push(net.capacities[id].clone());
        head.push(to);
        residual.push(W::zero());
        head.push(from);
        out[from].push(2 * id);
        out[to].push(2 * id + 1);
    }

    let mut value = W::zero();
    loop {
        let mut via = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[net.source] = true;
        let mut queue = VecDeque::from([net.source]);
        while let Some(v) = queue.pop_front() {
            if v == net.sink {
                break;
            }
            for &a in &out[v] {
                let w = head[a];
                if !seen[w] && residual[a] > W::zero() {
                    seen[w] = true;
                    via[w] = a;
                    queue.push_back(w);
                }
            }
        }
        if !seen[net.sink] {
            let source_side: Vec<usize> = (0..n).filter(|&v| seen[v]).collect();
            let edges = g
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| seen[a] && !seen[b])
                .map(|(id, _)| id)
                .collect();
            return MinCut {
                value,
                edges,
                source_side,
            };
        }
        let mut bottleneck: Option<W> = None;
        let mut v = net.sink;
        while v != net.source {
            let a = via[v];
            bottleneck = Some(match bottleneck {
                None => residual[a].clone(),
                Some(b) => b.min(residual[a].clone()),
            });
            v = head[a ^ 1];
        }
        let bottleneck = bottleneck.expect("augmenting path has an arc");
        let mut v = net.sink;
        while v != net.source {
            let a = via[v];
            residual[a] = residual[a].clone() - bottleneck.clone();
            residual[a ^ 1] = residual[a ^ 1].clone() + bottleneck.clone();
            v = head[a ^ 1];
        }
        value = value + bottleneck;
    }
}
