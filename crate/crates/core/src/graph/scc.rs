use std::collections::VecDeque;

use super::Digraph;

/// Strongly connected components in topological order of the condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Vertex lists, each sorted ascending.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// `is_source[c]` holds when no edge enters component `c` from another one.
    pub is_source: Vec<bool>,
}

impl SccDecomposition {
    pub fn source_components(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.components
            .iter()
            .zip(&self.is_source)
            .filter(|(_, &s)| s)
            .map(|(c, _)| c.as_slice())
    }
}

/// Iterative Tarjan.
pub fn scc_decompose(g: &Digraph) -> SccDecomposition {
    let n = g.vertex_count();
    let adj = g.out_adjacency();
    const UNVISITED: usize = usize::MAX;

    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut reversed_components: Vec<Vec<usize>> = Vec::new();
    // (vertex, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos].1;
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                reversed_components.push(comp);
            }
        }
    }

    reversed_components.reverse();
    let components = reversed_components;
    let mut component_of = vec![0; n];
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = c;
        }
    }
    let mut is_source = vec![true; components.len()];
    for &(from, to) in g.edges() {
        if component_of[from] != component_of[to] {
            is_source[component_of[to]] = false;
        }
    }
    SccDecomposition {
        components,
        component_of,
        is_source,
    }
}

/// Vertices reachable from `roots` (roots included), ascending.
pub fn reachable_from(g: &Digraph, roots: &[usize]) -> Vec<usize> {
    let adj = g.out_adjacency();
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &r in roots {
        if !seen[r] {
            seen[r] = true;
            queue.push_back(r);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(_, w) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    (0..g.vertex_count()).filter(|&v| seen[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn closure(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in edges {
            r[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    fn digraph_strategy(max_n: usize) -> impl Strategy<Value = Digraph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::btree_set((0..n, 0..n), 0..=(n * n).min(20))
                .prop_map(move |edges| Digraph::from_edges(n, edges).unwrap())
        })
    }

    #[test]
    fn two_cycle_is_one_source_component() {
        let g = Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let d = scc_decompose(&g);
        assert_eq!(d.components, vec![vec![0, 1]]);
        assert_eq!(d.is_source, vec![true]);
    }

    #[test]
    fn chain_has_single_source() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let d = scc_decompose(&g);
        assert_eq!(d.components, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(d.is_source, vec![true, false, false]);
    }

    #[test]
    fn empty_graph() {
        let d = scc_decompose(&Digraph::new(0));
        assert!(d.components.is_empty());
    }

    #[test]
    fn reachability_examples() {
        // u = 2, x0 = 0, x1 = 1
        let g = Digraph::from_edges(3, [(2, 0), (0, 1)]).unwrap();
        assert_eq!(reachable_from(&g, &[2]), vec![0, 1, 2]);
        let g = Digraph::new(3);
        assert_eq!(reachable_from(&g, &[1]), vec![1]);
    }

    proptest! {
        #[test]
        fn partition_matches_mutual_reachability(g in digraph_strategy(8)) {
            let n = g.vertex_count();
            let r = closure(n, g.edges());
            let d = scc_decompose(&g);
            for i in 0..n {
                for j in 0..n {
                    let same = d.component_of[i] == d.component_of[j];
                    prop_assert_eq!(same, r[i][j] && r[j][i]);
                }
            }
            // topological order: every cross edge goes forward
            for &(a, b) in g.edges() {
                prop_assert!(d.component_of[a] <= d.component_of[b]);
            }
            for (c, &src) in d.is_source.iter().enumerate() {
                let has_in = g.edges().iter().any(|&(a, b)| d.component_of[b] == c && d.component_of[a] != c);
                prop_assert_eq!(src, !has_in);
            }
        }

        #[test]
        fn reachability_matches_closure(g in digraph_strategy(8), root_mask in 0u32..256) {
            let n = g.vertex_count();
            let roots: Vec<usize> = (0..n).filter(|v| root_mask >> v & 1 == 1).collect();
            let r = closure(n, g.edges());
            let expected: Vec<usize> = (0..n).filter(|&v| roots.iter().any(|&s| r[s][v])).collect();
            prop_assert_eq!(reachable_from(&g, &roots), expected);
        }

        #[test]
        fn decomposition_is_deterministic(g in digraph_strategy(8)) {
            prop_assert_eq!(scc_decompose(&g), scc_decompose(&g.clone()));
        }
    }
}
