use std::collections::VecDeque;

use super::{BipartiteGraph, EdgeId};

const NIL: usize = usize::MAX;

/// Maximum cardinality matching (Hopcroft-Karp). Returns matched edge ids,
/// ascending.
pub fn max_matching(b: &BipartiteGraph) -> Vec<EdgeId> {
    let left = b.left_count();
    let right = b.right_count();
    let mut adj: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); left];
    for (id, &(l, r)) in b.edges().iter().enumerate() {
        adj[l].push((id, r));
    }

    let mut match_left = vec![NIL; left]; // edge id
    let mut match_right = vec![NIL; right]; // left vertex
    let mut dist = vec![usize::MAX; left];

    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for l in 0..left {
            if match_left[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &(_, r) in &adj[l] {
                let next = match_right[r];
                if next == NIL {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        let mut progressed = false;
        let mut it = vec![0usize; left];
        for l in 0..left {
            if match_left[l] == NIL
                && augment(l, &adj, &mut match_left, &mut match_right, &mut dist, &mut it)
            {
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }

    let mut out: Vec<EdgeId> = match_left.into_iter().filter(|&e| e != NIL).collect();
    out.sort_unstable();
    out
}

fn augment(
    start: usize,
    adj: &[Vec<(EdgeId, usize)>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    // Explicit DFS along the BFS layers; `path` holds (left, edge, right).
    let mut path: Vec<(usize, EdgeId, usize)> = Vec::new();
    let mut l = start;
    loop {
        if it[l] < adj[l].len() {
            let (e, r) = adj[l][it[l]];
            it[l] += 1;
            let next = match_right[r];
            if next == NIL {
                path.push((l, e, r));
                for &(pl, pe, pr) in &path {
                    match_left[pl] = pe;
                    match_right[pr] = pl;
                }
                return true;
            }
            if dist[next] == dist[l].wrapping_add(1) {
                path.push((l, e, r));
                l = next;
            }
        } else {
            dist[l] = usize::MAX;
            match path.pop() {
                Some((prev, _, _)) => l = prev,
                None => return false,
            }
        }
    }
}

/// Size of a maximum matching.
pub fn matching_number(b: &BipartiteGraph) -> usize {
    max_matching(b).len()
}
