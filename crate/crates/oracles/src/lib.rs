//! Slow reference answers for tests: numeric Kalman rank on random
//! realizations and exhaustive enumeration. Nothing here calls a solver from
//! `netperturb-core`; only the data types are shared.

use nalgebra::DMatrix;
use rand::Rng;

use netperturb_core::{Cost, StructuredSystem};

/// Realizations drawn per numeric test.
pub const REALIZATIONS: usize = 5;
/// Singular values at most `RANK_TOL * sigma_max` count as zero.
pub const RANK_TOL: f64 = 1e-8;

pub fn numeric_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * max).count()
}

fn entry<R: Rng>(rng: &mut R) -> f64 {
    // Bounded away from zero so the pattern is preserved.
    let v: f64 = rng.gen_range(0.5..2.0);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// A random numeric realization of the pattern `(A, B)`.
pub fn realize<R: Rng>(s: &StructuredSystem, rng: &mut R) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut a = DMatrix::zeros(s.n(), s.n());
    for &(from, to) in s.a_edges() {
        a[(to, from)] = entry(rng);
    }
    let mut b = DMatrix::zeros(s.n(), s.q());
    for &(from, to) in s.b_edges() {
        b[(to, from)] = entry(rng);
    }
    (a, b)
}

/// `[B, AB, ..., A^{n-1} B]`.
pub fn kalman_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let q = b.ncols();
    let mut k = DMatrix::zeros(n, n * q);
    let mut block = b.clone();
    for i in 0..n {
        k.columns_mut(i * q, q).copy_from(&block);
        block = a * block;
    }
    k
}

/// Majority vote of the Kalman rank test over [`REALIZATIONS`] draws.
pub fn kalman_controllable<R: Rng>(s: &StructuredSystem, rng: &mut R) -> bool {
    let votes = (0..REALIZATIONS)
        .filter(|_| {
            let (a, b) = realize(s, rng);
            numeric_rank(&kalman_matrix(&a, &b)) == s.n()
        })
        .count();
    2 * votes > REALIZATIONS
}

/// Majority numeric rank of `[A B]` over [`REALIZATIONS`] draws (ties go to
/// the larger rank).
pub fn numeric_generic_rank<R: Rng>(s: &StructuredSystem, rng: &mut R) -> usize {
    let mut votes = vec![0usize; s.n() + 1];
    for _ in 0..REALIZATIONS {
        let (a, b) = realize(s, rng);
        let mut ab = DMatrix::zeros(s.n(), s.n() + s.q());
        ab.columns_mut(0, s.n()).copy_from(&a);
        ab.columns_mut(s.n(), s.q()).copy_from(&b);
        votes[numeric_rank(&ab)] += 1;
    }
    (0..votes.len()).max_by_key(|&r| votes[r]).expect("n + 1 >= 1 entries")
}

/// Generic rank of a pattern given by its nonzero positions, by majority
/// numeric rank over [`REALIZATIONS`] draws.
pub fn numeric_pattern_rank<R: Rng>(rows: usize, cols: usize, entries: &[(usize, usize)], rng: &mut R) -> usize {
    let mut votes = vec![0usize; rows.min(cols) + 1];
    for _ in 0..REALIZATIONS {
        let mut m = DMatrix::zeros(rows, cols);
        for &(r, c) in entries {
            m[(r, c)] = entry(rng);
        }
        votes[numeric_rank(&m)] += 1;
    }
    (0..votes.len()).max_by_key(|&r| votes[r]).expect("at least one entry")
}

/// Whether some injection `right -> left` uses only allowed pairs; `adj[r]`
/// lists the left vertices adjacent to right vertex `r`. Plain backtracking.
pub fn saturates_right(adj: &[Vec<usize>], left: usize) -> bool {
    fn go(r: usize, adj: &[Vec<usize>], used: &mut [bool]) -> bool {
        if r == adj.len() {
            return true;
        }
        for &l in &adj[r] {
            if !used[l] {
                used[l] = true;
                if go(r + 1, adj, used) {
                    return true;
                }
                used[l] = false;
            }
        }
        false
    }
    go(0, adj, &mut vec![false; left])
}

/// Structural controllability from the definitions: every state reachable
/// from some input, and a matching of `B(A, B)` covering every state, both
/// by exhaustive search over the edge lists.
pub fn graph_controllable(n: usize, q: usize, a: &[(usize, usize)], b: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    for &(_, x) in b {
        if !seen[x] {
            seen[x] = true;
            stack.push(x);
        }
    }
    while let Some(v) = stack.pop() {
        for &(f, t) in a {
            if f == v && !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(f, t) in a {
        adj[t].push(f);
    }
    for &(u, t) in b {
        adj[t].push(n + u);
    }
    saturates_right(&adj, n + q)
}

pub fn system_controllable(s: &StructuredSystem) -> bool {
    graph_controllable(s.n(), s.q(), s.a_edges(), s.b_edges())
}

/// Iterator over all subsets of `0..len` as bitmasks.
fn masks(len: usize) -> impl Iterator<Item = u64> {
    assert!(len < 63, "too many items to enumerate");
    0..1u64 << len
}

fn picked(mask: u64, len: usize) -> impl Iterator<Item = usize> {
    (0..len).filter(move |i| mask >> i & 1 == 1)
}

/// Minimum total cost of a subset of `candidates` which, added to `base`,
/// makes the system controllable. Edges are `(is_input, from, to)`.
pub fn min_insertion(
    n: usize,
    q: usize,
    base: &[(bool, usize, usize)],
    candidates: &[(bool, usize, usize, Cost)],
) -> Option<Cost> {
    let mut best: Option<Cost> = None;
    for mask in masks(candidates.len()) {
        let cost: Cost = picked(mask, candidates.len()).map(|i| candidates[i].3.clone()).sum();
        if best.as_ref().is_some_and(|b| &cost >= b) {
            continue;
        }
        let chosen = picked(mask, candidates.len()).map(|i| (candidates[i].0, candidates[i].1, candidates[i].2));
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (input, f, t) in base.iter().copied().chain(chosen) {
            if input {
                b.push((f, t));
            } else {
                a.push((f, t));
            }
        }
        if graph_controllable(n, q, &a, &b) {
            best = Some(cost);
        }
    }
    best
}

/// Minimum total cost of edges of `s` whose removal breaks controllability.
/// `costs` follows the edge ids of `s` (state edges first).
pub fn min_deletion(s: &StructuredSystem, costs: &[Cost]) -> Cost {
    let na = s.a_edges().len();
    let m = s.edge_count();
    let mut best: Option<Cost> = None;
    for mask in masks(m) {
        let cost: Cost = picked(mask, m).map(|i| costs[i].clone()).sum();
        if best.as_ref().is_some_and(|b| &cost >= b) {
            continue;
        }
        let kept = |i: usize| mask >> i & 1 == 0;
        let a: Vec<_> = (0..na).filter(|&i| kept(i)).map(|i| s.a_edges()[i]).collect();
        let b: Vec<_> = (na..m).filter(|&i| kept(i)).map(|i| s.b_edges()[i - na]).collect();
        if !graph_controllable(s.n(), s.q(), &a, &b) {
            best = Some(cost);
        }
    }
    best.expect("removing everything breaks controllability")
}

/// Minimum total cost of inputs whose removal breaks controllability.
pub fn min_actuator_removal(s: &StructuredSystem, input_costs: &[Cost]) -> Cost {
    let q = s.q();
    let mut best: Option<Cost> = None;
    for mask in masks(q) {
        let cost: Cost = picked(mask, q).map(|i| input_costs[i].clone()).sum();
        if best.as_ref().is_some_and(|b| &cost >= b) {
            continue;
        }
        let b: Vec<_> = s.b_edges().iter().copied().filter(|&(u, _)| mask >> u & 1 == 0).collect();
        if !graph_controllable(s.n(), q, s.a_edges(), &b) {
            best = Some(cost);
        }
    }
    best.expect("removing every input breaks controllability")
}

/// Whether the digraph on `n` vertices has a Hamiltonian path, by trying
/// every vertex order.
pub fn has_hamiltonian_path(n: usize, edges: &[(usize, usize)]) -> bool {
    fn extend(path: &mut Vec<usize>, used: &mut [bool], n: usize, edges: &[(usize, usize)]) -> bool {
        if path.len() == n {
            return true;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            if let Some(&last) = path.last() {
                if !edges.contains(&(last, v)) {
                    continue;
                }
            }
            used[v] = true;
            path.push(v);
            if extend(path, used, n, edges) {
                return true;
            }
            path.pop();
            used[v] = false;
        }
        false
    }
    n == 0 || extend(&mut Vec::new(), &mut vec![false; n], n, edges)
}

/// Whether a balanced bipartite graph with edges `(left, right)` has a
/// perfect matching.
pub fn has_perfect_matching(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(l, r) in edges {
        adj[r].push(l);
    }
    saturates_right(&adj, n)
}

/// Fewest edges whose removal leaves no perfect matching.
pub fn matching_preclusion_number(n: usize, edges: &[(usize, usize)]) -> usize {
    let m = edges.len();
    let mut best = m;
    for mask in masks(m) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let kept: Vec<_> = (0..m).filter(|i| mask >> i & 1 == 0).map(|i| edges[i]).collect();
        if !has_perfect_matching(n, &kept) {
            best = size;
        }
    }
    best
}

/// Whether the undirected graph has a clique on `k` vertices.
pub fn has_clique(n: usize, edges: &[(usize, usize)], k: usize) -> bool {
    let adjacent = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
    masks(n).any(|mask| {
        mask.count_ones() as usize == k && {
            let vs: Vec<usize> = picked(mask, n).collect();
            vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| adjacent(a, b)))
        }
    })
}
