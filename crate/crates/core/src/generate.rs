//! Instance generators: the worst-case insertion family and seeded random
//! systems and problems.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::control::is_structurally_controllable;
use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::insertion::InsertionProblem;
use crate::system::{StructuredSystem, SysEdge};

/// Worst-case family for the 2-approximation, unit costs, one input `u` and
/// states `x_0..x_{n-1}`. Candidates: `u -> x_0`, the path
/// `x_i -> x_{i+1}`, the star `x_0 -> x_j` and self-loops at `x_j` for
/// `j >= 2`. The path alone costs `n`; star plus self-loops cost `2n - 2`.
pub fn fig2(n: usize) -> Result<InsertionProblem> {
    if n < 3 {
        return Err(Error::Precondition(format!("family needs n >= 3, got {n}")));
    }
    let one = Cost::one;
    let mut a: Vec<(usize, usize, Cost)> = (0..n - 1).map(|i| (i, i + 1, one())).collect();
    a.extend((2..n).map(|j| (0, j, one())));
    a.extend((2..n).map(|j| (j, j, one())));
    InsertionProblem::from_candidates(n, 1, &a, &[(0, 0, one())])
}

/// The star-and-self-loops solution of [`fig2`], cost `2n - 2`.
pub fn fig2_star_solution(n: usize) -> Vec<SysEdge> {
    let mut edges = vec![SysEdge::input(0, 0), SysEdge::state(0, 1)];
    edges.extend((2..n).map(|j| SysEdge::state(0, j)));
    edges.extend((2..n).map(|j| SysEdge::state(j, j)));
    edges
}

/// The path solution of [`fig2`], cost `n`.
pub fn fig2_path_solution(n: usize) -> Vec<SysEdge> {
    let mut edges = vec![SysEdge::input(0, 0)];
    edges.extend((0..n - 1).map(|i| SysEdge::state(i, i + 1)));
    edges
}

/// Every state and input edge independently with probability `p`.
pub fn random_system<R: Rng>(rng: &mut R, n: usize, q: usize, p: f64) -> StructuredSystem {
    let mut a = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if rng.gen_bool(p) {
                a.push((from, to));
            }
        }
    }
    let mut b = Vec::new();
    for from in 0..q {
        for to in 0..n {
            if rng.gen_bool(p) {
                b.push((from, to));
            }
        }
    }
    StructuredSystem::new(n, q, a, b).expect("generated in range")
}

/// A random structurally controllable system with at most `max_edges`
/// edges, by rejection sampling.
pub fn random_controllable_system<R: Rng>(
    rng: &mut R,
    n_range: std::ops::RangeInclusive<usize>,
    q_range: std::ops::RangeInclusive<usize>,
    max_edges: usize,
) -> StructuredSystem {
    loop {
        let n = rng.gen_range(n_range.clone());
        let q = rng.gen_range(q_range.clone());
        let mut all: Vec<SysEdge> = (0..n)
            .flat_map(|f| (0..n).map(move |t| SysEdge::state(f, t)))
            .chain((0..q).flat_map(|f| (0..n).map(move |t| SysEdge::input(f, t))))
            .collect();
        all.shuffle(rng);
        let count = rng.gen_range(n.min(max_edges)..=max_edges.min(all.len()));
        all.truncate(count);
        let s = StructuredSystem::from_sys_edges(n, q, all).expect("generated in range");
        if is_structurally_controllable(&s).controllable {
            return s;
        }
    }
}

/// Random costs drawn from `0..=max` (integers).
pub fn random_costs<R: Rng>(rng: &mut R, count: usize, max: u64) -> Vec<Cost> {
    (0..count).map(|_| Cost::from_integer(rng.gen_range(0..=max))).collect()
}

/// A random feasible insertion problem with an optional random base and at
/// most `max_candidates` non-base candidates with integer costs in `1..=9`.
pub fn random_insertion<R: Rng>(
    rng: &mut R,
    n_range: std::ops::RangeInclusive<usize>,
    q_range: std::ops::RangeInclusive<usize>,
    max_candidates: usize,
) -> InsertionProblem {
    loop {
        let n = rng.gen_range(n_range.clone());
        let q = rng.gen_range(q_range.clone());
        let mut all: Vec<SysEdge> = (0..n)
            .flat_map(|f| (0..n).map(move |t| SysEdge::state(f, t)))
            .chain((0..q).flat_map(|f| (0..n).map(move |t| SysEdge::input(f, t))))
            .collect();
        all.shuffle(rng);
        let base_count = rng.gen_range(0..=n.min(all.len()) / 2);
        let cand_count = rng.gen_range(1..=max_candidates.min(all.len() - base_count));
        let base = StructuredSystem::from_sys_edges(n, q, all[..base_count].iter().copied())
            .expect("generated in range");
        let mut a = Vec::new();
        let mut b = Vec::new();
        for e in &all[base_count..base_count + cand_count] {
            let c = Cost::from_integer(rng.gen_range(1..=9));
            match e.kind {
                crate::system::EdgeKind::State => a.push((e.from, e.to, c)),
                crate::system::EdgeKind::Input => b.push((e.from, e.to, c)),
            }
        }
        let p = InsertionProblem::normalize(&base, &a, &b).expect("distinct edges");
        if crate::insertion::feasible(&p) {
            return p;
        }
    }
}

/// A random system where every state has a self-loop, with `q` inputs each
/// wired to one or two random states, retried until controllable.
pub fn random_selfloop_system<R: Rng>(rng: &mut R, n: usize, q: usize, p: f64) -> StructuredSystem {
    loop {
        let mut a: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        for from in 0..n {
            for to in 0..n {
                if from != to && rng.gen_bool(p) {
                    a.push((from, to));
                }
            }
        }
        let mut b = Vec::new();
        for u in 0..q {
            let first = rng.gen_range(0..n);
            b.push((u, first));
            if rng.gen_bool(0.3) {
                let second = rng.gen_range(0..n);
                if second != first {
                    b.push((u, second));
                }
            }
        }
        let s = StructuredSystem::new(n, q, a, b).expect("generated in range");
        if is_structurally_controllable(&s).controllable {
            return s;
        }
    }
}
