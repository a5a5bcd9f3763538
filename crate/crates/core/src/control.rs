//! Structural controllability tests.
//!
//! A pair `(A, B)` is structurally controllable iff every state is reachable
//! from some input in `D(A, B)` and `B(A, B)` has a matching covering every
//! state (equivalently, `grank [A B] = n`).

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{self, scc_decompose};
use crate::system::StructuredSystem;

/// A source SCC of `D(A)` and whether any of its states is input-reachable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceScc {
    pub states: Vec<usize>,
    pub input_reachable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CtrlReport {
    pub controllable: bool,
    /// States with no path from any input, ascending.
    pub unreachable_states: Vec<usize>,
    /// `n - grank [A B]`.
    pub rank_deficiency: usize,
    /// States left unmatched by one maximum matching of `B(A, B)`.
    pub unmatched_states: Vec<usize>,
    pub source_sccs: Vec<SourceScc>,
}

impl CtrlReport {
    pub fn reachability_ok(&self) -> bool {
        self.unreachable_states.is_empty()
    }

    pub fn rank_ok(&self) -> bool {
        self.rank_deficiency == 0
    }
}

pub fn is_structurally_controllable(s: &StructuredSystem) -> CtrlReport {
    let n = s.n();
    let digraph = s.system_digraph();
    let inputs: Vec<usize> = (n..n + s.q()).collect();
    let mut reached = vec![false; n + s.q()];
    for v in graph::reachable_from(&digraph, &inputs) {
        reached[v] = true;
    }
    let unreachable_states: Vec<usize> = (0..n).filter(|&x| !reached[x]).collect();

    let bipartite = s.system_bipartite();
    let matching = graph::max_matching(&bipartite);
    let mut matched = vec![false; n];
    for &e in &matching {
        matched[bipartite.edges()[e].1] = true;
    }
    let unmatched_states: Vec<usize> = (0..n).filter(|&x| !matched[x]).collect();

    let source_sccs = source_sccs_with(s, &reached);
    CtrlReport {
        controllable: unreachable_states.is_empty() && unmatched_states.is_empty(),
        rank_deficiency: unmatched_states.len(),
        unreachable_states,
        unmatched_states,
        source_sccs,
    }
}

/// Source SCCs of `D(A)` with their input-reachability in `D(A, B)`, in
/// topological order of the condensation.
pub fn source_sccs(s: &StructuredSystem) -> Vec<SourceScc> {
    let n = s.n();
    let digraph = s.system_digraph();
    let inputs: Vec<usize> = (n..n + s.q()).collect();
    let mut reached = vec![false; n + s.q()];
    for v in graph::reachable_from(&digraph, &inputs) {
        reached[v] = true;
    }
    source_sccs_with(s, &reached)
}

fn source_sccs_with(s: &StructuredSystem, reached: &[bool]) -> Vec<SourceScc> {
    let decomposition = scc_decompose(&s.state_digraph());
    decomposition
        .source_components()
        .map(|states| SourceScc {
            input_reachable: states.iter().any(|&x| reached[x]),
            states: states.to_vec(),
        })
        .collect()
}

/// Condition iii: input-reachability plus a state-covering maximum matching of
/// `B(A, B)` (Hopcroft-Karp).
pub fn reachability_and_matching(s: &StructuredSystem) -> bool {
    is_structurally_controllable(s).controllable
}

/// Condition iv: a path from the inputs to every state (depth-first search)
/// and full generic row rank of the pattern `[A B]` (augmenting paths on the
/// matrix pattern). Independent of the code path behind
/// [`reachability_and_matching`].
pub fn paths_and_generic_rank(s: &StructuredSystem) -> bool {
    let n = s.n();
    let mut adj = vec![Vec::new(); n + s.q()];
    for e in s.edges() {
        adj[e.tail_vertex(n)].push(e.to);
    }
    let mut seen = vec![false; n + s.q()];
    let mut stack: Vec<usize> = (n..n + s.q()).collect();
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    (0..n).all(|x| seen[x]) && s.compound_matrix().generic_rank() == n
}

/// Reusable scratch space for repeated controllability checks on edge lists,
/// used by the exhaustive solvers.
///
/// Edges are `(tail, head)` with tails in `0..n+q` (inputs at `n..`) and heads
/// in `0..n`.
#[derive(Debug)]
pub(crate) struct Checker {
    n: usize,
    q: usize,
    adj: Vec<Vec<usize>>,
    seen: Vec<bool>,
    queue: VecDeque<usize>,
    match_right: Vec<usize>,
    visited: Vec<bool>,
}

impl Checker {
    pub(crate) fn new(n: usize, q: usize) -> Self {
        Checker {
            n,
            q,
            adj: vec![Vec::new(); n + q],
            seen: vec![false; n + q],
            queue: VecDeque::new(),
            match_right: vec![usize::MAX; n],
            visited: vec![false; n],
        }
    }

    pub(crate) fn controllable<I: IntoIterator<Item = (usize, usize)>>(&mut self, edges: I) -> bool {
        let total = self.n + self.q;
        for a in &mut self.adj {
            a.clear();
        }
        let mut head_seen = 0usize;
        let mut has_in = vec![false; self.n];
        for (t, h) in edges {
            self.adj[t].push(h);
            if !has_in[h] {
                has_in[h] = true;
                head_seen += 1;
            }
        }
        if head_seen < self.n {
            return false;
        }
        self.seen.iter_mut().for_each(|s| *s = false);
        self.queue.clear();
        for u in self.n..total {
            self.seen[u] = true;
            self.queue.push_back(u);
        }
        let mut reached = 0;
        while let Some(v) = self.queue.pop_front() {
            for i in 0..self.adj[v].len() {
                let w = self.adj[v][i];
                if !self.seen[w] {
                    self.seen[w] = true;
                    reached += 1;
                    self.queue.push_back(w);
                }
            }
        }
        if reached < self.n {
            return false;
        }
        self.full_matching()
    }

    /// Whether the edges loaded by the last `controllable` call, or by
    /// `load`, admit a matching covering every state.
    fn full_matching(&mut self) -> bool {
        self.match_right.iter_mut().for_each(|m| *m = usize::MAX);
        // Left vertices are tails; adjacency is tail -> heads.
        for left in 0..self.n + self.q {
            if self.adj[left].is_empty() {
                continue;
            }
            self.visited.iter_mut().for_each(|v| *v = false);
            self.augment(left);
        }
        self.match_right.iter().all(|&m| m != usize::MAX)
    }

    fn augment(&mut self, left: usize) -> bool {
        for i in 0..self.adj[left].len() {
            let r = self.adj[left][i];
            if self.visited[r] {
                continue;
            }
            self.visited[r] = true;
            let owner = self.match_right[r];
            if owner == usize::MAX || self.augment(owner) {
                self.match_right[r] = left;
                return true;
            }
        }
        false
    }

    /// Matching condition only.
    pub(crate) fn full_rank<I: IntoIterator<Item = (usize, usize)>>(&mut self, edges: I) -> bool {
        for a in &mut self.adj {
            a.clear();
        }
        for (t, h) in edges {
            self.adj[t].push(h);
        }
        self.full_matching()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stem_is_controllable() {
        let s = StructuredSystem::new(2, 1, vec![(0, 1)], vec![(0, 0)]).unwrap();
        let r = is_structurally_controllable(&s);
        assert!(r.controllable);
        assert!(paths_and_generic_rank(&s));
    }

    #[test]
    fn empty_single_state() {
        let s = StructuredSystem::new(1, 0, vec![], vec![]).unwrap();
        let r = is_structurally_controllable(&s);
        assert!(!r.controllable);
        assert_eq!(r.unreachable_states, vec![0]);
        assert_eq!(r.rank_deficiency, 1);
    }

    #[test]
    fn rank_failure_is_distinguished() {
        // u0 feeds x0 and x1 but nothing else can match them both.
        let s = StructuredSystem::new(2, 1, vec![], vec![(0, 0), (0, 1)]).unwrap();
        let r = is_structurally_controllable(&s);
        assert!(r.reachability_ok());
        assert_eq!(r.rank_deficiency, 1);
        assert!(!r.controllable);
    }

    #[test]
    fn two_self_loops_one_actuated() {
        let s = StructuredSystem::new(2, 1, vec![(0, 0), (1, 1)], vec![(0, 0)]).unwrap();
        let sources = source_sccs(&s);
        assert_eq!(sources.len(), 2);
        for c in &sources {
            assert_eq!(c.input_reachable, c.states == vec![0]);
        }
    }

    #[test]
    fn single_cycle_one_input() {
        let s = StructuredSystem::new(3, 1, vec![(0, 1), (1, 2), (2, 0)], vec![(0, 1)]).unwrap();
        let sources = source_sccs(&s);
        assert_eq!(sources, vec![SourceScc { states: vec![0, 1, 2], input_reachable: true }]);
    }

    #[test]
    fn checker_agrees_with_report() {
        let s = StructuredSystem::new(2, 1, vec![(0, 1)], vec![(0, 0)]).unwrap();
        let mut c = Checker::new(2, 1);
        let edges: Vec<(usize, usize)> = s.edges().map(|e| (e.tail_vertex(2), e.to)).collect();
        assert!(c.controllable(edges.iter().copied()));
        assert!(!c.controllable(edges[..1].iter().copied()));
        assert!(c.full_rank(edges.iter().copied()));
    }
}
