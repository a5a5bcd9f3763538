//! Minimal-cost actuator deletion: the cheapest set of inputs whose removal
//! makes the system structurally uncontrollable.

use serde::Serialize;

use crate::control::{is_structurally_controllable, Checker};
use crate::cost::{Cost, CostScale};
use crate::error::{Error, Result};
use crate::graph::scc_decompose;
use crate::matrix::{rank_of_columns, StructuredMatrix};
use crate::subsets::CostOrdered;
use crate::system::{Method, StructuredSystem};

pub const DEFAULT_ACTUATOR_CAP: usize = 16;
pub const DEFAULT_GIRTH_CAP: usize = 16;

/// How the removal breaks controllability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    /// Some state is no longer input-reachable.
    Reachability,
    /// `grank [A B]` drops below `n`.
    Rank,
}

/// A source SCC of `D(A)` with the inputs feeding it and their total cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceSccCost {
    pub states: Vec<usize>,
    pub inputs: Vec<usize>,
    pub cost: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActuatorAnalysis {
    /// Removed input ids, ascending.
    pub removal: Vec<usize>,
    pub cost: Cost,
    pub mechanism: Mechanism,
    /// Filled in by the self-loop fast path.
    pub source_scc_costs: Vec<SourceSccCost>,
    pub method: Method,
}

fn check_input_costs(s: &StructuredSystem, costs: &[Cost]) -> Result<()> {
    if costs.len() != s.q() {
        return Err(Error::CostLength {
            got: costs.len(),
            expected: s.q(),
        });
    }
    Ok(())
}

fn mechanism_of(s: &StructuredSystem) -> Mechanism {
    if is_structurally_controllable(s).reachability_ok() {
        Mechanism::Rank
    } else {
        Mechanism::Reachability
    }
}

/// Closed form for systems where every state has a self-loop: the rank
/// condition can never fail, so the optimum removes every input feeding the
/// cheapest source SCC of `D(A)`. Ties go to the SCC with the smallest state.
pub fn actuator_fastpath_selfloops(s: &StructuredSystem, input_costs: &[Cost]) -> Result<ActuatorAnalysis> {
    check_input_costs(s, input_costs)?;
    let n = s.n();
    let mut has_loop = vec![false; n];
    for &(f, t) in s.a_edges() {
        if f == t {
            has_loop[f] = true;
        }
    }
    if let Some(x) = has_loop.iter().position(|&h| !h) {
        return Err(Error::Precondition(format!(
            "self-loop fast path inapplicable: state {x} has no self-loop"
        )));
    }
    if !is_structurally_controllable(s).controllable {
        return Err(Error::Precondition("system is not structurally controllable".into()));
    }
    let decomposition = scc_decompose(&s.state_digraph());
    let mut feeds: Vec<Vec<usize>> = vec![Vec::new(); decomposition.components.len()];
    for &(u, x) in s.b_edges() {
        let c = decomposition.component_of[x];
        if decomposition.is_source[c] {
            feeds[c].push(u);
        }
    }
    let mut per_scc: Vec<SourceSccCost> = decomposition
        .components
        .iter()
        .zip(feeds)
        .enumerate()
        .filter(|(c, _)| decomposition.is_source[*c])
        .map(|(_, (states, mut inputs))| {
            inputs.sort_unstable();
            inputs.dedup();
            SourceSccCost {
                cost: inputs.iter().map(|&u| &input_costs[u]).sum(),
                states: states.clone(),
                inputs,
            }
        })
        .collect();
    per_scc.sort_by_key(|c| c.states[0]);
    let best = per_scc
        .iter()
        .min_by(|a, b| a.cost.cmp(&b.cost).then(a.states[0].cmp(&b.states[0])))
        .expect("n >= 1 gives a source SCC");
    Ok(ActuatorAnalysis {
        removal: best.inputs.clone(),
        cost: best.cost.clone(),
        mechanism: Mechanism::Reachability,
        method: Method::Formula,
        source_scc_costs: per_scc,
    })
}

/// Exact optimum by enumerating input subsets in nondecreasing cost. The
/// first subset whose removal breaks controllability is optimal; removing
/// every input always works since `n >= 1`.
pub fn exact_actuator(s: &StructuredSystem, input_costs: &[Cost], cap: usize) -> Result<ActuatorAnalysis> {
    check_input_costs(s, input_costs)?;
    if s.q() > cap {
        return Err(Error::TooLarge {
            what: "inputs",
            size: s.q(),
            cap,
        });
    }
    let n = s.n();
    let (scale, w) = CostScale::new(input_costs)?;
    let state_pairs: Vec<(usize, usize)> = s.a_edges().to_vec();
    let mut checker = Checker::new(n, s.q());
    let mut removed = vec![false; s.q()];
    for (total, subset) in CostOrdered::new(&w) {
        removed.iter_mut().for_each(|r| *r = false);
        for &u in &subset {
            removed[u] = true;
        }
        let edges = state_pairs.iter().copied().chain(
            s.b_edges()
                .iter()
                .filter(|(u, _)| !removed[*u])
                .map(|&(u, x)| (n + u, x)),
        );
        if !checker.controllable(edges) {
            let reduced = s.without_inputs(&subset);
            return Ok(ActuatorAnalysis {
                mechanism: mechanism_of(&reduced),
                removal: subset,
                cost: scale.to_cost(total),
                source_scc_costs: Vec::new(),
                method: Method::Exact,
            });
        }
    }
    unreachable!("removing every input leaves states unreachable")
}

/// Smallest number of generically dependent columns of `m`; `None` when all
/// columns together are generically independent.
pub fn girth(m: &StructuredMatrix, cap: usize) -> Result<Option<usize>> {
    let cols = m.cols();
    if cols > cap {
        return Err(Error::TooLarge {
            what: "columns",
            size: cols,
            cap,
        });
    }
    let supports = m.column_supports();
    for size in 1..=cols {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if rank_of_columns(&supports, &subset, m.rows()) < size {
                return Ok(Some(size));
            }
            // Next combination in lexicographic order.
            let mut i = size;
            while i > 0 && subset[i - 1] == cols - size + i - 1 {
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
    Ok(None)
}

/// Rank test for removing inputs `removal` when every input actuates exactly
/// one state: with `W` the states no remaining input actuates, the reduced
/// system loses full rank iff `grank(A[W, :]) < |W|`.
pub fn rank_drop_check(s: &StructuredSystem, removal: &[usize]) -> Result<bool> {
    let mut target: Vec<Option<usize>> = vec![None; s.q()];
    for &(u, x) in s.b_edges() {
        if target[u].is_some() {
            return Err(Error::Precondition(format!("input {u} actuates more than one state")));
        }
        target[u] = Some(x);
    }
    if let Some(u) = target.iter().position(Option::is_none) {
        return Err(Error::Precondition(format!("input {u} actuates no state")));
    }
    if let Some(&u) = removal.iter().find(|&&u| u >= s.q()) {
        return Err(Error::VertexOutOfRange { vertex: u, count: s.q() });
    }
    let n = s.n();
    let mut actuated = vec![false; n];
    for (u, x) in target.iter().enumerate() {
        if !removal.contains(&u) {
            actuated[x.expect("checked")] = true;
        }
    }
    let rows: Vec<usize> = (0..n).filter(|&x| !actuated[x]).collect();
    let mut row_pos = vec![usize::MAX; n];
    for (i, &x) in rows.iter().enumerate() {
        row_pos[x] = i;
    }
    // Transposed view: columns of A^T restricted to W are the rows of A.
    let mut supports: Vec<Vec<usize>> = vec![Vec::new(); rows.len()];
    for &(j, i) in s.a_edges() {
        if row_pos[i] != usize::MAX {
            supports[row_pos[i]].push(j);
        }
    }
    let all: Vec<usize> = (0..rows.len()).collect();
    Ok(rank_of_columns(&supports, &all, n) < rows.len())
}
