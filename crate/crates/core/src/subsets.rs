//! Subsets of weighted items in nondecreasing total weight.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Yields every subset of `0..weights.len()` exactly once, the empty set
/// first, in nondecreasing total weight. Ties go to the subset generated
/// first, which makes the order deterministic.
///
/// Items are sorted by `(weight, index)`; a subset whose largest sorted
/// position is `i` has two successors: add position `i + 1`, or move `i` to
/// `i + 1`. Weights must be non-negative.
pub(crate) struct CostOrdered {
    order: Vec<usize>,
    weights: Vec<i128>,
    heap: BinaryHeap<Reverse<(i128, u64, Vec<u32>)>>,
    seq: u64,
    started: bool,
}

impl CostOrdered {
    pub(crate) fn new(weights: &[i128]) -> Self {
        debug_assert!(weights.iter().all(|&w| w >= 0));
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by_key(|&i| (weights[i], i));
        let sorted = order.iter().map(|&i| weights[i]).collect();
        CostOrdered {
            order,
            weights: sorted,
            heap: BinaryHeap::new(),
            seq: 0,
            started: false,
        }
    }

    fn push(&mut self, total: i128, positions: Vec<u32>) {
        self.seq += 1;
        self.heap.push(Reverse((total, self.seq, positions)));
    }
}

impl Iterator for CostOrdered {
    /// Total weight and the chosen item indices, ascending.
    type Item = (i128, Vec<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            if !self.weights.is_empty() {
                self.push(self.weights[0], vec![0]);
            }
            return Some((0, Vec::new()));
        }
        let Reverse((total, _, positions)) = self.heap.pop()?;
        let last = *positions.last().expect("non-empty") as usize;
        if last + 1 < self.weights.len() {
            let mut extended = positions.clone();
            extended.push(last as u32 + 1);
            self.push(total + self.weights[last + 1], extended);
            let mut shifted = positions.clone();
            *shifted.last_mut().expect("non-empty") += 1;
            self.push(total - self.weights[last] + self.weights[last + 1], shifted);
        }
        let mut items: Vec<usize> = positions.iter().map(|&p| self.order[p as usize]).collect();
        items.sort_unstable();
        Some((total, items))
    }
}
