use crate::graph::WeightedGraph;
use crate::scalar::Scalar;

use super::{check_weights, MwssError, StableSetSolution};

pub const DEFAULT_BNB_CAP: usize = 40;

/// Bitset rows limit the search to 64 nodes whatever cap is requested.
const HARD_CAP: usize = 64;

struct Search<'a, T> {
    adj: &'a [u64],
    weights: &'a [T],
    best: u64,
    best_weight: T,
}

impl<T: Scalar> Search<'_, T> {
    fn weight(&self, mut set: u64) -> T {
        let mut sum = T::zero();
        while set != 0 {
            sum += self.weights[set.trailing_zeros() as usize];
            set &= set - 1;
        }
        sum
    }

    fn run(&mut self, candidates: u64, chosen: u64, weight: T) {
        let rest = self.weight(candidates);
        if weight + rest <= self.best_weight {
            return;
        }
        let mut pivot = None;
        let mut pivot_degree = 0;
        let mut scan = candidates;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let d = (self.adj[v] & candidates).count_ones();
            if d > pivot_degree {
                pivot = Some(v);
                pivot_degree = d;
            }
        }
        let Some(v) = pivot else {
            // Remaining candidates are pairwise non-adjacent.
            self.best = chosen | candidates;
            self.best_weight = weight + rest;
            return;
        };
        let bit = 1u64 << v;
        self.run(candidates & !self.adj[v] & !bit, chosen | bit, weight + self.weights[v]);
        self.run(candidates & !bit, chosen, weight);
    }
}

/// Exact MWSS by branch and bound: branch on the candidate of highest
/// degree (smallest id on ties), include before exclude, prune when the
/// current weight plus all remaining candidate weight cannot beat the
/// incumbent.
pub fn mwss_branch_bound<T: Scalar>(
    graph: &WeightedGraph<T>,
    cap: usize,
) -> Result<StableSetSolution<T>, MwssError> {
    let n = graph.len();
    let cap = cap.min(HARD_CAP);
    if n > cap {
        return Err(MwssError::TooLarge { nodes: n, cap });
    }
    check_weights(&graph.weights)?;
    let adj = graph.graph.bitsets();
    let mut search = Search {
        adj: &adj,
        weights: &graph.weights,
        best: 0,
        best_weight: T::zero(),
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    search.run(all, 0, T::zero());
    let nodes: Vec<usize> = (0..n).filter(|&v| search.best >> v & 1 == 1).collect();
    let weight = graph.weight_of(&nodes);
    Ok(StableSetSolution { nodes, weight })
}
