//! Brute-force references for MAP and MWSS. Nothing here calls into the
//! compiler or the solvers.

use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::model::Model;
use crate::mwss::{MapSolution, StableSetSolution};
use crate::scalar::Scalar;

pub const MAX_CONFIGURATIONS: u128 = 1 << 20;
pub const MAX_MWSS_NODES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{found} exceeds the enumeration cap {cap}")]
    TooLarge { found: u128, cap: u128 },
}

/// Enumerates every configuration in lexicographic order (first variable
/// most significant) and keeps the first one of maximal objective.
pub fn brute_force_map<T: Scalar>(model: &Model<T>) -> Result<MapSolution<T>, OracleError> {
    let cards: Vec<usize> = model.variables().iter().map(|v| v.card).collect();
    let total = cards.iter().fold(1u128, |a, &c| a.saturating_mul(c as u128));
    if total > MAX_CONFIGURATIONS {
        return Err(OracleError::TooLarge {
            found: total,
            cap: MAX_CONFIGURATIONS,
        });
    }
    let score = |x: &[usize]| -> T {
        let mut sum = T::zero();
        for p in model.potentials() {
            let mut offset = 0;
            for &v in &p.scope {
                offset = offset * cards[v] + x[v];
            }
            sum += p.table[offset];
        }
        sum
    };
    let n = cards.len();
    let mut x = vec![0usize; n];
    let mut best_x = x.clone();
    let mut best = score(&x);
    loop {
        // Odometer increment, last variable fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(MapSolution {
                    assignment: best_x,
                    objective: best,
                    method: "brute-force".into(),
                });
            }
            i -= 1;
            x[i] += 1;
            if x[i] < cards[i] {
                break;
            }
            x[i] = 0;
        }
        let s = score(&x);
        if s > best {
            best = s;
            best_x.clone_from(&x);
        }
    }
}

/// Exhaustive search over stable sets, visiting vertices in id order and
/// trying inclusion first; the first set of maximal weight wins.
pub fn brute_force_mwss<T: Scalar>(graph: &WeightedGraph<T>) -> Result<StableSetSolution<T>, OracleError> {
    let n = graph.len();
    if n > MAX_MWSS_NODES {
        return Err(OracleError::TooLarge {
            found: n as u128,
            cap: MAX_MWSS_NODES as u128,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| graph.graph.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    struct State<'a, T> {
        adj: &'a [u32],
        weights: &'a [T],
        best: u32,
        best_weight: T,
    }
    fn visit<T: Scalar>(s: &mut State<'_, T>, v: usize, set: u32, weight: T) {
        if v == s.adj.len() {
            if weight > s.best_weight {
                s.best = set;
                s.best_weight = weight;
            }
            return;
        }
        if s.adj[v] & set == 0 {
            visit(s, v + 1, set | 1 << v, weight + s.weights[v]);
        }
        visit(s, v + 1, set, weight);
    }
    let mut state = State {
        adj: &adj,
        weights: &graph.weights,
        best: 0,
        best_weight: T::zero(),
    };
    visit(&mut state, 0, 0, T::zero());
    Ok(StableSetSolution {
        nodes: (0..n).filter(|&v| state.best >> v & 1 == 1).collect(),
        weight: state.best_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlainGraph;
    use crate::model::Potential;

    #[test]
    fn map_examples() {
        let m = Model::from_parts(
            Model::<f64>::binary_variables(1),
            vec![Potential::new(vec![0], vec![0.0, 7.0])],
        )
        .unwrap();
        let s = brute_force_map(&m).unwrap();
        assert_eq!((s.assignment, s.objective), (vec![1], 7.0));

        let m = Model::from_parts(
            Model::<f64>::binary_variables(2),
            vec![Potential::new(vec![0, 1], vec![0.0, 1.0, 1.0, 0.0])],
        )
        .unwrap();
        let s = brute_force_map(&m).unwrap();
        assert_eq!((s.assignment, s.objective), (vec![0, 1], 1.0));
    }

    #[test]
    fn map_cap() {
        let m = Model::<f64>::from_parts(Model::<f64>::binary_variables(21), vec![]).unwrap();
        assert!(matches!(brute_force_map(&m), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn mwss_examples() {
        let k2 = WeightedGraph::new(PlainGraph::complete(2), vec![1.0, 1.0]);
        assert_eq!(brute_force_mwss(&k2).unwrap().weight, 1.0);
        let c5 = WeightedGraph::new(PlainGraph::cycle(5), vec![1.0; 5]);
        let s = brute_force_mwss(&c5).unwrap();
        assert_eq!(s.weight, 2.0);
        assert_eq!(s.nodes, vec![0, 2]);
    }
}
