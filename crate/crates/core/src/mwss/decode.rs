use serde_json::{json, Map, Value};

use crate::model::Model;
use crate::nmrf::Nmrf;
use crate::scalar::Scalar;

use super::{MwssError, StableSetSolution};

/// A MAP configuration, its objective under the original tables, and the
/// method that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSolution<T> {
    pub assignment: Vec<usize>,
    pub objective: T,
    pub method: String,
}

impl<T: Scalar> MapSolution<T> {
    pub fn to_json(&self, names: &[String]) -> Value {
        let assignment: Map<String, Value> = self
            .assignment
            .iter()
            .enumerate()
            .map(|(v, &l)| (names[v].clone(), json!(l)))
            .collect();
        json!({
            "assignment": assignment,
            "objective": self.objective.to_f64(),
            "method": self.method,
        })
    }
}

/// Tolerance for comparing a recomputed objective against a stable-set
/// value accumulated over `terms` additions.
pub(crate) fn agreement_tolerance<T: Scalar>(eps: T, scale: T, terms: usize) -> T {
    let terms = T::from_f64((terms + 1) as f64).unwrap_or_else(T::one);
    (eps + T::default_eps() * (T::one() + scale.abs())) * terms
}

/// Reads the assignment off the singleton groups of a MMWSS and recomputes
/// the objective from `model`, which must be the model `nmrf` was compiled
/// from (up to edges of associativity at most `eps`).
pub fn decode_map<T: Scalar>(
    nmrf: &Nmrf<T>,
    mmwss: &StableSetSolution<T>,
    model: &Model<T>,
    eps: T,
    method: &str,
) -> Result<MapSolution<T>, MwssError> {
    let n = nmrf.variable_count();
    let mut per_group = vec![0usize; nmrf.groups().len()];
    let mut assignment = vec![usize::MAX; n];
    for &id in &mmwss.nodes {
        let node = nmrf.node_or_pruned(id);
        per_group[node.group] += 1;
        if node.group < n {
            assignment[node.group] = node.assignment[0].1;
        }
    }
    if let Some(g) = per_group.iter().position(|&c| c != 1) {
        return Err(MwssError::Inconsistent(g));
    }
    let objective = model.energy(&assignment);
    let expected = nmrf.constant() + mmwss.weight;
    let tol = agreement_tolerance(eps, expected, nmrf.groups().len());
    if (objective - expected).abs() > tol {
        return Err(MwssError::ObjectiveMismatch {
            recomputed: objective.to_f64(),
            expected: expected.to_f64(),
        });
    }
    Ok(MapSolution {
        assignment,
        objective,
        method: method.to_string(),
    })
}
