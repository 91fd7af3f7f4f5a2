//! The discrete MRF data model: variables, log-potential tables, JSON I/O,
//! edge associativity, the signed-graph view and variable flips.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::signed::{Sign, SignedEdge, SignedGraph};

/// A 2x2 binary edge table indexed `[x_u][x_v]`.
pub type EdgeTable<T> = [[T; 2]; 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("potential {potential} references unknown variable `{name}`")]
    UnknownVariable { potential: usize, name: String },
    #[error("variable `{0}` declared more than once")]
    DuplicateVariable(String),
    #[error("variable `{name}` has cardinality {card}; at least 2 labels are required")]
    BadCardinality { name: String, card: usize },
    #[error("potential {potential} has an empty scope")]
    EmptyScope { potential: usize },
    #[error("potential {potential} lists variable `{name}` twice")]
    RepeatedScopeVariable { potential: usize, name: String },
    #[error("potential {potential} over {scope:?} has {found} entries, expected {expected}")]
    TableSizeMismatch {
        potential: usize,
        scope: Vec<String>,
        expected: usize,
        found: usize,
    },
    #[error("potential {potential} over {scope:?} has a non-finite entry at index {entry}")]
    NonFiniteEntry {
        potential: usize,
        scope: Vec<String>,
        entry: usize,
    },
    #[error("model is not binary pairwise: {0}")]
    NotBinaryPairwise(String),
    #[error("variable index {0} out of range")]
    VariableOutOfRange(usize),
    #[error("malformed model JSON: {0}")]
    Json(String),
}

/// On-disk variable declaration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVariable {
    pub name: String,
    pub card: usize,
}

/// On-disk potential: scope by name, row-major table (last variable fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPotential {
    pub scope: Vec<String>,
    pub table: Vec<f64>,
}

/// The canonical JSON form of a model before validation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub variables: Vec<RawVariable>,
    pub potentials: Vec<RawPotential>,
}

impl RawModel {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("raw models always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub card: usize,
}

/// A log-potential over an ordered scope of variable indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    pub scope: Vec<usize>,
    pub table: Vec<T>,
}

impl<T: Scalar> Potential<T> {
    pub fn new(scope: Vec<usize>, table: Vec<T>) -> Self {
        Potential { scope, table }
    }

    /// Row-major offset of a full-model assignment restricted to the scope.
    pub fn offset(&self, cards: &[usize], assignment: &[usize]) -> usize {
        self.scope
            .iter()
            .fold(0, |acc, &v| acc * cards[v] + assignment[v])
    }

    pub fn value(&self, cards: &[usize], assignment: &[usize]) -> T {
        self.table[self.offset(cards, assignment)]
    }
}

/// A validated MRF. Every scope appears at most once.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<T> {
    variables: Vec<Variable>,
    potentials: Vec<Potential<T>>,
    by_name: HashMap<String, usize>,
}

impl<T: Scalar> Model<T> {
    /// Validates a raw description, merging duplicate scopes by summation.
    pub fn validate(raw: &RawModel) -> Result<Self, ModelError> {
        let mut by_name = HashMap::new();
        let mut variables = Vec::with_capacity(raw.variables.len());
        for v in &raw.variables {
            if v.card < 2 {
                return Err(ModelError::BadCardinality {
                    name: v.name.clone(),
                    card: v.card,
                });
            }
            if by_name.insert(v.name.clone(), variables.len()).is_some() {
                return Err(ModelError::DuplicateVariable(v.name.clone()));
            }
            variables.push(Variable {
                name: v.name.clone(),
                card: v.card,
            });
        }
        let mut potentials = Vec::with_capacity(raw.potentials.len());
        for (pi, p) in raw.potentials.iter().enumerate() {
            let mut scope = Vec::with_capacity(p.scope.len());
            for name in &p.scope {
                let idx = *by_name.get(name).ok_or_else(|| ModelError::UnknownVariable {
                    potential: pi,
                    name: name.clone(),
                })?;
                scope.push(idx);
            }
            let mut table = Vec::with_capacity(p.table.len());
            for (ei, &x) in p.table.iter().enumerate() {
                match T::from_f64(x).filter(|v| x.is_finite() && v.is_finite_value()) {
                    Some(v) => table.push(v),
                    None => {
                        return Err(ModelError::NonFiniteEntry {
                            potential: pi,
                            scope: p.scope.clone(),
                            entry: ei,
                        })
                    }
                }
            }
            potentials.push(Potential { scope, table });
        }
        Self::assemble(variables, potentials, by_name)
    }

    /// Builds a model from already-indexed parts (same checks as
    /// [`Model::validate`]).
    pub fn from_parts(
        variables: Vec<Variable>,
        potentials: Vec<Potential<T>>,
    ) -> Result<Self, ModelError> {
        let mut by_name = HashMap::new();
        for (i, v) in variables.iter().enumerate() {
            if v.card < 2 {
                return Err(ModelError::BadCardinality {
                    name: v.name.clone(),
                    card: v.card,
                });
            }
            if by_name.insert(v.name.clone(), i).is_some() {
                return Err(ModelError::DuplicateVariable(v.name.clone()));
            }
        }
        for p in &potentials {
            if let Some(&bad) = p.scope.iter().find(|&&v| v >= variables.len()) {
                return Err(ModelError::VariableOutOfRange(bad));
            }
        }
        Self::assemble(variables, potentials, by_name)
    }

    /// Binary variables named `X0, X1, ...`.
    pub fn binary_variables(n: usize) -> Vec<Variable> {
        (0..n)
            .map(|i| Variable {
                name: format!("X{i}"),
                card: 2,
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Self::validate(&RawModel::from_json(text)?)
    }

    fn assemble(
        variables: Vec<Variable>,
        potentials: Vec<Potential<T>>,
        by_name: HashMap<String, usize>,
    ) -> Result<Self, ModelError> {
        let cards: Vec<usize> = variables.iter().map(|v| v.card).collect();
        let names = |scope: &[usize]| -> Vec<String> {
            scope.iter().map(|&v| variables[v].name.clone()).collect()
        };
        let mut merged: Vec<Potential<T>> = Vec::new();
        let mut slot: HashMap<Vec<usize>, usize> = HashMap::new();
        for (pi, p) in potentials.into_iter().enumerate() {
            if p.scope.is_empty() {
                return Err(ModelError::EmptyScope { potential: pi });
            }
            let mut sorted = p.scope.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(ModelError::RepeatedScopeVariable {
                    potential: pi,
                    name: variables[w[0]].name.clone(),
                });
            }
            let expected: usize = p.scope.iter().map(|&v| cards[v]).product();
            if p.table.len() != expected {
                return Err(ModelError::TableSizeMismatch {
                    potential: pi,
                    scope: names(&p.scope),
                    expected,
                    found: p.table.len(),
                });
            }
            if let Some(entry) = p.table.iter().position(|x| !x.is_finite_value()) {
                return Err(ModelError::NonFiniteEntry {
                    potential: pi,
                    scope: names(&p.scope),
                    entry,
                });
            }
            match slot.get(&sorted) {
                Some(&existing) => {
                    let target = &mut merged[existing];
                    let permuted = permute_table(&p, &target.scope, &cards);
                    for (t, x) in target.table.iter_mut().zip(permuted) {
                        *t += x;
                    }
                }
                None => {
                    slot.insert(sorted, merged.len());
                    merged.push(p);
                }
            }
        }
        Ok(Model {
            variables,
            potentials: merged,
            by_name,
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn potentials(&self) -> &[Potential<T>] {
        &self.potentials
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn cards(&self) -> Vec<usize> {
        self.variables.iter().map(|v| v.card).collect()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, var: usize) -> &str {
        &self.variables[var].name
    }

    /// Total log-potential of a full assignment (the MAP objective).
    pub fn energy(&self, assignment: &[usize]) -> T {
        let cards = self.cards();
        self.potentials
            .iter()
            .map(|p| p.value(&cards, assignment))
            .sum()
    }

    /// Product of all cardinalities, saturating.
    pub fn configuration_count(&self) -> u128 {
        self.variables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.card as u128))
    }

    pub fn is_binary_pairwise(&self) -> bool {
        self.check_binary_pairwise().is_ok()
    }

    pub fn check_binary_pairwise(&self) -> Result<(), ModelError> {
        if let Some(v) = self.variables.iter().find(|v| v.card != 2) {
            return Err(ModelError::NotBinaryPairwise(format!(
                "variable `{}` has {} labels",
                v.name, v.card
            )));
        }
        if let Some(p) = self.potentials.iter().find(|p| p.scope.len() > 2) {
            return Err(ModelError::NotBinaryPairwise(format!(
                "potential over {} variables",
                p.scope.len()
            )));
        }
        Ok(())
    }

    /// Singleton table of `var`, zeros when none is declared.
    pub fn singleton_table(&self, var: usize) -> Vec<T> {
        self.potentials
            .iter()
            .find(|p| p.scope.len() == 1 && p.scope[0] == var)
            .map(|p| p.table.clone())
            .unwrap_or_else(|| vec![T::zero(); self.variables[var].card])
    }

    /// Pairwise potentials as `(u, v, table)` with `u < v` and the table
    /// indexed `[x_u][x_v]`. Requires a binary pairwise model.
    pub fn pairwise_tables(&self) -> Vec<(usize, usize, EdgeTable<T>)> {
        self.potentials
            .iter()
            .filter(|p| p.scope.len() == 2)
            .map(|p| {
                let t = &p.table;
                let (a, b) = (p.scope[0], p.scope[1]);
                if a < b {
                    (a, b, [[t[0], t[1]], [t[2], t[3]]])
                } else {
                    (b, a, [[t[0], t[2]], [t[1], t[3]]])
                }
            })
            .collect()
    }

    pub fn to_raw(&self) -> RawModel {
        RawModel {
            variables: self
                .variables
                .iter()
                .map(|v| RawVariable {
                    name: v.name.clone(),
                    card: v.card,
                })
                .collect(),
            potentials: self
                .potentials
                .iter()
                .map(|p| RawPotential {
                    scope: p.scope.iter().map(|&v| self.name(v).to_string()).collect(),
                    table: p.table.iter().map(|x| x.to_f64()).collect(),
                })
                .collect(),
        }
    }

    /// Signed topology of a binary pairwise model. Edges whose
    /// associativity has magnitude at most `eps` are omitted.
    pub fn signed_view(&self, eps: T) -> Result<SignedGraph, ModelError> {
        self.check_binary_pairwise()?;
        let edges = self.pairwise_tables().into_iter().filter_map(|(u, v, t)| {
            let a = associativity(&t);
            if a > eps {
                Some(SignedEdge::new(u, v, Sign::Associative))
            } else if a < -eps {
                Some(SignedEdge::new(u, v, Sign::Repulsive))
            } else {
                None
            }
        });
        Ok(SignedGraph::new(self.num_variables(), edges))
    }

    /// Replaces each `X_i` with `i` in `flip` by `1 - X_i`, permuting every
    /// table so the energy of corresponding configurations is unchanged.
    pub fn flip_variables(&self, flip: &[usize]) -> Result<Self, ModelError> {
        self.check_binary_pairwise()?;
        let mut mask = vec![false; self.num_variables()];
        for &v in flip {
            *mask.get_mut(v).ok_or(ModelError::VariableOutOfRange(v))? = true;
        }
        let potentials = self
            .potentials
            .iter()
            .map(|p| {
                let k = p.scope.len();
                let xor = p
                    .scope
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| mask[v])
                    .fold(0usize, |acc, (pos, _)| acc | 1 << (k - 1 - pos));
                let table = (0..p.table.len()).map(|i| p.table[i ^ xor]).collect();
                Potential {
                    scope: p.scope.clone(),
                    table,
                }
            })
            .collect();
        Ok(Model {
            variables: self.variables.clone(),
            potentials,
            by_name: self.by_name.clone(),
        })
    }
}

/// `psi00 + psi11 - psi01 - psi10`.
pub fn associativity<T: Scalar>(table: &EdgeTable<T>) -> T {
    table[0][0] + table[1][1] - table[0][1] - table[1][0]
}

/// Re-indexes `p`'s table to the scope order `target` (same variable set).
fn permute_table<T: Scalar>(p: &Potential<T>, target: &[usize], cards: &[usize]) -> Vec<T> {
    let mut out = vec![T::zero(); p.table.len()];
    let mut assignment = vec![0usize; cards.len()];
    for idx in 0..p.table.len() {
        let mut rem = idx;
        for &v in target.iter().rev() {
            assignment[v] = rem % cards[v];
            rem /= cards[v];
        }
        out[idx] = p.value(cards, &assignment);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(vars: &[(&str, usize)], pots: &[(&[&str], &[f64])]) -> RawModel {
        RawModel {
            variables: vars
                .iter()
                .map(|(n, c)| RawVariable {
                    name: n.to_string(),
                    card: *c,
                })
                .collect(),
            potentials: pots
                .iter()
                .map(|(s, t)| RawPotential {
                    scope: s.iter().map(|x| x.to_string()).collect(),
                    table: t.to_vec(),
                })
                .collect(),
        }
    }

    #[test]
    fn minimal_model_is_valid() {
        let m = Model::<f64>::validate(&raw(&[("X1", 2)], &[(&["X1"], &[0.0, 1.0])])).unwrap();
        assert_eq!(m.num_variables(), 1);
        assert_eq!(m.energy(&[1]), 1.0);
    }

    #[test]
    fn table_size_mismatch() {
        let r = raw(
            &[("X1", 2), ("X2", 2)],
            &[(&["X1", "X2"], &[0.0, 1.0, 2.0])],
        );
        match Model::<f64>::validate(&r) {
            Err(ModelError::TableSizeMismatch {
                expected, found, ..
            }) => assert_eq!((expected, found), (4, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nan_entry_rejected() {
        let r = raw(&[("X1", 2)], &[(&["X1"], &[0.0, f64::NAN])]);
        assert!(matches!(
            Model::<f64>::validate(&r),
            Err(ModelError::NonFiniteEntry { entry: 1, .. })
        ));
    }

    #[test]
    fn unknown_and_duplicate_variables() {
        let r = raw(&[("X1", 2)], &[(&["Y"], &[0.0, 0.0])]);
        assert!(matches!(
            Model::<f64>::validate(&r),
            Err(ModelError::UnknownVariable { name, .. }) if name == "Y"
        ));
        let r = raw(&[("X1", 2), ("X1", 3)], &[]);
        assert!(matches!(
            Model::<f64>::validate(&r),
            Err(ModelError::DuplicateVariable(n)) if n == "X1"
        ));
    }

    #[test]
    fn duplicate_scopes_are_summed_in_first_order() {
        let r = raw(
            &[("A", 2), ("B", 3)],
            &[
                (&["A", "B"], &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]),
                (&["B", "A"], &[10.0, 20.0, 30.0, 40.0, 50.0, 60.0]),
            ],
        );
        let m = Model::<f64>::validate(&r).unwrap();
        assert_eq!(m.potentials().len(), 1);
        // (A=a, B=b) picks up 10*(2b + a + 1) from the reversed table.
        assert_eq!(m.potentials()[0].table, vec![10.0, 31.0, 52.0, 23.0, 44.0, 65.0]);
    }

    #[test]
    fn unknown_json_keys_rejected() {
        let text = r#"{"variables": [{"name": "X", "card": 2, "extra": 1}], "potentials": []}"#;
        assert!(matches!(RawModel::from_json(text), Err(ModelError::Json(_))));
        let ok = r#"{"variables": [{"name": "X", "card": 2}], "potentials": [{"scope": ["X"], "table": [0, 7]}]}"#;
        let m = Model::<f64>::from_json(ok).unwrap();
        assert_eq!(m.singleton_table(0), vec![0.0, 7.0]);
    }

    #[test]
    fn associativity_examples() {
        assert_eq!(associativity(&[[0.0, 0.0], [0.0, 0.0]]), 0.0);
        assert_eq!(associativity(&[[1.0, 0.0], [0.0, 1.0]]), 2.0);
        assert_eq!(associativity(&[[0.0, 3.0], [2.0, 0.0]]), -5.0);
    }

    fn edge_model(table: [f64; 4]) -> Model<f64> {
        Model::validate(&raw(&[("x", 2), ("y", 2)], &[(&["x", "y"], &table)])).unwrap()
    }

    #[test]
    fn signed_view_examples() {
        let g = edge_model([1.0, 0.0, 0.0, 1.0]).signed_view(1e-9).unwrap();
        assert_eq!(g.edges()[0].sign, Sign::Associative);
        let g = edge_model([0.0, 1.0, 1.0, 0.0]).signed_view(1e-9).unwrap();
        assert_eq!(g.edges()[0].sign, Sign::Repulsive);
        let g = edge_model([5.0, 5.0, 5.0, 5.0]).signed_view(1e-9).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn signed_view_rejects_non_binary() {
        let m = Model::<f64>::validate(&raw(&[("x", 3)], &[])).unwrap();
        assert!(matches!(m.signed_view(1e-9), Err(ModelError::NotBinaryPairwise(_))));
    }

    #[test]
    fn flip_examples() {
        let m = edge_model([0.0, 1.0, 1.0, 0.0]);
        assert_eq!(m.flip_variables(&[]).unwrap(), m);
        let f = m.flip_variables(&[0]).unwrap();
        assert_eq!(f.signed_view(1e-9).unwrap().edges()[0].sign, Sign::Associative);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(f.energy(&[1 - x, y]), m.energy(&[x, y]));
            }
        }
    }
}
