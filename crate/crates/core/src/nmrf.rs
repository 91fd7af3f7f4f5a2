//! NAND-MRF compilation.
//!
//! Every scope of a model becomes a clique group holding one node per
//! setting of the scope; two nodes conflict iff they assign different labels
//! to a shared variable. A maximal maximum-weight stable set of the result
//! picks one consistent node per group, i.e. a MAP configuration.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{associativity, EdgeTable, Model, ModelError, Potential};
use crate::scalar::Scalar;
use crate::signed::{Sign, SignedGraph};

/// One `(scope, setting)` pair of the source model.
#[derive(Debug, Clone, PartialEq)]
pub struct NmrfNode<T> {
    pub group: usize,
    /// `(variable, label)` pairs in scope order.
    pub assignment: Vec<(usize, usize)>,
    pub weight: T,
}

impl<T> NmrfNode<T> {
    pub fn is_snode(&self) -> bool {
        self.assignment.len() == 1
    }

    pub fn label_of(&self, var: usize) -> Option<usize> {
        self.assignment
            .iter()
            .find(|(v, _)| *v == var)
            .map(|&(_, l)| l)
    }

    pub fn labels(&self) -> Vec<usize> {
        self.assignment.iter().map(|&(_, l)| l).collect()
    }
}

/// True iff the two nodes disagree on some shared variable, or are distinct
/// settings of the same clique group.
pub fn nodes_conflict<T>(a: &NmrfNode<T>, b: &NmrfNode<T>) -> bool {
    if a.group == b.group && a.assignment != b.assignment {
        return true;
    }
    a.assignment.iter().any(|&(va, la)| {
        b.assignment
            .iter()
            .any(|&(vb, lb)| va == vb && la != lb)
    })
}

/// Weighted conflict graph over clique groups. After [`Nmrf::prune`] only
/// the positive-weight nodes remain in the graph; the removed nodes are kept
/// aside for MMWSS completion.
#[derive(Debug, Clone, PartialEq)]
pub struct Nmrf<T> {
    variable_count: usize,
    groups: Vec<Vec<usize>>,
    nodes: Vec<NmrfNode<T>>,
    adjacency: Vec<Vec<usize>>,
    constant: T,
    pruned: Vec<NmrfNode<T>>,
}

/// Builds the NMRF of `model`: one clique group per variable (materialized
/// even without a singleton potential), then one per remaining scope. Each
/// group is shifted so its minimum weight is exactly zero; the shifts are
/// accumulated in [`Nmrf::constant`].
pub fn build_nmrf<T: Scalar>(model: &Model<T>) -> Nmrf<T> {
    let cards = model.cards();
    let mut scopes: Vec<(Vec<usize>, Vec<T>)> = (0..model.num_variables())
        .map(|v| (vec![v], model.singleton_table(v)))
        .collect();
    scopes.extend(
        model
            .potentials()
            .iter()
            .filter(|p| p.scope.len() > 1)
            .map(|p| (p.scope.clone(), p.table.clone())),
    );
    let mut constant = T::zero();
    let mut nodes = Vec::new();
    let mut groups = Vec::with_capacity(scopes.len());
    for (gid, (scope, table)) in scopes.into_iter().enumerate() {
        let min = table.iter().copied().fold(table[0], T::min_of);
        constant += min;
        for (offset, &value) in table.iter().enumerate() {
            let mut rem = offset;
            let mut assignment = vec![(0, 0); scope.len()];
            for (slot, &v) in scope.iter().enumerate().rev() {
                assignment[slot] = (v, rem % cards[v]);
                rem /= cards[v];
            }
            nodes.push(NmrfNode {
                group: gid,
                assignment,
                weight: value - min,
            });
        }
        groups.push(scope);
    }
    let adjacency = conflict_adjacency(model.num_variables(), &nodes);
    Nmrf {
        variable_count: model.num_variables(),
        groups,
        nodes,
        adjacency,
        constant,
        pruned: Vec::new(),
    }
}

fn conflict_adjacency<T>(variable_count: usize, nodes: &[NmrfNode<T>]) -> Vec<Vec<usize>> {
    let mut touching: Vec<Vec<(usize, usize)>> = vec![Vec::new(); variable_count];
    for (id, n) in nodes.iter().enumerate() {
        for &(v, l) in &n.assignment {
            touching[v].push((l, id));
        }
    }
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for bucket in &touching {
        for (i, &(la, a)) in bucket.iter().enumerate() {
            for &(lb, b) in &bucket[i + 1..] {
                if la != lb {
                    adjacency[a].push(b);
                    adjacency[b].push(a);
                }
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    adjacency
}

impl<T: Scalar> Nmrf<T> {
    pub fn nodes(&self) -> &[NmrfNode<T>] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &NmrfNode<T> {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Scope of each clique group; groups `0..variable_count` are singletons.
    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    /// Sum of the per-group minima removed during normalization.
    pub fn constant(&self) -> T {
        self.constant
    }

    /// Nodes removed by pruning, kept for MMWSS completion.
    pub fn pruned_nodes(&self) -> &[NmrfNode<T>] {
        &self.pruned
    }

    /// Active nodes followed by pruned ones; ids `>= len()` name
    /// `pruned_nodes()[id - len()]`.
    pub fn node_or_pruned(&self, id: usize) -> &NmrfNode<T> {
        if id < self.nodes.len() {
            &self.nodes[id]
        } else {
            &self.pruned[id - self.nodes.len()]
        }
    }

    /// Ids of the nodes of each group currently in the graph.
    pub fn group_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.groups.len()];
        for (id, n) in self.nodes.iter().enumerate() {
            out[n.group].push(id);
        }
        out
    }

    /// Edge list `(a, b)` with `a < b`.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    /// Induced subgraph on `keep`, with `dropped` appended to the pruned
    /// record.
    fn restrict(&self, keep: &[bool], record_dropped: bool) -> Nmrf<T> {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        let mut pruned = self.pruned.clone();
        for (id, n) in self.nodes.iter().enumerate() {
            if keep[id] {
                remap[id] = nodes.len();
                nodes.push(n.clone());
            } else if record_dropped {
                pruned.push(n.clone());
            }
        }
        let adjacency = self
            .adjacency
            .iter()
            .enumerate()
            .filter(|(id, _)| keep[*id])
            .map(|(_, list)| {
                list.iter()
                    .filter(|&&b| keep[b])
                    .map(|&b| remap[b])
                    .collect()
            })
            .collect();
        Nmrf {
            variable_count: self.variable_count,
            groups: self.groups.clone(),
            nodes,
            adjacency,
            constant: self.constant,
            pruned,
        }
    }

    /// Keeps the nodes of weight `> eps`; the rest move to the pruned record.
    pub fn prune(&self, eps: T) -> Nmrf<T> {
        let keep: Vec<bool> = self.nodes.iter().map(|n| n.weight > eps).collect();
        self.restrict(&keep, true)
    }

    /// Like [`Nmrf::prune`] but leaves every singleton clique group complete.
    pub fn prune_keeping_singletons(&self, eps: T) -> Nmrf<T> {
        let keep: Vec<bool> = self
            .nodes
            .iter()
            .map(|n| n.is_snode() || n.weight > eps)
            .collect();
        self.restrict(&keep, true)
    }

    /// Deletes every node (active or pruned) inconsistent with the clamped
    /// labels.
    pub fn condition(&self, clamps: &[(usize, usize)]) -> Nmrf<T> {
        let consistent = |n: &NmrfNode<T>| {
            clamps
                .iter()
                .all(|&(v, l)| n.label_of(v).is_none_or(|x| x == l))
        };
        let keep: Vec<bool> = self.nodes.iter().map(consistent).collect();
        let mut out = self.restrict(&keep, false);
        out.pruned.retain(consistent);
        out
    }

    /// Sum of the weights of the nodes consistent with a full assignment,
    /// plus the normalization constant.
    pub fn reconstruct(&self, assignment: &[usize]) -> T {
        let consistent = |n: &&NmrfNode<T>| n.assignment.iter().all(|&(v, l)| assignment[v] == l);
        self.constant
            + self
                .nodes
                .iter()
                .chain(&self.pruned)
                .filter(consistent)
                .map(|n| n.weight)
                .sum::<T>()
    }

    /// Two-colouring of the conflict graph, if it is bipartite.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        crate::graph::two_color(&self.adjacency)
    }

    pub fn to_export(&self, names: &[String]) -> NmrfExport {
        NmrfExport {
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| ExportNode {
                    id,
                    group: n.group,
                    assignment: n
                        .assignment
                        .iter()
                        .map(|&(v, l)| (names[v].clone(), l))
                        .collect(),
                    weight: n.weight.to_f64(),
                })
                .collect(),
            edges: self.edge_list().into_iter().map(|(a, b)| [a, b]).collect(),
            constants: self.constant.to_f64(),
        }
    }

    /// Graphviz rendering; node labels read `group:assignment:weight`.
    pub fn to_dot(&self, names: &[String]) -> String {
        let mut out = String::from("graph nmrf {\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let assignment: Vec<String> = n
                .assignment
                .iter()
                .map(|&(v, l)| format!("{}={l}", names[v]))
                .collect();
            let _ = writeln!(
                out,
                "  n{id} [label=\"{}:{}:{}\"];",
                n.group,
                assignment.join(","),
                n.weight
            );
        }
        for (a, b) in self.edge_list() {
            let _ = writeln!(out, "  n{a} -- n{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// JSON form of an NMRF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NmrfExport {
    pub nodes: Vec<ExportNode>,
    pub edges: Vec<[usize; 2]>,
    pub constants: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportNode {
    pub id: usize,
    pub group: usize,
    pub assignment: BTreeMap<String, usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExportError {
    #[error("node ids must be 0..n in order; found {0} at position {1}")]
    BadNodeId(usize, usize),
    #[error("edge references missing node {0}")]
    BadEdge(usize),
    #[error("non-finite weight on node {0}")]
    BadWeight(usize),
}

impl NmrfExport {
    /// Rebuilds an NMRF (graph, groups and weights) from its export. Variable
    /// names are re-indexed in first-seen order and returned alongside.
    pub fn to_nmrf(&self) -> Result<(Nmrf<f64>, Vec<String>), ExportError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (pos, n) in self.nodes.iter().enumerate() {
            if n.id != pos {
                return Err(ExportError::BadNodeId(n.id, pos));
            }
            if !n.weight.is_finite() {
                return Err(ExportError::BadWeight(pos));
            }
            let assignment: Vec<(usize, usize)> = n
                .assignment
                .iter()
                .map(|(name, &l)| {
                    let next = index.len();
                    let v = *index.entry(name.clone()).or_insert_with(|| {
                        names.push(name.clone());
                        next
                    });
                    (v, l)
                })
                .collect();
            groups
                .entry(n.group)
                .or_insert_with(|| assignment.iter().map(|&(v, _)| v).collect());
            nodes.push(NmrfNode {
                group: n.group,
                assignment,
                weight: n.weight,
            });
        }
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for &[a, b] in &self.edges {
            for x in [a, b] {
                if x >= nodes.len() {
                    return Err(ExportError::BadEdge(x));
                }
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let group_count = groups.keys().next_back().map_or(0, |g| g + 1);
        let mut scopes = vec![Vec::new(); group_count];
        for (g, scope) in groups {
            scopes[g] = scope;
        }
        Ok((
            Nmrf {
                variable_count: names.len(),
                groups: scopes,
                nodes,
                adjacency,
                constant: self.constants,
                pruned: Vec::new(),
            },
            names,
        ))
    }
}

/// The single surviving setting of a reparameterized binary edge, written
/// `(x_u, x_v)` for the edge `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeForm {
    #[serde(rename = "00")]
    F00,
    #[serde(rename = "11")]
    F11,
    #[serde(rename = "01")]
    F01,
    #[serde(rename = "10")]
    F10,
}

impl EdgeForm {
    pub fn from_labels(xu: usize, xv: usize) -> EdgeForm {
        match (xu, xv) {
            (0, 0) => EdgeForm::F00,
            (1, 1) => EdgeForm::F11,
            (0, 1) => EdgeForm::F01,
            (1, 0) => EdgeForm::F10,
            _ => panic!("binary labels expected"),
        }
    }

    pub fn labels(self) -> (usize, usize) {
        match self {
            EdgeForm::F00 => (0, 0),
            EdgeForm::F11 => (1, 1),
            EdgeForm::F01 => (0, 1),
            EdgeForm::F10 => (1, 0),
        }
    }

    /// Diagonal forms survive associative edges, off-diagonal repulsive ones.
    pub fn fits(self, sign: Sign) -> bool {
        let (a, b) = self.labels();
        (a == b) == (sign == Sign::Associative)
    }

    /// The same setting seen from the other endpoint.
    pub fn reversed(self) -> EdgeForm {
        let (a, b) = self.labels();
        EdgeForm::from_labels(b, a)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeForm::F00 => "00",
            EdgeForm::F11 => "11",
            EdgeForm::F01 => "01",
            EdgeForm::F10 => "10",
        }
    }
}

/// Surviving enode form for each signed edge, keyed by `(u, v)` with `u < v`.
pub type EnodePlan = BTreeMap<(usize, usize), EdgeForm>;

/// Associative edges keep `00`; repulsive edges keep `01`, oriented from the
/// lower to the higher variable index.
pub fn default_plan(graph: &SignedGraph) -> EnodePlan {
    graph
        .edges()
        .iter()
        .map(|e| {
            let form = match e.sign {
                Sign::Associative => EdgeForm::F00,
                Sign::Repulsive => EdgeForm::F01,
            };
            ((e.u, e.v), form)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReparamError {
    #[error("form {form} does not fit an edge with associativity {associativity}")]
    SignMismatch { form: &'static str, associativity: f64 },
    #[error("edge has zero associativity; it carries no pairwise interaction")]
    ZeroAssociativity,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Result of moving all but one entry of a binary edge into its endpoints'
/// singleton tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeReparam<T> {
    pub form: EdgeForm,
    /// Value of the single non-zero entry; equals |associativity|.
    pub weight: T,
    pub delta_u: [T; 2],
    pub delta_v: [T; 2],
    pub constant: T,
}

impl<T: Scalar> EdgeReparam<T> {
    /// `psi'(x_u, x_v) + delta_u[x_u] + delta_v[x_v] + constant`.
    pub fn evaluate(&self, xu: usize, xv: usize) -> T {
        let (fu, fv) = self.form.labels();
        let edge = if (xu, xv) == (fu, fv) {
            self.weight
        } else {
            T::zero()
        };
        edge + self.delta_u[xu] + self.delta_v[xv] + self.constant
    }
}

/// Rewrites `table` so only `target` keeps a non-zero entry, returning the
/// singleton offsets that preserve every one of the four energies.
pub fn reparameterize_edge<T: Scalar>(
    table: &EdgeTable<T>,
    target: EdgeForm,
) -> Result<EdgeReparam<T>, ReparamError> {
    let a = associativity(table);
    if a.is_zero() {
        return Err(ReparamError::ZeroAssociativity);
    }
    let sign = if a > T::zero() {
        Sign::Associative
    } else {
        Sign::Repulsive
    };
    if !target.fits(sign) {
        return Err(ReparamError::SignMismatch {
            form: target.as_str(),
            associativity: a.to_f64(),
        });
    }
    let weight = a.abs();
    let (fu, fv) = target.labels();
    let residual = |x: usize, y: usize| {
        if (x, y) == (fu, fv) {
            table[x][y] - weight
        } else {
            table[x][y]
        }
    };
    Ok(EdgeReparam {
        form: target,
        weight,
        delta_u: [residual(0, 0), residual(1, 0)],
        delta_v: [T::zero(), residual(0, 1) - residual(0, 0)],
        constant: T::zero(),
    })
}

/// Splits a (near) zero-associativity edge into singleton offsets; the
/// dropped interaction is exactly the associativity.
fn absorb_edge<T: Scalar>(table: &EdgeTable<T>) -> ([T; 2], [T; 2]) {
    (
        [table[0][0], table[1][0]],
        [T::zero(), table[0][1] - table[0][0]],
    )
}

/// Reparameterizes every pairwise potential of a binary pairwise model into
/// the single-entry form named by `plan`. Edges with |associativity| <= eps
/// (absent from the plan) are folded into the singletons.
pub fn reparameterize_model<T: Scalar>(
    model: &Model<T>,
    plan: &EnodePlan,
    eps: T,
) -> Result<Model<T>, ReparamError> {
    model.check_binary_pairwise()?;
    let n = model.num_variables();
    let mut singles: Vec<[T; 2]> = (0..n)
        .map(|v| {
            let t = model.singleton_table(v);
            [t[0], t[1]]
        })
        .collect();
    let mut edges = Vec::new();
    for (u, v, table) in model.pairwise_tables() {
        let a = associativity(&table);
        match plan.get(&(u, v)) {
            Some(&form) if a.abs() > eps => {
                let r = reparameterize_edge(&table, form)?;
                for x in 0..2 {
                    singles[u][x] += r.delta_u[x];
                    singles[v][x] += r.delta_v[x];
                }
                let mut t = vec![T::zero(); 4];
                let (fu, fv) = form.labels();
                t[2 * fu + fv] = r.weight;
                edges.push(Potential::new(vec![u, v], t));
            }
            _ => {
                let (du, dv) = absorb_edge(&table);
                for x in 0..2 {
                    singles[u][x] += du[x];
                    singles[v][x] += dv[x];
                }
            }
        }
    }
    let mut potentials: Vec<Potential<T>> = singles
        .into_iter()
        .enumerate()
        .map(|(v, t)| Potential::new(vec![v], t.to_vec()))
        .collect();
    potentials.extend(edges);
    Ok(Model::from_parts(model.variables().to_vec(), potentials)?)
}

/// Reparameterize by `plan`, build the NMRF and prune it.
pub fn compile_binary_pairwise<T: Scalar>(
    model: &Model<T>,
    plan: &EnodePlan,
    eps: T,
) -> Result<Nmrf<T>, ReparamError> {
    Ok(build_nmrf(&reparameterize_model(model, plan, eps)?).prune(eps))
}

/// The pruned NMRF shape implied by a signed topology and an enode plan
/// alone: every snode plus exactly one enode per signed edge (all weights 1).
pub fn structural_nmrf(graph: &SignedGraph, plan: &EnodePlan) -> Nmrf<f64> {
    let n = graph.vertex_count();
    let mut potentials: Vec<Potential<f64>> =
        (0..n).map(|v| Potential::new(vec![v], vec![1.0, 1.0])).collect();
    for e in graph.edges() {
        let form = plan[&(e.u, e.v)];
        let (fu, fv) = form.labels();
        let mut t = vec![0.0; 4];
        t[2 * fu + fv] = 1.0;
        potentials.push(Potential::new(vec![e.u, e.v], t));
    }
    let model = Model::from_parts(Model::<f64>::binary_variables(n), potentials)
        .expect("structural model is well formed");
    let mut nmrf = build_nmrf(&model);
    // Singleton tables are flat, so normalization zeroed them; restore unit
    // weights before pruning only the enodes.
    for node in &mut nmrf.nodes {
        if node.is_snode() {
            node.weight = 1.0;
        }
    }
    nmrf.prune_keeping_singletons(0.0)
}
