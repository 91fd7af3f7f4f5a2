use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::model::{Model, ModelError};
use crate::nmrf::{default_plan, EdgeForm, EnodePlan};
use crate::perfection::maps_to_odd_hole;
use crate::scalar::Scalar;
use crate::signed::{Sign, SignedCycle, SignedEdge, SignedGraph};

use super::balance::{detect_br, find_frustrated_cycle};
use super::blocks::{block_decompose, Block, BlockTree};

/// Classification of one block of a signed topology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class")]
pub enum BlockClass {
    /// No frustrated cycle: repulsive edges cross `(part1, part2)`,
    /// associative edges stay inside a side.
    #[serde(rename = "B_R")]
    Br { part1: Vec<usize>, part2: Vec<usize> },
    /// Repulsive base `s - t` with `m` repulsive and `n` associative
    /// triangles on it.
    #[serde(rename = "T")]
    Tmn {
        s: usize,
        t: usize,
        r: Vec<usize>,
        a: Vec<usize>,
        m: usize,
        n: usize,
    },
    /// Associative base `s + t` with `n` mixed-sign triangles on it.
    #[serde(rename = "U")]
    Un { s: usize, t: usize, v: Vec<usize>, n: usize },
    /// Contains a frustrated cycle that maps to an odd hole.
    #[serde(rename = "intractable")]
    Intractable { witness: SignedCycle },
}

impl BlockClass {
    pub fn is_tractable(&self) -> bool {
        !matches!(self, BlockClass::Intractable { .. })
    }

    pub fn label(&self) -> String {
        match self {
            BlockClass::Br { .. } => "B_R".into(),
            BlockClass::Tmn { m, n, .. } => format!("T_{{{m},{n}}}"),
            BlockClass::Un { n, .. } => format!("U_{n}"),
            BlockClass::Intractable { .. } => "intractable".into(),
        }
    }
}

/// Cap on simple-cycle enumeration steps when hunting for a witness that
/// maps to an odd hole under the block's plan.
const WITNESS_SEARCH_BUDGET: usize = 2_000_000;

/// Classifies a block given as a standalone signed graph (every vertex
/// belongs to the block). The returned plan covers every edge.
pub fn classify_block(block: &SignedGraph) -> (BlockClass, EnodePlan) {
    if let Some((part1, part2)) = detect_br(block) {
        let plan = br_plan(block, &part1);
        return (BlockClass::Br { part1, part2 }, plan);
    }
    if let Some((class, plan)) = recognize_triangle_fan(block) {
        return (class, plan);
    }
    let plan = default_plan(block);
    let witness = intractable_witness(block, &plan);
    (BlockClass::Intractable { witness }, plan)
}

/// Associative edges keep `00`; repulsive edges keep the setting with the
/// `part1` endpoint at 0 and the other at 1. The pruned NMRF is then
/// bipartite.
pub fn br_plan(graph: &SignedGraph, part1: &[usize]) -> EnodePlan {
    let mut in_first = vec![false; graph.vertex_count()];
    for &v in part1 {
        in_first[v] = true;
    }
    graph
        .edges()
        .iter()
        .map(|e| {
            let form = match e.sign {
                Sign::Associative => EdgeForm::F00,
                Sign::Repulsive if in_first[e.u] => EdgeForm::F01,
                Sign::Repulsive => EdgeForm::F10,
            };
            ((e.u, e.v), form)
        })
        .collect()
}

/// Form for edge `{a, b}` keeping the setting `(x_a, x_b) = (la, lb)`.
fn form_between(a: usize, la: usize, b: usize, lb: usize) -> ((usize, usize), EdgeForm) {
    if a < b {
        ((a, b), EdgeForm::from_labels(la, lb))
    } else {
        ((b, a), EdgeForm::from_labels(lb, la))
    }
}

/// Recognizes `T_{m,n}` / `U_n`: two base vertices covering every edge, all
/// other vertices of degree two attached to both. The plan makes the three
/// enodes of every triangle pairwise adjacent, fixed by the base enode.
fn recognize_triangle_fan(g: &SignedGraph) -> Option<(BlockClass, EnodePlan)> {
    let n = g.vertex_count();
    if n < 3 || g.edge_count() != 2 * (n - 2) + 1 {
        return None;
    }
    let adj = g.adjacency();
    let candidates: Vec<(usize, usize)> = if n == 3 {
        // Prefer an associative base so a single mixed triangle reads as U_1.
        let mut edges: Vec<&SignedEdge> = g.edges().iter().collect();
        edges.sort_by_key(|e| (e.sign.is_repulsive(), e.u, e.v));
        edges.iter().map(|e| (e.u, e.v)).collect()
    } else {
        let hubs: Vec<usize> = (0..n).filter(|&v| adj[v].len() == n - 1).collect();
        if hubs.len() != 2 {
            return None;
        }
        vec![(hubs[0], hubs[1])]
    };
    for (s, t) in candidates {
        if let Some(found) = fan_on_base(g, &adj, s, t) {
            return Some(found);
        }
    }
    None
}

fn fan_on_base(
    g: &SignedGraph,
    adj: &[Vec<(usize, usize)>],
    s: usize,
    t: usize,
) -> Option<(BlockClass, EnodePlan)> {
    let base = g.find_edge(s, t)?.sign;
    let sign_to = |v: usize, hub: usize| -> Option<Sign> {
        adj[v]
            .iter()
            .find(|&&(w, _)| w == hub)
            .map(|&(_, e)| g.edges()[e].sign)
    };
    // Base enode: (s, t) = (0, 1) for a repulsive base, (0, 0) otherwise.
    let (ls, lt) = match base {
        Sign::Repulsive => (0, 1),
        Sign::Associative => (0, 0),
    };
    let mut plan = EnodePlan::new();
    let (k, f) = form_between(s, ls, t, lt);
    plan.insert(k, f);
    let (mut r, mut a, mut mixed) = (Vec::new(), Vec::new(), Vec::new());
    for v in (0..g.vertex_count()).filter(|&v| v != s && v != t) {
        if adj[v].len() != 2 {
            return None;
        }
        let (sv, tv) = (sign_to(v, s)?, sign_to(v, t)?);
        match (base, sv, tv) {
            (Sign::Repulsive, Sign::Repulsive, Sign::Repulsive) => r.push(v),
            (Sign::Repulsive, Sign::Associative, Sign::Associative) => a.push(v),
            (Sign::Associative, x, y) if x != y => mixed.push(v),
            _ => return None,
        }
        // Each side edge disagrees with the base enode at the hub; its label
        // at v follows from its sign.
        let at_v = |hub_label: usize, sign: Sign| match sign {
            Sign::Associative => hub_label,
            Sign::Repulsive => 1 - hub_label,
        };
        let (hs, ht) = (1 - ls, 1 - lt);
        let (k, f) = form_between(s, hs, v, at_v(hs, sv));
        plan.insert(k, f);
        let (k, f) = form_between(t, ht, v, at_v(ht, tv));
        plan.insert(k, f);
    }
    let (s, t) = (s.min(t), s.max(t));
    let class = match base {
        Sign::Repulsive => BlockClass::Tmn {
            s,
            t,
            m: r.len(),
            n: a.len(),
            r,
            a,
        },
        Sign::Associative => BlockClass::Un {
            s,
            t,
            n: mixed.len(),
            v: mixed,
        },
    };
    Some((class, plan))
}

/// A frustrated cycle that maps to an odd hole under `plan`. Fundamental
/// cycles of parity-BFS trees from every root are tried first, then simple
/// cycles are enumerated under a step budget. Falls back to any frustrated
/// cycle if neither search produces one.
fn intractable_witness(g: &SignedGraph, plan: &EnodePlan) -> SignedCycle {
    let fallback = find_frustrated_cycle(g).expect("non-B_R block has a frustrated cycle");
    if maps_to_odd_hole(&fallback, plan) {
        return fallback;
    }
    for root in 0..g.vertex_count() {
        if let Some(c) = fundamental_frustrated_cycles(g, root)
            .into_iter()
            .find(|c| maps_to_odd_hole(c, plan))
        {
            return c;
        }
    }
    let mut budget = WITNESS_SEARCH_BUDGET;
    enumerate_cycles(g, &mut budget, |c| maps_to_odd_hole(c, plan)).unwrap_or(fallback)
}

/// All frustrated fundamental cycles of the BFS tree rooted at `root`.
fn fundamental_frustrated_cycles(g: &SignedGraph, root: usize) -> Vec<SignedCycle> {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut parity = vec![false; n];
    let mut order = vec![root];
    depth[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &(w, e) in &adj[v] {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((v, e));
                parity[w] = parity[v] ^ g.edges()[e].sign.is_repulsive();
                order.push(w);
            }
        }
    }
    let mut out = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        let tree_edge = parent[e.u].is_some_and(|(_, pe)| pe == i) || parent[e.v].is_some_and(|(_, pe)| pe == i);
        if tree_edge || depth[e.u] == usize::MAX {
            continue;
        }
        if parity[e.u] ^ parity[e.v] ^ e.sign.is_repulsive() {
            out.push(path_cycle(g, &parent, &depth, e.u, e.v, e.sign));
        }
    }
    out
}

fn path_cycle(
    g: &SignedGraph,
    parent: &[Option<(usize, usize)>],
    depth: &[usize],
    a: usize,
    b: usize,
    closing: Sign,
) -> SignedCycle {
    let (mut x, mut y) = (a, b);
    let mut left = Vec::new();
    let mut right = Vec::new();
    while depth[x] > depth[y] {
        let (p, e) = parent[x].unwrap();
        left.push((x, g.edges()[e].sign));
        x = p;
    }
    while depth[y] > depth[x] {
        let (p, e) = parent[y].unwrap();
        right.push((y, g.edges()[e].sign));
        y = p;
    }
    while x != y {
        let (px, ex) = parent[x].unwrap();
        let (py, ey) = parent[y].unwrap();
        left.push((x, g.edges()[ex].sign));
        right.push((y, g.edges()[ey].sign));
        x = px;
        y = py;
    }
    let mut vertices: Vec<usize> = left.iter().map(|p| p.0).collect();
    let mut signs: Vec<Sign> = left.iter().map(|p| p.1).collect();
    vertices.push(x);
    for &(v, s) in right.iter().rev() {
        signs.push(s);
        vertices.push(v);
    }
    signs.push(closing);
    SignedCycle { vertices, signs }
}

/// Enumerates simple cycles (each once, smallest vertex first) until
/// `accept` returns true or the budget runs out.
pub(crate) fn enumerate_cycles(
    g: &SignedGraph,
    budget: &mut usize,
    mut accept: impl FnMut(&SignedCycle) -> bool,
) -> Option<SignedCycle> {
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut on_path = vec![false; n];
    for start in 0..n {
        let mut path = vec![start];
        let mut signs = Vec::new();
        on_path[start] = true;
        let found = cycle_dfs(g, &adj, start, &mut path, &mut signs, &mut on_path, budget, &mut accept);
        on_path[start] = false;
        if found.is_some() {
            return found;
        }
        if *budget == 0 {
            return None;
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    g: &SignedGraph,
    adj: &[Vec<(usize, usize)>],
    start: usize,
    path: &mut Vec<usize>,
    signs: &mut Vec<Sign>,
    on_path: &mut [bool],
    budget: &mut usize,
    accept: &mut impl FnMut(&SignedCycle) -> bool,
) -> Option<SignedCycle> {
    let last = *path.last().unwrap();
    for &(w, e) in &adj[last] {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let sign = g.edges()[e].sign;
        if w == start && path.len() >= 3 && path[1] < last {
            let mut all_signs = signs.clone();
            all_signs.push(sign);
            let c = SignedCycle {
                vertices: path.clone(),
                signs: all_signs,
            };
            if accept(&c) {
                return Some(c);
            }
            continue;
        }
        if w <= start || on_path[w] {
            continue;
        }
        on_path[w] = true;
        path.push(w);
        signs.push(sign);
        let found = cycle_dfs(g, adj, start, path, signs, on_path, budget, accept);
        signs.pop();
        path.pop();
        on_path[w] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Classification of one block of a model's topology, in model indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub vertices: Vec<usize>,
    /// Indices into [`TractabilityReport::graph`]'s edge list.
    pub edges: Vec<usize>,
    pub class: BlockClass,
}

/// Per-block verdicts, the enode plan for every signed edge, and the block
/// tree used for conditioned solving.
#[derive(Debug, Clone, PartialEq)]
pub struct TractabilityReport {
    pub tractable: bool,
    pub graph: SignedGraph,
    pub tree: BlockTree,
    pub blocks: Vec<BlockReport>,
    pub plan: EnodePlan,
}

/// Extracts the block as a standalone signed graph on `0..|block|`.
pub fn block_subgraph(graph: &SignedGraph, block: &Block) -> SignedGraph {
    let local: HashMap<usize, usize> = block
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    SignedGraph::new(
        block.vertices.len(),
        block.edges.iter().map(|&e| {
            let edge = graph.edges()[e];
            SignedEdge::new(local[&edge.u], local[&edge.v], edge.sign)
        }),
    )
}

fn globalize(class: BlockClass, map: &[usize]) -> BlockClass {
    let m = |v: usize| map[v];
    let mv = |xs: Vec<usize>| -> Vec<usize> {
        let mut out: Vec<usize> = xs.into_iter().map(m).collect();
        out.sort_unstable();
        out
    };
    match class {
        BlockClass::Br { part1, part2 } => BlockClass::Br {
            part1: mv(part1),
            part2: mv(part2),
        },
        BlockClass::Tmn { s, t, r, a, m: mm, n } => {
            let (s, t) = (m(s).min(m(t)), m(s).max(m(t)));
            BlockClass::Tmn {
                s,
                t,
                r: mv(r),
                a: mv(a),
                m: mm,
                n,
            }
        }
        BlockClass::Un { s, t, v, n } => {
            let (s, t) = (m(s).min(m(t)), m(s).max(m(t)));
            BlockClass::Un { s, t, v: mv(v), n }
        }
        BlockClass::Intractable { witness } => BlockClass::Intractable {
            witness: SignedCycle {
                vertices: witness.vertices.into_iter().map(m).collect(),
                signs: witness.signs,
            },
        },
    }
}

/// Classifies every block of a signed topology. O(|V| + |E|) apart from
/// witness extraction for intractable blocks.
pub fn classify_graph(graph: &SignedGraph) -> TractabilityReport {
    let tree = block_decompose(graph);
    let mut plan = EnodePlan::new();
    let mut blocks = Vec::with_capacity(tree.blocks.len());
    for block in &tree.blocks {
        let local = block_subgraph(graph, block);
        let (class, local_plan) = classify_block(&local);
        for ((a, b), form) in local_plan {
            let (ga, gb) = (block.vertices[a], block.vertices[b]);
            // Local order follows global order since block vertices are sorted.
            debug_assert!(ga < gb);
            plan.insert((ga, gb), form);
        }
        blocks.push(BlockReport {
            vertices: block.vertices.clone(),
            edges: block.edges.clone(),
            class: globalize(class, &block.vertices),
        });
    }
    TractabilityReport {
        tractable: blocks.iter().all(|b| b.class.is_tractable()),
        graph: graph.clone(),
        tree,
        blocks,
        plan,
    }
}

/// Classifies the signed topology of a binary pairwise model.
pub fn classify_model<T: Scalar>(model: &Model<T>, eps: T) -> Result<TractabilityReport, ModelError> {
    Ok(classify_graph(&model.signed_view(eps)?))
}

impl TractabilityReport {
    pub fn witness(&self) -> Option<&SignedCycle> {
        self.blocks.iter().find_map(|b| match &b.class {
            BlockClass::Intractable { witness } => Some(witness),
            _ => None,
        })
    }

    /// JSON report with variables rendered by name.
    pub fn to_json(&self, names: &[String]) -> Value {
        let name = |v: &usize| names[*v].clone();
        let names_of = |vs: &[usize]| vs.iter().map(name).collect::<Vec<_>>();
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| {
                let mut entry = json!({
                    "vertices": names_of(&b.vertices),
                    "class": b.class.label(),
                });
                let params = match &b.class {
                    BlockClass::Br { part1, part2 } => {
                        json!({"V1": names_of(part1), "V2": names_of(part2)})
                    }
                    BlockClass::Tmn { s, t, r, a, m, n } => json!({
                        "s": name(s), "t": name(t), "r": names_of(r), "a": names_of(a), "m": m, "n": n
                    }),
                    BlockClass::Un { s, t, v, n } => json!({
                        "s": name(s), "t": name(t), "v": names_of(v), "n": n
                    }),
                    BlockClass::Intractable { .. } => json!({}),
                };
                entry["params"] = params;
                if let BlockClass::Intractable { witness } = &b.class {
                    entry["witness"] = json!({
                        "vertices": names_of(&witness.vertices),
                        "signs": witness.signs,
                    });
                }
                entry
            })
            .collect();
        let plan: Vec<Value> = self
            .plan
            .iter()
            .map(|(&(u, v), form)| json!({"edge": [name(&u), name(&v)], "form": form}))
            .collect();
        json!({
            "tractable": self.tractable,
            "blocks": blocks,
            "enode_plan": plan,
            "cut_vertices": names_of(&self.tree.cut_vertices),
        })
    }
}
