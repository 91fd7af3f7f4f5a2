use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{components, PlainGraph, WeightedGraph};
use crate::model::{EdgeTable, Model, ModelError, Potential};
use crate::nmrf::{build_nmrf, compile_binary_pairwise, default_plan, EnodePlan, Nmrf, ReparamError};
use crate::scalar::Scalar;
use crate::signed::SignedCycle;
use crate::structure::{br_plan, classify_graph, detect_br, BlockClass, TractabilityReport};

use super::decode::agreement_tolerance;
use super::{
    decode_map, mmwss_complete, mwss_bipartite, mwss_branch_bound, MapSolution, MwssError,
    StableSetSolution, DEFAULT_BNB_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Block-tree conditioning for binary pairwise models, branch and bound
    /// for anything else.
    Auto,
    /// One bipartite MWSS over the whole model; requires a B_R topology.
    Bipartite,
    /// Branch and bound over the whole pruned NMRF.
    Bnb,
    /// Block-tree conditioning; requires a tractable topology.
    Blocks,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Bipartite => "bipartite",
            Method::Bnb => "bnb",
            Method::Blocks => "blocks",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Method::Auto),
            "bipartite" => Ok(Method::Bipartite),
            "bnb" => Ok(Method::Bnb),
            "blocks" => Ok(Method::Blocks),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    pub method: Method,
    /// Edges with |associativity| <= eps are folded into singletons and
    /// NMRF nodes with weight <= eps are pruned.
    pub eps: T,
    /// Node cap for branch and bound.
    pub max_nodes: usize,
    /// Break ties toward the lexicographically smallest assignment.
    pub lexicographic: bool,
}

impl<T: Scalar> SolveOptions<T> {
    pub fn new(method: Method) -> Self {
        SolveOptions {
            method,
            eps: T::default_eps(),
            max_nodes: DEFAULT_BNB_CAP,
            lexicographic: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("topology is intractable; witness cycle {}", .witness.describe())]
    IntractableTopology { witness: SignedCycle },
    #[error("topology has a frustrated cycle, so the bipartite method does not apply")]
    NotBalanced,
    #[error("pruned NMRF has {nodes} nodes, branch-and-bound cap is {cap}")]
    TooLarge { nodes: usize, cap: usize },
    #[error(transparent)]
    Mwss(#[from] MwssError),
    #[error(transparent)]
    Reparam(#[from] ReparamError),
}

/// [`solve_map_with`] under default options for `method`.
pub fn solve_map<T: Scalar>(model: &Model<T>, method: Method) -> Result<MapSolution<T>, SolveError> {
    solve_map_with(model, &SolveOptions::new(method))
}

/// Exact MAP assignment of `model`. The objective is recomputed from the
/// original tables.
pub fn solve_map_with<T: Scalar>(
    model: &Model<T>,
    opts: &SolveOptions<T>,
) -> Result<MapSolution<T>, SolveError> {
    let pairwise = model.is_binary_pairwise();
    let (solver, tag) = match (opts.method, pairwise) {
        (Method::Auto, false) | (Method::Bnb, _) => (Solver::whole_bnb(model, opts)?, "bnb"),
        (Method::Bipartite, _) => (Solver::whole_bipartite(model, opts)?, "bipartite"),
        (Method::Auto, true) | (Method::Blocks, _) => (Solver::blocks(model, opts)?, "blocks"),
    };
    let method = if opts.method == Method::Auto {
        format!("auto:{tag}")
    } else {
        tag.to_string()
    };
    let n = model.num_variables();
    let mut clamps: Vec<Option<usize>> = vec![None; n];
    let (mut assignment, best) = solver.solve(&clamps)?;
    if opts.lexicographic {
        let tol = T::default_eps() * (T::one() + best.abs());
        // A variable whose unconstrained max-marginal at 0 is already below
        // the optimum cannot be tied, so it needs no re-solve.
        let marginals = solver.max_marginals()?;
        for i in 0..n {
            clamps[i] = Some(0);
            if assignment[i] == 0 {
                continue;
            }
            if marginals.as_ref().is_some_and(|m| m[i][0] < best - tol) {
                clamps[i] = Some(1);
                continue;
            }
            match solver.solve(&clamps)? {
                (a, v) if v >= best - tol => assignment = a,
                _ => clamps[i] = Some(1),
            }
        }
    }
    Ok(MapSolution {
        objective: model.energy(&assignment),
        assignment,
        method,
    })
}

enum Solver<'a, T> {
    /// Whole-model pruned NMRF solved by one MWSS call per conditioning.
    Whole {
        model: &'a Model<T>,
        nmrf: Nmrf<T>,
        bipartite: bool,
        eps: T,
        cap: usize,
    },
    Blocks(BlockSolver<'a, T>),
}

impl<'a, T: Scalar> Solver<'a, T> {
    fn whole_bnb(model: &'a Model<T>, opts: &SolveOptions<T>) -> Result<Self, SolveError> {
        let nmrf = if model.is_binary_pairwise() {
            let graph = model.signed_view(opts.eps)?;
            compile_binary_pairwise(model, &default_plan(&graph), opts.eps)?
        } else {
            build_nmrf(model).prune(opts.eps)
        };
        let cap = opts.max_nodes.min(64);
        if nmrf.len() > cap {
            return Err(SolveError::TooLarge {
                nodes: nmrf.len(),
                cap,
            });
        }
        Ok(Solver::Whole {
            model,
            nmrf,
            bipartite: false,
            eps: opts.eps,
            cap,
        })
    }

    fn whole_bipartite(model: &'a Model<T>, opts: &SolveOptions<T>) -> Result<Self, SolveError> {
        let graph = model.signed_view(opts.eps)?;
        let Some((part1, _)) = detect_br(&graph) else {
            let report = classify_graph(&graph);
            return Err(match report.witness() {
                Some(w) => SolveError::IntractableTopology { witness: w.clone() },
                None => SolveError::NotBalanced,
            });
        };
        let nmrf = compile_binary_pairwise(model, &br_plan(&graph, &part1), opts.eps)?;
        Ok(Solver::Whole {
            model,
            nmrf,
            bipartite: true,
            eps: opts.eps,
            cap: opts.max_nodes,
        })
    }

    fn blocks(model: &'a Model<T>, opts: &SolveOptions<T>) -> Result<Self, SolveError> {
        Ok(Solver::Blocks(BlockSolver::new(model, opts)?))
    }

    fn solve(&self, clamps: &[Option<usize>]) -> Result<(Vec<usize>, T), SolveError> {
        match self {
            Solver::Whole {
                model,
                nmrf,
                bipartite,
                eps,
                cap,
            } => {
                let cond = nmrf.condition(&clamp_pairs(clamps));
                let base = if *bipartite {
                    let side = cond.two_coloring().ok_or(SolveError::NotBalanced)?;
                    mwss_bipartite(&WeightedGraph::from_nmrf(&cond), &side)?
                } else {
                    mwss_by_components(&cond, *cap)?
                };
                let full = mmwss_complete(&cond, &base)?;
                let sol = decode_map(&cond, &full, model, tolerance_eps(model, *eps), "")?;
                Ok((sol.assignment, sol.objective))
            }
            Solver::Blocks(b) => b.solve(clamps),
        }
    }

    /// Best objective with each variable fixed to each label, when the
    /// solver can produce them in one pass.
    fn max_marginals(&self) -> Result<Option<Vec<[T; 2]>>, SolveError> {
        match self {
            Solver::Whole { .. } => Ok(None),
            Solver::Blocks(b) => b.max_marginals().map(Some),
        }
    }
}

fn clamp_pairs(clamps: &[Option<usize>]) -> Vec<(usize, usize)> {
    clamps
        .iter()
        .enumerate()
        .filter_map(|(v, c)| c.map(|l| (v, l)))
        .collect()
}

/// Edge folding drops up to `eps` per pairwise potential.
fn tolerance_eps<T: Scalar>(model: &Model<T>, eps: T) -> T {
    let edges = model.potentials().iter().filter(|p| p.scope.len() > 1).count();
    eps * T::from_f64(edges as f64 + 1.0).unwrap_or_else(T::one)
}

/// Branch and bound run separately on each connected component.
fn mwss_by_components<T: Scalar>(nmrf: &Nmrf<T>, cap: usize) -> Result<StableSetSolution<T>, MwssError> {
    let graph = PlainGraph::from(nmrf);
    let mut nodes = Vec::new();
    for comp in components(graph.adjacency()) {
        let sub = WeightedGraph::new(
            graph.induced(&comp),
            comp.iter().map(|&v| nmrf.node(v).weight).collect(),
        );
        let s = mwss_branch_bound(&sub, cap)?;
        nodes.extend(s.nodes.iter().map(|&i| comp[i]));
    }
    nodes.sort_unstable();
    let weight = nodes.iter().map(|&v| nmrf.node(v).weight).sum();
    Ok(StableSetSolution { nodes, weight })
}

/// Exact MAP over a tractable topology by dynamic programming on the block
/// tree: every block is solved once per label of its parent cut vertex,
/// with the messages of its subtrees folded into its singletons.
struct BlockSolver<'a, T> {
    model: &'a Model<T>,
    report: TractabilityReport,
    singles: Vec<[T; 2]>,
    tables: HashMap<(usize, usize), EdgeTable<T>>,
    /// Blocks in BFS order from each component's smallest vertex, with their
    /// parent vertex.
    order: Vec<(usize, usize)>,
    roots: Vec<usize>,
    child_blocks: Vec<Vec<usize>>,
    eps: T,
    cap: usize,
}

struct BlockResult<T> {
    value: T,
    /// Labels of the block's vertices, in block order.
    labels: Vec<usize>,
}

impl<'a, T: Scalar> BlockSolver<'a, T> {
    fn new(model: &'a Model<T>, opts: &SolveOptions<T>) -> Result<Self, SolveError> {
        let graph = model.signed_view(opts.eps)?;
        let report = classify_graph(&graph);
        if let Some(w) = report.witness() {
            return Err(SolveError::IntractableTopology { witness: w.clone() });
        }
        let n = model.num_variables();
        let mut singles: Vec<[T; 2]> = (0..n)
            .map(|v| {
                let t = model.singleton_table(v);
                [t[0], t[1]]
            })
            .collect();
        let mut tables = HashMap::new();
        for (u, v, t) in model.pairwise_tables() {
            if graph.find_edge(u, v).is_some() {
                tables.insert((u, v), t);
            } else {
                // Folded edge: keep the three entries that singletons can
                // carry exactly and drop the associativity.
                singles[u][0] += t[0][0];
                singles[u][1] += t[1][0];
                singles[v][1] += t[0][1] - t[0][0];
            }
        }

        let tree = &report.tree;
        let mut seen_vertex = vec![false; n];
        let mut seen_block = vec![false; tree.blocks.len()];
        let mut order = Vec::new();
        let mut roots = Vec::new();
        let mut child_blocks = vec![Vec::new(); n];
        for r in 0..n {
            if seen_vertex[r] {
                continue;
            }
            roots.push(r);
            seen_vertex[r] = true;
            let start = order.len();
            for &b in &tree.blocks_of[r] {
                seen_block[b] = true;
                child_blocks[r].push(b);
                order.push((b, r));
            }
            let mut head = start;
            while head < order.len() {
                let (b, parent) = order[head];
                head += 1;
                for &w in &tree.blocks[b].vertices {
                    if w == parent {
                        continue;
                    }
                    seen_vertex[w] = true;
                    for &b2 in &tree.blocks_of[w] {
                        if !seen_block[b2] {
                            seen_block[b2] = true;
                            child_blocks[w].push(b2);
                            order.push((b2, w));
                        }
                    }
                }
            }
        }
        Ok(BlockSolver {
            model,
            report,
            singles,
            tables,
            order,
            roots,
            child_blocks,
            eps: opts.eps,
            cap: opts.max_nodes,
        })
    }

    /// Subtree message of vertex `w`: its singleton plus the results of its
    /// child blocks, per label; `None` where a clamp excludes the label.
    fn vertex_message(&self, w: usize, clamps: &[Option<usize>], results: &[[Option<BlockResult<T>>; 2]]) -> [Option<T>; 2] {
        let mut out = [None, None];
        for (l, slot) in out.iter_mut().enumerate() {
            if clamps[w].is_some_and(|c| c != l) {
                continue;
            }
            let mut value = self.singles[w][l];
            for &b in &self.child_blocks[w] {
                match &results[b][l] {
                    Some(r) => value += r.value,
                    None => return [None, None],
                }
            }
            *slot = Some(value);
        }
        out
    }

    /// Solves every block, leaves first, for each allowed parent label.
    fn upward(&self, clamps: &[Option<usize>]) -> Result<Vec<[Option<BlockResult<T>>; 2]>, SolveError> {
        let blocks = &self.report.tree.blocks;
        let mut results: Vec<[Option<BlockResult<T>>; 2]> =
            (0..blocks.len()).map(|_| [None, None]).collect();
        for &(b, parent) in self.order.iter().rev() {
            let messages: Vec<[Option<T>; 2]> = blocks[b]
                .vertices
                .iter()
                .map(|&w| {
                    if w == parent {
                        [Some(T::zero()), Some(T::zero())]
                    } else {
                        self.vertex_message(w, clamps, &results)
                    }
                })
                .collect();
            for l in 0..2 {
                if clamps[parent].is_some_and(|c| c != l) {
                    continue;
                }
                results[b][l] = Some(self.solve_block(b, &[(parent, l)], &messages)?);
            }
        }
        Ok(results)
    }

    /// Max-marginals of every variable by a second, top-down pass: `out[w]`
    /// is the best value of everything outside the subtree of `w`.
    fn max_marginals(&self) -> Result<Vec<[T; 2]>, SolveError> {
        let n = self.model.num_variables();
        let free = vec![None; n];
        let up = self.upward(&free)?;
        let message: Vec<[T; 2]> = (0..n)
            .map(|w| match self.vertex_message(w, &free, &up) {
                [Some(a), Some(b)] => [a, b],
                _ => unreachable!("no clamps"),
            })
            .collect();
        let mut out = vec![[T::zero(); 2]; n];
        let blocks = &self.report.tree.blocks;
        for &(b, p) in &self.order {
            let outside: Vec<T> = (0..2)
                .map(|l| out[p][l] + message[p][l] - up[b][l].as_ref().expect("unclamped").value)
                .collect();
            let messages: Vec<[Option<T>; 2]> = blocks[b]
                .vertices
                .iter()
                .map(|&w| {
                    let m = if w == p { [T::zero(); 2] } else { message[w] };
                    [Some(m[0]), Some(m[1])]
                })
                .collect();
            for (i, &w) in blocks[b].vertices.iter().enumerate() {
                if w == p {
                    continue;
                }
                let mut local = messages.clone();
                local[i] = [Some(T::zero()), Some(T::zero())];
                for l in 0..2 {
                    let mut best: Option<T> = None;
                    for (lp, &o) in outside.iter().enumerate() {
                        let v = o + self.solve_block(b, &[(p, lp), (w, l)], &local)?.value;
                        if best.is_none_or(|x| v > x) {
                            best = Some(v);
                        }
                    }
                    out[w][l] = best.expect("two parent labels");
                }
            }
        }
        // Other components contribute their own optimum.
        let mut root_of: Vec<usize> = (0..n).collect();
        for &(b, p) in &self.order {
            for &w in &blocks[b].vertices {
                if w != p {
                    root_of[w] = root_of[p];
                }
            }
        }
        let best = |r: usize| T::max_of(message[r][0], message[r][1]);
        let total = self.roots.iter().fold(T::zero(), |acc, &r| acc + best(r));
        Ok((0..n)
            .map(|w| {
                let rest = total - best(root_of[w]);
                [out[w][0] + message[w][0] + rest, out[w][1] + message[w][1] + rest]
            })
            .collect())
    }

    fn solve(&self, clamps: &[Option<usize>]) -> Result<(Vec<usize>, T), SolveError> {
        let n = self.model.num_variables();
        let blocks = &self.report.tree.blocks;
        let results = self.upward(clamps)?;
        let mut assignment = vec![0usize; n];
        let mut total = T::zero();
        for &r in &self.roots {
            let m = self.vertex_message(r, clamps, &results);
            let label = match m {
                [Some(a), Some(b)] => usize::from(b > a),
                [Some(_), None] => 0,
                [None, Some(_)] => 1,
                [None, None] => unreachable!("every vertex keeps a feasible label"),
            };
            assignment[r] = label;
            total += m[label].unwrap();
        }
        for &(b, parent) in &self.order {
            let r = results[b][assignment[parent]]
                .as_ref()
                .expect("parent label was solved");
            for (&w, &l) in blocks[b].vertices.iter().zip(&r.labels) {
                assignment[w] = l;
            }
        }
        let objective = self.model.energy(&assignment);
        let tol = agreement_tolerance(tolerance_eps(self.model, self.eps), total, n);
        if (objective - total).abs() > tol {
            return Err(MwssError::ObjectiveMismatch {
                recomputed: objective.to_f64(),
                expected: total.to_f64(),
            }
            .into());
        }
        Ok((assignment, objective))
    }

    /// Best labelling of block `b` with the vertices in `fixed` clamped.
    /// Singletons carry the subtree messages; the parent's own singleton is
    /// counted at the parent.
    fn solve_block(
        &self,
        b: usize,
        fixed: &[(usize, usize)],
        messages: &[[Option<T>; 2]],
    ) -> Result<BlockResult<T>, SolveError> {
        let block = &self.report.tree.blocks[b];
        let k = block.vertices.len();
        let local: HashMap<usize, usize> = block.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut clamps = Vec::new();
        let mut potentials = Vec::with_capacity(k + block.edges.len());
        for (i, m) in messages.iter().enumerate() {
            let table = vec![m[0].unwrap_or_else(T::zero), m[1].unwrap_or_else(T::zero)];
            match m {
                [Some(_), None] => clamps.push((i, 0)),
                [None, Some(_)] => clamps.push((i, 1)),
                _ => {}
            }
            potentials.push(Potential::new(vec![i], table));
        }
        clamps.extend(fixed.iter().map(|&(v, l)| (local[&v], l)));
        let mut plan = EnodePlan::new();
        for &e in &block.edges {
            let edge = self.report.graph.edges()[e];
            let t = self.tables[&(edge.u, edge.v)];
            let (lu, lv) = (local[&edge.u], local[&edge.v]);
            potentials.push(Potential::new(vec![lu, lv], vec![t[0][0], t[0][1], t[1][0], t[1][1]]));
            plan.insert((lu, lv), self.report.plan[&(edge.u, edge.v)]);
        }
        let model = Model::from_parts(Model::<T>::binary_variables(k), potentials)?;
        let nmrf = compile_binary_pairwise(&model, &plan, self.eps)?;
        let eps = tolerance_eps(&model, self.eps);

        let best = match &self.report.blocks[b].class {
            BlockClass::Br { .. } => {
                let cond = nmrf.condition(&clamps);
                let side = cond.two_coloring().ok_or(SolveError::NotBalanced)?;
                let base = mwss_bipartite(&WeightedGraph::from_nmrf(&cond), &side)?;
                let full = mmwss_complete(&cond, &base)?;
                decode_map(&cond, &full, &model, eps, "")?
            }
            BlockClass::Tmn { s, t, .. } | BlockClass::Un { s, t, .. } => {
                // Fixing the base splits the rest into independent triangles.
                let (s, t) = (local[s], local[t]);
                let mut best: Option<MapSolution<T>> = None;
                for (ls, lt) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    let fixed = |v: usize, l: usize| clamps.iter().all(|&(c, cl)| c != v || cl == l);
                    if !fixed(s, ls) || !fixed(t, lt) {
                        continue;
                    }
                    let mut all = clamps.clone();
                    all.extend([(s, ls), (t, lt)]);
                    let cond = nmrf.condition(&all);
                    let base = mwss_by_components(&cond, self.cap)?;
                    let full = mmwss_complete(&cond, &base)?;
                    let sol = decode_map(&cond, &full, &model, eps, "")?;
                    if best.as_ref().is_none_or(|b| sol.objective > b.objective) {
                        best = Some(sol);
                    }
                }
                best.expect("parent clamp leaves a feasible base setting")
            }
            BlockClass::Intractable { .. } => unreachable!("checked at construction"),
        };
        Ok(BlockResult {
            value: best.objective,
            labels: best.assignment,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn pairwise(n: usize, singles: &[(usize, [f64; 2])], edges: &[(usize, usize, [f64; 4])]) -> Model<f64> {
        let mut pots: Vec<Potential<f64>> = singles
            .iter()
            .map(|(v, t)| Potential::new(vec![*v], t.to_vec()))
            .collect();
        pots.extend(edges.iter().map(|(u, v, t)| Potential::new(vec![*u, *v], t.to_vec())));
        Model::from_parts(Model::<f64>::binary_variables(n), pots).unwrap()
    }

    fn brute(model: &Model<f64>) -> (Vec<usize>, f64) {
        let n = model.num_variables();
        let mut best = (vec![0; n], f64::NEG_INFINITY);
        for bits in 0..1usize << n {
            let x: Vec<usize> = (0..n).map(|i| bits >> (n - 1 - i) & 1).collect();
            let e = model.energy(&x);
            if e > best.1 + 1e-12 {
                best = (x, e);
            }
        }
        best
    }

    #[test]
    fn mixed_chain_matches_enumeration() {
        let m = pairwise(
            3,
            &[(0, [0.2, -0.4]), (1, [1.0, 0.0]), (2, [0.0, 0.3])],
            &[(0, 1, [1.0, 0.0, 0.0, 2.0]), (1, 2, [0.0, 1.5, 0.7, 0.0])],
        );
        let (x, v) = brute(&m);
        for method in [Method::Auto, Method::Blocks, Method::Bnb, Method::Bipartite] {
            let s = solve_map(&m, method).unwrap();
            assert!((s.objective - v).abs() < 1e-9, "{method}");
            assert_eq!(s.assignment, x, "{method}");
        }
    }

    #[test]
    fn symmetric_tie_breaks_to_zeros() {
        let m = pairwise(2, &[], &[(0, 1, [2.0, 0.0, 0.0, 2.0])]);
        let s = solve_map(&m, Method::Auto).unwrap();
        assert_eq!(s.assignment, vec![0, 0]);
        assert_eq!(s.objective, 2.0);
        let m = pairwise(2, &[], &[(0, 1, [0.0, 1.0, 1.0, 0.0])]);
        assert_eq!(solve_map(&m, Method::Auto).unwrap().assignment, vec![0, 1]);
    }

    #[test]
    fn frustrated_square_refused_with_witness() {
        let m = pairwise(
            4,
            &[],
            &[
                (0, 1, [0.0, 1.0, 1.0, 0.0]),
                (1, 2, [1.0, 0.0, 0.0, 1.0]),
                (2, 3, [1.0, 0.0, 0.0, 1.0]),
                (0, 3, [1.0, 0.0, 0.0, 1.0]),
            ],
        );
        match solve_map(&m, Method::Auto) {
            Err(SolveError::IntractableTopology { witness }) => assert_eq!(witness.len(), 4),
            other => panic!("{other:?}"),
        }
        assert!(solve_map(&m, Method::Bnb).is_ok());
    }

    #[test]
    fn triangle_fan_and_bowtie_match_enumeration() {
        // T_{1,1} on base 0-1 glued at vertex 3 to an all-repulsive triangle.
        let r = [0.0, 1.3, 0.9, -0.2];
        let a = [0.8, 0.0, 0.1, 1.1];
        let m = pairwise(
            6,
            &[(0, [0.0, 0.4]), (2, [0.3, 0.0]), (4, [0.0, 0.25]), (5, [-0.5, 0.5])],
            &[
                (0, 1, r),
                (0, 2, r),
                (1, 2, r),
                (0, 3, a),
                (1, 3, a),
                (3, 4, r),
                (4, 5, r),
                (3, 5, r),
            ],
        );
        let (_, v) = brute(&m);
        for method in [Method::Blocks, Method::Bnb] {
            let s = solve_map(&m, method).unwrap();
            assert!((s.objective - v).abs() < 1e-9, "{method}: {} vs {v}", s.objective);
        }
        assert_eq!(solve_map(&m, Method::Bipartite), Err(SolveError::NotBalanced));
    }

    #[test]
    fn exact_rationals_solve_exactly() {
        let r = |a: i64, b: i64| Rational64::new(a, b);
        let m = Model::from_parts(
            Model::<Rational64>::binary_variables(3),
            vec![
                Potential::new(vec![0], vec![r(1, 3), r(0, 1)]),
                Potential::new(vec![0, 1], vec![r(0, 1), r(2, 3), r(1, 7), r(0, 1)]),
                Potential::new(vec![1, 2], vec![r(1, 2), r(0, 1), r(0, 1), r(1, 5)]),
            ],
        )
        .unwrap();
        let s = solve_map(&m, Method::Auto).unwrap();
        let best = (0..8)
            .map(|b: usize| m.energy(&[b >> 2 & 1, b >> 1 & 1, b & 1]))
            .max()
            .unwrap();
        assert_eq!(s.objective, best);
    }

    #[test]
    fn non_pairwise_model_uses_bnb() {
        let m = Model::from_parts(
            vec![
                crate::model::Variable { name: "A".into(), card: 3 },
                crate::model::Variable { name: "B".into(), card: 2 },
            ],
            vec![Potential::new(vec![0, 1], vec![0.0, 1.0, 2.0, 0.5, 0.1, 0.0])],
        )
        .unwrap();
        let s = solve_map(&m, Method::Auto).unwrap();
        assert_eq!(s.assignment, vec![1, 0]);
        assert_eq!(s.method, "auto:bnb");
    }

    #[test]
    fn tie_across_components_breaks_lexicographically() {
        let m = pairwise(
            3,
            &[(1, [2.0, -3.0]), (2, [1.0, 0.0])],
            &[(0, 1, [-3.0, 2.0, -3.0, 0.0])],
        );
        let s = solve_map(&m, Method::Auto).unwrap();
        assert_eq!(s.assignment, vec![0, 0, 0]);
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn block_max_marginals_match_enumeration() {
        let mut rng = crate::generate::seeded(17);
        for _ in 0..60 {
            let m = crate::generate::random_tractable(&mut rng, 6, false);
            // An extra isolated variable makes a second component.
            let n = m.num_variables();
            let mut pots = m.potentials().to_vec();
            pots.push(Potential::new(vec![n], vec![1.0, 0.25]));
            let m = Model::from_parts(Model::<f64>::binary_variables(n + 1), pots).unwrap();
            let Solver::Blocks(solver) = Solver::blocks(&m, &SolveOptions::new(Method::Blocks)).unwrap() else {
                unreachable!()
            };
            let got = solver.max_marginals().unwrap();
            let n = m.num_variables();
            for v in 0..n {
                for l in 0..2 {
                    let want = (0..1usize << n)
                        .map(|b| (0..n).map(|i| b >> (n - 1 - i) & 1).collect::<Vec<_>>())
                        .filter(|x| x[v] == l)
                        .map(|x| m.energy(&x))
                        .fold(f64::NEG_INFINITY, f64::max);
                    assert!((got[v][l] - want).abs() < 1e-9, "var {v} label {l}: {} vs {want}", got[v][l]);
                }
            }
        }
    }
}
