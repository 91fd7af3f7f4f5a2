use crate::graph::WeightedGraph;
use crate::scalar::Scalar;

use super::{check_weights, MwssError, StableSetSolution};

/// Residual network for Dinic's algorithm. Edge `e ^ 1` is the reverse of
/// edge `e`.
struct FlowNetwork<T> {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<T>,
}

impl<T: Scalar> FlowNetwork<T> {
    fn new(n: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: T) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(T::zero());
    }

    fn levels(&self, s: usize, tol: T) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let w = self.to[e];
                if self.cap[e] > tol && level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        level
    }

    /// Max flow; residual capacities at or below `tol` count as saturated.
    fn max_flow(&mut self, s: usize, t: usize, tol: T) -> T {
        let mut total = T::zero();
        loop {
            let mut level = self.levels(s, tol);
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0usize; self.adj.len()];
            let mut path: Vec<usize> = Vec::new();
            let mut v = s;
            loop {
                if v == t {
                    let f = path
                        .iter()
                        .map(|&e| self.cap[e])
                        .fold(self.cap[path[0]], T::min_of);
                    for &e in &path {
                        self.cap[e] -= f;
                        self.cap[e ^ 1] += f;
                    }
                    total += f;
                    path.clear();
                    v = s;
                    continue;
                }
                let mut advanced = false;
                while next[v] < self.adj[v].len() {
                    let e = self.adj[v][next[v]];
                    let w = self.to[e];
                    if self.cap[e] > tol && level[w] == level[v] + 1 {
                        path.push(e);
                        v = w;
                        advanced = true;
                        break;
                    }
                    next[v] += 1;
                }
                if advanced {
                    continue;
                }
                if v == s {
                    break;
                }
                // Dead end: retire v from this phase and step back.
                level[v] = usize::MAX;
                let e = path.pop().unwrap();
                v = self.to[e ^ 1];
                next[v] += 1;
            }
        }
    }

    fn reachable(&self, s: usize, tol: T) -> Vec<bool> {
        self.levels(s, tol).iter().map(|&l| l != usize::MAX).collect()
    }
}

/// Exact MWSS of a bipartite graph as the complement of a minimum weight
/// vertex cover, found as a minimum s-t cut. `side[v] == false` puts `v` on
/// the source side.
///
/// The stable set is read off the source-reachable set `R` of the final
/// residual network: left nodes in `R` and right nodes outside it.
pub fn mwss_bipartite<T: Scalar>(
    graph: &WeightedGraph<T>,
    side: &[bool],
) -> Result<StableSetSolution<T>, MwssError> {
    let n = graph.len();
    if side.len() != n {
        return Err(MwssError::PartitionLength {
            got: side.len(),
            expected: n,
        });
    }
    check_weights(&graph.weights)?;
    for (a, b) in graph.graph.edges() {
        if side[a] == side[b] {
            return Err(MwssError::NotBipartite(a, b));
        }
    }
    let total: T = graph.weights.iter().copied().sum();
    let infinite = total + T::one();
    let tol = T::default_eps() * T::from_f64(1e-3).unwrap_or_else(T::zero) * (T::one() + total);
    let (s, t) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2);
    for v in 0..n {
        if side[v] {
            net.add_edge(v, t, graph.weights[v]);
        } else {
            net.add_edge(s, v, graph.weights[v]);
            for &w in graph.graph.neighbors(v) {
                net.add_edge(v, w, infinite);
            }
        }
    }
    net.max_flow(s, t, tol);
    let reach = net.reachable(s, tol);
    let nodes: Vec<usize> = (0..n).filter(|&v| reach[v] != side[v]).collect();
    let weight = graph.weight_of(&nodes);
    Ok(StableSetSolution { nodes, weight })
}
