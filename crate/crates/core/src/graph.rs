//! Plain undirected graphs used by the perfection checker and the stable-set
//! solvers.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::nmrf::Nmrf;
use crate::scalar::Scalar;

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlainGraph {
    adjacency: Vec<Vec<usize>>,
}

impl PlainGraph {
    pub fn empty(n: usize) -> Self {
        PlainGraph {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds from an edge list; loops are rejected, duplicates merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            assert!(a != b, "loop at {a}");
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        PlainGraph { adjacency }
    }

    pub fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Self {
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        PlainGraph { adjacency }
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        Self::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn complement(&self) -> PlainGraph {
        let n = self.vertex_count();
        let adjacency = (0..n)
            .map(|a| (0..n).filter(|&b| b != a && !self.has_edge(a, b)).collect())
            .collect();
        PlainGraph { adjacency }
    }

    /// Induced subgraph on `vertices` (relabelled by position).
    pub fn induced(&self, vertices: &[usize]) -> PlainGraph {
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let adjacency = vertices
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter(|&&w| pos[w] != usize::MAX)
                    .map(|&w| pos[w])
                    .collect()
            })
            .collect();
        PlainGraph::from_adjacency(adjacency)
    }

    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        two_color(&self.adjacency)
    }

    /// Row bitsets; requires at most 64 vertices.
    pub(crate) fn bitsets(&self) -> Vec<u64> {
        assert!(self.vertex_count() <= 64);
        self.adjacency
            .iter()
            .map(|l| l.iter().fold(0u64, |acc, &b| acc | 1 << b))
            .collect()
    }
}

impl<T: Scalar> From<&Nmrf<T>> for PlainGraph {
    fn from(n: &Nmrf<T>) -> Self {
        PlainGraph::from_adjacency(n.adjacency().to_vec())
    }
}

/// A graph with a nonnegative weight per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T> {
    pub graph: PlainGraph,
    pub weights: Vec<T>,
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn new(graph: PlainGraph, weights: Vec<T>) -> Self {
        assert_eq!(graph.vertex_count(), weights.len());
        WeightedGraph { graph, weights }
    }

    pub fn from_nmrf(n: &Nmrf<T>) -> Self {
        WeightedGraph {
            graph: PlainGraph::from(n),
            weights: n.nodes().iter().map(|x| x.weight).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// True iff no two of `set` are adjacent.
    pub fn is_stable(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| !self.graph.has_edge(a, b)))
    }

    pub fn weight_of(&self, set: &[usize]) -> T {
        set.iter().map(|&v| self.weights[v]).sum()
    }
}

/// BFS two-colouring; `None` if some component has an odd cycle.
pub fn two_color(adjacency: &[Vec<usize>]) -> Option<Vec<bool>> {
    let n = adjacency.len();
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let c = color[v].unwrap();
            for &w in &adjacency[v] {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(color.into_iter().map(Option::unwrap).collect())
}

/// Connected components, each sorted, listed by smallest vertex.
pub fn components(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
