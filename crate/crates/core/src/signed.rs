//! Signed graphs: the topology of a binary pairwise model with each edge
//! labelled associative or repulsive.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Associative,
    Repulsive,
}

impl Sign {
    pub fn is_repulsive(self) -> bool {
        self == Sign::Repulsive
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Associative => Sign::Repulsive,
            Sign::Repulsive => Sign::Associative,
        }
    }

    /// `+` or `-`, used in compact textual renderings.
    pub fn symbol(self) -> char {
        match self {
            Sign::Associative => '+',
            Sign::Repulsive => '-',
        }
    }
}

/// Undirected signed edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedEdge {
    pub u: usize,
    pub v: usize,
    pub sign: Sign,
}

impl SignedEdge {
    pub fn new(a: usize, b: usize, sign: Sign) -> Self {
        assert_ne!(a, b, "signed graphs have no loops");
        SignedEdge {
            u: a.min(b),
            v: a.max(b),
            sign,
        }
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Simple signed graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedGraph {
    vertex_count: usize,
    edges: Vec<SignedEdge>,
}

impl SignedGraph {
    /// Builds a graph, panicking on loops, parallel edges or out of range
    /// endpoints.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = SignedEdge>) -> Self {
        let edges: Vec<SignedEdge> = edges.into_iter().collect();
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            assert!(e.v < vertex_count, "edge endpoint out of range");
            assert!(seen.insert((e.u, e.v)), "parallel edge {}-{}", e.u, e.v);
        }
        SignedGraph {
            vertex_count,
            edges,
        }
    }

    /// Convenience constructor from `(a, b, repulsive)` triples.
    pub fn from_triples(vertex_count: usize, triples: &[(usize, usize, bool)]) -> Self {
        Self::new(
            vertex_count,
            triples.iter().map(|&(a, b, rep)| {
                SignedEdge::new(a, b, if rep { Sign::Repulsive } else { Sign::Associative })
            }),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Per-vertex list of `(neighbor, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<&SignedEdge> {
        let (u, v) = (a.min(b), a.max(b));
        self.edges.iter().find(|e| e.u == u && e.v == v)
    }

    /// Signed graph with the sign of every edge crossing `flip` negated.
    pub fn switched(&self, flip: &[bool]) -> SignedGraph {
        SignedGraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| {
                    let sign = if flip[e.u] != flip[e.v] {
                        e.sign.flipped()
                    } else {
                        e.sign
                    };
                    SignedEdge { sign, ..*e }
                })
                .collect(),
        }
    }
}

/// A simple cycle `vertices[0] - vertices[1] - ... - vertices[0]`, where
/// `signs[i]` labels the edge leaving `vertices[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedCycle {
    pub vertices: Vec<usize>,
    pub signs: Vec<Sign>,
}

impl SignedCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn repulsive_count(&self) -> usize {
        self.signs.iter().filter(|s| s.is_repulsive()).count()
    }

    pub fn is_frustrated(&self) -> bool {
        self.repulsive_count() % 2 == 1
    }

    /// Checks that consecutive vertices are joined in `graph` with the
    /// recorded sign and that no vertex repeats.
    pub fn is_valid_in(&self, graph: &SignedGraph) -> bool {
        let n = self.vertices.len();
        if n < 3 || self.signs.len() != n {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        if !self.vertices.iter().all(|v| seen.insert(*v)) {
            return false;
        }
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            graph
                .find_edge(a, b)
                .is_some_and(|e| e.sign == self.signs[i])
        })
    }

    /// Compact rendering such as `0+1-2+`.
    pub fn describe(&self) -> String {
        self.vertices
            .iter()
            .zip(&self.signs)
            .map(|(v, s)| format!("{v}{}", s.symbol()))
            .collect()
    }
}
