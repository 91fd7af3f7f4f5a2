//! Seeded random instances for tests and benchmarks. All randomness comes
//! from a caller-supplied generator.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{PlainGraph, WeightedGraph};
use crate::model::Model;
use crate::model::Potential;
use crate::signed::{Sign, SignedEdge, SignedGraph};
use crate::submodular::HighOrderPotential;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer-valued 2x2 table (row-major `[00, 01, 10, 11]`) whose
/// associativity has the given sign and magnitude at least 1.
pub fn signed_table<R: Rng>(rng: &mut R, sign: Sign) -> [f64; 4] {
    let mut t: [f64; 4] = std::array::from_fn(|_| rng.random_range(-4..=4) as f64);
    let a = t[0] + t[3] - t[1] - t[2];
    let want = rng.random_range(1..=5) as f64;
    let target = match sign {
        Sign::Associative => want,
        Sign::Repulsive => -want,
    };
    t[3] += target - a;
    t
}

/// Real-valued variant of [`signed_table`], associativity magnitude in
/// `[0.1, 2)`.
pub fn signed_table_real<R: Rng>(rng: &mut R, sign: Sign) -> [f64; 4] {
    let mut t: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
    let a = t[0] + t[3] - t[1] - t[2];
    let want = rng.random_range(0.1..2.0);
    let target = match sign {
        Sign::Associative => want,
        Sign::Repulsive => -want,
    };
    t[3] += target - a;
    t
}

/// Random singleton tables and one signed table per edge of `graph`.
pub fn model_for_topology<R: Rng>(rng: &mut R, graph: &SignedGraph, integer: bool) -> Model<f64> {
    let n = graph.vertex_count();
    let mut pots: Vec<Potential<f64>> = (0..n)
        .map(|v| {
            let t = if integer {
                vec![rng.random_range(-3..=3) as f64, rng.random_range(-3..=3) as f64]
            } else {
                vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]
            };
            Potential::new(vec![v], t)
        })
        .collect();
    for e in graph.edges() {
        let t = if integer {
            signed_table(rng, e.sign)
        } else {
            signed_table_real(rng, e.sign)
        };
        pots.push(Potential::new(vec![e.u, e.v], t.to_vec()));
    }
    Model::from_parts(Model::<f64>::binary_variables(n), pots).expect("generated model is valid")
}

/// Shapes of tractable blocks used by the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockShape {
    Bridge,
    /// Balanced cycle on the given number of vertices.
    BalancedCycle(usize),
    /// Random balanced graph on the given number of vertices.
    BalancedDense(usize),
    /// `T_{m,n}` on `2 + m + n` vertices.
    T(usize, usize),
    /// `U_n` on `2 + n` vertices.
    U(usize),
}

impl BlockShape {
    pub fn vertex_count(self) -> usize {
        match self {
            BlockShape::Bridge => 2,
            BlockShape::BalancedCycle(k) | BlockShape::BalancedDense(k) => k,
            BlockShape::T(m, n) => 2 + m + n,
            BlockShape::U(n) => 2 + n,
        }
    }
}

/// Signed edges of `shape` on local vertices `0..shape.vertex_count()`.
pub fn block_edges<R: Rng>(rng: &mut R, shape: BlockShape) -> Vec<(usize, usize, Sign)> {
    let random_sign = |rng: &mut R| {
        if rng.random_bool(0.5) {
            Sign::Repulsive
        } else {
            Sign::Associative
        }
    };
    match shape {
        BlockShape::Bridge => vec![(0, 1, random_sign(rng))],
        BlockShape::BalancedCycle(k) | BlockShape::BalancedDense(k) => {
            // Signs from a random side assignment are always balanced.
            let side: Vec<bool> = (0..k).map(|_| rng.random_bool(0.5)).collect();
            let sign = |a: usize, b: usize| {
                if side[a] != side[b] {
                    Sign::Repulsive
                } else {
                    Sign::Associative
                }
            };
            let mut pairs: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
            if matches!(shape, BlockShape::BalancedDense(_)) {
                for a in 0..k {
                    for b in a + 2..k {
                        if !(a == 0 && b == k - 1) && rng.random_bool(0.5) {
                            pairs.push((a, b));
                        }
                    }
                }
            }
            pairs.into_iter().map(|(a, b)| (a, b, sign(a, b))).collect()
        }
        BlockShape::T(m, n) => {
            let mut e = vec![(0, 1, Sign::Repulsive)];
            for v in 2..2 + m {
                e.push((0, v, Sign::Repulsive));
                e.push((1, v, Sign::Repulsive));
            }
            for v in 2 + m..2 + m + n {
                e.push((0, v, Sign::Associative));
                e.push((1, v, Sign::Associative));
            }
            e
        }
        BlockShape::U(n) => {
            let mut e = vec![(0, 1, Sign::Associative)];
            for v in 2..2 + n {
                let first = random_sign(rng);
                e.push((0, v, first));
                e.push((1, v, first.flipped()));
            }
            e
        }
    }
}

/// Glues blocks one at a time, each sharing one vertex with what exists.
/// `attach` picks the shared vertex from the current vertex count.
fn glue<R: Rng>(
    rng: &mut R,
    shapes: &[BlockShape],
    mut attach: impl FnMut(&mut R, usize) -> usize,
) -> SignedGraph {
    let mut edges = Vec::new();
    let mut count = 1usize;
    for &shape in shapes {
        let k = shape.vertex_count();
        let shared = attach(rng, count);
        // Local 0 maps to the shared vertex; shuffle which local vertex that
        // is so base vertices are not always the cut vertex.
        let mut local: Vec<usize> = std::iter::once(shared).chain(count..count + k - 1).collect();
        local.shuffle(rng);
        count += k - 1;
        for (a, b, s) in block_edges(rng, shape) {
            edges.push(SignedEdge::new(local[a], local[b], s));
        }
    }
    SignedGraph::new(count, edges)
}

fn random_shape<R: Rng>(rng: &mut R, max_vertices: usize) -> BlockShape {
    loop {
        let shape = match rng.random_range(0..6) {
            0 => BlockShape::Bridge,
            1 => BlockShape::BalancedCycle(rng.random_range(3..=6)),
            2 => BlockShape::BalancedDense(rng.random_range(3..=6)),
            3 => {
                let m = rng.random_range(0..=3);
                let n = rng.random_range(usize::from(m == 0)..=3);
                BlockShape::T(m, n)
            }
            4 => BlockShape::U(rng.random_range(1..=4)),
            _ => BlockShape::T(1, 0),
        };
        if shape.vertex_count() <= max_vertices {
            return shape;
        }
    }
}

/// Random tractable topology on at most `max_vertices` vertices, built
/// from B_R, T and U blocks joined at cut vertices.
pub fn random_tractable_topology<R: Rng>(rng: &mut R, max_vertices: usize) -> SignedGraph {
    assert!(max_vertices >= 2);
    let mut shapes = Vec::new();
    let mut used = 1;
    loop {
        let room = max_vertices + 1 - used;
        if room < 2 || (!shapes.is_empty() && rng.random_bool(0.25)) {
            break;
        }
        let s = random_shape(rng, room);
        used += s.vertex_count() - 1;
        shapes.push(s);
    }
    glue(rng, &shapes, |rng, count| rng.random_range(0..count))
}

pub fn random_tractable<R: Rng>(rng: &mut R, max_vertices: usize, integer: bool) -> Model<f64> {
    let g = random_tractable_topology(rng, max_vertices);
    model_for_topology(rng, &g, integer)
}

/// Erdos-Renyi topology with independent random signs.
pub fn random_signed_topology<R: Rng>(rng: &mut R, n: usize, p: f64) -> SignedGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                let s = if rng.random_bool(0.5) {
                    Sign::Repulsive
                } else {
                    Sign::Associative
                };
                edges.push(SignedEdge::new(a, b, s));
            }
        }
    }
    SignedGraph::new(n, edges)
}

pub fn random_signed<R: Rng>(rng: &mut R, n: usize, p: f64, integer: bool) -> Model<f64> {
    let g = random_signed_topology(rng, n, p);
    model_for_topology(rng, &g, integer)
}

/// Chain of small tractable blocks, each sharing its first vertex with the
/// last vertex of the previous one, with exactly `edges` edges.
pub fn block_chain_topology<R: Rng>(rng: &mut R, edges: usize) -> SignedGraph {
    let mut shapes = Vec::new();
    let mut total = 0;
    while total < edges {
        let shape = match rng.random_range(0..4) {
            0 => BlockShape::BalancedCycle(4),
            1 => BlockShape::T(1, 1),
            2 => BlockShape::U(1),
            _ => BlockShape::Bridge,
        };
        let e = match shape {
            BlockShape::BalancedCycle(k) => k,
            BlockShape::T(m, n) => 1 + 2 * (m + n),
            BlockShape::U(n) => 1 + 2 * n,
            _ => 1,
        };
        let shape = if total + e > edges { BlockShape::Bridge } else { shape };
        total += if shape == BlockShape::Bridge { 1 } else { e };
        shapes.push(shape);
    }
    glue(rng, &shapes, |_, count| count - 1)
}

pub fn block_chain<R: Rng>(rng: &mut R, edges: usize) -> Model<f64> {
    let g = block_chain_topology(rng, edges);
    model_for_topology(rng, &g, false)
}

/// Integer order-3 table sampled until every projection is supermodular.
pub fn random_supermodular_k3<R: Rng>(rng: &mut R) -> HighOrderPotential<f64> {
    loop {
        let table: Vec<f64> = (0..8).map(|_| rng.random_range(-5..=5) as f64).collect();
        let psi = HighOrderPotential::anonymous(table).expect("order 3");
        if psi.is_supermodular(0.0) {
            return psi;
        }
    }
}

/// Integer order-k table with at least one strictly submodular projection.
pub fn random_non_supermodular<R: Rng>(rng: &mut R, k: usize) -> HighOrderPotential<f64> {
    loop {
        let table: Vec<f64> = (0..1 << k).map(|_| rng.random_range(-5..=5) as f64).collect();
        let psi = HighOrderPotential::anonymous(table).expect("valid order");
        if !psi.is_supermodular(0.0) {
            return psi;
        }
    }
}

/// G(n, p) with integer weights in `0..=max_weight`.
pub fn random_weighted_graph<R: Rng>(rng: &mut R, n: usize, p: f64, max_weight: u32) -> WeightedGraph<f64> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let weights = (0..n).map(|_| rng.random_range(0..=max_weight) as f64).collect();
    WeightedGraph::new(PlainGraph::from_edges(n, &edges), weights)
}

/// Random bipartite graph with sides given by the returned flags.
pub fn random_bipartite_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    p: f64,
    max_weight: u32,
) -> (WeightedGraph<f64>, Vec<bool>) {
    let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if side[a] != side[b] && rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let weights = (0..n).map(|_| rng.random_range(0..=max_weight) as f64).collect();
    (WeightedGraph::new(PlainGraph::from_edges(n, &edges), weights), side)
}

/// Generator families selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    RandomTractable,
    RandomSigned,
    RandomSupermodularK3,
    /// Block chain with the given number of edges.
    BlockChain(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::RandomTractable => f.write_str("random-tractable"),
            Family::RandomSigned => f.write_str("random-signed"),
            Family::RandomSupermodularK3 => f.write_str("random-supermodular-k3"),
            Family::BlockChain(n) => write!(f, "block-chain({n})"),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random-tractable" => return Ok(Family::RandomTractable),
            "random-signed" => return Ok(Family::RandomSigned),
            "random-supermodular-k3" => return Ok(Family::RandomSupermodularK3),
            _ => {}
        }
        let len = s
            .strip_prefix("block-chain(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("unknown generator family `{s}`"))?;
        len.parse()
            .map(Family::BlockChain)
            .map_err(|_| format!("bad block-chain length `{len}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::associativity;
    use crate::structure::classify_graph;

    #[test]
    fn tables_have_requested_sign() {
        let mut rng = seeded(1);
        for _ in 0..100 {
            for sign in [Sign::Associative, Sign::Repulsive] {
                let t = signed_table(&mut rng, sign);
                let a = associativity(&[[t[0], t[1]], [t[2], t[3]]]);
                assert_eq!(a > 0.0, sign == Sign::Associative);
                assert!(a.abs() >= 1.0);
            }
        }
    }

    #[test]
    fn tractable_generator_is_tractable() {
        let mut rng = seeded(2);
        for _ in 0..200 {
            let g = random_tractable_topology(&mut rng, 8);
            assert!(g.vertex_count() <= 8);
            assert!(classify_graph(&g).tractable, "{g:?}");
        }
    }

    #[test]
    fn block_chain_has_exact_edge_count() {
        let mut rng = seeded(3);
        for e in [1, 10, 137] {
            let g = block_chain_topology(&mut rng, e);
            assert_eq!(g.edge_count(), e);
            assert!(classify_graph(&g).tractable);
        }
    }

    #[test]
    fn families_parse() {
        assert_eq!("block-chain(1000)".parse(), Ok(Family::BlockChain(1000)));
        assert_eq!("random-signed".parse(), Ok(Family::RandomSigned));
        assert!("nope".parse::<Family>().is_err());
        assert_eq!(Family::BlockChain(5).to_string(), "block-chain(5)");
    }

    #[test]
    fn same_seed_same_model() {
        let a = random_tractable(&mut seeded(9), 8, true);
        let b = random_tractable(&mut seeded(9), 8, true);
        assert_eq!(a, b);
    }
}
