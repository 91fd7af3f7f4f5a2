//! Balance of signed graphs: frustrated-cycle search and the linear-time
//! B_R test.

use std::collections::VecDeque;

use crate::signed::{Sign, SignedCycle, SignedGraph};

/// Returns a cycle with an odd number of repulsive edges, if any exists.
///
/// Parity BFS: each vertex gets the parity of repulsive edges on its BFS
/// tree path. A non-tree edge whose sign disagrees with the endpoint parities
/// closes a frustrated fundamental cycle; if no such edge exists the graph is
/// balanced.
pub fn find_frustrated_cycle(graph: &SignedGraph) -> Option<SignedCycle> {
    let n = graph.vertex_count();
    let adj = graph.adjacency();
    let edges = graph.edges();
    let mut parity: Vec<Option<bool>> = vec![None; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if parity[root].is_some() {
            continue;
        }
        parity[root] = Some(false);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let pv = parity[v].unwrap();
            for &(w, e) in &adj[v] {
                let expected = pv ^ edges[e].sign.is_repulsive();
                match parity[w] {
                    None => {
                        parity[w] = Some(expected);
                        parent[w] = Some((v, e));
                        depth[w] = depth[v] + 1;
                        queue.push_back(w);
                    }
                    Some(pw) if pw != expected => {
                        return Some(tree_cycle(graph, &parent, &depth, v, w, e));
                    }
                    _ => {}
                }
            }
        }
    }
    None
}

/// Closes the tree paths from `a` and `b` to their common ancestor with the
/// edge `closing` between `b` and `a`.
fn tree_cycle(
    graph: &SignedGraph,
    parent: &[Option<(usize, usize)>],
    depth: &[usize],
    a: usize,
    b: usize,
    closing: usize,
) -> SignedCycle {
    let edges = graph.edges();
    let (mut x, mut y) = (a, b);
    let mut up_a: Vec<(usize, Sign)> = Vec::new();
    let mut up_b: Vec<(usize, Sign)> = Vec::new();
    while depth[x] > depth[y] {
        let (p, e) = parent[x].unwrap();
        up_a.push((x, edges[e].sign));
        x = p;
    }
    while depth[y] > depth[x] {
        let (p, e) = parent[y].unwrap();
        up_b.push((y, edges[e].sign));
        y = p;
    }
    while x != y {
        let (px, ex) = parent[x].unwrap();
        let (py, ey) = parent[y].unwrap();
        up_a.push((x, edges[ex].sign));
        up_b.push((y, edges[ey].sign));
        x = px;
        y = py;
    }
    // a -> ... -> lca, lca -> ... -> b, then b -> a.
    let mut vertices: Vec<usize> = up_a.iter().map(|&(v, _)| v).collect();
    let mut signs: Vec<Sign> = up_a.iter().map(|&(_, s)| s).collect();
    vertices.push(x);
    for &(v, s) in up_b.iter().rev() {
        signs.push(s);
        vertices.push(v);
    }
    signs.push(edges[closing].sign);
    SignedCycle { vertices, signs }
}

/// Union-find over `(V, E_R)` components carrying a side flip per root.
struct ParityUnion {
    parent: Vec<usize>,
    rank: Vec<u8>,
    flip: Vec<bool>,
}

impl ParityUnion {
    fn new(n: usize) -> Self {
        ParityUnion {
            parent: (0..n).collect(),
            rank: vec![0; n],
            flip: vec![false; n],
        }
    }

    /// Root and parity of `x` relative to it.
    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut r = x;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // Compress, accumulating parity from the top down.
        let mut acc = false;
        for &node in path.iter().rev() {
            acc ^= self.flip[node];
            self.flip[node] = acc;
            self.parent[node] = r;
        }
        (r, if path.is_empty() { false } else { self.flip[x] })
    }

    /// Requires `parity(a) ^ parity(b) == diff`; false on contradiction.
    fn unite(&mut self, a: usize, b: usize, diff: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == diff;
        }
        let (big, small) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.flip[small] = pa ^ pb ^ diff;
        if self.rank[big] == self.rank[small] {
            self.rank[big] += 1;
        }
        true
    }
}

/// Bipartition `(V1, V2)` with every repulsive edge crossing and no
/// associative edge crossing, or `None` if the graph is not B_R.
///
/// Two-colours `(V, E_R)` by BFS, then stitches the colourings of its
/// components together along `E_A`, which forces equal sides. O(|V| + |E|).
pub fn detect_br(graph: &SignedGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = graph.vertex_count();
    let mut rep_adj = vec![Vec::new(); n];
    for e in graph.edges().iter().filter(|e| e.sign.is_repulsive()) {
        rep_adj[e.u].push(e.v);
        rep_adj[e.v].push(e.u);
    }
    let mut color = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut comp_count = 0;
    for root in 0..n {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = comp_count;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &w in &rep_adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = comp_count;
                    color[w] = !color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    return None;
                }
            }
        }
        comp_count += 1;
    }
    let mut union = ParityUnion::new(comp_count);
    for e in graph.edges().iter().filter(|e| !e.sign.is_repulsive()) {
        // side(x) = color[x] ^ flip(comp[x]); require side(u) == side(v).
        if !union.unite(comp[e.u], comp[e.v], color[e.u] ^ color[e.v]) {
            return None;
        }
    }
    let mut v1 = Vec::new();
    let mut v2 = Vec::new();
    for v in 0..n {
        let (_, flip) = union.find(comp[v]);
        if color[v] ^ flip {
            v2.push(v);
        } else {
            v1.push(v);
        }
    }
    Some((v1, v2))
}

/// True iff `(v1, v2)` certifies the B_R property of `graph`.
pub fn is_br_partition(graph: &SignedGraph, v1: &[usize], v2: &[usize]) -> bool {
    let n = graph.vertex_count();
    let mut side = vec![None; n];
    for &v in v1 {
        side[v] = Some(false);
    }
    for &v in v2 {
        if side[v].is_some() {
            return false;
        }
        side[v] = Some(true);
    }
    if side.iter().any(Option::is_none) {
        return false;
    }
    graph
        .edges()
        .iter()
        .all(|e| (side[e.u] != side[e.v]) == e.sign.is_repulsive())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frustrated_triangle_found() {
        let g = SignedGraph::from_triples(3, &[(0, 1, false), (1, 2, false), (2, 0, true)]);
        let c = find_frustrated_cycle(&g).unwrap();
        assert!(c.is_valid_in(&g));
        assert_eq!(c.repulsive_count(), 1);
    }

    #[test]
    fn balanced_graphs_have_no_frustrated_cycle() {
        let g = SignedGraph::from_triples(
            4,
            &[(0, 1, true), (1, 2, true), (2, 3, false), (3, 0, false)],
        );
        assert!(find_frustrated_cycle(&g).is_none());
        let g = SignedGraph::from_triples(4, &[(0, 1, false), (1, 2, false), (0, 2, false)]);
        assert!(find_frustrated_cycle(&g).is_none());
    }

    #[test]
    fn long_frustrated_cycle_is_a_valid_simple_cycle() {
        let g = SignedGraph::from_triples(
            6,
            &[
                (0, 1, false),
                (1, 2, false),
                (2, 3, false),
                (3, 4, false),
                (4, 5, false),
                (5, 0, true),
            ],
        );
        let c = find_frustrated_cycle(&g).unwrap();
        assert!(c.is_valid_in(&g));
        assert_eq!(c.len(), 6);
    }

    #[test]
    fn br_examples() {
        let g = SignedGraph::from_triples(2, &[(0, 1, false)]);
        assert_eq!(detect_br(&g), Some((vec![0, 1], vec![])));

        let g = SignedGraph::from_triples(3, &[(0, 1, true), (1, 2, true), (2, 0, true)]);
        assert_eq!(detect_br(&g), None);

        let g = SignedGraph::from_triples(3, &[(0, 1, true), (1, 2, false)]);
        assert_eq!(detect_br(&g), Some((vec![0], vec![1, 2])));
    }

    #[test]
    fn associative_edge_across_repulsive_components_conflicts() {
        // 0 -r- 1, 2 -r- 3, 0 +a+ 2, 1 +a+ 2: forces side(0)=side(2)=side(1).
        let g = SignedGraph::from_triples(
            4,
            &[(0, 1, true), (2, 3, true), (0, 2, false), (1, 2, false)],
        );
        assert_eq!(detect_br(&g), None);
        assert!(find_frustrated_cycle(&g).is_some());
    }
}
