use serde::Serialize;

use crate::signed::SignedGraph;

/// A maximal 2-connected subgraph, a bridge, or an isolated vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    /// Sorted vertex ids.
    pub vertices: Vec<usize>,
    /// Indices into the source graph's edge list, sorted.
    pub edges: Vec<usize>,
}

/// Blocks plus the cut vertices that join them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockTree {
    pub blocks: Vec<Block>,
    /// Sorted.
    pub cut_vertices: Vec<usize>,
    /// `(block, cut vertex)` incidences of the block-cut tree.
    pub links: Vec<(usize, usize)>,
    /// For every vertex, the blocks containing it.
    pub blocks_of: Vec<Vec<usize>>,
}

/// Hopcroft–Tarjan biconnected components, iterative so deep graphs do not
/// exhaust the call stack. Runs in O(|V| + |E|).
pub fn block_decompose(graph: &SignedGraph) -> BlockTree {
    const UNSEEN: usize = usize::MAX;
    let n = graph.vertex_count();
    let adj = graph.adjacency();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut blocks: Vec<Block> = Vec::new();
    let mut edge_stack: Vec<usize> = Vec::new();
    // (vertex, edge used to enter it, next adjacency slot)
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    let close_block = |edge_stack: &mut Vec<usize>, until: usize, blocks: &mut Vec<Block>| {
        let mut edges = Vec::new();
        while let Some(e) = edge_stack.pop() {
            edges.push(e);
            if e == until {
                break;
            }
        }
        edges.sort_unstable();
        let mut vertices: Vec<usize> = edges
            .iter()
            .flat_map(|&e| [graph.edges()[e].u, graph.edges()[e].v])
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        blocks.push(Block { vertices, edges });
    };

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        if adj[root].is_empty() {
            blocks.push(Block {
                vertices: vec![root],
                edges: Vec::new(),
            });
            continue;
        }
        frames.push((root, usize::MAX, 0));
        while let Some(&mut (v, parent_edge, ref mut next)) = frames.last_mut() {
            if *next < adj[v].len() {
                let (w, e) = adj[v][*next];
                *next += 1;
                if e == parent_edge {
                    continue;
                }
                if disc[w] == UNSEEN {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    edge_stack.push(e);
                    frames.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        close_block(&mut edge_stack, parent_edge, &mut blocks);
                    }
                }
            }
        }
    }

    let mut blocks_of = vec![Vec::new(); n];
    for (b, block) in blocks.iter().enumerate() {
        for &v in &block.vertices {
            blocks_of[v].push(b);
        }
    }
    let cut_vertices: Vec<usize> = (0..n).filter(|&v| blocks_of[v].len() > 1).collect();
    let links = cut_vertices
        .iter()
        .flat_map(|&v| blocks_of[v].iter().map(move |&b| (b, v)))
        .collect();
    BlockTree {
        blocks,
        cut_vertices,
        links,
        blocks_of,
    }
}
