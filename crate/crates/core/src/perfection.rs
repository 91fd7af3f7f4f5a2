//! Desk-scale perfection checks.
//!
//! A graph is perfect iff it has no odd hole and no odd antihole. Holes are
//! found by exhaustive induced-path search, so every entry point takes a
//! vertex cap.

use serde::Serialize;
use thiserror::Error;

use crate::graph::PlainGraph;
use crate::nmrf::{EdgeForm, EnodePlan, Nmrf};
use crate::scalar::Scalar;
use crate::signed::{SignedCycle, SignedGraph};

pub const DEFAULT_MAX_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerfectionError {
    #[error("graph has {found} vertices; the exhaustive search is capped at {cap}")]
    TooLarge { found: usize, cap: usize },
    #[error("clique group {group} keeps {count} enodes; expected at most one")]
    NotSingleEnodeForm { group: usize, count: usize },
    #[error("clique group {group} is not binary pairwise")]
    NotBinaryPairwise { group: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum PerfectionVerdict {
    Perfect,
    /// Vertices of an induced odd cycle of length >= 5, in cycle order.
    OddHole(Vec<usize>),
    /// Vertices whose complement induces an odd cycle, in complement-cycle
    /// order.
    OddAntihole(Vec<usize>),
}

impl PerfectionVerdict {
    pub fn is_perfect(&self) -> bool {
        matches!(self, PerfectionVerdict::Perfect)
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            PerfectionVerdict::Perfect => None,
            PerfectionVerdict::OddHole(w) | PerfectionVerdict::OddAntihole(w) => Some(w),
        }
    }
}

fn check_cap(graph: &PlainGraph, cap: usize) -> Result<(), PerfectionError> {
    let n = graph.vertex_count();
    if n > cap || n > 64 {
        return Err(PerfectionError::TooLarge {
            found: n,
            cap: cap.min(64),
        });
    }
    Ok(())
}

/// Induced odd cycle of length >= 5, if any. The search starts from each
/// vertex in increasing order and only uses larger vertices, extending
/// induced paths in increasing neighbour order; the first hole found is
/// returned, so the result is deterministic.
pub fn find_odd_hole(graph: &PlainGraph, max_vertices: usize) -> Result<Option<Vec<usize>>, PerfectionError> {
    check_cap(graph, max_vertices)?;
    let adj = graph.bitsets();
    let n = graph.vertex_count();
    for start in 0..n {
        let above: u64 = if start + 1 >= 64 {
            0
        } else {
            (!0u64 << (start + 1)) & mask(n)
        };
        let mut path = vec![start];
        if let Some(hole) = extend(&adj, above, &mut path, 1u64 << start, 0) {
            return Ok(Some(hole));
        }
    }
    Ok(None)
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

/// `used`: path vertices; `interior`: union of neighbourhoods of
/// `path[1..len-1]`.
fn extend(adj: &[u64], allowed: u64, path: &mut Vec<usize>, used: u64, interior: u64) -> Option<Vec<usize>> {
    let first = path[0];
    let last = *path.last().unwrap();
    let mut candidates = adj[last] & allowed & !used & !interior;
    while candidates != 0 {
        let w = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        let closes = path.len() >= 2 && adj[w] & (1u64 << first) != 0;
        if closes {
            let len = path.len() + 1;
            if len >= 5 && len % 2 == 1 {
                let mut hole = path.clone();
                hole.push(w);
                return Some(hole);
            }
            continue;
        }
        let next_interior = if path.len() >= 2 { interior | adj[last] } else { interior };
        path.push(w);
        let found = extend(adj, allowed, path, used | 1u64 << w, next_interior);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Perfect iff neither the graph nor its complement has an odd hole.
pub fn is_perfect_small(graph: &PlainGraph, max_vertices: usize) -> Result<PerfectionVerdict, PerfectionError> {
    if let Some(hole) = find_odd_hole(graph, max_vertices)? {
        return Ok(PerfectionVerdict::OddHole(hole));
    }
    if let Some(anti) = find_odd_hole(&graph.complement(), max_vertices)? {
        return Ok(PerfectionVerdict::OddAntihole(anti));
    }
    Ok(PerfectionVerdict::Perfect)
}

/// Perfection of a pruned NMRF compiled from a binary pairwise model with at
/// most one enode per edge. In that form odd antiholes of size >= 7 cannot
/// occur and the size-5 antihole is a hole, so only odd holes are searched.
pub fn binary_pairwise_perfection<T: Scalar>(
    nmrf: &Nmrf<T>,
    max_vertices: usize,
) -> Result<PerfectionVerdict, PerfectionError> {
    let members = nmrf.group_members();
    for (group, scope) in nmrf.groups().iter().enumerate() {
        if scope.len() > 2 {
            return Err(PerfectionError::NotBinaryPairwise { group });
        }
        if scope.len() == 2 && members[group].len() > 1 {
            return Err(PerfectionError::NotSingleEnodeForm {
                group,
                count: members[group].len(),
            });
        }
    }
    let graph = PlainGraph::from(nmrf);
    Ok(match find_odd_hole(&graph, max_vertices)? {
        Some(hole) => PerfectionVerdict::OddHole(hole),
        None => PerfectionVerdict::Perfect,
    })
}

/// A node of an NMRF named by its assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HoleNode {
    Enode { u: usize, label_u: usize, v: usize, label_v: usize },
    Snode { var: usize, label: usize },
}

impl HoleNode {
    /// `(variable, label)` pairs, edge endpoints ordered `u < v`.
    pub fn assignment(&self) -> Vec<(usize, usize)> {
        match *self {
            HoleNode::Enode { u, label_u, v, label_v } => {
                if u < v {
                    vec![(u, label_u), (v, label_v)]
                } else {
                    vec![(v, label_v), (u, label_u)]
                }
            }
            HoleNode::Snode { var, label } => vec![(var, label)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HoleError {
    #[error("cycle edge {index} has no enode form in the plan")]
    MissingForm { index: usize },
    #[error("enode form on cycle edge {index} does not match the edge sign")]
    FormMismatch { index: usize },
}

/// Enode settings along a cycle, `(x_{v_i}, x_{v_{i+1}})` for each edge.
pub fn cycle_forms(cycle: &SignedCycle, plan: &EnodePlan) -> Result<Vec<(usize, usize)>, HoleError> {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let a = cycle.vertices[i];
            let b = cycle.vertices[(i + 1) % n];
            let form = plan
                .get(&(a.min(b), a.max(b)))
                .ok_or(HoleError::MissingForm { index: i })?;
            let (lu, lv) = form.labels();
            Ok(if a < b { (lu, lv) } else { (lv, lu) })
        })
        .collect()
}

/// Builds the induced cycle of NMRF nodes generated by an MRF cycle: the
/// cycle's enodes in order, with a snode of the opposite label inserted
/// wherever two consecutive enodes agree on their shared variable. Its length
/// is at least the cycle length and has the parity of the repulsive-edge
/// count.
pub fn cycle_to_induced_hole(
    cycle: &SignedCycle,
    forms: &[(usize, usize)],
) -> Result<Vec<HoleNode>, HoleError> {
    let n = cycle.len();
    for (i, &(a, b)) in forms.iter().enumerate() {
        if !EdgeForm::from_labels(a, b).fits(cycle.signs[i]) {
            return Err(HoleError::FormMismatch { index: i });
        }
    }
    if forms.len() != n {
        return Err(HoleError::MissingForm { index: forms.len().min(n) });
    }
    let mut hole = Vec::with_capacity(2 * n);
    for i in 0..n {
        let u = cycle.vertices[i];
        let v = cycle.vertices[(i + 1) % n];
        let (lu, lv) = forms[i];
        hole.push(HoleNode::Enode {
            u,
            label_u: lu,
            v,
            label_v: lv,
        });
        let next_label = forms[(i + 1) % n].0;
        if next_label == lv {
            hole.push(HoleNode::Snode { var: v, label: 1 - lv });
        }
    }
    Ok(hole)
}

/// Locates hole nodes in an NMRF by assignment.
pub fn locate_hole<T: Scalar>(nmrf: &Nmrf<T>, hole: &[HoleNode]) -> Option<Vec<usize>> {
    hole.iter()
        .map(|h| {
            let want = h.assignment();
            nmrf.nodes().iter().position(|n| n.assignment == want)
        })
        .collect()
}

/// True iff `cycle` (given as node ids in order) is an induced cycle of
/// `graph`.
pub fn is_induced_cycle(graph: &PlainGraph, cycle: &[usize]) -> bool {
    let n = cycle.len();
    if n < 3 {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    if !cycle.iter().all(|v| seen.insert(*v)) {
        return false;
    }
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let consecutive = j == i + 1 || (i == 0 && j == n - 1);
            graph.has_edge(cycle[i], cycle[j]) == consecutive
        })
    })
}

/// True iff the frustrated cycle, under the given enode plan, generates an
/// odd hole (length >= 5) in the NMRF.
pub fn maps_to_odd_hole(cycle: &SignedCycle, plan: &EnodePlan) -> bool {
    cycle.is_frustrated()
        && cycle_forms(cycle, plan)
            .and_then(|f| cycle_to_induced_hole(cycle, &f))
            .is_ok_and(|h| h.len() >= 5)
}

/// Convenience: the structural NMRF of `graph` under `plan` as a plain graph.
pub fn structural_graph(graph: &SignedGraph, plan: &EnodePlan) -> PlainGraph {
    PlainGraph::from(&crate::nmrf::structural_nmrf(graph, plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::Sign;

    #[test]
    fn c5_is_its_own_hole() {
        let hole = find_odd_hole(&PlainGraph::cycle(5), 24).unwrap().unwrap();
        assert_eq!(hole.len(), 5);
        assert!(is_induced_cycle(&PlainGraph::cycle(5), &hole));
    }

    #[test]
    fn chord_destroys_c5_hole() {
        let g = PlainGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]);
        assert_eq!(find_odd_hole(&g, 24).unwrap(), None);
    }

    #[test]
    fn bipartite_graphs_have_no_odd_hole() {
        let g = PlainGraph::from_edges(6, &[(0, 3), (0, 4), (1, 4), (1, 5), (2, 5), (2, 3)]);
        assert_eq!(find_odd_hole(&g, 24).unwrap(), None);
    }

    #[test]
    fn perfection_examples() {
        assert!(matches!(
            is_perfect_small(&PlainGraph::cycle(7), 24).unwrap(),
            PerfectionVerdict::OddHole(h) if h.len() == 7
        ));
        assert!(matches!(
            is_perfect_small(&PlainGraph::cycle(7).complement(), 24).unwrap(),
            PerfectionVerdict::OddAntihole(h) if h.len() == 7
        ));
        assert!(is_perfect_small(&PlainGraph::complete(4), 24).unwrap().is_perfect());
    }

    #[test]
    fn cap_enforced() {
        assert_eq!(
            find_odd_hole(&PlainGraph::cycle(30), 24),
            Err(PerfectionError::TooLarge { found: 30, cap: 24 })
        );
    }

    #[test]
    fn repulsive_triangle_oriented_as_cycle_needs_no_snodes() {
        let cycle = SignedCycle {
            vertices: vec![0, 1, 2],
            signs: vec![Sign::Repulsive; 3],
        };
        let hole = cycle_to_induced_hole(&cycle, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(hole.len(), 3);
        assert!(hole.iter().all(|h| matches!(h, HoleNode::Enode { .. })));
    }

    #[test]
    fn form_sign_mismatch_rejected() {
        let cycle = SignedCycle {
            vertices: vec![0, 1, 2],
            signs: vec![Sign::Associative; 3],
        };
        assert_eq!(
            cycle_to_induced_hole(&cycle, &[(0, 1), (0, 0), (0, 0)]),
            Err(HoleError::FormMismatch { index: 0 })
        );
    }
}
