use crate::nmrf::Nmrf;
use crate::scalar::Scalar;

use super::{MwssError, StableSetSolution};

/// Extends a MWSS of the pruned graph to one node per clique group by adding
/// pruned nodes (and any active node left out) that agree with every label
/// fixed so far. Groups are visited in id order, candidates in
/// lexicographic order of their settings.
///
/// Returned ids live in the combined space of [`Nmrf::node_or_pruned`].
pub fn mmwss_complete<T: Scalar>(
    nmrf: &Nmrf<T>,
    base: &StableSetSolution<T>,
) -> Result<StableSetSolution<T>, MwssError> {
    let total = nmrf.len() + nmrf.pruned_nodes().len();
    let mut by_group: Vec<Vec<usize>> = vec![Vec::new(); nmrf.groups().len()];
    for id in 0..total {
        by_group[nmrf.node_or_pruned(id).group].push(id);
    }
    for list in &mut by_group {
        list.sort_by_key(|&id| nmrf.node_or_pruned(id).labels());
    }

    let mut labels: Vec<Option<usize>> = vec![None; nmrf.variable_count()];
    let mut covered = vec![false; by_group.len()];
    let mut chosen = base.nodes.clone();
    for &id in &base.nodes {
        let node = nmrf.node(id);
        covered[node.group] = true;
        for &(v, l) in &node.assignment {
            labels[v] = Some(l);
        }
    }
    for (g, candidates) in by_group.iter().enumerate() {
        if covered[g] {
            continue;
        }
        let pick = candidates.iter().copied().find(|&id| {
            nmrf.node_or_pruned(id)
                .assignment
                .iter()
                .all(|&(v, l)| labels[v].is_none_or(|x| x == l))
        });
        let Some(id) = pick else {
            return Err(MwssError::Inconsistent(g));
        };
        for &(v, l) in &nmrf.node_or_pruned(id).assignment {
            labels[v] = Some(l);
        }
        chosen.push(id);
    }
    chosen.sort_unstable();
    let weight = chosen.iter().map(|&id| nmrf.node_or_pruned(id).weight).sum();
    Ok(StableSetSolution {
        nodes: chosen,
        weight,
    })
}
