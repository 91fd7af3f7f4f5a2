//! Maximum-weight stable set solvers, MMWSS completion, MAP decoding and the
//! end-to-end solve pipeline.

mod bipartite;
mod branch_bound;
mod complete;
mod decode;
mod solve;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;

pub use bipartite::mwss_bipartite;
pub use branch_bound::{mwss_branch_bound, DEFAULT_BNB_CAP};
pub use complete::mmwss_complete;
pub use decode::{decode_map, MapSolution};
pub use solve::{solve_map, solve_map_with, Method, SolveError, SolveOptions};

/// Selected node ids (sorted) and their total weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StableSetSolution<T> {
    pub nodes: Vec<usize>,
    pub weight: T,
}

impl<T: Scalar> StableSetSolution<T> {
    pub fn empty() -> Self {
        StableSetSolution {
            nodes: Vec::new(),
            weight: T::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MwssError {
    #[error("partition is not a bipartition: nodes {0} and {1} share a side")]
    NotBipartite(usize, usize),
    #[error("partition covers {got} nodes, graph has {expected}")]
    PartitionLength { got: usize, expected: usize },
    #[error("node {0} has negative weight")]
    NegativeWeight(usize),
    #[error("graph has {nodes} nodes, cap is {cap}")]
    TooLarge { nodes: usize, cap: usize },
    #[error("clique group {0} cannot be represented consistently")]
    Inconsistent(usize),
    #[error("recomputed objective {recomputed} differs from stable-set value {expected}")]
    ObjectiveMismatch { recomputed: f64, expected: f64 },
}

fn check_weights<T: Scalar>(weights: &[T]) -> Result<(), MwssError> {
    match weights.iter().position(|w| *w < T::zero()) {
        Some(v) => Err(MwssError::NegativeWeight(v)),
        None => Ok(()),
    }
}
