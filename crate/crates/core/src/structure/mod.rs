//! Block decomposition and tractability classification of signed
//! topologies.

mod balance;
mod blocks;
mod classify;

pub use balance::{detect_br, find_frustrated_cycle, is_br_partition};
pub use blocks::{block_decompose, Block, BlockTree};
pub use classify::{
    block_subgraph, br_plan, classify_block, classify_graph, classify_model, BlockClass,
    BlockReport, TractabilityReport,
};
