//! Exact MAP inference on discrete Markov random fields through maximum
//! weight stable sets on their NAND-MRF (NMRF) compilation.
//!
//! A model is compiled into a conflict graph with one clique group per
//! scope; a maximal maximum-weight stable set of that graph decodes to a
//! MAP configuration. For binary pairwise models the signed topology decides
//! whether the compiled graph is perfect for every choice of potentials:
//! each block must be balanced (`B_R`), a `T_{m,n}` or a `U_n`.
//! [`structure::classify_model`] checks this in linear time and
//! [`mwss::solve_map`] solves tractable models exactly by conditioning over
//! the block tree.
//!
//! Everything numeric is generic over [`Scalar`] (`f64`, `f32` or exact
//! [`num_rational::Rational64`]); the aliases below fix the common choices.

pub mod generate;
pub mod graph;
pub mod model;
pub mod mwss;
pub mod nmrf;
pub mod oracle;
pub mod perfection;
pub mod scalar;
pub mod signed;
pub mod structure;
pub mod submodular;

pub use graph::{PlainGraph, WeightedGraph};
pub use model::{associativity, EdgeTable, Model, ModelError, Potential, RawModel, Variable};
pub use mwss::{solve_map, solve_map_with, MapSolution, Method, SolveError, SolveOptions, StableSetSolution};
pub use nmrf::{build_nmrf, compile_binary_pairwise, EdgeForm, EnodePlan, Nmrf, NmrfNode};
pub use perfection::{binary_pairwise_perfection, is_perfect_small, PerfectionVerdict};
pub use scalar::Scalar;
pub use signed::{Sign, SignedCycle, SignedEdge, SignedGraph};
pub use structure::{classify_block, classify_graph, classify_model, BlockClass, TractabilityReport};
pub use submodular::{construct_k3, representation_feasible, HighOrderPotential, IndicatorRepresentation};

pub use num_rational::Rational64;

pub type ModelF64 = Model<f64>;
pub type ModelF32 = Model<f32>;
pub type ExactModel = Model<Rational64>;

pub type NmrfF64 = Nmrf<f64>;
pub type NmrfF32 = Nmrf<f32>;
pub type ExactNmrf = Nmrf<Rational64>;

pub type MapSolutionF64 = MapSolution<f64>;
pub type ExactMapSolution = MapSolution<Rational64>;

pub type HighOrderPotentialF64 = HighOrderPotential<f64>;
pub type ExactHighOrderPotential = HighOrderPotential<Rational64>;
