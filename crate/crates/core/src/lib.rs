//! Local search for maximum weight independent set in d-claw free graphs
//! and weighted k-set packing.
//!
//! The solvers improve the squared weight `w²(A)` of an independent set
//! `A` by swapping in claw-shaped and circular local improvements. All
//! graph and solver types are generic over a [`Scalar`] weight; the
//! analysis certificates always run in exact [`Rational`] arithmetic.

pub mod analysis;
pub mod bitset;
pub mod circular;
pub mod error;
pub mod generators;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod scalar;
pub mod search;
pub mod solution;

pub use error::{Error, Result};
pub use graph::{verify_claw_free, ClawCheck, ConflictGraph};
pub use instance::{build_conflict_graph, Instance, MwisInstance, PackingInstance};
pub use oracle::{exact_mwis, exhaustive_improvement_search, Exponent, OracleOptions, OracleResult};
pub use scalar::{format_rational, parse_rational, Rational, Scalar};
pub use solution::{verify_solution, CircularEvidence, Improvement, ImprovementKind, Solution};

/// Graph with exact rational weights, the form instances are parsed into.
pub type RationalGraph = ConflictGraph<Rational>;
/// Graph with integer weights, the form the scaling wrapper solves on.
pub type IntegerGraph = ConflictGraph<i128>;
/// Graph with approximate float weights.
pub type FloatGraph = ConflictGraph<f64>;

pub type RationalSolution = Solution<Rational>;
pub type IntegerSolution = Solution<i128>;
