//! Exact and randomized computations for graph pebbling, together with the
//! zero-sum subset and bounded-multiset lattice tools that go with it.

pub mod distribution;
pub mod error;
pub mod families;
pub mod graph;
pub mod lattice;
pub mod lemke;
pub mod number;
pub mod par;
pub mod properties;
pub mod repro;
pub mod solver;
pub mod thresholds;
pub mod trees;

pub use distribution::{weighted_product, Costs, Move, MoveSequence, PebbleDistribution, SolveMode};
pub use error::{Error, Result};
pub use graph::Graph;
pub use number::{max_unsolvable, pebbling_number, Unsolvable};
pub use solver::{solvable, weight, Options, Solvability, Target};
