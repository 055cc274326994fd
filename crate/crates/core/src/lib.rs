//! Hexagonal sliding puzzles: board geometry, the two-hole slide rule,
//! puzzle-graph enumeration and solvability decisions.
//!
//! The crate is organised bottom-up:
//!
//! - [`hexboard`]: cells, shape families, tight corners, trimming.
//! - [`configuration`]: tile placements, legal slides, permutation parity.
//! - [`puzzlegraph`]: breadth-first enumeration of components, God's-number
//!   bounds, shortest paths, hole-placement graphs and permutation groups.
//! - [`theorems`]: closed-form component counts, the solvability decision
//!   procedure and patching derivations.
//! - [`report`]: the analysis summary shared by the CLI and the HTTP service.

pub mod configuration;
pub mod hexboard;
pub mod puzzlegraph;
pub mod report;
pub mod theorems;

pub use configuration::{
    augmented_parity, permutation_parity, AugmentedConfiguration, ConfigError, Configuration,
    Parity, SlideMove, TilePermutation,
};
pub use hexboard::{parse_cell_list, BoardError, BoardSpec, Cell, Shape};
pub use puzzlegraph::{Budget, ComponentSummary, GodsNumberBounds, GraphError};
pub use theorems::solvability::{Decision, Rule, SolvabilityVerdict, Solver, SolverOptions};
