//! Structural controllability of structured linear systems and solvers for
//! minimal-cost structural perturbation: link insertion, link deletion and
//! actuator deletion, plus constructors and verifiers for the hardness
//! gadgets behind them.

pub mod control;
pub mod actuator;
pub mod cost;
pub mod deletion;
pub mod error;
pub mod format;
pub mod generate;
pub mod graph;
pub mod insertion;
pub mod matrix;
pub mod reductions;
mod subsets;
pub mod system;

pub use cost::Cost;
pub use error::{Error, Result};
pub use system::{CostModel, EdgeKind, Method, PerturbationResult, Status, StructuredSystem, SysEdge, Witness};
