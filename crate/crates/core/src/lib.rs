//! Biased Waiter-Client games on graphs.
//!
//! The crate is layered bottom-up: [`graph`] holds patterns, boards and
//! copy counting; [`invariants`] computes the density parameters strategies
//! branch on; [`engine`] runs games; [`strategies`] implements Waiter and
//! Client policies; [`randmodels`] samples random blow-up subgraphs and
//! extracts sparse copy families; [`solver`] computes exact values on tiny
//! boards; [`experiment`] sweeps parameters and fits scaling exponents.

pub mod engine;
pub mod experiment;
pub mod graph;
pub mod invariants;
pub mod randmodels;
pub mod solver;
pub mod strategies;

pub use engine::{GameError, GameState, Owner, SetFamily, Transcript, WinningFamily};
pub use graph::{Board, EdgeSet, ElementId, Pattern, VertexId};
pub use invariants::Rational;
