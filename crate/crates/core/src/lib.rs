//! State preparation circuits synthesized from LimTDDs.
//!
//! A state vector is compressed into a decision diagram whose edges carry
//! local invertible maps ([`dd::LimTdd`]); [`synth`] turns the diagram into a
//! disentangling circuit and inverts it; [`sim`] is the dense reference
//! simulator used to check every result.

pub mod circuit;
#[cfg(test)]
mod fixtures;
pub mod dd;
pub mod error;
pub mod lim;
pub mod sim;
pub mod state;
pub mod synth;
pub mod transpile;
pub use transpile::transpile;

pub use circuit::{Circuit, ControlCondition, Gate, GateCounts, GateLabel};
pub use dd::{DiagramStats, Edge, LimTdd, Node, NodeId, NormTable};
pub use error::{Error, Result};
pub use lim::{GroupKind, Lim, LimFactor};
pub use state::StateVector;

/// Absolute tolerance for merging scalars in the unique table.
pub const MERGE_TOL: f64 = 1e-9;
/// Tolerance on `|e^{iα} - e^{iβ}|` when comparing phases.
pub const ANGLE_TOL: f64 = 1e-9;
/// Normalized amplitudes below this are treated as exact zeros.
pub const ZERO_TOL: f64 = 1e-12;
