//! Disentangling circuits from LimTDDs, and the preparation circuits they invert.
//!
//! Every algorithm maps the diagram's state to `|0…0⟩` (ancillas restored);
//! [`prepare_state`] inverts the result.

mod algorithms;
mod baseline;
mod basic;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use algorithms::{state_pre_1, state_pre_2, state_pre_3, state_pre_4, synthesize, Synthesis};
pub use baseline::{baseline_ucr, Baseline};
pub use basic::{eliminate_root_lim, rotation_from_ratio, RootElimination};

use crate::circuit::Circuit;
use crate::dd::{LimTdd, NodeId};
use crate::error::{Error, Result};
use crate::lim::GroupKind;
use crate::state::StateVector;

/// Ancilla regime of the four algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// No ancilla; branch conditions become controls.
    NoAncilla,
    /// One ancilla marking the open subtree.
    OneAncilla,
    /// One ancilla per non-terminal node.
    Full,
    /// At most `m` ancillas.
    Budget(usize),
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::NoAncilla => f.write_str("noanc"),
            Algorithm::OneAncilla => f.write_str("one"),
            Algorithm::Full => f.write_str("full"),
            Algorithm::Budget(m) => write!(f, "budget:{m}"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// `noanc`, `one`, `full` or `budget:K`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noanc" => Ok(Algorithm::NoAncilla),
            "one" => Ok(Algorithm::OneAncilla),
            "full" => Ok(Algorithm::Full),
            _ => {
                let k = s
                    .strip_prefix("budget:")
                    .ok_or_else(|| Error::Format(format!("unknown algorithm '{s}'")))?;
                let m: usize =
                    k.parse().map_err(|_| Error::Format(format!("bad ancilla budget '{k}'")))?;
                if m < 1 {
                    return Err(Error::Domain("ancilla budget must be at least 1".into()));
                }
                Ok(Algorithm::Budget(m))
            }
        }
    }
}

/// Which ancilla belongs to which node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AncillaPlan {
    /// Node → ancilla index (0-based within the ancilla register).
    pub assignment: BTreeMap<NodeId, usize>,
    /// Ancilla handed to one-ancilla sub-circuits.
    pub reserved: Option<usize>,
}

/// Disentangler for a diagram: maps its state to `|anc_init⟩|0…0⟩`.
pub fn disentangle(dd: &LimTdd, algo: Algorithm) -> Result<Circuit> {
    Ok(synthesize(dd, algo)?.circuit)
}

/// Circuit taking `|anc_init⟩|0…0⟩` to `|anc_init⟩|ψ⟩` with `ψ = amps/‖amps‖`.
pub fn prepare_state(amps: &StateVector, algo: Algorithm, group: GroupKind) -> Result<Circuit> {
    let dd = LimTdd::from_statevector(&amps.clone().normalized(), group)?;
    Ok(disentangle(&dd, algo)?.inverse())
}
