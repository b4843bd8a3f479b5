//! Root-LIM elimination, controlled high-edge elimination and the merging rotation.

use num_complex::Complex64 as C64;

use crate::circuit::{mats, ControlCondition, Gate, GateLabel, Mat2};
use crate::dd::{LimTdd, Node, NormTable};
use crate::error::Result;
use crate::lim::{angle_eq, Lim, LimFactor};

/// `(1/√(1+|c|²))·[[1, c̄], [−c, 1]]`; sends `(w₀, w₁)` with `c = w₁/w₀` to `(√(|w₀|²+|w₁|²), 0)`.
pub fn rotation_from_ratio(c: C64) -> Mat2 {
    let s = 1.0 / (1.0 + c.norm_sqr()).sqrt();
    let one = C64::new(s, 0.0);
    [[one, c.conj() * s], [-c * s, one]]
}

/// Rotation merging amplitudes `w0`, `w1` into the `|0⟩` component, or
/// `None` when nothing needs to move.
pub(crate) fn merge_rotation(w0: C64, w1: C64) -> Option<Mat2> {
    if w1.norm() == 0.0 {
        return None;
    }
    if w0.norm() == 0.0 {
        // Limit of the ratio form as |c| → ∞.
        let ph = C64::from_polar(1.0, w1.arg());
        let z = C64::new(0.0, 0.0);
        return Some([[z, ph.conj()], [-ph, z]]);
    }
    let c = w1 / w0;
    if c.norm() < 1e-15 {
        return None;
    }
    Some(rotation_from_ratio(c))
}

/// Gate undoing one LIM factor.
pub(crate) fn factor_dagger_gate(f: &LimFactor, target: usize, controls: ControlCondition) -> Result<Gate> {
    let (label, m) = if !f.x {
        (GateLabel::for_phase(-f.theta), mats::phase(-f.theta))
    } else if angle_eq(f.theta, 0.0) {
        (GateLabel::X, mats::x())
    } else {
        (GateLabel::U, f.dagger_matrix())
    };
    Gate::new(label, m, controls, target)
}

/// Controlled `O_i†` for every non-identity factor, lowest qubit first.
pub(crate) fn lim_dagger_gates(lim: &Lim, controls: &ControlCondition) -> Result<Vec<Gate>> {
    lim.factors
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_identity())
        .map(|(q, f)| factor_dagger_gate(f, q, controls.clone()))
        .collect()
}

/// Undo the high-edge LIM of `node` under `controls`.
pub(crate) fn high_edge_gates(node: &Node, controls: &ControlCondition) -> Result<Vec<Gate>> {
    if node.high.is_zero() {
        return Ok(Vec::new());
    }
    lim_dagger_gates(&node.high.weight, controls)
}

/// Merging rotation on `q_v` under `controls`, if one is needed.
pub(crate) fn node_rotation(
    dd: &LimTdd,
    node: &Node,
    norms: &mut NormTable,
    controls: ControlCondition,
) -> Result<Option<Gate>> {
    let w0 = C64::new(dd.edge_norm(&node.low, norms), 0.0);
    let w1 = if node.high.is_zero() {
        C64::new(0.0, 0.0)
    } else {
        node.high.weight.scalar * dd.node_norm(node.high.target, norms)
    };
    merge_rotation(w0, w1)
        .map(|m| Gate::new(crate::circuit::GateLabel::R, m, controls, node.level))
        .transpose()
}

/// Result of stripping the root LIM.
#[derive(Clone, Debug)]
pub struct RootElimination {
    pub gates: Vec<Gate>,
    /// Scalar left on the root edge.
    pub scalar: C64,
}

pub fn eliminate_root_lim(dd: &LimTdd) -> RootElimination {
    let root = dd.root();
    let gates = lim_dagger_gates(&root.weight, &ControlCondition::new()).expect("uncontrolled gates are valid");
    RootElimination { gates, scalar: root.weight.scalar }
}
