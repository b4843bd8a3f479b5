//! Level-by-level amplitude encoding with multiplexed rotations.

use num_complex::Complex64 as C64;

use crate::circuit::{mats, Circuit, ControlCondition, Gate, GateLabel};
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Preparation circuit plus its multiplexor block count.
#[derive(Clone, Debug)]
pub struct Baseline {
    pub circuit: Circuit,
    /// `2^n - 1` magnitude blocks plus the emitted phase blocks.
    pub controlled_blocks: usize,
}

/// Prepare `amps/‖amps‖` from `|0…0⟩`.
///
/// Level `k` rotates qubit `q_{n-1-k}` once per assignment of the `k` qubits
/// above it. A level whose angles all agree is emitted as a single
/// uncontrolled rotation; it still counts as `2^k` blocks.
pub fn baseline_ucr(amps: &StateVector) -> Result<Baseline> {
    let n = amps.num_qubits();
    let norm = amps.norm();
    if norm == 0.0 {
        return Err(Error::Domain("cannot prepare the zero vector".into()));
    }
    let a: Vec<C64> = amps.amplitudes().iter().map(|x| x / norm).collect();
    let mut c = Circuit::new(n, Vec::new());

    // sq[k][x]: probability mass of prefix x over the top k qubits.
    let mut sq: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
    sq[n] = a.iter().map(|x| x.norm_sqr()).collect();
    for k in (0..n).rev() {
        sq[k] = sq[k + 1].chunks(2).map(|p| p[0] + p[1]).collect();
    }
    let mut blocks = 0;
    for k in 0..n {
        let t = n - 1 - k;
        let angles: Vec<f64> = (0..1usize << k)
            .map(|x| 2.0 * sq[k + 1][2 * x + 1].sqrt().atan2(sq[k + 1][2 * x].sqrt()))
            .collect();
        blocks += angles.len();
        if angles.iter().all(|&th| (th - angles[0]).abs() < 1e-12) {
            if angles[0].abs() > 1e-15 {
                c.append_controlled(Gate::named(GateLabel::Ry(angles[0]), t))?;
            }
            continue;
        }
        for (x, &th) in angles.iter().enumerate() {
            if th.abs() < 1e-15 {
                continue;
            }
            let controls = prefix_controls(n, k, x);
            c.append_controlled(Gate::new(GateLabel::Ry(th), mats::ry(th), controls, t)?)?;
        }
    }

    // Phases, two amplitudes at a time on q0.
    if n == 0 {
        return Ok(Baseline { circuit: c, controlled_blocks: blocks });
    }
    let phase = |x: C64| if x.norm() > crate::ZERO_TOL { x.arg() } else { 0.0 };
    for y in 0..1usize << (n - 1) {
        let (p0, p1) = (phase(a[2 * y]), phase(a[2 * y + 1]));
        if p0.abs() < 1e-15 && p1.abs() < 1e-15 {
            continue;
        }
        let m = mats::diag(C64::from_polar(1.0, p0), C64::from_polar(1.0, p1));
        let controls = ControlCondition::from_terms((1..n).map(|q| (q, (y >> (q - 1)) & 1 == 1)))?;
        c.append_controlled(Gate::new(GateLabel::U, m, controls, 0)?)?;
        blocks += 1;
    }
    Ok(Baseline { circuit: c, controlled_blocks: blocks })
}

/// Controls fixing the top `k` qubits to prefix `x` (most significant first).
fn prefix_controls(n: usize, k: usize, x: usize) -> ControlCondition {
    ControlCondition::from_terms((0..k).map(|j| (n - 1 - j, (x >> (k - 1 - j)) & 1 == 1)))
        .expect("distinct qubits")
}
