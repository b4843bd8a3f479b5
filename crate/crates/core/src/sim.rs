//! Reference simulators. The dense one is the oracle; the sparse one covers
//! circuits whose ancilla registers push them past the dense cap but whose
//! states keep a small support.

use std::collections::HashMap;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, ControlCondition, Gate, GateLabel};
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Default limit on main + ancilla qubits for dense simulation.
pub const DEFAULT_QUBIT_CAP: usize = 24;

pub fn default_depth(n: usize) -> usize {
    3 * n
}

/// Apply one gate in place.
pub fn apply_gate(s: &mut StateVector, g: &Gate) -> Result<()> {
    let n = s.num_qubits();
    if let Some(q) = g.qubits().find(|&q| q >= n) {
        return Err(Error::QubitOutOfRange { qubit: q, width: n });
    }
    let (mask, value) = control_masks(&g.controls);
    let t = g.target;
    let tbit = 1usize << t;
    let low_mask = tbit - 1;
    let m = g.matrix;
    let amps = s.amplitudes_mut();
    for i in 0..amps.len() / 2 {
        let i0 = ((i >> t) << (t + 1)) | (i & low_mask);
        if i0 & mask != value {
            continue;
        }
        let i1 = i0 | tbit;
        let (a0, a1) = (amps[i0], amps[i1]);
        amps[i0] = m[0][0] * a0 + m[0][1] * a1;
        amps[i1] = m[1][0] * a0 + m[1][1] * a1;
    }
    Ok(())
}

fn control_masks(c: &ControlCondition) -> (usize, usize) {
    c.terms().iter().fold((0, 0), |(m, v), &(q, p)| (m | (1 << q), v | ((p as usize) << q)))
}

/// Run a circuit on a full-register state.
pub fn run(c: &Circuit, init: &StateVector) -> Result<StateVector> {
    Simulator::default().run(c, init)
}

/// Dense simulation with a configurable qubit cap.
#[derive(Clone, Copy, Debug)]
pub struct Simulator {
    pub max_qubits: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator { max_qubits: DEFAULT_QUBIT_CAP }
    }
}

impl Simulator {
    pub fn new(max_qubits: usize) -> Self {
        Simulator { max_qubits }
    }

    pub fn run(&self, c: &Circuit, init: &StateVector) -> Result<StateVector> {
        let w = c.width();
        if w > self.max_qubits {
            return Err(Error::TooManyQubits { qubits: w, cap: self.max_qubits });
        }
        if init.num_qubits() != w {
            return Err(Error::DimensionMismatch { expected: 1usize << w, got: init.len() });
        }
        let mut s = init.clone();
        for g in c.gates() {
            apply_gate(&mut s, g)?;
        }
        Ok(s)
    }
}

/// `|⟨a|b⟩|` for normalized inputs.
pub fn fidelity_up_to_phase(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    let ip: C64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum();
    Ok(ip.norm().min(1.0))
}

/// Random circuit over `{H, S, T, CX}` with uniformly drawn gates and qubits.
pub fn random_clifford_t_circuit(n: usize, depth: usize, seed: u64) -> Circuit {
    assert!(n >= 1, "need at least one qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = if n >= 2 { 4 } else { 3 };
    let mut c = Circuit::new(n, Vec::new());
    for _ in 0..depth {
        let g = match rng.gen_range(0..kinds) {
            0 => Gate::named(GateLabel::H, rng.gen_range(0..n)),
            1 => Gate::named(GateLabel::S, rng.gen_range(0..n)),
            2 => Gate::named(GateLabel::T, rng.gen_range(0..n)),
            _ => {
                let ctl = rng.gen_range(0..n);
                let mut tgt = rng.gen_range(0..n - 1);
                if tgt >= ctl {
                    tgt += 1;
                }
                Gate::cx(ctl, tgt)
            }
        };
        c.append_controlled(g).expect("in range");
    }
    c
}

pub fn random_clifford_t_state(n: usize, depth: usize, seed: u64) -> StateVector {
    let c = random_clifford_t_circuit(n, depth, seed);
    let mut s = StateVector::zero_state(n);
    for g in c.gates() {
        apply_gate(&mut s, g).expect("in range");
    }
    s.normalized()
}

/// Haar-like random state from normal-distributed amplitudes.
pub fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..1usize << n)
        .map(|_| {
            // Box-Muller from two uniforms
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            let t = 2.0 * std::f64::consts::PI * u2;
            C64::new(r * t.cos(), r * t.sin())
        })
        .collect();
    StateVector::new(amps).expect("power of two").normalized()
}

/// Amplitudes keyed by basis index stored as little-endian 64-bit words.
#[derive(Clone, Debug)]
pub struct SparseState {
    num_qubits: usize,
    amps: HashMap<Vec<u64>, C64>,
}

const PRUNE: f64 = 1e-15;

fn get_bit(k: &[u64], q: usize) -> bool {
    (k[q / 64] >> (q % 64)) & 1 == 1
}

fn flip_bit(k: &mut [u64], q: usize) {
    k[q / 64] ^= 1 << (q % 64);
}

impl SparseState {
    /// `|anc⟩ ⊗ |main⟩`, ancillas placed above the main register.
    pub fn with_ancillas(main: &StateVector, init: &[bool]) -> Self {
        let n = main.num_qubits();
        let total = n + init.len();
        let words = total.div_ceil(64).max(1);
        let mut amps = HashMap::new();
        for (k, a) in main.amplitudes().iter().enumerate() {
            if a.norm() <= PRUNE {
                continue;
            }
            let mut key = vec![0u64; words];
            for q in 0..n {
                if (k >> q) & 1 == 1 {
                    flip_bit(&mut key, q);
                }
            }
            for (j, &b) in init.iter().enumerate() {
                if b {
                    flip_bit(&mut key, n + j);
                }
            }
            amps.insert(key, *a);
        }
        SparseState { num_qubits: total, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        if let Some(q) = g.qubits().find(|&q| q >= self.num_qubits) {
            return Err(Error::QubitOutOfRange { qubit: q, width: self.num_qubits });
        }
        let t = g.target;
        let mut bases: Vec<Vec<u64>> = self
            .amps
            .keys()
            .filter(|k| g.controls.terms().iter().all(|&(q, p)| get_bit(k, q) == p))
            .map(|k| {
                let mut b = k.clone();
                if get_bit(&b, t) {
                    flip_bit(&mut b, t);
                }
                b
            })
            .collect();
        bases.sort_unstable();
        bases.dedup();
        let m = g.matrix;
        for b0 in bases {
            let mut b1 = b0.clone();
            flip_bit(&mut b1, t);
            let a0 = self.amps.remove(&b0).unwrap_or_default();
            let a1 = self.amps.remove(&b1).unwrap_or_default();
            let n0 = m[0][0] * a0 + m[0][1] * a1;
            let n1 = m[1][0] * a0 + m[1][1] * a1;
            if n0.norm() > PRUNE {
                self.amps.insert(b0, n0);
            }
            if n1.norm() > PRUNE {
                self.amps.insert(b1, n1);
            }
        }
        Ok(())
    }

    pub fn run(&mut self, c: &Circuit) -> Result<()> {
        if c.width() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: c.width() });
        }
        for g in c.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// `|⟨anc, main | self⟩|` against a dense main-register state.
    pub fn fidelity_with(&self, main: &StateVector, init: &[bool]) -> f64 {
        let other = SparseState::with_ancillas(main, init);
        let ip: C64 = other
            .amps
            .iter()
            .filter_map(|(k, a)| self.amps.get(k).map(|b| a.conj() * b))
            .sum();
        ip.norm().min(1.0)
    }

    /// Probability that the ancilla bits read `init`.
    pub fn ancilla_probability(&self, main_qubits: usize, init: &[bool]) -> f64 {
        self.amps
            .iter()
            .filter(|(k, _)| init.iter().enumerate().all(|(j, &b)| get_bit(k, main_qubits + j) == b))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// Outcome of checking a circuit against an expected final state.
#[derive(Clone, Copy, Debug)]
pub struct Check {
    /// `|⟨expected|result⟩|` over the full register.
    pub fidelity: f64,
    /// Probability that the ancillas end in their initial pattern.
    pub ancilla_restored: f64,
    pub dense: bool,
}

/// Run `c` on `|anc_init⟩|input⟩` and compare with `|anc_init⟩|expected⟩`.
/// Dense up to `cap` qubits, sparse beyond.
pub fn check_circuit(c: &Circuit, input: &StateVector, expected: &StateVector, cap: usize) -> Result<Check> {
    let n = c.main_qubits();
    if input.num_qubits() != n || expected.num_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, got: input.num_qubits() });
    }
    let init = c.ancilla_init();
    let input = input.clone().normalized();
    let expected = expected.clone().normalized();
    if c.width() <= cap {
        let out = Simulator::new(cap).run(c, &input.with_ancillas(init))?;
        let fidelity = fidelity_up_to_phase(&expected.with_ancillas(init), &out)?;
        let offset = init.iter().enumerate().filter(|(_, &b)| b).fold(0usize, |m, (j, _)| m | (1 << j));
        let restored = out
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(k, _)| k >> n == offset)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(Check { fidelity, ancilla_restored: restored, dense: true })
    } else {
        let mut s = SparseState::with_ancillas(&input, init);
        s.run(c)?;
        Ok(Check {
            fidelity: s.fidelity_with(&expected, init),
            ancilla_restored: s.ancilla_probability(n, init),
            dense: false,
        })
    }
}
