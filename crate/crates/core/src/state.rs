//! Dense state vectors and their JSON file formats.

use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// `2^n` amplitudes; bit `i` of the index is qubit `q_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Format(format!("length {len} is not a power of two")));
        }
        Ok(StateVector { num_qubits: len.trailing_zeros() as usize, amps })
    }

    pub fn zero_state(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1usize << num_qubits];
        amps[index] = C64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(num_qubits: usize) -> Self {
        let mut s = Self::basis(num_qubits, 0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        s.amps[0] = C64::new(h, 0.0);
        let last = s.amps.len() - 1;
        s.amps[last] += C64::new(h, 0.0);
        s
    }

    /// Tensor product of single-qubit states; `qubits[i]` is qubit `q_i`.
    pub fn product(qubits: &[[C64; 2]]) -> Self {
        let mut amps = vec![C64::new(1.0, 0.0)];
        for q in qubits {
            let mut next = Vec::with_capacity(amps.len() * 2);
            next.extend(amps.iter().map(|a| a * q[0]));
            next.extend(amps.iter().map(|a| a * q[1]));
            amps = next;
        }
        StateVector { num_qubits: qubits.len(), amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// `|anc⟩ ⊗ |self⟩` with the ancilla bits placed above the main register.
    pub fn with_ancillas(&self, init: &[bool]) -> StateVector {
        let a = init.len();
        let offset = init
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0usize, |m, (i, _)| m | (1 << i))
            << self.num_qubits;
        let mut amps = vec![C64::new(0.0, 0.0); 1usize << (self.num_qubits + a)];
        for (k, v) in self.amps.iter().enumerate() {
            amps[offset | k] = *v;
        }
        StateVector { num_qubits: self.num_qubits + a, amps }
    }

    pub fn to_json(&self) -> Value {
        let amps: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        serde_json::json!({
            "num_qubits": self.num_qubits,
            "format": "dense",
            "amplitudes": amps,
        })
    }

    /// Parse either the dense or the sparse file layout.
    pub fn from_json(v: &Value) -> Result<Self> {
        let file: StateFile = serde_json::from_value(v.clone())
            .map_err(|e| Error::Format(format!("state file: {e}")))?;
        file.into_state()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Error::Format(format!("state file: {e}")))?;
        Self::from_json(&v)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    num_qubits: usize,
    #[serde(default = "dense_tag")]
    format: String,
    #[serde(default)]
    amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    entries: Option<Vec<(String, [f64; 2])>>,
}

fn dense_tag() -> String {
    "dense".to_string()
}

impl StateFile {
    fn into_state(self) -> Result<StateVector> {
        let n = self.num_qubits;
        if n > 30 {
            return Err(Error::Format(format!("{n} qubits is too large for a dense state")));
        }
        match self.format.as_str() {
            "dense" => {
                let amps = self
                    .amplitudes
                    .ok_or_else(|| Error::Format("dense state without 'amplitudes'".into()))?;
                if amps.len() != 1usize << n {
                    return Err(Error::Format(format!(
                        "expected {} amplitudes for {n} qubits, found {}",
                        1usize << n,
                        amps.len()
                    )));
                }
                StateVector::new(amps.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            }
            "sparse" => {
                let entries = self
                    .entries
                    .ok_or_else(|| Error::Format("sparse state without 'entries'".into()))?;
                let mut amps = vec![C64::new(0.0, 0.0); 1usize << n];
                for (bits, [re, im]) in entries {
                    if bits.len() != n || !bits.chars().all(|c| c == '0' || c == '1') {
                        return Err(Error::Format(format!(
                            "basis label '{bits}' is not a {n}-bit string"
                        )));
                    }
                    let k = if n == 0 { 0 } else { usize::from_str_radix(&bits, 2).unwrap() };
                    amps[k] += C64::new(re, im);
                }
                StateVector::new(amps)
            }
            other => Err(Error::Format(format!("unknown state format '{other}'"))),
        }
    }
}
