//! Gate-level IR: single-qubit unitaries under positive/negative controls.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = [[C64; 2]; 2];

const UNITARY_TOL: f64 = 1e-10;

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut r = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

pub fn dagger(m: &Mat2) -> Mat2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

pub fn is_unitary(m: &Mat2) -> bool {
    let p = mat_mul(&dagger(m), m);
    (0..2).all(|i| {
        (0..2).all(|j| {
            let id = if i == j { 1.0 } else { 0.0 };
            (p[i][j] - id).norm() < UNITARY_TOL
        })
    })
}

/// Equal up to a global phase.
pub fn mat_eq_up_to_phase(a: &Mat2, b: &Mat2, tol: f64) -> bool {
    // Phase from the largest entry of b.
    let (mut bi, mut bj) = (0, 0);
    for i in 0..2 {
        for j in 0..2 {
            if b[i][j].norm() > b[bi][bj].norm() {
                bi = i;
                bj = j;
            }
        }
    }
    if b[bi][bj].norm() < 1e-12 {
        return false;
    }
    let ph = a[bi][bj] / b[bi][bj];
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - ph * b[i][j]).norm() <= tol))
}

pub mod mats {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    pub fn identity() -> Mat2 {
        [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]]
    }
    pub fn x() -> Mat2 {
        [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]
    }
    pub fn h() -> Mat2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [[c(s, 0.), c(s, 0.)], [c(s, 0.), c(-s, 0.)]]
    }
    pub fn phase(theta: f64) -> Mat2 {
        [[c(1., 0.), c(0., 0.)], [c(0., 0.), C64::from_polar(1.0, theta)]]
    }
    pub fn ry(theta: f64) -> Mat2 {
        let (s, co) = (theta / 2.0).sin_cos();
        [[c(co, 0.), c(-s, 0.)], [c(s, 0.), c(co, 0.)]]
    }
    pub fn rz(theta: f64) -> Mat2 {
        [[C64::from_polar(1.0, -theta / 2.0), c(0., 0.)], [c(0., 0.), C64::from_polar(1.0, theta / 2.0)]]
    }
    pub fn diag(a: C64, b: C64) -> Mat2 {
        [[a, c(0., 0.)], [c(0., 0.), b]]
    }
    /// `u(θ, φ, λ)` in the OpenQASM convention.
    pub fn u(theta: f64, phi: f64, lambda: f64) -> Mat2 {
        let (s, co) = (theta / 2.0).sin_cos();
        [
            [c(co, 0.), -C64::from_polar(s, lambda)],
            [C64::from_polar(s, phi), C64::from_polar(co, phi + lambda)],
        ]
    }
}

/// `(α, θ, φ, λ)` with `m = e^{iα} u(θ, φ, λ)`.
pub fn zyz_angles(m: &Mat2) -> (f64, f64, f64, f64) {
    let a = m[0][0].norm();
    let b = m[1][0].norm();
    let theta = 2.0 * b.atan2(a);
    if b < 1e-12 {
        let alpha = m[0][0].arg();
        (alpha, 0.0, 0.0, m[1][1].arg() - alpha)
    } else if a < 1e-12 {
        let alpha = m[1][0].arg();
        (alpha, PI, 0.0, (-m[0][1]).arg() - alpha)
    } else {
        let alpha = m[0][0].arg();
        (alpha, theta, m[1][0].arg() - alpha, (-m[0][1]).arg() - alpha)
    }
}

/// Name tag for a gate. The matrix is authoritative; named labels must match it.
#[derive(Clone, Debug, PartialEq)]
pub enum GateLabel {
    X,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    P(f64),
    Ry(f64),
    /// Two-amplitude merging rotation.
    R,
    Rdg,
    U,
}

impl GateLabel {
    pub fn inverse(&self) -> GateLabel {
        use GateLabel::*;
        match self {
            X => X,
            Z => Z,
            H => H,
            S => Sdg,
            Sdg => S,
            T => Tdg,
            Tdg => T,
            P(t) => P(-t),
            Ry(t) => Ry(-t),
            R => Rdg,
            Rdg => R,
            U => U,
        }
    }

    /// Matrix implied by a named label; `None` for data-carrying labels.
    pub fn named_matrix(&self) -> Option<Mat2> {
        use GateLabel::*;
        Some(match self {
            X => mats::x(),
            Z => mats::phase(PI),
            H => mats::h(),
            S => mats::phase(PI / 2.0),
            Sdg => mats::phase(-PI / 2.0),
            T => mats::phase(PI / 4.0),
            Tdg => mats::phase(-PI / 4.0),
            P(t) => mats::phase(*t),
            Ry(t) => mats::ry(*t),
            R | Rdg | U => return None,
        })
    }

    /// Best label for a diagonal phase gate.
    pub fn for_phase(theta: f64) -> GateLabel {
        use crate::lim::angle_eq;
        if angle_eq(theta, PI) {
            GateLabel::Z
        } else if angle_eq(theta, PI / 2.0) {
            GateLabel::S
        } else if angle_eq(theta, -PI / 2.0) {
            GateLabel::Sdg
        } else if angle_eq(theta, PI / 4.0) {
            GateLabel::T
        } else if angle_eq(theta, -PI / 4.0) {
            GateLabel::Tdg
        } else {
            GateLabel::P(theta)
        }
    }
}

impl fmt::Display for GateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GateLabel::*;
        match self {
            X => f.write_str("X"),
            Z => f.write_str("Z"),
            H => f.write_str("H"),
            S => f.write_str("S"),
            Sdg => f.write_str("Sdg"),
            T => f.write_str("T"),
            Tdg => f.write_str("Tdg"),
            P(t) => write!(f, "P({t})"),
            Ry(t) => write!(f, "Ry({t})"),
            R => f.write_str("R"),
            Rdg => f.write_str("Rdg"),
            U => f.write_str("U"),
        }
    }
}

impl FromStr for GateLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use GateLabel::*;
        let param = |prefix: &str| -> Option<Result<f64>> {
            s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')).map(|x| {
                x.parse::<f64>().map_err(|_| Error::Format(format!("bad gate parameter in '{s}'")))
            })
        };
        if let Some(t) = param("P(") {
            return Ok(P(t?));
        }
        if let Some(t) = param("Ry(") {
            return Ok(Ry(t?));
        }
        Ok(match s {
            "X" => X,
            "Z" => Z,
            "H" => H,
            "S" => S,
            "Sdg" => Sdg,
            "T" => T,
            "Tdg" => Tdg,
            "R" => R,
            "Rdg" => Rdg,
            "U" => U,
            _ => return Err(Error::Format(format!("unknown gate label '{s}'"))),
        })
    }
}

impl Serialize for GateLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GateLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Conjunction of `(qubit, polarity)` terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<(usize, u8)>", try_from = "Vec<(usize, u8)>")]
pub struct ControlCondition {
    terms: Vec<(usize, bool)>,
}

impl ControlCondition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, bool)>) -> Result<Self> {
        let mut c = Self::new();
        for (q, p) in terms {
            c.push(q, p)?;
        }
        Ok(c)
    }

    pub fn single(q: usize, polarity: bool) -> Self {
        ControlCondition { terms: vec![(q, polarity)] }
    }

    /// Add a term; repeating an identical term is a no-op.
    pub fn push(&mut self, q: usize, polarity: bool) -> Result<()> {
        match self.terms.iter().find(|(x, _)| *x == q) {
            Some(&(_, p)) if p == polarity => Ok(()),
            Some(_) => Err(Error::InvalidControl(format!("qubit {q} required both 0 and 1"))),
            None => {
                self.terms.push((q, polarity));
                Ok(())
            }
        }
    }

    pub fn with(&self, q: usize, polarity: bool) -> Result<Self> {
        let mut c = self.clone();
        c.push(q, polarity)?;
        Ok(c)
    }

    pub fn extend(&mut self, other: &ControlCondition) -> Result<()> {
        for &(q, p) in &other.terms {
            self.push(q, p)?;
        }
        Ok(())
    }

    pub fn terms(&self) -> &[(usize, bool)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains_qubit(&self, q: usize) -> bool {
        self.terms.iter().any(|(x, _)| *x == q)
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|(q, _)| *q)
    }

    /// Whether a basis index satisfies every term.
    pub fn holds(&self, index: usize) -> bool {
        self.terms.iter().all(|&(q, p)| ((index >> q) & 1 == 1) == p)
    }
}

impl From<ControlCondition> for Vec<(usize, u8)> {
    fn from(c: ControlCondition) -> Self {
        c.terms.into_iter().map(|(q, p)| (q, p as u8)).collect()
    }
}

impl TryFrom<Vec<(usize, u8)>> for ControlCondition {
    type Error = Error;

    fn try_from(v: Vec<(usize, u8)>) -> Result<Self> {
        let mut c = ControlCondition::new();
        for (q, p) in v {
            if p > 1 {
                return Err(Error::Format(format!("control polarity {p} is not 0 or 1")));
            }
            c.push(q, p == 1)?;
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub label: GateLabel,
    pub matrix: Mat2,
    pub controls: ControlCondition,
    pub target: usize,
}

impl Gate {
    pub fn new(label: GateLabel, matrix: Mat2, controls: ControlCondition, target: usize) -> Result<Self> {
        let g = Gate { label, matrix, controls, target };
        g.validate()?;
        Ok(g)
    }

    /// Uncontrolled gate with a named label.
    pub fn named(label: GateLabel, target: usize) -> Self {
        let m = label.named_matrix().expect("named label");
        Gate { label, matrix: m, controls: ControlCondition::new(), target }
    }

    pub fn x(target: usize) -> Self {
        Self::named(GateLabel::X, target)
    }

    pub fn mcx(controls: ControlCondition, target: usize) -> Result<Self> {
        Gate::new(GateLabel::X, mats::x(), controls, target)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate {
            label: GateLabel::X,
            matrix: mats::x(),
            controls: ControlCondition::single(control, true),
            target,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_unitary(&self.matrix) {
            return Err(Error::Domain(format!("gate {} is not unitary", self.label)));
        }
        if let Some(m) = self.label.named_matrix() {
            if !mat_eq_up_to_phase(&m, &self.matrix, 1e-9) {
                return Err(Error::Domain(format!("label {} does not match the matrix", self.label)));
            }
        }
        if self.controls.contains_qubit(self.target) {
            return Err(Error::InvalidControl(format!("target {} is also a control", self.target)));
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.controls.len() + 1
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.qubits().chain(std::iter::once(self.target))
    }

    pub fn max_qubit(&self) -> usize {
        self.qubits().max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            label: self.label.inverse(),
            matrix: dagger(&self.matrix),
            controls: self.controls.clone(),
            target: self.target,
        }
    }

    pub fn with_extra_control(&self, extra: &ControlCondition) -> Result<Gate> {
        if extra.contains_qubit(self.target) {
            return Err(Error::InvalidControl(format!(
                "extra control on qubit {} overlaps the gate target",
                self.target
            )));
        }
        let mut g = self.clone();
        g.controls.extend(extra)?;
        Ok(g)
    }

    /// Single positive control with an X matrix.
    pub fn is_cx(&self) -> bool {
        self.controls.len() == 1
            && self.controls.terms()[0].1
            && (0..2).all(|i| (0..2).all(|j| (self.matrix[i][j] - mats::x()[i][j]).norm() < 1e-12))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = "C".repeat(self.controls.len());
        write!(f, "{}{}{} q{}", prefix, if prefix.is_empty() { "" } else { "-" }, self.label, self.target)?;
        if !self.controls.is_empty() {
            let cs: Vec<String> = self
                .controls
                .terms()
                .iter()
                .map(|(q, p)| format!("{}q{q}", if *p { "" } else { "~" }))
                .collect();
            write!(f, " | {}", cs.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub by_arity: BTreeMap<usize, usize>,
    pub depth: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.by_arity.values().sum()
    }

    pub fn arity(&self, k: usize) -> usize {
        self.by_arity.get(&k).copied().unwrap_or(0)
    }

    pub fn at_least(&self, k: usize) -> usize {
        self.by_arity.range(k..).map(|(_, c)| c).sum()
    }

    pub fn multi_qubit(&self) -> usize {
        self.at_least(2)
    }

    /// Gates weighted by their arity.
    pub fn weighted(&self) -> usize {
        self.by_arity.iter().map(|(k, c)| k * c).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    main_qubits: usize,
    ancilla_init: Vec<bool>,
    gates: Vec<Gate>,
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    n: usize,
    ancillas: usize,
    ancilla_init: Vec<u8>,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(main_qubits: usize, ancilla_init: Vec<bool>) -> Self {
        Circuit { main_qubits, ancilla_init, gates: Vec::new() }
    }

    pub fn main_qubits(&self) -> usize {
        self.main_qubits
    }

    pub fn ancilla_qubits(&self) -> usize {
        self.ancilla_init.len()
    }

    pub fn ancilla_init(&self) -> &[bool] {
        &self.ancilla_init
    }

    pub fn width(&self) -> usize {
        self.main_qubits + self.ancilla_init.len()
    }

    /// Index of ancilla `k` in the full register.
    pub fn ancilla(&self, k: usize) -> usize {
        self.main_qubits + k
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn append_controlled(&mut self, g: Gate) -> Result<()> {
        let w = self.width();
        if let Some(q) = g.qubits().find(|&q| q >= w) {
            return Err(Error::QubitOutOfRange { qubit: q, width: w });
        }
        g.validate()?;
        self.gates.push(g);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.append_controlled(g)?;
        }
        Ok(())
    }

    pub fn with_extra_control(&self, extra: &ControlCondition) -> Result<Circuit> {
        let w = self.width();
        if let Some(q) = extra.qubits().find(|&q| q >= w) {
            return Err(Error::QubitOutOfRange { qubit: q, width: w });
        }
        let gates = self.gates.iter().map(|g| g.with_extra_control(extra)).collect::<Result<_>>()?;
        Ok(Circuit { main_qubits: self.main_qubits, ancilla_init: self.ancilla_init.clone(), gates })
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            main_qubits: self.main_qubits,
            ancilla_init: self.ancilla_init.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn counts(&self) -> GateCounts {
        let mut by_arity = BTreeMap::new();
        let mut layer = vec![0usize; self.width()];
        let mut depth = 0;
        for g in &self.gates {
            *by_arity.entry(g.arity()).or_insert(0) += 1;
            let l = 1 + g.qubits().map(|q| layer[q]).max().unwrap_or(0);
            for q in g.qubits() {
                layer[q] = l;
            }
            depth = depth.max(l);
        }
        GateCounts { by_arity, depth }
    }

    /// Only uncontrolled single-qubit gates and CX.
    pub fn is_transpiled(&self) -> bool {
        self.gates.iter().all(|g| g.controls.is_empty() || g.is_cx())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CircuitFile {
            n: self.main_qubits,
            ancillas: self.ancilla_init.len(),
            ancilla_init: self.ancilla_init.iter().map(|&b| b as u8).collect(),
            gates: self.gates.clone(),
        })
        .expect("circuit serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let f: CircuitFile = serde_json::from_value(v.clone())
            .map_err(|e| Error::Format(format!("circuit file: {e}")))?;
        if f.ancilla_init.len() != f.ancillas {
            return Err(Error::Format("ancilla_init length differs from ancillas".into()));
        }
        let mut c = Circuit::new(f.n, f.ancilla_init.iter().map(|&b| b != 0).collect());
        c.extend(f.gates)?;
        Ok(c)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("circuit serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Format(format!("circuit file: {e}")))?;
        Self::from_json(&v)
    }

    /// OpenQASM 2 over `u` and `cx`; ancillas starting in |1⟩ get an `x` first.
    pub fn to_qasm(&self) -> Result<String> {
        use std::fmt::Write as _;
        if let Some(g) = self.gates.iter().find(|g| !(g.controls.is_empty() || g.is_cx())) {
            return Err(Error::Untranspiled(g.to_string()));
        }
        let name = |q: usize| {
            if q < self.main_qubits {
                format!("q[{q}]")
            } else {
                format!("anc[{}]", q - self.main_qubits)
            }
        };
        let mut s = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(s, "qreg q[{}];", self.main_qubits);
        if !self.ancilla_init.is_empty() {
            let _ = writeln!(s, "qreg anc[{}];", self.ancilla_init.len());
        }
        for (k, &b) in self.ancilla_init.iter().enumerate() {
            if b {
                let _ = writeln!(s, "x anc[{k}];");
            }
        }
        for g in &self.gates {
            if g.controls.is_empty() {
                let (_, t, p, l) = zyz_angles(&g.matrix);
                let _ = writeln!(s, "u({t:.17},{p:.17},{l:.17}) {};", name(g.target));
            } else {
                let c = g.controls.terms()[0].0;
                let _ = writeln!(s, "cx {},{};", name(c), name(g.target));
            }
        }
        Ok(s)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
