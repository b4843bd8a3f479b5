//! Local invertible maps: a scalar times a tensor product of `X^b P(θ)` factors.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::ANGLE_TOL;

/// Which single-qubit factors edge labels may carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// Every factor is the identity; a plain weighted decision diagram.
    ScalarOnly,
    /// Factors drawn from `{I, X, Z, XZ}`.
    Pauli,
    /// Factors `X^b P(θ)` with arbitrary `θ`.
    XP,
}

impl GroupKind {
    pub fn allows_x(self) -> bool {
        !matches!(self, GroupKind::ScalarOnly)
    }

    /// Whether `P(theta)` is a member of the group.
    pub fn allows_phase(self, theta: f64) -> bool {
        match self {
            GroupKind::ScalarOnly => angle_eq(theta, 0.0),
            GroupKind::Pauli => angle_eq(theta, 0.0) || angle_eq(theta, PI),
            GroupKind::XP => true,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::ScalarOnly => "scalar",
            GroupKind::Pauli => "pauli",
            GroupKind::XP => "xp",
        })
    }
}

impl std::str::FromStr for GroupKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "scalar" | "scalaronly" => Ok(GroupKind::ScalarOnly),
            "pauli" => Ok(GroupKind::Pauli),
            "xp" => Ok(GroupKind::XP),
            other => Err(format!("unknown group '{other}' (expected scalar, pauli or xp)")),
        }
    }
}

/// Map an angle into `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    // Snap values that round to the excluded endpoint.
    if (t + PI).abs() < 1e-15 {
        t = PI;
    }
    t
}

/// Angles equal modulo 2π, within [`ANGLE_TOL`].
pub fn angle_eq(a: f64, b: f64) -> bool {
    (C64::from_polar(1.0, a) - C64::from_polar(1.0, b)).norm() <= ANGLE_TOL
}

/// One tensor factor `X^x · diag(1, e^{iθ})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimFactor {
    pub x: bool,
    pub theta: f64,
}

impl Default for LimFactor {
    fn default() -> Self {
        LimFactor::IDENTITY
    }
}

impl LimFactor {
    pub const IDENTITY: LimFactor = LimFactor { x: false, theta: 0.0 };
    pub const X: LimFactor = LimFactor { x: true, theta: 0.0 };

    pub fn new(x: bool, theta: f64) -> Self {
        LimFactor { x, theta: normalize_angle(theta) }
    }

    pub fn phase(theta: f64) -> Self {
        LimFactor::new(false, theta)
    }

    pub fn is_identity(&self) -> bool {
        !self.x && angle_eq(self.theta, 0.0)
    }

    pub fn approx_eq(&self, other: &LimFactor) -> bool {
        self.x == other.x && angle_eq(self.theta, other.theta)
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let e = C64::from_polar(1.0, self.theta);
        if self.x {
            [[z, e], [one, z]]
        } else {
            [[one, z], [z, e]]
        }
    }

    /// Matrix of the inverse (equal to the adjoint).
    pub fn dagger_matrix(&self) -> [[C64; 2]; 2] {
        let m = self.matrix();
        [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
    }

    /// `self · other`, returned as a phase and a factor.
    pub fn compose(&self, other: &LimFactor) -> (C64, LimFactor) {
        if !other.x {
            (C64::new(1.0, 0.0), LimFactor::new(self.x, self.theta + other.theta))
        } else {
            // X^a P(α) X P(β) = e^{iα} X^{a⊕1} P(β−α)
            (
                C64::from_polar(1.0, self.theta),
                LimFactor::new(!self.x, other.theta - self.theta),
            )
        }
    }

    /// Inverse as a phase and a factor.
    pub fn inverse(&self) -> (C64, LimFactor) {
        if self.x {
            (C64::from_polar(1.0, -self.theta), LimFactor::new(true, self.theta))
        } else {
            (C64::new(1.0, 0.0), LimFactor::new(false, -self.theta))
        }
    }

    fn apply_pair(&self, a0: C64, a1: C64) -> (C64, C64) {
        let b1 = a1 * C64::from_polar(1.0, self.theta);
        if self.x {
            (b1, a0)
        } else {
            (a0, b1)
        }
    }
}

impl fmt::Display for LimFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if angle_eq(self.theta, 0.0) {
            None
        } else if angle_eq(self.theta, PI) {
            Some("Z".to_string())
        } else if angle_eq(self.theta, PI / 2.0) {
            Some("S".to_string())
        } else if angle_eq(self.theta, -PI / 2.0) {
            Some("Sdg".to_string())
        } else if angle_eq(self.theta, PI / 4.0) {
            Some("T".to_string())
        } else if angle_eq(self.theta, -PI / 4.0) {
            Some("Tdg".to_string())
        } else {
            Some(format!("P({:.4})", self.theta))
        };
        match (self.x, p) {
            (false, None) => f.write_str("I"),
            (true, None) => f.write_str("X"),
            (false, Some(p)) => f.write_str(&p),
            (true, Some(p)) => write!(f, "X{p}"),
        }
    }
}

/// `scalar · F_{k-1} ⊗ … ⊗ F_0`; `factors[i]` acts on qubit `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lim {
    pub scalar: C64,
    pub factors: Vec<LimFactor>,
}

impl Lim {
    pub fn identity(width: usize) -> Self {
        Lim { scalar: C64::new(1.0, 0.0), factors: vec![LimFactor::IDENTITY; width] }
    }

    pub fn scalar(scalar: C64, width: usize) -> Self {
        Lim { scalar, factors: vec![LimFactor::IDENTITY; width] }
    }

    pub fn zero() -> Self {
        Lim { scalar: C64::new(0.0, 0.0), factors: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.factors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.scalar == C64::new(0.0, 0.0)
    }

    /// True when every factor is the identity (the scalar is not inspected).
    pub fn factors_trivial(&self) -> bool {
        self.factors.iter().all(LimFactor::is_identity)
    }

    pub fn is_identity(&self) -> bool {
        (self.scalar - 1.0).norm() <= crate::MERGE_TOL && self.factors_trivial()
    }

    /// Bitmask of factors carrying an X.
    pub fn x_mask(&self) -> u64 {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| f.x)
            .fold(0u64, |m, (i, _)| m | (1u64 << i))
    }

    /// Tolerant equality on scalar and factors.
    pub fn approx_eq(&self, other: &Lim) -> bool {
        self.factors.len() == other.factors.len()
            && (self.scalar - other.scalar).norm() <= crate::MERGE_TOL
            && self.factors.iter().zip(&other.factors).all(|(a, b)| a.approx_eq(b))
    }

    /// `self · other`. Both must have the same width.
    pub fn compose(&self, other: &Lim) -> Lim {
        assert_eq!(self.width(), other.width(), "LIM width mismatch");
        let mut scalar = self.scalar * other.scalar;
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| {
                let (ph, f) = a.compose(b);
                scalar *= ph;
                f
            })
            .collect();
        Lim { scalar, factors }
    }

    /// Inverse map. Panics on the zero LIM.
    pub fn inverse(&self) -> Lim {
        assert!(!self.is_zero(), "zero LIM has no inverse");
        let mut scalar = 1.0 / self.scalar;
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let (ph, g) = f.inverse();
                scalar *= ph;
                g
            })
            .collect();
        Lim { scalar, factors }
    }

    /// Prepend a factor for a new top qubit.
    pub fn extend_top(&self, top: LimFactor) -> Lim {
        let mut factors = self.factors.clone();
        factors.push(top);
        Lim { scalar: self.scalar, factors }
    }

    pub fn scaled(&self, s: C64) -> Lim {
        Lim { scalar: self.scalar * s, factors: self.factors.clone() }
    }

    /// Apply to a dense vector of `2^width` amplitudes in place.
    pub fn apply(&self, amps: &mut [C64]) {
        assert_eq!(amps.len(), 1usize << self.width(), "LIM width does not match vector");
        for (q, f) in self.factors.iter().enumerate() {
            if f.is_identity() {
                continue;
            }
            let bit = 1usize << q;
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let (a, b) = f.apply_pair(amps[i], amps[i | bit]);
                    amps[i] = a;
                    amps[i | bit] = b;
                }
            }
        }
        if self.scalar != C64::new(1.0, 0.0) {
            for a in amps.iter_mut() {
                *a *= self.scalar;
            }
        }
    }
}

impl fmt::Display for Lim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.scalar;
        if s.im.abs() < 1e-12 {
            write!(f, "{:.4}", s.re)?;
        } else {
            write!(f, "({:.4}{:+.4}i)", s.re, s.im)?;
        }
        if !self.factors_trivial() {
            let parts: Vec<String> = self.factors.iter().rev().map(|x| x.to_string()).collect();
            write!(f, " {}", parts.join("⊗"))?;
        }
        Ok(())
    }
}
