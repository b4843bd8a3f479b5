//! Lowering to uncontrolled single-qubit gates and CX.
//!
//! Negative controls are X-conjugated. Multi-controlled X uses a Toffoli
//! V-chain over borrowed (dirty) qubits when enough are idle, otherwise a
//! split over one borrowed qubit. Other multi-controlled unitaries go through
//! the square-root recursion. No qubits are added.

use crate::circuit::{dagger, mat_eq_up_to_phase, mat_mul, mats, zyz_angles, Circuit, ControlCondition, Gate, GateLabel, Mat2};

const EXACT_TOL: f64 = 1e-12;

/// Equivalent circuit (up to global phase) using only single-qubit gates and CX.
pub fn transpile(c: &Circuit) -> Circuit {
    let mut t = Lowering { width: c.width(), out: Vec::new() };
    for g in c.gates() {
        t.gate(g);
    }
    let mut out = Circuit::new(c.main_qubits(), c.ancilla_init().to_vec());
    out.extend(t.out).expect("lowered gates stay in range");
    out
}

fn close(a: &Mat2, b: &Mat2) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() < EXACT_TOL))
}

/// Principal square root of a 2×2 unitary.
fn sqrt_unitary(m: &Mat2) -> Mat2 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let tr = m[0][0] + m[1][1];
    let s = det.sqrt();
    let s = if (tr + 2.0 * s).norm() >= (tr - 2.0 * s).norm() { s } else { -s };
    let t = (tr + 2.0 * s).sqrt();
    [[(m[0][0] + s) / t, m[0][1] / t], [m[1][0] / t, (m[1][1] + s) / t]]
}

struct Lowering {
    width: usize,
    out: Vec<Gate>,
}

impl Lowering {
    fn single(&mut self, label: GateLabel, m: Mat2, t: usize) {
        if mat_eq_up_to_phase(&m, &mats::identity(), EXACT_TOL) {
            return;
        }
        self.out.push(Gate { label, matrix: m, controls: ControlCondition::new(), target: t });
    }

    fn named(&mut self, label: GateLabel, t: usize) {
        self.out.push(Gate::named(label, t));
    }

    fn cx(&mut self, c: usize, t: usize) {
        self.out.push(Gate::cx(c, t));
    }

    fn gate(&mut self, g: &Gate) {
        let neg: Vec<usize> = g.controls.terms().iter().filter(|t| !t.1).map(|t| t.0).collect();
        for &q in &neg {
            self.named(GateLabel::X, q);
        }
        let cs: Vec<usize> = g.controls.qubits().collect();
        if close(&g.matrix, &mats::x()) {
            self.mcx(&cs, g.target);
        } else if cs.is_empty() {
            self.single(g.label.clone(), g.matrix, g.target);
        } else {
            self.mcu(&cs, &g.matrix, g.target);
        }
        for &q in &neg {
            self.named(GateLabel::X, q);
        }
    }

    /// Controlled-`m` with two CX: `m = e^{ia} A·X·B·X·C` with `ABC = I`.
    fn cu(&mut self, c: usize, m: &Mat2, t: usize) {
        if close(m, &mats::x()) {
            return self.cx(c, t);
        }
        let (alpha, theta, phi, lambda) = zyz_angles(m);
        let a = mat_mul(&mats::rz(phi), &mats::ry(theta / 2.0));
        let b = mat_mul(&mats::ry(-theta / 2.0), &mats::rz(-(lambda + phi) / 2.0));
        let cm = mats::rz((lambda - phi) / 2.0);
        self.single(GateLabel::U, cm, t);
        self.cx(c, t);
        self.single(GateLabel::U, b, t);
        self.cx(c, t);
        self.single(GateLabel::U, a, t);
        let ph = alpha + (phi + lambda) / 2.0;
        let p = mats::phase(ph);
        if !close(&p, &mats::identity()) {
            self.out.push(Gate { label: GateLabel::P(ph), matrix: p, controls: ControlCondition::new(), target: c });
        }
    }

    fn toffoli(&mut self, a: usize, b: usize, t: usize) {
        use GateLabel::{Tdg, H, T};
        self.named(H, t);
        self.cx(b, t);
        self.named(Tdg, t);
        self.cx(a, t);
        self.named(T, t);
        self.cx(b, t);
        self.named(Tdg, t);
        self.cx(a, t);
        self.named(T, b);
        self.named(T, t);
        self.named(H, t);
        self.cx(a, b);
        self.named(T, a);
        self.named(Tdg, b);
        self.cx(a, b);
    }

    fn idle(&self, busy: &[usize], t: usize) -> Vec<usize> {
        (0..self.width).filter(|q| *q != t && !busy.contains(q)).collect()
    }

    fn mcx(&mut self, cs: &[usize], t: usize) {
        match cs.len() {
            0 => return self.named(GateLabel::X, t),
            1 => return self.cx(cs[0], t),
            2 => return self.toffoli(cs[0], cs[1], t),
            _ => {}
        }
        let k = cs.len();
        let idle = self.idle(cs, t);
        if idle.len() >= k - 2 {
            self.v_chain(cs, &idle[..k - 2], t);
        } else if let Some(&d) = idle.first() {
            // Two halves joined through one borrowed qubit; each half finds
            // enough idle qubits among the other half.
            let m1 = k.div_ceil(2);
            let (lo, hi) = cs.split_at(m1);
            let mut hi = hi.to_vec();
            hi.push(d);
            for _ in 0..2 {
                self.mcx(lo, d);
                self.mcx(&hi, t);
            }
        } else {
            self.mcu(cs, &mats::x(), t);
        }
    }

    /// `k`-controlled X with `k - 2` borrowed qubits, `4(k - 2)` Toffolis.
    fn v_chain(&mut self, cs: &[usize], anc: &[usize], t: usize) {
        let k = cs.len();
        // Step j computes into anc[j] from cs[j + 2] and the previous link.
        let link = |j: usize| -> (usize, usize, usize) {
            if j == 0 {
                (cs[0], cs[1], anc[0])
            } else {
                (cs[j + 1], anc[j - 1], anc[j])
            }
        };
        let top = (cs[k - 1], anc[k - 3], t);
        for _ in 0..2 {
            self.toffoli(top.0, top.1, top.2);
            for j in (1..k - 2).rev() {
                let (a, b, c) = link(j);
                self.toffoli(a, b, c);
            }
            let (a, b, c) = link(0);
            self.toffoli(a, b, c);
            for j in 1..k - 2 {
                let (a, b, c) = link(j);
                self.toffoli(a, b, c);
            }
        }
    }

    /// `C^k(m)` for `k >= 1`: `C(V)`, `C^{k-1}X`, `C(V†)`, `C^{k-1}X`, `C^{k-1}(V)` with `V² = m`.
    fn mcu(&mut self, cs: &[usize], m: &Mat2, t: usize) {
        if close(m, &mats::identity()) {
            return;
        }
        if cs.len() == 1 {
            return self.cu(cs[0], m, t);
        }
        let (last, rest) = cs.split_last().expect("at least two controls");
        let v = sqrt_unitary(m);
        self.cu(*last, &v, t);
        self.mcx(rest, *last);
        self.cu(*last, &dagger(&v), t);
        self.mcx(rest, *last);
        self.mcu(rest, &v, t);
    }
}
