//! Invariant checks shared by the property tests and the acceptance run.
//! Each returns `Err` with a description of the first violation.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsp_core::circuit::{mats, Mat2};
use qsp_core::sim::{
    apply_gate, check_circuit, default_depth, fidelity_up_to_phase, random_clifford_t_state, run, DEFAULT_QUBIT_CAP,
};
use qsp_core::synth::{prepare_state, rotation_from_ratio, synthesize, Algorithm};
use qsp_core::{transpile, Circuit, ControlCondition, Gate, GateLabel, GroupKind, LimTdd, StateVector};

pub type Check = Result<(), String>;

pub const GROUPS: [GroupKind; 3] = [GroupKind::ScalarOnly, GroupKind::Pauli, GroupKind::XP];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn build(v: &StateVector, g: GroupKind) -> Result<LimTdd, String> {
    LimTdd::from_statevector(v, g).map_err(|e| e.to_string())
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-ish random 2×2 unitary.
pub fn random_unitary(r: &mut ChaCha8Rng) -> Mat2 {
    let t = r.gen_range(0.0..std::f64::consts::PI);
    let p = r.gen_range(-3.2..3.2);
    let l = r.gen_range(-3.2..3.2);
    let g = C64::from_polar(1.0, r.gen_range(-3.2..3.2));
    let u = mats::u(t, p, l);
    [[u[0][0] * g, u[0][1] * g], [u[1][0] * g, u[1][1] * g]]
}

/// Random circuit on `width` qubits with up to `max_controls` mixed-polarity controls.
pub fn random_circuit(width: usize, gates: usize, max_controls: usize, seed: u64) -> Circuit {
    let mut r = rng(seed);
    let mut c = Circuit::new(width, Vec::new());
    for _ in 0..gates {
        let t = r.gen_range(0..width);
        let k = r.gen_range(0..=max_controls.min(width - 1));
        let mut others: Vec<usize> = (0..width).filter(|&q| q != t).collect();
        let mut ctl = ControlCondition::new();
        for _ in 0..k {
            let q = others.swap_remove(r.gen_range(0..others.len()));
            ctl.push(q, r.gen_bool(0.6)).unwrap();
        }
        let g = if r.gen_bool(0.3) {
            Gate::mcx(ctl, t).unwrap()
        } else {
            Gate::new(GateLabel::U, random_unitary(&mut r), ctl, t).unwrap()
        };
        c.append_controlled(g).unwrap();
    }
    c
}

/// Random state with a sprinkling of exact zeros and repeated blocks, so
/// that diagrams have something to merge.
pub fn structured_state(n: usize, seed: u64) -> StateVector {
    let mut r = rng(seed);
    let block = 1usize << r.gen_range(0..=n.min(3));
    let base: Vec<C64> = (0..block)
        .map(|_| if r.gen_bool(0.2) { C64::new(0.0, 0.0) } else { C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)) })
        .collect();
    let phases = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];
    let mut amps = Vec::with_capacity(1 << n);
    for _ in 0..(1usize << n) / block {
        let s = phases[r.gen_range(0..4)] * r.gen_range(0.2..1.5);
        let flip = r.gen_bool(0.3);
        for j in 0..block {
            let k = if flip { block - 1 - j } else { j };
            amps.push(base[k] * s);
        }
    }
    if amps.iter().all(|a| a.norm() == 0.0) {
        amps[0] = C64::new(1.0, 0.0);
    }
    StateVector::new(amps).unwrap()
}

fn dense_apply(c: &Circuit, s: &StateVector) -> StateVector {
    let mut s = s.clone();
    for g in c.gates() {
        apply_gate(&mut s, g).unwrap();
    }
    s
}

// Decision diagrams.

pub fn round_trip(v: &StateVector) -> Check {
    for g in GROUPS {
        let dd = build(v, g)?;
        let d = max_diff(dd.to_statevector().amplitudes(), v.amplitudes());
        ensure(d <= 1e-10, || format!("{g}: max amplitude error {d:e}"))?;
    }
    Ok(())
}

pub fn determinism(v: &StateVector) -> Check {
    for g in GROUPS {
        ensure(build(v, g)? == build(v, g)?, || format!("{g}: two builds differ"))?;
    }
    Ok(())
}

pub fn group_monotone(v: &StateVector) -> Check {
    let [s, p, x] = GROUPS.map(|g| build(v, g).map(|d| d.stats().total_nodes));
    let (s, p, x) = (s?, p?, x?);
    ensure(x <= p && p <= s, || format!("nodes xp {x}, pauli {p}, scalar {s}"))
}

pub fn iso_sound(v: &StateVector) -> Check {
    for g in GROUPS {
        let dd = build(v, g)?;
        let ids: Vec<_> = dd.node_ids().collect();
        for &a in &ids {
            for &b in &ids {
                if dd.level(a) != dd.level(b) {
                    continue;
                }
                if let Some(o) = dd.find_iso(a, b) {
                    let mut vb = dd.node_vector(b);
                    o.apply(&mut vb);
                    let d = max_diff(&vb, &dd.node_vector(a));
                    ensure(d <= 1e-9, || format!("{g}: iso({a:?}, {b:?}) = {o} off by {d:e}"))?;
                }
            }
        }
    }
    Ok(())
}

pub fn norms_consistent(v: &StateVector) -> Check {
    for g in GROUPS {
        let dd = build(v, g)?;
        let mut t = dd.norms();
        for id in dd.node_ids() {
            let dense = dd.node_vector(id).iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let got = dd.node_norm(id, &mut t);
            ensure((dense - got).abs() <= 1e-10, || format!("{g}: node {id:?} norm {got} vs {dense}"))?;
        }
    }
    Ok(())
}

// Circuits and simulation.

pub fn gates_unitary(c: &Circuit) -> Check {
    for g in c.gates() {
        ensure(qsp_core::circuit::is_unitary(&g.matrix), || format!("{g} not unitary"))?;
    }
    Ok(())
}

/// Full operator equality up to one global phase, column by column.
pub fn operators_equal(a: &Circuit, b: &Circuit) -> Check {
    let w = a.width();
    let mut phase: Option<C64> = None;
    for col in 0..1usize << w {
        let x = dense_apply(a, &StateVector::basis(w, col));
        let y = dense_apply(b, &StateVector::basis(w, col));
        if phase.is_none() {
            let (p, q) = x.amplitudes().iter().zip(y.amplitudes()).find(|(_, q)| q.norm() > 1e-3).expect("unit column");
            phase = Some(p / q);
        }
        let ph = phase.unwrap();
        ensure((ph.norm() - 1.0).abs() <= 1e-8, || format!("column {col}: moduli differ"))?;
        for (i, (p, q)) in x.amplitudes().iter().zip(y.amplitudes()).enumerate() {
            ensure((p - q * ph).norm() <= 1e-8, || format!("column {col}, row {i}: {p} vs {q}"))?;
        }
    }
    Ok(())
}

pub fn transpile_equivalent(c: &Circuit) -> Check {
    let t = transpile(c);
    ensure(t.is_transpiled(), || "transpiled circuit still has multi-controlled gates".into())?;
    operators_equal(c, &t)
}

pub fn inversion(c: &Circuit, seed: u64) -> Check {
    let s = qsp_core::sim::random_state(c.width(), seed);
    let back = dense_apply(&c.inverse(), &dense_apply(c, &s));
    let d = max_diff(back.amplitudes(), s.amplitudes());
    ensure(d <= 1e-10, || format!("inverse leaves error {d:e}"))
}

/// On states where `extra` holds the circuit acts as before; elsewhere as identity.
pub fn extra_control_law(c: &Circuit, extra: &ControlCondition, seed: u64) -> Check {
    let ec = c.with_extra_control(extra).map_err(|e| e.to_string())?;
    let s = qsp_core::sim::random_state(c.width(), seed);
    let ctl = dense_apply(&ec, &s);
    // Project the input on the two subspaces; each evolves independently.
    let split = |v: &StateVector, keep: bool| -> StateVector {
        let a = v.amplitudes().iter().enumerate().map(|(i, a)| if extra.holds(i) == keep { *a } else { C64::new(0.0, 0.0) });
        StateVector::new(a.collect()).unwrap()
    };
    let on = dense_apply(c, &split(&s, true));
    let off = split(&s, false);
    let want: Vec<C64> = on.amplitudes().iter().zip(off.amplitudes()).map(|(a, b)| a + b).collect();
    let d = max_diff(ctl.amplitudes(), &want);
    ensure(d <= 1e-10, || format!("subspace law off by {d:e}"))?;
    Ok(())
}

pub fn norm_preserved(c: &Circuit, seed: u64) -> Check {
    let s = qsp_core::sim::random_state(c.width(), seed);
    let out = run(c, &s).map_err(|e| e.to_string())?;
    ensure((out.norm() - 1.0).abs() <= 1e-10, || format!("norm {}", out.norm()))
}

pub fn linear(c: &Circuit, seed: u64) -> Check {
    let w = c.width();
    let s1 = qsp_core::sim::random_state(w, seed);
    let s2 = qsp_core::sim::random_state(w, seed ^ 0x9e37);
    let (a, b) = (C64::new(0.3, -0.8), C64::new(-1.1, 0.25));
    let mix = |x: &StateVector, y: &StateVector| -> Vec<C64> {
        x.amplitudes().iter().zip(y.amplitudes()).map(|(p, q)| a * p + b * q).collect()
    };
    let lhs = dense_apply(c, &StateVector::new(mix(&s1, &s2)).unwrap());
    let rhs = mix(&dense_apply(c, &s1), &dense_apply(c, &s2));
    let d = max_diff(lhs.amplitudes(), &rhs);
    ensure(d <= 1e-10, || format!("linearity off by {d:e}"))
}

pub fn rotation_merges(w0: C64, w1: C64) -> Check {
    let u = rotation_from_ratio(w1 / w0);
    let a = u[0][0] * w0 + u[0][1] * w1;
    let b = u[1][0] * w0 + u[1][1] * w1;
    let want = (w0.norm_sqr() + w1.norm_sqr()).sqrt();
    // The surviving component keeps w0's phase.
    let want = C64::from_polar(want, w0.arg());
    ensure((a - want).norm() <= 1e-10 * (1.0 + want.norm()) && b.norm() <= 1e-10 * (1.0 + want.norm()), || {
        format!("({w0}, {w1}) -> ({a}, {b})")
    })
}

// Synthesis.

pub const BUDGETS: [usize; 4] = [2, 3, 5, 10];

pub fn algorithms() -> Vec<Algorithm> {
    let mut v = vec![Algorithm::NoAncilla, Algorithm::OneAncilla, Algorithm::Full];
    v.extend(BUDGETS.map(Algorithm::Budget));
    v
}

/// Every algorithm disentangles and restores its ancillas.
pub fn disentangles(v: &StateVector, g: GroupKind) -> Check {
    let v = v.clone().normalized();
    let dd = build(&v, g)?;
    let zero = StateVector::zero_state(v.num_qubits());
    for a in algorithms() {
        let c = synthesize(&dd, a).map_err(|e| e.to_string())?.circuit;
        let chk = check_circuit(&c, &v, &zero, DEFAULT_QUBIT_CAP).map_err(|e| e.to_string())?;
        ensure(chk.fidelity >= 1.0 - 1e-10, || format!("{g} {a}: fidelity {}", chk.fidelity))?;
        ensure(chk.ancilla_restored >= 1.0 - 1e-10, || format!("{g} {a}: ancillas {}", chk.ancilla_restored))?;
    }
    Ok(())
}

/// All preparation circuits produce the same main-register state.
pub fn algorithms_agree(v: &StateVector, g: GroupKind) -> Check {
    let n = v.num_qubits();
    let mut outs: Vec<(Algorithm, StateVector)> = Vec::new();
    for a in algorithms() {
        let c = prepare_state(v, a, g).map_err(|e| e.to_string())?;
        if c.width() > DEFAULT_QUBIT_CAP {
            continue;
        }
        let full = run(&c, &StateVector::zero_state(n).with_ancillas(c.ancilla_init())).map_err(|e| e.to_string())?;
        // Ancillas are restored, so the main register is the slice at the init offset.
        let off = c.ancilla_init().iter().enumerate().filter(|(_, &b)| b).fold(0usize, |m, (j, _)| m | (1 << j)) << n;
        let main = StateVector::new(full.amplitudes()[off..off + (1 << n)].to_vec()).unwrap();
        outs.push((a, main));
    }
    for (a, s) in &outs[1..] {
        let f = fidelity_up_to_phase(&outs[0].1, s).map_err(|e| e.to_string())?;
        ensure(f >= 1.0 - 1e-8, || format!("{} vs {a}: fidelity {f}", outs[0].0))?;
    }
    Ok(())
}

/// Pre-transpile counts of the no-ancilla algorithm against the per-arity
/// budgets `p(n + 2 - s)` for `s >= 2` and `n + 1` single-qubit gates. A
/// budgeted `s`-qubit slot may hold a smaller gate, so the check is
/// cumulative: gates of arity at least `s` fit the budgets of arities `>= s`.
pub fn no_ancilla_bounds(v: &StateVector) -> Check {
    let dd = build(v, GroupKind::XP)?;
    let n = dd.num_qubits();
    let p = dd.stats().reduced_paths as usize;
    let k = synthesize(&dd, Algorithm::NoAncilla).map_err(|e| e.to_string())?.circuit.counts();
    let budget = |s: usize| if s == 1 { n + 1 } else { p * (n + 2 - s) };
    ensure(k.at_least(n + 1) == 0, || format!("gate wider than {n} qubits"))?;
    for s in 1..=n {
        let allowed: usize = (s..=n).map(budget).sum();
        ensure(k.at_least(s) <= allowed, || format!("arity >= {s}: {} > {allowed}", k.at_least(s)))?;
    }
    Ok(())
}

pub fn full_bounds(v: &StateVector) -> Check {
    let dd = build(v, GroupKind::XP)?;
    let n = dd.num_qubits();
    let m = dd.stats().non_terminal;
    let k = synthesize(&dd, Algorithm::Full).map_err(|e| e.to_string())?.circuit.counts();
    ensure(k.arity(3) <= (3 * n + 4) * m && k.arity(2) <= m && k.arity(1) <= n && k.at_least(4) == 0, || {
        format!("m={m}: arity-1 {} arity-2 {} arity-3 {}", k.arity(1), k.arity(2), k.arity(3))
    })
}

/// The persisted circuit re-verifies after a JSON round trip.
pub fn json_reverifies(v: &StateVector, a: Algorithm) -> Check {
    let c = prepare_state(v, a, GroupKind::XP).map_err(|e| e.to_string())?;
    let back = Circuit::from_json_str(&c.to_json_string()).map_err(|e| e.to_string())?;
    ensure(back == c, || "JSON round trip changed the circuit".into())?;
    let zero = StateVector::zero_state(v.num_qubits());
    let chk = check_circuit(&back, &zero, v, DEFAULT_QUBIT_CAP).map_err(|e| e.to_string())?;
    ensure(chk.fidelity >= 1.0 - 1e-8, || format!("fidelity {}", chk.fidelity))
}

/// Weighted cost of the budgeted algorithm for m = 2 ..= non_terminal + 1.
pub fn budget_costs(v: &StateVector) -> Result<Vec<usize>, String> {
    let dd = build(v, GroupKind::XP)?;
    let top = dd.stats().non_terminal + 1;
    (2..=top.max(2))
        .map(|m| Ok(synthesize(&dd, Algorithm::Budget(m)).map_err(|e| e.to_string())?.circuit.counts().weighted()))
        .collect()
}

/// Median weighted cost of the budget scheme at each budget step must not
/// rise, over the Clifford+T corpus n 4..=8, seeds 0..10.
pub fn budget_monotone_median() -> Check {
    let mut rows = Vec::new();
    for n in 4..=8 {
        for seed in 0..10 {
            rows.push(budget_costs(&random_clifford_t_state(n, default_depth(n), seed))?);
        }
    }
    let steps = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut medians = Vec::new();
    for i in 0..steps {
        // Past a diagram's last useful budget its cost stays at the final value.
        let mut col: Vec<usize> = rows.iter().map(|r| r[i.min(r.len() - 1)]).collect();
        col.sort_unstable();
        medians.push(col[col.len() / 2]);
    }
    ensure(medians.windows(2).all(|w| w[1] <= w[0]), || format!("medians by budget from 2: {medians:?}"))
}
