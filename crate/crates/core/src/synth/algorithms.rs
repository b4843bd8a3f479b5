use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use crate::circuit::{Circuit, ControlCondition, Gate};
use crate::dd::{LimTdd, NodeId, NormTable};
use crate::error::{Error, Result};

use super::basic::{eliminate_root_lim, high_edge_gates, node_rotation};
use super::{AncillaPlan, Algorithm};

/// Residual modulus tolerance after the last rotation.
const RESIDUAL_TOL: f64 = 1e-9;

/// A disentangler and the ancilla layout it uses.
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub circuit: Circuit,
    pub plan: AncillaPlan,
}

pub fn synthesize(dd: &LimTdd, algo: Algorithm) -> Result<Synthesis> {
    let mut norms = dd.norms();
    let root = dd.root();
    let residual = root.weight.scalar.norm() * dd.node_norm(root.target, &mut norms);
    if (residual - 1.0).abs() > RESIDUAL_TOL {
        return Err(Error::Synthesis(format!(
            "diagram state has norm {residual}, expected a normalized state"
        )));
    }
    let mut s = Ctx { dd, norms };
    match algo {
        Algorithm::NoAncilla => s.alg1(),
        Algorithm::OneAncilla => s.alg2(),
        Algorithm::Full => s.alg3(),
        Algorithm::Budget(m) => s.alg4(m),
    }
}

/// No-ancilla disentangler.
pub fn state_pre_1(dd: &LimTdd) -> Result<Circuit> {
    Ok(synthesize(dd, Algorithm::NoAncilla)?.circuit)
}

/// One-ancilla disentangler; the ancilla starts and ends in `|1⟩`.
pub fn state_pre_2(dd: &LimTdd) -> Result<Circuit> {
    Ok(synthesize(dd, Algorithm::OneAncilla)?.circuit)
}

/// One ancilla per non-terminal node; the root's starts in `|1⟩`.
pub fn state_pre_3(dd: &LimTdd) -> Result<Circuit> {
    Ok(synthesize(dd, Algorithm::Full)?.circuit)
}

/// At most `m` ancillas, allocated breadth-first.
pub fn state_pre_4(dd: &LimTdd, m: usize) -> Result<Circuit> {
    Ok(synthesize(dd, Algorithm::Budget(m))?.circuit)
}

fn ctl(terms: &[(usize, bool)]) -> ControlCondition {
    ControlCondition::from_terms(terms.iter().copied()).expect("distinct control qubits")
}

struct Ctx<'a> {
    dd: &'a LimTdd,
    norms: NormTable,
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.dd.num_qubits()
    }

    fn root_gates(&self) -> Vec<Gate> {
        eliminate_root_lim(self.dd).gates
    }

    fn alg1(&mut self) -> Result<Synthesis> {
        let mut c = Circuit::new(self.n(), Vec::new());
        c.extend(self.root_gates())?;
        let mut memo = HashMap::new();
        let body = self.pre1(self.dd.root().target, &mut memo)?;
        c.extend(body.iter().cloned())?;
        Ok(Synthesis { circuit: c, plan: AncillaPlan::default() })
    }

    /// Sub-circuit for a node; extra controls are added by the caller.
    fn pre1(&mut self, v: NodeId, memo: &mut HashMap<NodeId, Rc<Vec<Gate>>>) -> Result<Rc<Vec<Gate>>> {
        if v.is_terminal() {
            return Ok(Rc::new(Vec::new()));
        }
        if let Some(g) = memo.get(&v) {
            return Ok(g.clone());
        }
        let node = self.dd.node(v).expect("non-terminal").clone();
        let q = node.level;
        let mut gates = high_edge_gates(&node, &ctl(&[(q, true)]))?;
        if node.is_branch() {
            for (b, e) in [(false, &node.low), (true, &node.high)] {
                let sub = self.pre1(e.target, memo)?;
                let extra = ctl(&[(q, b)]);
                for g in sub.iter() {
                    gates.push(g.with_extra_control(&extra)?);
                }
            }
        } else if let Some((_, e)) = node.live_edges().next() {
            gates.extend(self.pre1(e.target, memo)?.iter().cloned());
        }
        gates.extend(node_rotation(self.dd, &node, &mut self.norms, ControlCondition::new())?);
        let r = Rc::new(gates);
        memo.insert(v, r.clone());
        Ok(r)
    }

    fn alg2(&mut self) -> Result<Synthesis> {
        let n = self.n();
        let mut c = Circuit::new(n, vec![true]);
        c.extend(self.root_gates())?;
        let mut body = Vec::new();
        self.pre2(self.dd.root().target, n, &ControlCondition::new(), &mut body)?;
        c.extend(body)?;
        Ok(Synthesis { circuit: c, plan: AncillaPlan { assignment: Default::default(), reserved: Some(0) } })
    }

    /// One-ancilla recursion: `anc` marks the subtree open under branch condition `p`.
    fn pre2(&mut self, v: NodeId, anc: usize, p: &ControlCondition, out: &mut Vec<Gate>) -> Result<()> {
        if v.is_terminal() {
            return Ok(());
        }
        let node = self.dd.node(v).expect("non-terminal").clone();
        let q = node.level;
        out.extend(high_edge_gates(&node, &ctl(&[(anc, true), (q, true)]))?);
        if node.is_branch() {
            let p0 = p.with(q, false)?;
            let p1 = p.with(q, true)?;
            out.push(Gate::mcx(p1.clone(), anc)?);
            self.pre2(node.low.target, anc, &p0, out)?;
            out.push(Gate::mcx(p.clone(), anc)?);
            self.pre2(node.high.target, anc, &p1, out)?;
            out.push(Gate::mcx(p0, anc)?);
        } else if let Some((_, e)) = node.live_edges().next() {
            self.pre2(e.target, anc, p, out)?;
        }
        out.extend(node_rotation(self.dd, &node, &mut self.norms, ctl(&[(anc, true)]))?);
        Ok(())
    }

    /// Remaining in-degree per node, counting low and high edges separately.
    fn in_degrees(&self) -> HashMap<NodeId, usize> {
        let mut d = HashMap::new();
        for id in self.dd.node_ids() {
            for (_, e) in self.dd.node(id).unwrap().live_edges() {
                if !e.target.is_terminal() {
                    *d.entry(e.target).or_insert(0) += 1;
                }
            }
        }
        d
    }

    fn alg3(&mut self) -> Result<Synthesis> {
        let n = self.n();
        let m = self.dd.stats().non_terminal;
        let root = self.dd.root().target;
        let mut init = vec![false; m];
        if m > 0 {
            init[0] = true;
        }
        let mut c = Circuit::new(n, init);
        c.extend(self.root_gates())?;
        if root.is_terminal() {
            return Ok(Synthesis { circuit: c, plan: AncillaPlan::default() });
        }
        let mut indeg = self.in_degrees();
        let mut anc: HashMap<NodeId, usize> = HashMap::new();
        anc.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        let mut stack = Vec::new();
        let mut gates = Vec::new();
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            let node = self.dd.node(v).unwrap().clone();
            let q = node.level;
            let av = n + anc[&v];
            gates.extend(high_edge_gates(&node, &ctl(&[(av, true), (q, true)]))?);
            for (b, e) in [(false, &node.low), (true, &node.high)] {
                let u = e.target;
                if e.is_zero() || u.is_terminal() {
                    continue;
                }
                let next = anc.len();
                let au = *anc.entry(u).or_insert(next);
                let d = indeg.get_mut(&u).expect("counted edge");
                *d -= 1;
                if *d == 0 {
                    queue.push_back(u);
                }
                gates.push(Gate::mcx(ctl(&[(q, b), (av, true)]), n + au)?);
            }
        }
        while let Some(v) = stack.pop() {
            let node = self.dd.node(v).unwrap().clone();
            let q = node.level;
            let av = n + anc[&v];
            for (b, e) in [(false, &node.low), (true, &node.high)] {
                if e.is_zero() || e.target.is_terminal() {
                    continue;
                }
                gates.push(Gate::mcx(ctl(&[(q, b), (av, true)]), n + anc[&e.target])?);
            }
            gates.extend(node_rotation(self.dd, &node, &mut self.norms, ctl(&[(av, true)]))?);
        }
        c.extend(gates)?;
        let plan = AncillaPlan { assignment: anc.into_iter().collect(), reserved: None };
        Ok(Synthesis { circuit: c, plan })
    }

    fn alg4(&mut self, m: usize) -> Result<Synthesis> {
        if m < 1 {
            return Err(Error::Domain("ancilla budget must be at least 1".into()));
        }
        if m == 1 {
            return self.alg2();
        }
        let n = self.n();
        let qa = n;
        let root = self.dd.root().target;
        let mut init = vec![false; m];
        init[0] = true;
        init[1] = true;
        let mut c = Circuit::new(n, init);
        c.extend(self.root_gates())?;
        if root.is_terminal() {
            return Ok(Synthesis { circuit: c, plan: AncillaPlan { assignment: Default::default(), reserved: Some(0) } });
        }

        let mut avail = m - 1;
        let mut anc: HashMap<NodeId, usize> = HashMap::new();
        let mut allocate = |u: NodeId, anc: &mut HashMap<NodeId, usize>| {
            if !anc.contains_key(&u) && avail > 0 {
                anc.insert(u, m - avail);
                avail -= 1;
            }
        };
        let mut indeg = self.in_degrees();
        let mut queue = VecDeque::from([root]);
        let mut stack = Vec::new();
        let mut gates = Vec::new();
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            allocate(v, &mut anc);
            let node = self.dd.node(v).unwrap().clone();
            let q = node.level;
            let av = n + anc[&v];
            gates.extend(high_edge_gates(&node, &ctl(&[(av, true), (q, true)]))?);
            for (b, e) in [(false, &node.low), (true, &node.high)] {
                let u = e.target;
                if e.is_zero() || u.is_terminal() {
                    continue;
                }
                let d = indeg.get_mut(&u).expect("counted edge");
                *d -= 1;
                allocate(u, &mut anc);
                if let Some(&au) = anc.get(&u) {
                    if *d == 0 {
                        queue.push_back(u);
                    }
                    gates.push(Gate::mcx(ctl(&[(q, b), (av, true)]), n + au)?);
                }
            }
        }
        while let Some(v) = stack.pop() {
            let node = self.dd.node(v).unwrap().clone();
            let q = node.level;
            let av = n + anc[&v];
            let live: Vec<(bool, NodeId)> = node
                .live_edges()
                .filter(|(_, e)| !e.target.is_terminal())
                .map(|(b, e)| (b, e.target))
                .collect();
            let shared = !node.is_branch() && !live.is_empty() && !anc.contains_key(&live[0].1);
            if shared {
                // Both live edges lead to one unallocated child.
                let mut sub = Vec::new();
                self.pre2(live[0].1, qa, &ControlCondition::new(), &mut sub)?;
                let extra = ctl(&[(av, true)]);
                for g in sub {
                    gates.push(g.with_extra_control(&extra)?);
                }
            } else {
                for (b, u) in live {
                    match anc.get(&u) {
                        None => {
                            let mut sub = Vec::new();
                            self.pre2(u, qa, &ControlCondition::new(), &mut sub)?;
                            let extra = ctl(&[(q, b), (av, true)]);
                            for g in sub {
                                gates.push(g.with_extra_control(&extra)?);
                            }
                        }
                        Some(&au) => gates.push(Gate::mcx(ctl(&[(q, b), (av, true)]), n + au)?),
                    }
                }
            }
            gates.extend(node_rotation(self.dd, &node, &mut self.norms, ctl(&[(av, true)]))?);
        }
        c.extend(gates)?;
        let plan = AncillaPlan { assignment: anc.into_iter().collect(), reserved: Some(0) };
        Ok(Synthesis { circuit: c, plan })
    }
}
