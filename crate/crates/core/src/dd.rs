//! LimTDD construction, evaluation, isomorphism detection and statistics.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lim::{angle_eq, GroupKind, Lim, LimFactor};
use crate::state::StateVector;
use crate::{MERGE_TOL, ZERO_TOL};

/// Handle into a diagram's node store. Id 0 is the terminal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const TERMINAL: NodeId = NodeId(0);

    pub fn is_terminal(self) -> bool {
        self == NodeId::TERMINAL
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub target: NodeId,
    pub weight: Lim,
}

impl Edge {
    pub fn zero() -> Self {
        Edge { target: NodeId::TERMINAL, weight: Lim::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.weight.is_zero()
    }
}

/// A non-terminal node at `level` (= qubit index).
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub level: usize,
    pub low: Edge,
    pub high: Edge,
}

impl Node {
    /// Two distinct, nonzero successors.
    pub fn is_branch(&self) -> bool {
        !self.low.is_zero() && !self.high.is_zero() && self.low.target != self.high.target
    }

    /// Successor edges that carry weight, low first.
    pub fn live_edges(&self) -> impl Iterator<Item = (bool, &Edge)> {
        [(false, &self.low), (true, &self.high)].into_iter().filter(|(_, e)| !e.is_zero())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DiagramStats {
    pub total_nodes: usize,
    pub non_terminal: usize,
    pub branch_nodes: usize,
    pub reduced_paths: u128,
}

/// Node 2-norms indexed by node id.
#[derive(Clone, Debug, Default)]
pub struct NormTable {
    norms: Vec<Option<f64>>,
}

impl NormTable {
    pub fn get(&self, v: NodeId) -> Option<f64> {
        self.norms.get(v.index()).copied().flatten()
    }
}

/// A finished, immutable diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct LimTdd {
    num_qubits: usize,
    group: GroupKind,
    root: Edge,
    /// Index 0 holds a placeholder for the terminal.
    nodes: Vec<Node>,
}

fn terminal_placeholder() -> Node {
    Node { level: usize::MAX, low: Edge::zero(), high: Edge::zero() }
}

impl LimTdd {
    pub fn from_statevector(amps: &StateVector, group: GroupKind) -> Result<Self> {
        let n = amps.num_qubits();
        if n > 62 {
            return Err(Error::Format(format!("{n} qubits exceed the supported width")));
        }
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot build a diagram for the zero vector".into()));
        }
        let scaled: Vec<C64> = amps.amplitudes().iter().map(|a| a / norm).collect();
        let mut b = Builder::new(group);
        let mut root = b.build_block(&scaled);
        if root.is_zero() {
            return Err(Error::Domain("cannot build a diagram for the zero vector".into()));
        }
        root.weight.scalar *= norm;
        b.reduce(&mut root.weight, root.target);
        Ok(b.finish(n, root))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn root(&self) -> &Edge {
        &self.root
    }

    /// `None` for the terminal.
    pub fn node(&self, id: NodeId) -> Option<&Node> {
        if id.is_terminal() {
            None
        } else {
            self.nodes.get(id.index())
        }
    }

    /// Non-terminal node ids, children before parents.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (1..self.nodes.len()).map(|i| NodeId(i as u32))
    }

    pub fn level(&self, id: NodeId) -> Option<usize> {
        self.node(id).map(|n| n.level)
    }

    pub fn to_statevector(&self) -> StateVector {
        StateVector::new(eval_edge(&self.nodes, &self.root, self.num_qubits))
            .expect("power-of-two length")
    }

    /// Dense semantics of a node (`[1]` for the terminal).
    pub fn node_vector(&self, id: NodeId) -> Vec<C64> {
        eval_node(&self.nodes, id)
    }

    /// A LIM `O` with `|a⟩ = O|b⟩`, when the structural matcher finds one.
    pub fn find_iso(&self, a: NodeId, b: NodeId) -> Option<Lim> {
        let mut memo = HashMap::new();
        IsoFinder { nodes: &self.nodes, group: self.group, memo: &mut memo }.find(a, b)
    }

    pub fn norms(&self) -> NormTable {
        let mut t = NormTable { norms: vec![None; self.nodes.len()] };
        for id in self.node_ids() {
            self.node_norm(id, &mut t);
        }
        t
    }

    pub fn node_norm(&self, v: NodeId, cache: &mut NormTable) -> f64 {
        if v.is_terminal() {
            return 1.0;
        }
        if cache.norms.len() < self.nodes.len() {
            cache.norms.resize(self.nodes.len(), None);
        }
        if let Some(x) = cache.norms[v.index()] {
            return x;
        }
        let node = &self.nodes[v.index()];
        let mut sq = 0.0;
        for (_, e) in node.live_edges() {
            let c = self.node_norm(e.target, cache);
            sq += e.weight.scalar.norm_sqr() * c * c;
        }
        let r = sq.sqrt();
        cache.norms[v.index()] = Some(r);
        r
    }

    /// Semantic norm of an edge.
    pub fn edge_norm(&self, e: &Edge, cache: &mut NormTable) -> f64 {
        if e.is_zero() {
            0.0
        } else {
            e.weight.scalar.norm() * self.node_norm(e.target, cache)
        }
    }

    pub fn stats(&self) -> DiagramStats {
        let mut paths = vec![0u128; self.nodes.len()];
        paths[0] = 1;
        let mut branch = 0;
        for id in self.node_ids() {
            let node = &self.nodes[id.index()];
            if node.is_branch() {
                branch += 1;
            }
            let mut targets: Vec<NodeId> = node.live_edges().map(|(_, e)| e.target).collect();
            targets.dedup();
            paths[id.index()] =
                targets.iter().fold(0u128, |acc, t| acc.saturating_add(paths[t.index()]));
        }
        let reduced_paths = if self.root.is_zero() { 0 } else { paths[self.root.target.index()] };
        DiagramStats {
            total_nodes: self.nodes.len(),
            non_terminal: self.nodes.len() - 1,
            branch_nodes: branch,
            reduced_paths,
        }
    }

    /// Graphviz rendering; high edges solid, low edges dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph limtdd {\n  rankdir=TB;\n");
        s.push_str("  root [shape=point];\n  n0 [shape=box, label=\"1\"];\n");
        for id in self.node_ids() {
            let node = &self.nodes[id.index()];
            let _ = writeln!(s, "  n{} [shape=circle, label=\"q{}\"];", id.0, node.level);
        }
        let _ = writeln!(s, "  root -> n{} [label=\"{}\"];", self.root.target.0, self.root.weight);
        for id in self.node_ids() {
            let node = &self.nodes[id.index()];
            for (high, e) in node.live_edges() {
                let style = if high { "solid" } else { "dashed" };
                let _ = writeln!(
                    s,
                    "  n{} -> n{} [style={style}, label=\"{}\"];",
                    id.0, e.target.0, e.weight
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

fn eval_node(nodes: &[Node], id: NodeId) -> Vec<C64> {
    if id.is_terminal() {
        return vec![C64::new(1.0, 0.0)];
    }
    let node = &nodes[id.index()];
    let mut v = eval_edge(nodes, &node.low, node.level);
    v.extend(eval_edge(nodes, &node.high, node.level));
    v
}

fn eval_edge(nodes: &[Node], e: &Edge, width: usize) -> Vec<C64> {
    if e.is_zero() {
        return vec![C64::new(0.0, 0.0); 1usize << width];
    }
    let mut v = eval_node(nodes, e.target);
    e.weight.apply(&mut v);
    v
}

/// Drop factor components that act trivially on the target state.
///
/// Two patterns are recognized while walking down the low chain: a node with
/// a zero high edge ignores the phase of its factor, and a node whose high
/// edge is the identity onto its low child absorbs `X` as `e^{iθ} P(-θ)`.
fn reduce_lim(nodes: &[Node], lim: &mut Lim, target: NodeId) {
    let mut cur = target;
    while !cur.is_terminal() {
        let node = &nodes[cur.index()];
        let q = node.level;
        if q >= lim.factors.len() {
            return;
        }
        if node.high.is_zero() && !node.low.is_zero() {
            lim.factors[q].theta = 0.0;
        } else if !node.low.is_zero()
            && node.high.target == node.low.target
            && node.high.weight.is_identity()
        {
            let f = lim.factors[q];
            if f.x {
                lim.scalar *= C64::from_polar(1.0, f.theta);
                lim.factors[q] = LimFactor::phase(-f.theta);
            }
        } else {
            return;
        }
        cur = node.low.target;
    }
}

struct IsoFinder<'a> {
    nodes: &'a [Node],
    group: GroupKind,
    memo: &'a mut HashMap<(NodeId, NodeId), Option<Lim>>,
}

impl IsoFinder<'_> {
    fn width(&self, id: NodeId) -> usize {
        if id.is_terminal() {
            0
        } else {
            self.nodes[id.index()].level + 1
        }
    }

    /// Public entry; verifies the answer densely in debug builds.
    fn find(&mut self, a: NodeId, b: NodeId) -> Option<Lim> {
        let r = self.iso(a, b);
        #[cfg(debug_assertions)]
        if let Some(o) = &r {
            if self.width(a) <= 10 {
                let want = eval_node(self.nodes, a);
                let mut got = eval_node(self.nodes, b);
                o.apply(&mut got);
                let scale = want.iter().map(|x| x.norm()).fold(1.0, f64::max);
                assert!(
                    want.iter().zip(&got).all(|(x, y)| (x - y).norm() <= 1e-7 * scale),
                    "unsound isomorphism between {a:?} and {b:?}"
                );
            }
        }
        r
    }

    fn iso(&mut self, a: NodeId, b: NodeId) -> Option<Lim> {
        if a == b {
            return Some(Lim::identity(self.width(a)));
        }
        if a.is_terminal() || b.is_terminal() {
            return None;
        }
        let na = &self.nodes[a.index()];
        let nb = &self.nodes[b.index()];
        if na.level != nb.level {
            return None;
        }
        if let Some(r) = self.memo.get(&(a, b)) {
            return r.clone();
        }
        let (a0, a1, b0, b1) = (na.low.clone(), na.high.clone(), nb.low.clone(), nb.high.clone());
        let mut result = self
            .match_pair(&a0, &a1, &b0, &b1)
            .map(|(l, theta)| l.extend_top(LimFactor::phase(theta)));
        if result.is_none() && self.group.allows_x() {
            result = self
                .match_pair(&a1, &a0, &b0, &b1)
                .map(|(l, theta)| l.extend_top(LimFactor::new(true, theta)));
        }
        self.memo.insert((a, b), result.clone());
        result
    }

    /// Solve `t0 = L s0`, `t1 = e^{iθ} L s1` for `L` and `θ`.
    fn match_pair(&mut self, t0: &Edge, t1: &Edge, s0: &Edge, s1: &Edge) -> Option<(Lim, f64)> {
        if t0.is_zero() != s0.is_zero() || t1.is_zero() != s1.is_zero() {
            return None;
        }
        if t0.is_zero() {
            // Only the high halves carry the state.
            return self.edge_iso(t1, s1).map(|l| (l, 0.0));
        }
        let l = self.edge_iso(t0, s0)?;
        if t1.is_zero() {
            return Some((l, 0.0));
        }
        // |T1⟩ = e^{iθ} K |S1⟩ with K = t1.w⁻¹ L s1.w
        let mut k = t1.weight.inverse().compose(&l).compose(&s1.weight);
        reduce_lim(self.nodes, &mut k, s1.target);
        let theta = if t1.target == s1.target {
            if !k.factors_trivial() || (k.scalar.norm() - 1.0).abs() > MERGE_TOL {
                return None;
            }
            -k.scalar.arg()
        } else {
            let mut j = self.iso(t1.target, s1.target)?;
            reduce_lim(self.nodes, &mut j, s1.target);
            if !j.factors.iter().zip(&k.factors).all(|(x, y)| x.approx_eq(y)) {
                return None;
            }
            let ratio = j.scalar / k.scalar;
            if (ratio.norm() - 1.0).abs() > MERGE_TOL {
                return None;
            }
            ratio.arg()
        };
        if !self.group.allows_phase(theta) {
            return None;
        }
        Some((l, theta))
    }

    /// `L` with `t = L s` as edge semantics; both edges nonzero.
    fn edge_iso(&mut self, t: &Edge, s: &Edge) -> Option<Lim> {
        let j = self.iso(t.target, s.target)?;
        Some(t.weight.compose(&j).compose(&s.weight.inverse()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct TableKey {
    level: usize,
    low: NodeId,
    high: NodeId,
    low_zero: bool,
    high_zero: bool,
    high_x: u64,
    bucket: i64,
}

const BUCKET_SCALE: f64 = 1e6;

struct Builder {
    group: GroupKind,
    nodes: Vec<Node>,
    table: HashMap<TableKey, Vec<NodeId>>,
    iso_memo: HashMap<(NodeId, NodeId), Option<Lim>>,
}

/// One way of writing a node: incoming LIM, child edges.
struct Candidate {
    incoming: Lim,
    low: NodeId,
    high: Edge,
}

impl Builder {
    fn new(group: GroupKind) -> Self {
        Builder {
            group,
            nodes: vec![terminal_placeholder()],
            table: HashMap::new(),
            iso_memo: HashMap::new(),
        }
    }

    fn reduce(&self, lim: &mut Lim, target: NodeId) {
        if self.group.allows_x() {
            reduce_lim(&self.nodes, lim, target);
        }
    }

    /// Edge for a block of `2^k` amplitudes, with a `k`-factor LIM.
    fn build_block(&mut self, amps: &[C64]) -> Edge {
        if amps.len() == 1 {
            let a = amps[0];
            return if a.norm() <= ZERO_TOL {
                Edge::zero()
            } else {
                Edge { target: NodeId::TERMINAL, weight: Lim::scalar(a, 0) }
            };
        }
        let half = amps.len() / 2;
        let level = half.trailing_zeros() as usize;
        let e0 = self.build_block(&amps[..half]);
        let e1 = self.build_block(&amps[half..]);
        self.make_node(level, e0, e1)
    }

    fn make_node(&mut self, level: usize, e0: Edge, mut e1: Edge) -> Edge {
        let id_lim = Lim::identity(level);
        match (e0.is_zero(), e1.is_zero()) {
            (true, true) => return Edge::zero(),
            (true, false) => {
                let (low, high, top) = if self.group.allows_x() {
                    let low = Edge { target: e1.target, weight: id_lim };
                    (low, Edge::zero(), LimFactor::X)
                } else {
                    let high = Edge { target: e1.target, weight: id_lim };
                    (Edge::zero(), high, LimFactor::IDENTITY)
                };
                let id = self.intern(level, low, high);
                return Edge { target: id, weight: e1.weight.extend_top(top) };
            }
            (false, true) => {
                let low = Edge { target: e0.target, weight: id_lim };
                let id = self.intern(level, low, Edge::zero());
                return Edge { target: id, weight: e0.weight.extend_top(LimFactor::IDENTITY) };
            }
            (false, false) => {}
        }

        if e0.target != e1.target && self.group.allows_x() {
            let mut finder =
                IsoFinder { nodes: &self.nodes, group: self.group, memo: &mut self.iso_memo };
            if let Some(l) = finder.find(e1.target, e0.target) {
                e1 = Edge { target: e0.target, weight: e1.weight.compose(&l) };
            }
        }

        let plain = self.candidate(&e0, &e1, false);
        let chosen = if !self.group.allows_x() {
            plain
        } else if e0.target != e1.target {
            if e1.target < e0.target {
                self.candidate(&e1, &e0, true)
            } else {
                plain
            }
        } else {
            let swapped = self.candidate(&e1, &e0, true);
            let m = plain.high.weight.scalar.norm();
            let take_swap = if m > 1.0 + MERGE_TOL {
                true
            } else if m < 1.0 - MERGE_TOL {
                false
            } else {
                lim_order(&swapped.high.weight, &plain.high.weight) == Ordering::Less
            };
            if take_swap {
                swapped
            } else {
                plain
            }
        };
        let low = Edge { target: chosen.low, weight: id_lim };
        let id = self.intern(level, low, chosen.high);
        Edge { target: id, weight: chosen.incoming }
    }

    /// Node with `a` as low child and `b` as high child.
    fn candidate(&self, a: &Edge, b: &Edge, swapped: bool) -> Candidate {
        let mut rel = a.weight.inverse().compose(&b.weight);
        self.reduce(&mut rel, b.target);
        let mu = rel.scalar;
        let (phi, high_scalar) = match self.group {
            GroupKind::XP => (mu.arg(), C64::new(mu.norm(), 0.0)),
            GroupKind::Pauli => {
                if mu.re < -MERGE_TOL || (mu.re.abs() <= MERGE_TOL && mu.im < 0.0) {
                    (std::f64::consts::PI, -mu)
                } else {
                    (0.0, mu)
                }
            }
            GroupKind::ScalarOnly => (0.0, mu),
        };
        let high = Edge { target: b.target, weight: Lim { scalar: high_scalar, factors: rel.factors } };
        Candidate {
            incoming: a.weight.extend_top(LimFactor::new(swapped, phi)),
            low: a.target,
            high,
        }
    }

    fn intern(&mut self, level: usize, low: Edge, high: Edge) -> NodeId {
        let bucket = (high.weight.scalar.norm() * BUCKET_SCALE).round() as i64;
        let mut key = TableKey {
            level,
            low: low.target,
            high: high.target,
            low_zero: low.is_zero(),
            high_zero: high.is_zero(),
            high_x: high.weight.x_mask(),
            bucket,
        };
        for b in [bucket, bucket - 1, bucket + 1] {
            key.bucket = b;
            if let Some(ids) = self.table.get(&key) {
                for &id in ids {
                    if self.nodes[id.index()].high.weight.approx_eq(&high.weight) {
                        return id;
                    }
                }
            }
        }
        key.bucket = bucket;
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node { level, low, high });
        self.table.entry(key).or_default().push(id);
        id
    }

    /// Keep only nodes reachable from the root, renumbered in post-order.
    fn finish(self, num_qubits: usize, mut root: Edge) -> LimTdd {
        let mut remap: HashMap<NodeId, NodeId> = HashMap::new();
        remap.insert(NodeId::TERMINAL, NodeId::TERMINAL);
        let mut out = vec![terminal_placeholder()];
        // Iterative post-order: (id, expanded)
        let mut stack = vec![(root.target, false)];
        while let Some((id, expanded)) = stack.pop() {
            if remap.contains_key(&id) {
                continue;
            }
            let node = &self.nodes[id.index()];
            if expanded {
                let mut n = node.clone();
                n.low.target = remap[&n.low.target];
                n.high.target = remap[&n.high.target];
                let new_id = NodeId(out.len() as u32);
                out.push(n);
                remap.insert(id, new_id);
            } else {
                stack.push((id, true));
                stack.push((node.high.target, false));
                stack.push((node.low.target, false));
            }
        }
        root.target = remap[&root.target];
        LimTdd { num_qubits, group: self.group, root, nodes: out }
    }
}

/// Tolerant lexicographic order on LIMs: scalar, then factors from the top.
fn lim_order(a: &Lim, b: &Lim) -> Ordering {
    let cmp = |x: f64, y: f64| {
        if (x - y).abs() <= MERGE_TOL {
            Ordering::Equal
        } else {
            x.partial_cmp(&y).unwrap_or(Ordering::Equal)
        }
    };
    cmp(a.scalar.re, b.scalar.re)
        .then(cmp(a.scalar.im, b.scalar.im))
        .then_with(|| {
            for (fa, fb) in a.factors.iter().rev().zip(b.factors.iter().rev()) {
                let o = fa.x.cmp(&fb.x).then_with(|| {
                    if angle_eq(fa.theta, fb.theta) {
                        Ordering::Equal
                    } else {
                        cmp(fa.theta, fb.theta)
                    }
                });
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::golden_state;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn worked_example_structure() {
        let dd = LimTdd::from_statevector(&golden_state(), GroupKind::XP).unwrap();
        let st = dd.stats();
        assert_eq!(st.total_nodes, 6);
        assert_eq!(st.reduced_paths, 3);
        assert_eq!(st.non_terminal, 5);
        // Root weight (2/√23)·Z⊗I⊗I.
        let root = dd.root();
        assert!((root.weight.scalar - 2.0 / 23f64.sqrt()).norm() < 1e-12);
        assert!(root.weight.factors[2].approx_eq(&LimFactor::phase(PI)));
        assert!(root.weight.factors[0].is_identity() && root.weight.factors[1].is_identity());
        let v20 = dd.node(root.target).unwrap();
        assert_eq!(v20.level, 2);
        assert!(v20.high.weight.factors[1].approx_eq(&LimFactor::phase(PI)));
        // v11 = (v01, X → v01)
        let v11 = dd.node(v20.high.target).unwrap();
        assert_eq!(v11.low.target, v11.high.target);
        assert!(v11.high.weight.factors[0].approx_eq(&LimFactor::X));
        // v10 = (v00, (1/√2) S → v01)
        let v10 = dd.node(v20.low.target).unwrap();
        assert_eq!(v10.high.target, v11.low.target);
        assert!((v10.high.weight.scalar - FRAC_1_SQRT_2).norm() < 1e-12);
        assert!(v10.high.weight.factors[0].approx_eq(&LimFactor::phase(PI / 2.0)));
        assert!(close(dd.to_statevector().amplitudes(), golden_state().amplitudes(), 1e-12));
    }

    #[test]
    fn basis_state_is_tower_with_zero_highs() {
        for g in [GroupKind::ScalarOnly, GroupKind::Pauli, GroupKind::XP] {
            let dd = LimTdd::from_statevector(&StateVector::zero_state(4), g).unwrap();
            let st = dd.stats();
            assert_eq!(st.non_terminal, 4);
            assert_eq!(st.reduced_paths, 1);
            assert!(dd.node_ids().all(|id| dd.node(id).unwrap().high.is_zero()));
        }
    }

    #[test]
    fn ghz4_high_child_is_x_string() {
        let dd = LimTdd::from_statevector(&StateVector::ghz(4), GroupKind::XP).unwrap();
        assert_eq!(dd.stats().total_nodes, 5);
        assert_eq!(dd.stats().reduced_paths, 1);
        let root = dd.node(dd.root().target).unwrap();
        assert_eq!(root.low.target, root.high.target);
        assert!(root.high.weight.factors.iter().all(|f| f.approx_eq(&LimFactor::X)));
        // Brute-force check of the relation on 16 amplitudes.
        let child = dd.node_vector(root.low.target);
        let mut flipped = child.clone();
        root.high.weight.apply(&mut flipped);
        let mut want = vec![c(0., 0.); 8];
        want[7] = c(1., 0.);
        assert!(close(&child, &{
            let mut z = vec![c(0., 0.); 8];
            z[0] = c(1., 0.);
            z
        }, 1e-12));
        assert!(close(&flipped, &want, 1e-12));
    }

    #[test]
    fn zero_qubit_diagram() {
        let s = StateVector::new(vec![c(0.0, 2.0)]).unwrap();
        let dd = LimTdd::from_statevector(&s, GroupKind::XP).unwrap();
        assert_eq!(dd.stats().total_nodes, 1);
        assert_eq!(dd.stats().reduced_paths, 1);
        assert!(close(dd.to_statevector().amplitudes(), s.amplitudes(), 1e-15));
    }

    #[test]
    fn zero_vector_is_domain_error() {
        let s = StateVector::new(vec![c(0.0, 0.0); 4]).unwrap();
        assert!(matches!(LimTdd::from_statevector(&s, GroupKind::XP), Err(Error::Domain(_))));
    }

    #[test]
    fn complete_binary_diagram_paths() {
        // Eight amplitudes with no shared structure under scalars.
        let v: Vec<C64> = [1.0, 2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0].iter().map(|&x| c(x, 0.)).collect();
        let dd = LimTdd::from_statevector(&StateVector::new(v).unwrap(), GroupKind::ScalarOnly).unwrap();
        let st = dd.stats();
        assert_eq!(st.non_terminal, 7);
        // Both edges of a level-0 node end at the terminal and merge.
        assert_eq!(st.reduced_paths, 4);
        assert_eq!(st.branch_nodes, 3);
    }

    #[test]
    fn worked_example_norms() {
        let dd = LimTdd::from_statevector(&golden_state(), GroupKind::XP).unwrap();
        let mut t = NormTable::default();
        assert_eq!(dd.node_norm(NodeId::TERMINAL, &mut t), 1.0);
        let root = dd.root().target;
        assert!((dd.node_norm(root, &mut t) - 23f64.sqrt() / 2.0).abs() < 1e-12);
        let v01 = dd.node(dd.node(root).unwrap().high.target).unwrap().low.target;
        assert!((dd.node_norm(v01, &mut t) - 1.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn find_iso_examples() {
        // [1, i/√2] = S·[1, 1/√2] and [1/√2, 1] = X·[1, 1/√2] up to scale.
        let h = FRAC_1_SQRT_2;
        for (a, want) in [
            ([c(1., 0.), c(0., h)], LimFactor::phase(PI / 2.0)),
            ([c(h, 0.), c(1., 0.)], LimFactor::X),
        ] {
            // Two-qubit state whose halves are the two vectors; ScalarOnly keeps both nodes.
            let amps = vec![c(1., 0.), c(h, 0.), a[0], a[1]];
            let dd =
                LimTdd::from_statevector(&StateVector::new(amps).unwrap(), GroupKind::ScalarOnly)
                    .unwrap();
            let root = dd.node(dd.root().target).unwrap();
            let (lo, hi) = (root.low.target, root.high.target);
            assert_ne!(lo, hi);
            let mut f = IsoFinder {
                nodes: &dd.nodes,
                group: GroupKind::XP,
                memo: &mut HashMap::new(),
            };
            let o = f.find(hi, lo).expect("isomorphic");
            assert!(o.factors[0].approx_eq(&want), "{o}");
            assert_eq!(dd.find_iso(lo, lo), Some(Lim::identity(1)));
        }
    }
}
