//! Analog dataflow for gradient-flow decoding.
//!
//! With `z_i = prod_{j in A(i)} x_j`, `U(z) = (z - 1) z` and
//! `w_k = sum_{i in B(k)} U(z_i)`, the flow becomes `dx_k/dt = V(w_k, x_k, y_k)`
//! where
//!
//! ```text
//! V(w, x, y) = -x + y - 4 alpha (x^2 - 1) x - 2 beta w / x
//! ```
//!
//! The graph built here has one node per operation and one wire per data
//! dependency. Integrators are the only stateful nodes and the only way a
//! cycle can close. [`simulate_circuit`] evaluates the wiring as built, so a
//! miswired graph produces wrong dynamics rather than silently falling back
//! on the algebra.

use std::fmt::Write as _;

use crate::code::ParityCheckMatrix;
use crate::error::{Error, Result};
use crate::flow::EulerParams;
use crate::potential::{check_products, check_state, PotentialParams};

/// Integrator start is `delta * y` unless told otherwise.
pub const DEFAULT_DELTA: f64 = 0.01;

/// Division is refused when a state coordinate is closer to zero than this.
pub const NEAR_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// Received value `y_k`.
    Input(usize),
    /// `z_i`.
    Product(usize),
    /// `U(z_i)`.
    UNode(usize),
    /// `w_k`.
    Adder(usize),
    /// `V(w_k, x_k, y_k)`.
    VNode(usize),
    /// `x_k`.
    Integrator(usize),
}

impl NodeKind {
    pub fn name(&self) -> String {
        match self {
            NodeKind::Input(k) => format!("y_{k}"),
            NodeKind::Product(i) => format!("z_{i}"),
            NodeKind::UNode(i) => format!("U_{i}"),
            NodeKind::Adder(k) => format!("w_{k}"),
            NodeKind::VNode(k) => format!("V_{k}"),
            NodeKind::Integrator(k) => format!("INT_{k}"),
        }
    }

    fn netlist_type(&self) -> &'static str {
        match self {
            NodeKind::Input(_) => "input",
            NodeKind::Product(_) => "product",
            NodeKind::UNode(_) => "unl",
            NodeKind::Adder(_) => "adder",
            NodeKind::VNode(_) => "vnode",
            NodeKind::Integrator(_) => "integrator",
        }
    }
}

/// Directed wire between two nodes, by node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wire {
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitGraph {
    n: usize,
    m: usize,
    nodes: Vec<NodeKind>,
    wires: Vec<Wire>,
    params: PotentialParams,
    delta: f64,
}

impl CircuitGraph {
    // Node layout: y (n), z (m), U (m), w (n), V (n), INT (n).
    fn input(&self, k: usize) -> usize {
        k
    }
    fn product(&self, i: usize) -> usize {
        self.n + i
    }
    fn unode(&self, i: usize) -> usize {
        self.n + self.m + i
    }
    fn adder(&self, k: usize) -> usize {
        self.n + 2 * self.m + k
    }
    fn vnode(&self, k: usize) -> usize {
        2 * self.n + 2 * self.m + k
    }
    fn integrator(&self, k: usize) -> usize {
        3 * self.n + 2 * self.m + k
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn params(&self) -> PotentialParams {
        self.params
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Source nodes of every wire into `node`, in wiring order.
    pub fn fan_in(&self, node: usize) -> Vec<usize> {
        self.wires.iter().filter(|w| w.to == node).map(|w| w.from).collect()
    }

    pub fn count(&self, pred: impl Fn(&NodeKind) -> bool) -> usize {
        self.nodes.iter().filter(|k| pred(k)).count()
    }

    /// `true` if every directed cycle passes through an integrator.
    pub fn cycles_only_through_integrators(&self) -> bool {
        // Drop wires leaving integrators; what remains must be acyclic.
        let total = self.nodes.len();
        let mut indeg = vec![0usize; total];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); total];
        for w in &self.wires {
            if matches!(self.nodes[w.from], NodeKind::Integrator(_)) {
                continue;
            }
            out[w.from].push(w.to);
            indeg[w.to] += 1;
        }
        let mut stack: Vec<usize> = (0..total).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &t in &out[v] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        seen == total
    }
}

/// Builds the dataflow graph for `h`.
pub fn build_circuit_graph(
    h: &ParityCheckMatrix,
    p: &PotentialParams,
    delta: f64,
) -> Result<CircuitGraph> {
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "delta must be finite and nonzero (the V node divides by x), got {delta}"
        )));
    }
    let (n, m) = (h.n(), h.m());
    let mut nodes = Vec::with_capacity(4 * n + 2 * m);
    nodes.extend((0..n).map(NodeKind::Input));
    nodes.extend((0..m).map(NodeKind::Product));
    nodes.extend((0..m).map(NodeKind::UNode));
    nodes.extend((0..n).map(NodeKind::Adder));
    nodes.extend((0..n).map(NodeKind::VNode));
    nodes.extend((0..n).map(NodeKind::Integrator));
    let mut g = CircuitGraph { n, m, nodes, wires: Vec::new(), params: *p, delta };

    let mut wires = Vec::with_capacity(2 * h.num_ones() + m + 4 * n);
    for (i, row) in h.rows().iter().enumerate() {
        for &k in row {
            wires.push(Wire { from: g.integrator(k), to: g.product(i) });
        }
        wires.push(Wire { from: g.product(i), to: g.unode(i) });
    }
    for (i, row) in h.rows().iter().enumerate() {
        for &k in row {
            wires.push(Wire { from: g.unode(i), to: g.adder(k) });
        }
    }
    for k in 0..n {
        wires.push(Wire { from: g.input(k), to: g.vnode(k) });
        wires.push(Wire { from: g.adder(k), to: g.vnode(k) });
        wires.push(Wire { from: g.integrator(k), to: g.vnode(k) });
        wires.push(Wire { from: g.vnode(k), to: g.integrator(k) });
    }
    g.wires = wires;
    Ok(g)
}

/// Gradient of the code energy in division form,
/// `4 alpha (x_k^2 - 1) x_k + (2 beta / x_k) sum_{i in B(k)} (z_i - 1) z_i`.
///
/// Only defined when every coordinate is nonzero.
pub fn division_form_gradient(
    h: &ParityCheckMatrix,
    p: &PotentialParams,
    x: &[f64],
) -> Result<Vec<f64>> {
    check_state(h.n(), x)?;
    if let Some(k) = x.iter().position(|v| v.abs() < NEAR_ZERO) {
        return Err(Error::NearZero { index: k, value: x[k], step: 0 });
    }
    let z = check_products(h, x);
    Ok((0..h.n())
        .map(|k| {
            let w: f64 = h.col(k).iter().map(|&i| (z[i] - 1.0) * z[i]).sum();
            4.0 * p.alpha() * (x[k] * x[k] - 1.0) * x[k] + 2.0 * p.beta() * w / x[k]
        })
        .collect())
}

/// Evaluation order for one time step, derived from the wiring.
struct Plan {
    /// (node, sources) for products, U nodes, adders and V nodes in order.
    order: Vec<(usize, Vec<usize>)>,
}

impl Plan {
    fn new(g: &CircuitGraph) -> Self {
        let mut fan_in: Vec<Vec<usize>> = vec![Vec::new(); g.nodes.len()];
        for w in &g.wires {
            fan_in[w.to].push(w.from);
        }
        let mut order = Vec::new();
        let rank = |k: &NodeKind| match k {
            NodeKind::Product(_) => 0,
            NodeKind::UNode(_) => 1,
            NodeKind::Adder(_) => 2,
            NodeKind::VNode(_) => 3,
            _ => 4,
        };
        for r in 0..4 {
            for (idx, kind) in g.nodes.iter().enumerate() {
                if rank(kind) == r {
                    order.push((idx, std::mem::take(&mut fan_in[idx])));
                }
            }
        }
        Self { order }
    }
}

/// Steps the circuit equations with a fixed Euler step.
pub struct CircuitSimulator<'g> {
    g: &'g CircuitGraph,
    plan: Plan,
    /// Current value held at every node.
    values: Vec<f64>,
    eta: f64,
    step: usize,
}

impl<'g> CircuitSimulator<'g> {
    /// Loads `y` into the inputs and `delta * y` into the integrators.
    pub fn new(g: &'g CircuitGraph, y: &[f64], eta: f64) -> Result<Self> {
        check_state(g.n, y)?;
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
        }
        let mut values = vec![0.0; g.nodes.len()];
        for (k, &yk) in y.iter().enumerate() {
            values[g.input(k)] = yk;
            values[g.integrator(k)] = g.delta * yk;
        }
        Ok(Self { g, plan: Plan::new(g), values, eta, step: 0 })
    }

    /// Integrator outputs.
    pub fn state(&self) -> Vec<f64> {
        (0..self.g.n).map(|k| self.values[self.g.integrator(k)]).collect()
    }

    /// Evaluates every node from the integrator outputs, then integrates.
    pub fn step(&mut self) -> Result<()> {
        let (alpha, beta) = (self.g.params.alpha(), self.g.params.beta());
        for (node, srcs) in &self.plan.order {
            let v = match self.g.nodes[*node] {
                NodeKind::Product(_) => srcs.iter().map(|&s| self.values[s]).product(),
                NodeKind::UNode(_) => {
                    let z = self.values[srcs[0]];
                    (z - 1.0) * z
                }
                NodeKind::Adder(_) => srcs.iter().map(|&s| self.values[s]).sum(),
                NodeKind::VNode(k) => {
                    let (mut x, mut y, mut w) = (0.0, 0.0, 0.0);
                    for &s in srcs {
                        match self.g.nodes[s] {
                            NodeKind::Integrator(_) => x = self.values[s],
                            NodeKind::Input(_) => y = self.values[s],
                            NodeKind::Adder(_) => w = self.values[s],
                            _ => {}
                        }
                    }
                    if x.abs() < NEAR_ZERO || !x.is_finite() {
                        return Err(Error::NearZero { index: k, value: x, step: self.step });
                    }
                    -x + y - 4.0 * alpha * (x * x - 1.0) * x - 2.0 * beta * w / x
                }
                _ => unreachable!("plan only holds combinational nodes"),
            };
            self.values[*node] = v;
        }
        for k in 0..self.g.n {
            let v = self.values[self.g.vnode(k)];
            self.values[self.g.integrator(k)] += self.eta * v;
        }
        self.step += 1;
        Ok(())
    }
}

/// Integrates the circuit for `e.steps()` steps of width `e.eta()`, starting
/// the integrators at `delta * y` (the graph's delta; `e.init` is not used).
pub fn simulate_circuit(g: &CircuitGraph, y: &[f64], e: &EulerParams) -> Result<Vec<f64>> {
    let mut sim = CircuitSimulator::new(g, y, e.eta())?;
    for _ in 0..e.steps() {
        sim.step()?;
    }
    Ok(sim.state())
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

/// Graphviz rendering. Received values appear as attributes of the V nodes.
pub fn emit_dot(g: &CircuitGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph gf_decoder {{");
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(
        out,
        "  graph [alpha=\"{}\", beta=\"{}\", delta=\"{}\"];",
        fmt_num(g.params.alpha()),
        fmt_num(g.params.beta()),
        fmt_num(g.delta)
    );
    for (idx, kind) in g.nodes.iter().enumerate() {
        let name = kind.name();
        let attrs = match kind {
            NodeKind::Input(_) => continue,
            NodeKind::Product(_) => {
                let ins: Vec<String> = g
                    .fan_in(idx)
                    .iter()
                    .map(|&s| g.nodes[s].name().replace("INT_", "x_"))
                    .collect();
                format!("shape=box, label=\"{name} = {}\"", ins.join("*"))
            }
            NodeKind::UNode(_) => "shape=ellipse, label=\"(z-1)z\"".to_string(),
            NodeKind::Adder(_) => format!("shape=circle, label=\"{name}\""),
            NodeKind::VNode(k) => format!("shape=box, label=\"{name}\", input=\"y_{k}\""),
            NodeKind::Integrator(k) => {
                format!("shape=triangle, label=\"INT\", init=\"delta*y_{k}\"")
            }
        };
        let _ = writeln!(out, "  {name} [{attrs}];");
    }
    for w in &g.wires {
        if matches!(g.nodes[w.from], NodeKind::Input(_)) {
            continue;
        }
        let _ = writeln!(out, "  {} -> {};", g.nodes[w.from].name(), g.nodes[w.to].name());
    }
    out.push_str("}\n");
    out
}

/// Flat netlist: `type name inputs...`, one node per line.
pub fn emit_netlist(g: &CircuitGraph) -> String {
    let mut out = String::new();
    for (idx, kind) in g.nodes.iter().enumerate() {
        let _ = write!(out, "{} {}", kind.netlist_type(), kind.name());
        for s in g.fan_in(idx) {
            let _ = write!(out, " {}", g.nodes[s].name());
        }
        out.push('\n');
    }
    out
}
