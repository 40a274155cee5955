use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::network::{DynamicNetwork, Horizon};
use crate::numeric::Rational;

/// Capacity of an arc; holdover arcs at the terminals are unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    /// Copy of edge `edge` for flow entering during step `step`.
    Transit { edge: usize, step: usize },
    /// Waiting at the source or the sink from one step to the next.
    Holdover,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: Capacity,
    pub kind: ArcKind,
}

/// Static unrolling of a finite-horizon dynamic network.
///
/// Node `(v, θ)` stands for vertex `v` during `[lo + θΔ, lo + (θ+1)Δ)` for
/// `θ < N` and node `(v, N)` for the instant after the horizon. An edge copy
/// leaves `(tail, θ)` and enters `(head, θ + τ/Δ)` with capacity `u·Δ`; it
/// exists only when the whole step arrives by the horizon, so no copy ever
/// enters step `N`. Only the source and the sink have holdover arcs.
#[derive(Clone, Debug)]
pub struct TimeExpandedGraph {
    pub num_vertices: usize,
    /// Number of time steps `N`; each vertex has `N + 1` copies.
    pub steps: usize,
    pub lo: Rational,
    pub delta: Rational,
    pub arcs: Vec<Arc>,
    pub source: usize,
    pub sink: usize,
    pub source_vertex: usize,
    pub target_vertex: usize,
}

impl TimeExpandedGraph {
    pub fn node(&self, vertex: usize, step: usize) -> usize {
        vertex * (self.steps + 1) + step
    }

    /// Inverse of [`node`](Self::node).
    pub fn vertex_step(&self, node: usize) -> (usize, usize) {
        (node / (self.steps + 1), node % (self.steps + 1))
    }

    pub fn num_nodes(&self) -> usize {
        self.num_vertices * (self.steps + 1)
    }

    /// Dynamic time at which step `step` begins.
    pub fn step_start(&self, step: usize) -> Rational {
        &self.lo + &self.delta * Rational::int(step as i64)
    }

    pub fn hi(&self) -> Rational {
        self.step_start(self.steps)
    }
}

/// Number of nodes an expansion at step `delta` would need.
pub fn expanded_size(net: &DynamicNetwork, delta: &Rational) -> Result<u128> {
    let (lo, hi) = finite_bounds(net)?;
    let steps = (hi - lo).steps_of(delta).ok_or_else(|| misaligned(delta, "the horizon length"))?;
    let steps = steps.to_u128().ok_or(Error::NodeBudget { needed: u128::MAX, budget: 0 })?;
    Ok((steps + 1) * net.vertices.len() as u128)
}

fn finite_bounds(net: &DynamicNetwork) -> Result<(&Rational, &Rational)> {
    match &net.horizon {
        Horizon::Finite { lo, hi } => Ok((lo, hi)),
        Horizon::Infinite { .. } => Err(Error::InvalidInput("time expansion needs a finite horizon".into())),
    }
}

fn misaligned(delta: &Rational, what: impl Into<String>) -> Error {
    Error::Misaligned { step: delta.to_string(), what: what.into() }
}

/// Unrolls `net` with time step `delta`, refusing graphs above `max_nodes`.
pub fn expand(net: &DynamicNetwork, delta: &Rational, max_nodes: u128) -> Result<TimeExpandedGraph> {
    if !delta.is_positive() {
        return Err(Error::InvalidInput(format!("time step {delta} must be positive")));
    }
    let topo = net.topology()?;
    let (lo, _) = finite_bounds(net)?;
    let needed = expanded_size(net, delta)?;
    if needed > max_nodes {
        return Err(Error::NodeBudget { needed, budget: max_nodes });
    }
    let n = net.vertices.len();
    let steps = (needed / n as u128 - 1) as usize;

    for (i, e) in net.edges.iter().enumerate() {
        for (what, f) in [("capacity", &e.capacity), ("transit", &e.transit)] {
            for b in f.breakpoints() {
                if (b - lo).steps_of(delta).is_none() {
                    return Err(misaligned(delta, format!("{what} breakpoint {b} of {}", net.edge_label(i))));
                }
            }
        }
        for v in e.transit.values() {
            if v.steps_of(delta).is_none() {
                return Err(misaligned(delta, format!("transit {v} of {}", net.edge_label(i))));
            }
        }
    }

    let mut g = TimeExpandedGraph {
        num_vertices: n,
        steps,
        lo: lo.clone(),
        delta: delta.clone(),
        arcs: Vec::new(),
        source: 0,
        sink: 0,
        source_vertex: topo.source,
        target_vertex: topo.target,
    };
    g.source = g.node(topo.source, 0);
    g.sink = g.node(topo.target, steps);

    for (ei, e) in net.edges.iter().enumerate() {
        let (tail, head) = topo.ends[ei];
        // walk both step functions in lockstep; every piece boundary is on the grid
        for (start, end, cap) in e.capacity.pieces() {
            if cap.is_zero() {
                continue;
            }
            let budget = cap * delta;
            let first = step_index(start, lo, delta);
            let last = step_index(end, lo, delta);
            for step in first..last {
                let t = g.step_start(step);
                let tau = e.transit.value_at(&t).expect("inside domain");
                let shift = step_index(tau, &Rational::zero(), delta);
                let arrival = step + shift;
                if arrival >= steps {
                    continue;
                }
                g.arcs.push(Arc {
                    from: g.node(tail, step),
                    to: g.node(head, arrival),
                    capacity: Capacity::Finite(budget.clone()),
                    kind: ArcKind::Transit { edge: ei, step },
                });
            }
        }
    }
    for v in [topo.source, topo.target] {
        for step in 0..steps {
            g.arcs.push(Arc {
                from: g.node(v, step),
                to: g.node(v, step + 1),
                capacity: Capacity::Unbounded,
                kind: ArcKind::Holdover,
            });
        }
    }
    Ok(g)
}

fn step_index(t: &Rational, lo: &Rational, delta: &Rational) -> usize {
    (t - lo).steps_of(delta).and_then(|k| k.to_usize()).expect("aligned time inside the horizon")
}
