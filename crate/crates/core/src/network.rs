//! Dynamic network data model, validation and time discretization.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::numeric::{rat_gcd, Rational};
use crate::piecewise::PiecewiseConstantFn;

/// Considered time interval.
///
/// For an infinite horizon, edge functions are stored on the core interval
/// and continue their first and last values outside of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Horizon {
    Finite { lo: Rational, hi: Rational },
    Infinite { core_lo: Rational, core_hi: Rational },
}

impl Horizon {
    pub fn finite(lo: Rational, hi: Rational) -> Self {
        Horizon::Finite { lo, hi }
    }

    /// Horizon `[0, T]`.
    pub fn until(hi: Rational) -> Self {
        Horizon::Finite { lo: Rational::zero(), hi }
    }

    /// Domain on which the edge functions are stored.
    pub fn domain(&self) -> (&Rational, &Rational) {
        match self {
            Horizon::Finite { lo, hi } => (lo, hi),
            Horizon::Infinite { core_lo, core_hi } => (core_lo, core_hi),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Horizon::Finite { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: String,
    pub head: String,
    /// Flow per unit time that may enter the edge.
    pub capacity: PiecewiseConstantFn,
    /// Time needed by flow entering at a given time.
    pub transit: PiecewiseConstantFn,
}

impl Edge {
    pub fn has_constant_transit(&self) -> bool {
        self.transit.is_constant()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicNetwork {
    pub vertices: Vec<String>,
    pub source: String,
    pub target: String,
    pub edges: Vec<Edge>,
    pub horizon: Horizon,
}

/// Endpoints resolved to vertex indices.
#[derive(Clone, Debug)]
pub struct Topology {
    pub source: usize,
    pub target: usize,
    pub ends: Vec<(usize, usize)>,
}

impl DynamicNetwork {
    pub fn vertex_index(&self) -> HashMap<&str, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect()
    }

    /// Resolves endpoints, failing with every diagnostic if the network is
    /// not admissible.
    pub fn topology(&self) -> Result<Topology> {
        let diags = validate(self);
        if !diags.is_empty() {
            return Err(Error::InvalidNetwork(diags));
        }
        let idx = self.vertex_index();
        Ok(Topology {
            source: idx[self.source.as_str()],
            target: idx[self.target.as_str()],
            ends: self.edges.iter().map(|e| (idx[e.tail.as_str()], idx[e.head.as_str()])).collect(),
        })
    }

    pub fn edge_label(&self, e: usize) -> String {
        format!("e{e}:{}->{}", self.edges[e].tail, self.edges[e].head)
    }

    pub fn max_transit(&self) -> Rational {
        self.edges.iter().map(|e| e.transit.max_value().clone()).max().unwrap_or_default()
    }

    pub fn is_static(&self) -> bool {
        self.edges.iter().all(|e| e.capacity.is_constant() && e.transit.is_constant())
    }

    /// Maps time `t` to `r * t + offset` everywhere: breakpoints, transit
    /// values and the horizon.
    pub fn affine_time(&self, r: &Rational, offset: &Rational) -> Self {
        let horizon = match &self.horizon {
            Horizon::Finite { lo, hi } => Horizon::Finite { lo: r * lo + offset, hi: r * hi + offset },
            Horizon::Infinite { core_lo, core_hi } => {
                Horizon::Infinite { core_lo: r * core_lo + offset, core_hi: r * core_hi + offset }
            }
        };
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                tail: e.tail.clone(),
                head: e.head.clone(),
                capacity: e.capacity.affine_time(r, offset),
                transit: e.transit.affine_time(r, offset).map_values(|v| r * v),
            })
            .collect();
        DynamicNetwork { edges, horizon, ..self.clone() }
    }

    pub fn scale_capacities(&self, c: &Rational) -> Self {
        let edges =
            self.edges.iter().map(|e| Edge { capacity: e.capacity.map_values(|v| c * v), ..e.clone() }).collect();
        DynamicNetwork { edges, ..self.clone() }
    }
}

/// Every violation of the model invariants, each naming the offending
/// vertex or edge. Empty iff the network is admissible.
pub fn validate(net: &DynamicNetwork) -> Vec<String> {
    let mut diags = Vec::new();
    let mut seen = HashSet::new();
    for v in &net.vertices {
        if !seen.insert(v.as_str()) {
            diags.push(format!("duplicate vertex {v:?}"));
        }
    }
    if net.source == net.target {
        diags.push(format!("source equals target ({:?})", net.source));
    }
    for (role, v) in [("source", &net.source), ("target", &net.target)] {
        if !seen.contains(v.as_str()) {
            diags.push(format!("{role} {v:?} is not a vertex"));
        }
    }
    let (dlo, dhi) = net.horizon.domain();
    if dlo >= dhi {
        diags.push(format!("empty horizon [{dlo}, {dhi}]"));
    }
    for (i, e) in net.edges.iter().enumerate() {
        let name = format!("edge e{i} ({}->{})", e.tail, e.head);
        for end in [&e.tail, &e.head] {
            if !seen.contains(end.as_str()) {
                diags.push(format!("{name}: endpoint {end:?} is not a vertex"));
            }
        }
        if e.tail == e.head {
            diags.push(format!("{name}: self-loop"));
        }
        for (what, f) in [("capacity", &e.capacity), ("transit", &e.transit)] {
            if f.lo() != dlo || f.hi() != dhi {
                diags.push(format!(
                    "{name}: {what} defined on [{}, {}) but the horizon domain is [{dlo}, {dhi})",
                    f.lo(),
                    f.hi()
                ));
            }
            for (a, b, v) in f.pieces() {
                if v.is_negative() {
                    diags.push(format!("{name}: negative {what} {v} on [{a}, {b})"));
                }
            }
        }
    }
    diags
}

/// Largest step `d` such that every capacity and transit breakpoint, every
/// transit value and the horizon end lie on the grid `lo + k * d`.
pub fn common_step(net: &DynamicNetwork) -> Result<Rational> {
    let (lo, hi) = match &net.horizon {
        Horizon::Finite { lo, hi } => (lo, hi),
        Horizon::Infinite { .. } => {
            return Err(Error::InvalidInput("common_step needs a finite horizon".into()));
        }
    };
    let mut events = vec![hi - lo];
    for e in &net.edges {
        events.extend(e.capacity.breakpoints().iter().map(|b| b - lo));
        events.extend(e.transit.breakpoints().iter().map(|b| b - lo));
        events.extend(e.transit.values().iter().cloned());
    }
    rat_gcd(&events)
}

/// Padding unit of the infinite-time window: the largest transit times the
/// number of vertices (one vertex count worth of time units when every
/// transit is zero).
pub fn window_unit(net: &DynamicNetwork) -> Rational {
    let max_transit = net.max_transit();
    let n = Rational::int(net.vertices.len() as i64);
    if max_transit.is_positive() {
        max_transit * n
    } else {
        n
    }
}

/// Finite copy of an infinite-horizon network on
/// `[core_lo - n * W, core_hi + n * W]` with `W` from [`window_unit`].
pub fn finite_window(net: &DynamicNetwork, padding: u64) -> Result<DynamicNetwork> {
    let (core_lo, core_hi) = match &net.horizon {
        Horizon::Infinite { core_lo, core_hi } => (core_lo, core_hi),
        Horizon::Finite { .. } => {
            return Err(Error::InvalidInput("finite_window needs an infinite horizon".into()));
        }
    };
    if padding == 0 {
        return Err(Error::InvalidInput("padding multiplier must be positive".into()));
    }
    let pad = window_unit(net) * Rational::int(padding as i64);
    let lo = core_lo - &pad;
    let hi = core_hi + &pad;
    let edges = net
        .edges
        .iter()
        .map(|e| {
            Ok(Edge {
                tail: e.tail.clone(),
                head: e.head.clone(),
                capacity: e.capacity.extend(&lo, &hi)?,
                transit: e.transit.extend(&lo, &hi)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(DynamicNetwork { edges, horizon: Horizon::Finite { lo, hi }, ..net.clone() })
}

/// Multiset of positive integers with an even sum `2L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInstance {
    items: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(items: Vec<u64>) -> Result<Self> {
        if items.is_empty() || items.contains(&0) {
            return Err(Error::InvalidInput("partition items must be positive and nonempty".into()));
        }
        if items.iter().sum::<u64>() % 2 != 0 {
            return Err(Error::InvalidInput(format!("item sum of {items:?} is odd")));
        }
        Ok(PartitionInstance { items })
    }

    pub fn items(&self) -> &[u64] {
        &self.items
    }

    /// Half of the item sum.
    pub fn half(&self) -> u64 {
        self.items.iter().sum::<u64>() / 2
    }
}

/// Incremental construction of networks over a fixed horizon.
#[derive(Clone, Debug)]
pub struct NetworkBuilder {
    net: DynamicNetwork,
    known: HashSet<String>,
}

impl NetworkBuilder {
    pub fn new(source: &str, target: &str, horizon: Horizon) -> Self {
        let mut b = NetworkBuilder {
            net: DynamicNetwork {
                vertices: vec![],
                source: source.into(),
                target: target.into(),
                edges: vec![],
                horizon,
            },
            known: HashSet::new(),
        };
        b.vertex(source);
        b.vertex(target);
        b
    }

    pub fn vertex(&mut self, name: &str) -> &mut Self {
        if self.known.insert(name.to_string()) {
            self.net.vertices.push(name.to_string());
        }
        self
    }

    /// Step function on the horizon domain: `initial`, then `v` from each `t`.
    pub fn steps(&self, initial: Rational, steps: &[(Rational, Rational)]) -> PiecewiseConstantFn {
        let (lo, hi) = self.net.horizon.domain();
        PiecewiseConstantFn::from_steps(lo.clone(), hi.clone(), initial, steps)
    }

    pub fn constant(&self, value: Rational) -> PiecewiseConstantFn {
        self.steps(value, &[])
    }

    /// Adds an edge and returns its index.
    pub fn edge(
        &mut self,
        tail: &str,
        head: &str,
        capacity: PiecewiseConstantFn,
        transit: PiecewiseConstantFn,
    ) -> usize {
        self.vertex(tail);
        self.vertex(head);
        self.net.edges.push(Edge { tail: tail.into(), head: head.into(), capacity, transit });
        self.net.edges.len() - 1
    }

    pub fn static_edge(&mut self, tail: &str, head: &str, capacity: Rational, transit: Rational) -> usize {
        let (c, t) = (self.constant(capacity), self.constant(transit));
        self.edge(tail, head, c, t)
    }

    pub fn network(&self) -> &DynamicNetwork {
        &self.net
    }

    pub fn build(self) -> DynamicNetwork {
        self.net
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::int(n)
    }

    fn single_edge(cap: i64, transit: Rational, t: i64) -> DynamicNetwork {
        let mut b = NetworkBuilder::new("s", "t", Horizon::until(q(t)));
        b.static_edge("s", "t", q(cap), transit);
        b.build()
    }

    #[test]
    fn validate_reports_each_problem() {
        assert!(validate(&single_edge(1, q(1), 3)).is_empty());

        let mut net = single_edge(1, q(1), 3);
        net.edges[0].capacity = net.edges[0].capacity.map_values(|_| q(-1));
        let d = validate(&net);
        assert_eq!(d.len(), 1);
        assert!(d[0].contains("negative capacity"), "{d:?}");

        let mut net = single_edge(1, q(1), 3);
        net.target = "s".into();
        let d = validate(&net);
        assert!(d.iter().any(|m| m.contains("source equals target")), "{d:?}");

        let mut net = single_edge(1, q(1), 3);
        net.edges[0].head = "s".into();
        assert!(validate(&net).iter().any(|m| m.contains("self-loop")));

        let mut net = single_edge(1, q(1), 3);
        net.edges[0].head = "zz".into();
        assert!(validate(&net).iter().any(|m| m.contains("not a vertex")));
        assert!(net.topology().is_err());
    }

    #[test]
    fn common_step_examples() {
        assert_eq!(common_step(&single_edge(1, q(1), 6)).unwrap(), q(1));

        let mut b = NetworkBuilder::new("s", "t", Horizon::until(q(6)));
        b.static_edge("s", "a", q(1), Rational::frac(1, 2));
        b.static_edge("a", "t", q(1), Rational::frac(3, 4));
        assert_eq!(common_step(&b.build()).unwrap(), Rational::frac(1, 4));

        let mut b = NetworkBuilder::new("s", "t", Horizon::finite(q(-1), q(5)));
        let cap = b.steps(q(1), &[(Rational::frac(1, 3), q(2))]);
        let tr = b.constant(q(1));
        b.edge("s", "t", cap, tr);
        // offsets from lo: 4/3, 6, 1
        assert_eq!(common_step(&b.build()).unwrap(), Rational::frac(1, 3));
    }

    fn infinite_net() -> DynamicNetwork {
        let mut b = NetworkBuilder::new("s", "t", Horizon::Infinite { core_lo: q(2), core_hi: q(3) });
        let cap = b.steps(q(1), &[]);
        let tr = b.constant(q(2));
        b.edge("s", "v", cap, tr);
        b.static_edge("v", "t", q(1), q(1));
        b.build()
    }

    #[test]
    fn window_grows_with_padding() {
        let net = infinite_net();
        // W = max transit 2 * 3 vertices
        let w1 = finite_window(&net, 1).unwrap();
        assert_eq!(w1.horizon, Horizon::finite(q(-4), q(9)));
        let w2 = finite_window(&net, 2).unwrap();
        assert_eq!(w2.horizon, Horizon::finite(q(-10), q(15)));
        assert!(validate(&w1).is_empty());
        assert!(validate(&w2).is_empty());
        assert!(finite_window(&single_edge(1, q(1), 3), 1).is_err());
        assert!(common_step(&net).is_err());
    }

    #[test]
    fn affine_time_scales_everything() {
        let net = single_edge(2, q(1), 3);
        let scaled = net.affine_time(&Rational::frac(1, 2), &q(5));
        assert_eq!(scaled.horizon, Horizon::finite(q(5), Rational::frac(13, 2)));
        assert_eq!(scaled.edges[0].transit.values(), &[Rational::frac(1, 2)]);
        assert!(validate(&scaled).is_empty());
    }

    #[test]
    fn partition_instance_invariants() {
        assert_eq!(PartitionInstance::new(vec![1, 1, 2]).unwrap().half(), 2);
        assert!(PartitionInstance::new(vec![1, 2]).is_err());
        assert!(PartitionInstance::new(vec![]).is_err());
        assert!(PartitionInstance::new(vec![0, 2]).is_err());
        assert_eq!(PartitionInstance::new(vec![3, 3, 3, 3]).unwrap().items(), &[3, 3, 3, 3]);
    }
}
