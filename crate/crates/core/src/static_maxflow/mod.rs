//! Time-expanded graph and exact static maximum flow / minimum cut.
//!
//! The main solver scales all arc capacities by the least common multiple of
//! their denominators and runs Dinic's algorithm on `i128`, which keeps it
//! exact. The oracle runs push-relabel directly on rationals.

mod dinic;
mod expand;
mod push_relabel;

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub use expand::{expand, expanded_size, Arc, ArcKind, Capacity, TimeExpandedGraph};

use crate::error::{Error, Result};
use crate::numeric::{denominator_lcm, Rational};

/// Per-arc flow on a time-expanded graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticFlow {
    pub arc_flow: Vec<Rational>,
    pub value: Rational,
}

/// Source side of a cut in a time-expanded graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticCut {
    pub source_side: Vec<bool>,
}

impl StaticCut {
    pub fn contains(&self, node: usize) -> bool {
        self.source_side[node]
    }
}

/// Integer image of the finite capacities, plus a stand-in for unbounded arcs.
struct Scaled {
    scale: BigInt,
    caps: Vec<i128>,
}

fn scale_capacities(g: &TimeExpandedGraph) -> Result<Scaled> {
    let scale = denominator_lcm(g.arcs.iter().filter_map(|a| match &a.capacity {
        Capacity::Finite(c) => Some(c),
        Capacity::Unbounded => None,
    }));
    let mut caps = Vec::with_capacity(g.arcs.len());
    let mut total: i128 = 0;
    for a in &g.arcs {
        let c = match &a.capacity {
            Capacity::Finite(c) => {
                let scaled = c.numer() * (&scale / c.denom());
                scaled.to_i128().ok_or(Error::CapacityOverflow)?
            }
            Capacity::Unbounded => 0,
        };
        total = total.checked_add(c).ok_or(Error::CapacityOverflow)?;
        caps.push(c);
    }
    // every source-sink path crosses a finite arc, so total + 1 acts as infinity
    let unbounded = total.checked_add(1).ok_or(Error::CapacityOverflow)?;
    for (a, c) in g.arcs.iter().zip(caps.iter_mut()) {
        if a.capacity == Capacity::Unbounded {
            *c = unbounded;
        }
    }
    Ok(Scaled { scale, caps })
}

/// Exact maximum flow from `(s, 0)` to `(t, N)`.
pub fn max_flow(g: &TimeExpandedGraph) -> Result<StaticFlow> {
    let scaled = scale_capacities(g)?;
    let arcs: Vec<(usize, usize, i128)> = g.arcs.iter().zip(&scaled.caps).map(|(a, &c)| (a.from, a.to, c)).collect();
    let mut solver = dinic::Dinic::new(g.num_nodes(), &arcs);
    let value = solver.run(g.source, g.sink);
    let scale = Rational::from_bigint(scaled.scale.clone());
    let arc_flow = scaled
        .caps
        .iter()
        .enumerate()
        .map(|(i, &c)| Rational::from_bigint(BigInt::from(solver.flow_on(i, c))) / &scale)
        .collect();
    Ok(StaticFlow { arc_flow, value: Rational::from_bigint(BigInt::from(value)) / &scale })
}

fn residual_capacity_forward(a: &Arc, flow: &Rational) -> bool {
    match &a.capacity {
        Capacity::Finite(c) => flow < c,
        Capacity::Unbounded => true,
    }
}

/// Residual adjacency: for each node, `(neighbor, arc index, forward?)`.
fn residual_lists(g: &TimeExpandedGraph) -> Vec<Vec<(usize, usize, bool)>> {
    let mut lists = vec![Vec::new(); g.num_nodes()];
    for (i, a) in g.arcs.iter().enumerate() {
        lists[a.from].push((a.to, i, true));
        lists[a.to].push((a.from, i, false));
    }
    lists
}

/// Nodes reachable from the source in the residual network of `f`; fails
/// with [`Error::NotMaximum`] if the sink is reachable.
pub fn min_cut(g: &TimeExpandedGraph, f: &StaticFlow) -> Result<StaticCut> {
    let lists = residual_lists(g);
    let mut seen = vec![false; g.num_nodes()];
    seen[g.source] = true;
    let mut queue = VecDeque::from([g.source]);
    while let Some(u) = queue.pop_front() {
        for &(v, i, forward) in &lists[u] {
            if seen[v] {
                continue;
            }
            let flow = &f.arc_flow[i];
            let open = if forward { residual_capacity_forward(&g.arcs[i], flow) } else { flow.is_positive() };
            if open {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    if seen[g.sink] {
        return Err(Error::NotMaximum);
    }
    Ok(StaticCut { source_side: seen })
}

/// The other canonical minimum cut: everything that cannot reach the sink
/// in the residual network.
pub fn max_source_side_cut(g: &TimeExpandedGraph, f: &StaticFlow) -> Result<StaticCut> {
    let lists = residual_lists(g);
    let mut reaches = vec![false; g.num_nodes()];
    reaches[g.sink] = true;
    let mut queue = VecDeque::from([g.sink]);
    while let Some(v) = queue.pop_front() {
        // u -> v residual: forward arc u->v with spare capacity, or arc v->u carrying flow
        for &(u, i, forward_from_v) in &lists[v] {
            if reaches[u] {
                continue;
            }
            let flow = &f.arc_flow[i];
            let open = if forward_from_v { flow.is_positive() } else { residual_capacity_forward(&g.arcs[i], flow) };
            if open {
                reaches[u] = true;
                queue.push_back(u);
            }
        }
    }
    if reaches[g.source] {
        return Err(Error::NotMaximum);
    }
    Ok(StaticCut { source_side: reaches.into_iter().map(|r| !r).collect() })
}

/// Total capacity of arcs leaving the source side; `None` if an unbounded
/// arc crosses.
pub fn crossing_capacity(g: &TimeExpandedGraph, cut: &StaticCut) -> Option<Rational> {
    let mut total = Rational::zero();
    for a in &g.arcs {
        if cut.contains(a.from) && !cut.contains(a.to) {
            match &a.capacity {
                Capacity::Finite(c) => total += c,
                Capacity::Unbounded => return None,
            }
        }
    }
    Some(total)
}

/// Independent maximum flow value (rational push-relabel).
pub fn max_flow_oracle(g: &TimeExpandedGraph) -> Rational {
    let finite_total: Rational = g
        .arcs
        .iter()
        .filter_map(|a| match &a.capacity {
            Capacity::Finite(c) => Some(c),
            Capacity::Unbounded => None,
        })
        .sum();
    let big = finite_total + Rational::one();
    let arcs: Vec<(usize, usize, Rational)> = g
        .arcs
        .iter()
        .filter(|a| a.capacity != Capacity::Finite(Rational::zero()))
        .map(|a| {
            let c = match &a.capacity {
                Capacity::Finite(c) => c.clone(),
                Capacity::Unbounded => big.clone(),
            };
            (a.from, a.to, c)
        })
        .collect();
    push_relabel::max_flow_value(g.num_nodes(), &arcs, g.source, g.sink)
}

/// Flow conservation and capacity check of a static flow.
pub fn check_static_flow(g: &TimeExpandedGraph, f: &StaticFlow) -> Vec<String> {
    let mut diags = Vec::new();
    let mut balance = vec![Rational::zero(); g.num_nodes()];
    for (i, a) in g.arcs.iter().enumerate() {
        let x = &f.arc_flow[i];
        if x.is_negative() || !residual_capacity_forward(a, x) && Capacity::Finite(x.clone()) != a.capacity {
            diags.push(format!("arc {i} flow {x} outside [0, {:?}]", a.capacity));
        }
        balance[a.from] -= x;
        balance[a.to] += x;
    }
    for (v, b) in balance.iter().enumerate() {
        if v != g.source && v != g.sink && !b.is_zero() {
            diags.push(format!("node {v} imbalance {b}"));
        }
    }
    if -&balance[g.source] != f.value || balance[g.sink] != f.value {
        diags.push(format!(
            "value {} differs from source out-flow {} or sink in-flow {}",
            f.value, -&balance[g.source], balance[g.sink]
        ));
    }
    diags
}
