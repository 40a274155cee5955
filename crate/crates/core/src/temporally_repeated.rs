//! Temporally repeated flows on networks with constant capacities and
//! transit times.

use crate::dynamic::DynamicFlow;
use crate::error::{Error, Result};
use crate::network::{DynamicNetwork, Topology};
use crate::numeric::Rational;
use crate::piecewise::PiecewiseConstantFn;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFlow {
    /// Edge indices from source to target.
    pub edges: Vec<usize>,
    pub rate: Rational,
    pub transit: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathDecomposition {
    pub paths: Vec<PathFlow>,
}

impl PathDecomposition {
    /// Per-edge sum of path rates.
    pub fn recompose(&self, num_edges: usize) -> Vec<Rational> {
        let mut flow = vec![Rational::zero(); num_edges];
        for p in &self.paths {
            for &e in &p.edges {
                flow[e] += &p.rate;
            }
        }
        flow
    }
}

fn static_data(net: &DynamicNetwork) -> Result<(Topology, Vec<Rational>, Vec<Rational>)> {
    if !net.is_static() {
        return Err(Error::InvalidInput("temporally repeated flows need constant capacities and transits".into()));
    }
    let topo = net.topology()?;
    let caps = net.edges.iter().map(|e| e.capacity.values()[0].clone()).collect();
    let transits = net.edges.iter().map(|e| e.transit.values()[0].clone()).collect();
    Ok((topo, caps, transits))
}

/// Splits a static edge flow into source-target paths. Flow cycles met on
/// the way are cancelled; circulations not reachable along flow from the
/// source are ignored.
pub fn decompose(net: &DynamicNetwork, edge_flow: &[Rational]) -> Result<PathDecomposition> {
    let topo = net.topology()?;
    if edge_flow.len() != net.edges.len() || edge_flow.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidInput("edge flow must be nonnegative with one value per edge".into()));
    }
    let transits: Vec<Rational> = net.edges.iter().map(|e| e.transit.values()[0].clone()).collect();
    let mut rest = edge_flow.to_vec();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); net.vertices.len()];
    for (i, &(tail, _)) in topo.ends.iter().enumerate() {
        out[tail].push(i);
    }
    let next_edge = |rest: &[Rational], v: usize| out[v].iter().copied().find(|&e| rest[e].is_positive());
    let mut paths = Vec::new();
    while next_edge(&rest, topo.source).is_some() {
        let mut walk: Vec<usize> = Vec::new();
        let mut position = vec![None; net.vertices.len()];
        let mut v = topo.source;
        position[v] = Some(0);
        loop {
            if v == topo.target {
                let rate = walk.iter().map(|&e| rest[e].clone()).min().expect("nonempty path");
                for &e in &walk {
                    rest[e] -= &rate;
                }
                let transit = walk.iter().map(|&e| transits[e].clone()).sum();
                paths.push(PathFlow { edges: walk, rate, transit });
                break;
            }
            let Some(e) = next_edge(&rest, v) else {
                return Err(Error::InvalidInput(format!("flow is not conserved at {}", net.vertices[v])));
            };
            walk.push(e);
            v = topo.ends[e].1;
            if let Some(start) = position[v] {
                let cycle: Vec<usize> = walk.split_off(start);
                let amount = cycle.iter().map(|&e| rest[e].clone()).min().expect("nonempty cycle");
                for &e in &cycle {
                    rest[e] -= &amount;
                }
                break;
            }
            position[v] = Some(walk.len());
        }
    }
    Ok(PathDecomposition { paths })
}

/// Static flow minimizing `sum τ_e x_e - horizon * |x|`, by successive
/// shortest paths with transit times as costs, stopping once the shortest
/// path is no shorter than `horizon`.
pub fn min_cost_static_flow(net: &DynamicNetwork, horizon: &Rational) -> Result<Vec<Rational>> {
    let (topo, caps, transits) = static_data(net)?;
    let n = net.vertices.len();
    let m = net.edges.len();
    let mut flow = vec![Rational::zero(); m];
    loop {
        // Bellman-Ford on the residual network; arc 2e forward, 2e+1 backward
        let mut dist: Vec<Option<Rational>> = vec![None; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        dist[topo.source] = Some(Rational::zero());
        for _ in 0..n {
            let mut changed = false;
            for e in 0..m {
                let (u, v) = topo.ends[e];
                let arcs = [
                    (u, v, 2 * e, flow[e] < caps[e], transits[e].clone()),
                    (v, u, 2 * e + 1, flow[e].is_positive(), -&transits[e]),
                ];
                for (from, to, id, open, cost) in arcs {
                    if !open {
                        continue;
                    }
                    let Some(d) = &dist[from] else { continue };
                    let candidate = d + &cost;
                    if dist[to].as_ref().is_none_or(|cur| candidate < *cur) {
                        dist[to] = Some(candidate);
                        pred[to] = Some(id);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let Some(d) = dist[topo.target].clone() else { break };
        if d >= *horizon {
            break;
        }
        let mut path = Vec::new();
        let mut v = topo.target;
        while v != topo.source {
            let id = pred[v].expect("reached vertices have a predecessor");
            path.push(id);
            let (u, w) = topo.ends[id / 2];
            v = if id.is_multiple_of(2) { u } else { w };
        }
        let amount = path
            .iter()
            .map(|&id| if id % 2 == 0 { &caps[id / 2] - &flow[id / 2] } else { flow[id / 2].clone() })
            .min()
            .expect("nonempty path");
        for &id in &path {
            if id % 2 == 0 {
                flow[id / 2] += &amount;
            } else {
                flow[id / 2] -= &amount;
            }
        }
    }
    Ok(flow)
}

/// Ford-Fulkerson temporally repeated flow over the network's horizon:
/// every path `P` of a min-cost static flow sends its rate during
/// `[lo, hi - τ(P))`, shifted along the path.
pub fn temporally_repeated(net: &DynamicNetwork) -> Result<(DynamicFlow, Rational, PathDecomposition)> {
    let (lo, hi) = match &net.horizon {
        crate::network::Horizon::Finite { lo, hi } => (lo.clone(), hi.clone()),
        crate::network::Horizon::Infinite { .. } => {
            return Err(Error::InvalidInput("temporally repeated flows need a finite horizon".into()));
        }
    };
    let length = &hi - &lo;
    let static_flow = min_cost_static_flow(net, &length)?;
    let decomposition = decompose(net, &static_flow)?;
    let mut pieces: Vec<Vec<(Rational, Rational, Rational)>> = vec![Vec::new(); net.edges.len()];
    let mut value = Rational::zero();
    for p in &decomposition.paths {
        let duration = &length - &p.transit;
        if !duration.is_positive() {
            continue;
        }
        value += &p.rate * &duration;
        let mut start = lo.clone();
        for &e in &p.edges {
            pieces[e].push((start.clone(), &start + &duration, p.rate.clone()));
            start += net.edges[e].transit.values()[0].clone();
        }
    }
    let rates = pieces.into_iter().map(|p| PiecewiseConstantFn::from_pieces(lo.clone(), hi.clone(), p)).collect();
    Ok((DynamicFlow { rates }, value, decomposition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamic::{check_feasible, flow_value};
    use crate::network::{Horizon, NetworkBuilder};

    fn q(n: i64) -> Rational {
        Rational::int(n)
    }

    #[test]
    fn single_edge() {
        let mut b = NetworkBuilder::new("s", "t", Horizon::until(q(3)));
        b.static_edge("s", "t", q(1), q(1));
        let net = b.build();
        let (flow, value, dec) = temporally_repeated(&net).unwrap();
        assert_eq!(value, q(2));
        assert_eq!(dec.paths.len(), 1);
        assert_eq!(dec.paths[0].rate, q(1));
        assert!(check_feasible(&net, &flow).is_empty());
        assert_eq!(flow_value(&net, &flow).unwrap(), q(2));
    }

    #[test]
    fn two_edge_path_and_short_horizon() {
        let mut b = NetworkBuilder::new("s", "t", Horizon::until(q(3)));
        b.static_edge("s", "a", q(1), q(1));
        b.static_edge("a", "t", q(1), q(1));
        let net = b.build();
        assert_eq!(temporally_repeated(&net).unwrap().1, q(1));
        let mut b = NetworkBuilder::new("s", "t", Horizon::until(q(2)));
        b.static_edge("s", "a", q(1), q(1));
        b.static_edge("a", "t", q(1), q(1));
        assert_eq!(temporally_repeated(&b.build()).unwrap().1, q(0));
    }

    #[test]
    fn parallel_paths_and_recomposition() {
        let mut b = NetworkBuilder::new("s", "t", Horizon::until(q(5)));
        b.static_edge("s", "a", q(1), q(1));
        b.static_edge("a", "t", q(1), q(1));
        b.static_edge("s", "b", q(1), q(0));
        b.static_edge("b", "t", q(1), q(2));
        let net = b.build();
        let flow = vec![q(1); 4];
        let dec = decompose(&net, &flow).unwrap();
        assert_eq!(dec.paths.len(), 2);
        assert_eq!(dec.recompose(4), flow);
        let (dyn_flow, value, _) = temporally_repeated(&net).unwrap();
        assert_eq!(value, q(3 + 3));
        assert!(check_feasible(&net, &dyn_flow).is_empty());
    }

    #[test]
    fn cycles_are_cancelled() {
        let mut b = NetworkBuilder::new("s", "t", Horizon::until(q(5)));
        b.static_edge("s", "a", q(1), q(0));
        b.static_edge("a", "b", q(1), q(0));
        b.static_edge("b", "a", q(1), q(0));
        b.static_edge("a", "t", q(1), q(0));
        let net = b.build();
        let dec = decompose(&net, &[q(1), q(1), q(1), q(1)]).unwrap();
        assert_eq!(dec.recompose(4), vec![q(1), q(0), q(0), q(1)]);
    }

    #[test]
    fn long_path_is_not_used_when_too_slow() {
        // plain max flow would also push through the slow edge, which is
        // worthless for this horizon
        let mut b = NetworkBuilder::new("s", "t", Horizon::until(q(4)));
        b.static_edge("s", "t", q(1), q(1));
        b.static_edge("s", "t", q(5), q(4));
        let net = b.build();
        let (_, value, dec) = temporally_repeated(&net).unwrap();
        assert_eq!(value, q(3));
        assert_eq!(dec.paths.len(), 1);
    }
}
