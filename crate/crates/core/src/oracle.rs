//! Ground-truth computations that share no graph code with the solver.

use crate::dynamic::{solve, SolveOptions};
use crate::error::{Error, Result};
use crate::gadgets::{gen_partition_cap, gen_partition_cap_inf, gen_partition_transit, TransitMode};
use crate::network::{DynamicNetwork, Horizon, PartitionInstance};
use crate::numeric::{rat_gcd, Rational};

/// Indices of items summing to half the total, if any.
pub fn partition_witness(p: &PartitionInstance) -> Option<Vec<usize>> {
    let half = p.half() as usize;
    // first[s] = index of the item that first reached sum s
    let mut first: Vec<Option<usize>> = vec![None; half + 1];
    let mut reachable = vec![false; half + 1];
    reachable[0] = true;
    for (i, &b) in p.items().iter().enumerate() {
        let b = b as usize;
        for s in (b..=half).rev() {
            if !reachable[s] && reachable[s - b] {
                reachable[s] = true;
                first[s] = Some(i);
            }
        }
    }
    if !reachable[half] {
        return None;
    }
    let mut witness = Vec::new();
    let mut s = half;
    while s > 0 {
        let i = first[s].expect("reachable sums have a last item");
        witness.push(i);
        s -= p.items()[i] as usize;
    }
    witness.reverse();
    Some(witness)
}

pub fn partition_solvable(p: &PartitionInstance) -> bool {
    partition_witness(p).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionVariant {
    Cap,
    CapInf,
    TransitFinite,
}

/// Outcome of checking one partition instance against its flow reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCheck {
    pub solvable: bool,
    pub value: Rational,
    pub threshold: Rational,
}

impl ReductionCheck {
    pub fn meets_threshold(&self) -> bool {
        self.value >= self.threshold
    }

    pub fn equivalent(&self) -> bool {
        self.meets_threshold() == self.solvable
    }
}

pub fn check_reduction(
    p: &PartitionInstance,
    variant: ReductionVariant,
    opts: &SolveOptions,
) -> Result<ReductionCheck> {
    let l = p.half() as i64;
    let (bundle, threshold) = match variant {
        ReductionVariant::Cap => (gen_partition_cap(p)?, Rational::one()),
        ReductionVariant::CapInf => (gen_partition_cap_inf(p)?, Rational::one()),
        ReductionVariant::TransitFinite => (gen_partition_transit(p, TransitMode::Finite)?, Rational::int(2 * l + 2)),
    };
    let report = solve(&bundle.network, opts)?;
    Ok(ReductionCheck { solvable: partition_solvable(p), value: report.value, threshold })
}

/// True iff the solved value reaches the variant's threshold exactly when
/// the partition instance is solvable.
pub fn verify_reduction(p: &PartitionInstance, variant: ReductionVariant) -> Result<bool> {
    Ok(check_reduction(p, variant, &SolveOptions::default())?.equivalent())
}

pub const TINY_NODE_BUDGET: usize = 200;

/// Maximum dynamic flow value by a dense unrolling and fattest augmenting
/// paths, for instances whose expansion has at most 200 nodes.
pub fn tiny_flow_oracle(net: &DynamicNetwork) -> Result<Rational> {
    let (lo, hi) = match &net.horizon {
        Horizon::Finite { lo, hi } => (lo.clone(), hi.clone()),
        Horizon::Infinite { .. } => return Err(Error::InvalidInput("tiny oracle needs a finite horizon".into())),
    };
    let topo = net.topology()?;
    let mut events = vec![&hi - &lo];
    for e in &net.edges {
        events.extend(e.capacity.breakpoints().iter().map(|b| b - &lo));
        events.extend(e.transit.breakpoints().iter().map(|b| b - &lo));
        events.extend(e.transit.values().iter().cloned());
    }
    let delta = rat_gcd(&events)?;
    let steps = ((&hi - &lo) / &delta).to_i64().expect("integral step count") as usize;
    let copies = steps + 1;
    let n = net.vertices.len() * copies;
    if n > TINY_NODE_BUDGET {
        return Err(Error::NodeBudget { needed: n as u128, budget: TINY_NODE_BUDGET as u128 });
    }
    let id = |v: usize, step: usize| step * net.vertices.len() + v;

    // None encodes an unbounded residual capacity
    let zero = Some(Rational::zero());
    let mut res: Vec<Vec<Option<Rational>>> = vec![vec![zero.clone(); n]; n];
    for step in 0..steps {
        let at = &lo + &delta * Rational::int(step as i64);
        for (e, &(tail, head)) in net.edges.iter().zip(&topo.ends) {
            let u = e.capacity.value_at(&at).expect("inside horizon");
            let tau = e.transit.value_at(&at).expect("inside horizon");
            let arrival = step + (tau / &delta).to_i64().expect("aligned transit") as usize;
            if arrival < steps && u.is_positive() {
                let slot = res[id(tail, step)][id(head, arrival)].as_mut().expect("finite");
                *slot += u * &delta;
            }
        }
        for v in [topo.source, topo.target] {
            res[id(v, step)][id(v, step + 1)] = None;
        }
    }
    let (source, sink) = (id(topo.source, 0), id(topo.target, steps));

    let mut value = Rational::zero();
    loop {
        // widest path: repeatedly settle the unsettled node with the largest bottleneck
        let mut width: Vec<Option<Option<Rational>>> = vec![None; n];
        let mut settled = vec![false; n];
        let mut parent = vec![usize::MAX; n];
        width[source] = Some(None);
        loop {
            let mut best: Option<usize> = None;
            for u in (0..n).rev() {
                if settled[u] || width[u].is_none() {
                    continue;
                }
                best = match best {
                    None => Some(u),
                    Some(b) if wider(width[u].as_ref().unwrap(), width[b].as_ref().unwrap()) => Some(u),
                    keep => keep,
                };
            }
            let Some(u) = best else { break };
            settled[u] = true;
            if u == sink {
                break;
            }
            let wu = width[u].clone().unwrap();
            for v in 0..n {
                if settled[v] {
                    continue;
                }
                let through = match (&wu, &res[u][v]) {
                    (_, Some(c)) if c.is_zero() => continue,
                    (None, c) => c.clone(),
                    (Some(w), None) => Some(w.clone()),
                    (Some(w), Some(c)) => Some(w.clone().min(c.clone())),
                };
                if width[v].as_ref().is_none_or(|cur| wider(&through, cur)) {
                    width[v] = Some(through);
                    parent[v] = u;
                }
            }
        }
        if !settled[sink] {
            break;
        }
        let amount = width[sink].clone().unwrap().expect("every path crosses a finite arc");
        let mut v = sink;
        while v != source {
            let u = parent[v];
            if let Some(c) = res[u][v].as_mut() {
                *c -= &amount;
            }
            if let Some(c) = res[v][u].as_mut() {
                *c += &amount;
            }
            v = u;
        }
        value += amount;
    }
    Ok(value)
}

fn wider(a: &Option<Rational>, b: &Option<Rational>) -> bool {
    match (a, b) {
        (None, None) => false,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x > y,
    }
}
