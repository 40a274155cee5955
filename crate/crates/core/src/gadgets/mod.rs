//! Instance families with known optimal values, reference solutions and
//! forced cut patterns.

mod complexity;
mod counting;
mod partition;
mod random;

use std::collections::BTreeSet;

pub use complexity::{gen_expcut_simpleflow, gen_expflow_simplecut};
pub use counting::{counting_parameters, gen_counting_chain, ChainVariant};
pub use partition::{gen_partition_cap, gen_partition_cap_inf, gen_partition_transit, TransitMode};
pub use random::gen_random_static;

use crate::dynamic::{DynamicCut, DynamicFlow};
use crate::error::{Error, Result};
use crate::network::{DynamicNetwork, NetworkBuilder};
use crate::numeric::Rational;
use crate::piecewise::PiecewiseConstantFn;

/// Membership a vertex must show on the pattern's domain in every minimum cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedPattern {
    pub vertex: String,
    pub membership: PiecewiseConstantFn,
    /// Number of membership changes inside the domain.
    pub changes: usize,
}

#[derive(Clone, Debug)]
pub struct GadgetBundle {
    pub name: String,
    pub network: DynamicNetwork,
    /// Optimal value, when it does not depend on the solve window.
    pub predicted_value: Option<Rational>,
    pub reference_flow: Option<DynamicFlow>,
    pub reference_cut: Option<DynamicCut>,
    /// Whether the reference cut is claimed to be a minimum cut.
    pub reference_cut_is_minimum: bool,
    pub expected_patterns: Vec<ExpectedPattern>,
    /// Construction notes, including parameters fixed by this implementation.
    pub provenance: String,
}

impl GadgetBundle {
    fn new(name: impl Into<String>, network: DynamicNetwork, provenance: impl Into<String>) -> Self {
        GadgetBundle {
            name: name.into(),
            network,
            predicted_value: None,
            reference_flow: None,
            reference_cut: None,
            reference_cut_is_minimum: false,
            expected_patterns: Vec::new(),
            provenance: provenance.into(),
        }
    }
}

/// Transits of a chain of segments, each a pair of parallel edges with
/// transits `(d, 0)`, that realize every integer in `0..=max` exactly once
/// as a subset sum: powers of two plus one remainder.
pub(crate) fn bypass_transits(max: u64) -> Vec<u64> {
    let mut segments = Vec::new();
    let mut covered = 0u64;
    let mut power = 1u64;
    while covered + power <= max {
        segments.push(power);
        covered += power;
        power *= 2;
    }
    if covered < max {
        segments.push(max - covered);
    }
    segments
}

/// All sums of subsets of `values`.
pub(crate) fn subset_sums(values: &[u64]) -> BTreeSet<u64> {
    let mut sums = BTreeSet::from([0u64]);
    for &v in values {
        let next: Vec<u64> = sums.iter().map(|s| s + v).collect();
        sums.extend(next);
    }
    sums
}

/// Adds a chain `from -> ... -> to` of segments `(d, 0)`, with capacity
/// `capacity` on every edge; a chain without segments is a single
/// zero-transit edge. Intermediate vertices are named `{prefix}{i}`.
pub(crate) fn add_pair_chain(
    b: &mut NetworkBuilder,
    from: &str,
    to: &str,
    prefix: &str,
    segments: &[u64],
    capacity: &Rational,
) {
    if segments.is_empty() {
        b.static_edge(from, to, capacity.clone(), Rational::zero());
        return;
    }
    let mut current = from.to_string();
    for (i, &d) in segments.iter().enumerate() {
        let next = if i + 1 == segments.len() { to.to_string() } else { format!("{prefix}{}", i + 1) };
        b.static_edge(&current, &next, capacity.clone(), Rational::int(d as i64));
        b.static_edge(&current, &next, capacity.clone(), Rational::zero());
        current = next;
    }
}

fn max_capacity(net: &DynamicNetwork, pick: impl Fn(&str, &str) -> bool) -> Rational {
    net.edges.iter().filter(|e| pick(&e.tail, &e.head)).map(|e| e.capacity.max_value().clone()).sum()
}

/// Checks the capacity conditions that make `b` copy the membership of `a`
/// with the delay of edge `(a, b)`: the capacity of `(a, b)` must exceed
/// everything leaving `b`, and the capacity of `(b, target)` everything else
/// entering `b`.
pub fn check_mimicking(net: &DynamicNetwork, a: &str, b: &str) -> Result<()> {
    let alpha = max_capacity(net, |t, h| t == a && h == b);
    let beta = max_capacity(net, |t, h| t == b && h == net.target);
    let out = max_capacity(net, |t, _| t == b);
    let other_in = max_capacity(net, |t, h| h == b && t != a);
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::Gadget(format!("mimicking edges ({a},{b}) or ({b},{}) missing", net.target)));
    }
    if alpha <= out {
        return Err(Error::Gadget(format!("capacity {alpha} of ({a},{b}) does not exceed out-capacity {out} of {b}")));
    }
    if beta <= other_in {
        return Err(Error::Gadget(format!(
            "capacity {beta} of ({b},{}) does not exceed other in-capacity {other_in} of {b}",
            net.target
        )));
    }
    Ok(())
}

/// Adds edges `(a, b)` with capacity `alpha` and `(b, target)` with capacity
/// `beta`, then checks the mimicking conditions against the host.
pub fn gen_mimicking(
    host: &mut NetworkBuilder,
    a: &str,
    b: &str,
    alpha: Rational,
    beta: Rational,
    transit_ab: Rational,
    transit_bt: Rational,
) -> Result<(usize, usize)> {
    let target = host.network().target.clone();
    let mut trial = host.clone();
    let ab = trial.static_edge(a, b, alpha, transit_ab);
    let bt = trial.static_edge(b, &target, beta, transit_bt);
    check_mimicking(trial.network(), a, b)?;
    *host = trial;
    Ok((ab, bt))
}

/// Membership that starts at `initial` on `[lo, hi)` and toggles at each of
/// `times`.
pub(crate) fn toggling(lo: &Rational, hi: &Rational, initial: bool, times: &[Rational]) -> PiecewiseConstantFn {
    let mut value = initial;
    let steps: Vec<(Rational, Rational)> = times
        .iter()
        .map(|t| {
            value = !value;
            (t.clone(), if value { Rational::one() } else { Rational::zero() })
        })
        .collect();
    let start = if initial { Rational::one() } else { Rational::zero() };
    PiecewiseConstantFn::from_steps(lo.clone(), hi.clone(), start, &steps)
}
