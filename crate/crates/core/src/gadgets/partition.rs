//! Flow networks whose optimum reveals whether a partition instance is
//! solvable.

use std::collections::BTreeSet;

use super::{add_pair_chain, bypass_transits, subset_sums, GadgetBundle};
use crate::error::{Error, Result};
use crate::network::{Horizon, NetworkBuilder, PartitionInstance};
use crate::numeric::Rational;
use crate::oracle::partition_solvable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitMode {
    Finite,
    Infinite,
}

fn q(n: i64) -> Rational {
    Rational::int(n)
}

/// `x_0 -> x_k` through one segment `(b_i, 0)` per item.
fn add_item_chain(b: &mut NetworkBuilder, p: &PartitionInstance) -> String {
    for (i, &item) in p.items().iter().enumerate() {
        let (from, to) = (format!("x{i}"), format!("x{}", i + 1));
        b.static_edge(&from, &to, q(1), q(item as i64));
        b.static_edge(&from, &to, q(1), q(0));
    }
    format!("x{}", p.items().len())
}

fn add_bypass(b: &mut NetworkBuilder, last: &str, segments: &[u64], expected: BTreeSet<u64>) -> Result<()> {
    let sums = subset_sums(segments);
    if sums != expected {
        return Err(Error::Gadget(format!("bypass realizes {sums:?}, expected {expected:?}")));
    }
    add_pair_chain(b, "x0", last, "y", segments, &q(1));
    Ok(())
}

/// Single capacity change, horizon `L + 3`: value 1 iff solvable, otherwise
/// `L / (L + 1)`.
pub fn gen_partition_cap(p: &PartitionInstance) -> Result<GadgetBundle> {
    let l = p.half() as i64;
    let mut b = NetworkBuilder::new("s", "t", Horizon::until(q(l + 3)));
    b.static_edge("s", "x0", Rational::frac(1, l + 1), q(1));
    let last = add_item_chain(&mut b, p);
    add_bypass(&mut b, &last, &bypass_transits(l as u64 - 1), (0..l as u64).collect())?;
    let gate = b.steps(q(0), &[(q(l + 1), q(1))]);
    let transit = b.constant(q(1));
    b.edge(&last, "t", gate, transit);
    let mut bundle = GadgetBundle::new(
        "partition-cap",
        b.build(),
        "partition reduction with one capacity change; (s,x0) has transit 1 and capacity 1/(L+1), \
         (x_k,t) has transit 1 and opens at L+1, horizon L+3; bypass transits 0..L-1",
    );
    bundle.predicted_value = Some(if partition_solvable(p) { q(1) } else { Rational::frac(l, l + 1) });
    Ok(bundle)
}

/// Infinite considered time, `(x_k, t)` open only during `[2L+1, 2L+2)`:
/// value 1 iff solvable, otherwise `2L / (2L + 1)`.
pub fn gen_partition_cap_inf(p: &PartitionInstance) -> Result<GadgetBundle> {
    let l = p.half() as i64;
    let horizon = Horizon::Infinite { core_lo: q(0), core_hi: q(2 * l + 3) };
    let mut b = NetworkBuilder::new("s", "t", horizon);
    b.static_edge("s", "x0", Rational::frac(1, 2 * l + 1), q(1));
    let last = add_item_chain(&mut b, p);
    let mut segments = bypass_transits(l as u64 - 1);
    segments.push(l as u64 + 1);
    let expected = (0..=2 * l as u64).filter(|&d| d != l as u64).collect();
    add_bypass(&mut b, &last, &segments, expected)?;
    let gate = b.steps(q(0), &[(q(2 * l + 1), q(1)), (q(2 * l + 2), q(0))]);
    let transit = b.constant(q(1));
    b.edge(&last, "t", gate, transit);
    let mut bundle = GadgetBundle::new(
        "partition-cap-inf",
        b.build(),
        "partition reduction for infinite time with two capacity changes; bypass transits \
         {0..2L} without L so that departures at every time are matched, (s,x0) capacity 1/(2L+1)",
    );
    bundle.predicted_value = Some(if partition_solvable(p) { q(1) } else { Rational::frac(2 * l, 2 * l + 1) });
    Ok(bundle)
}

/// Single transit change of `(s, x_0)` from 1 to 0, at time 1 with horizon
/// `2L + 2` (finite) or at time 0 (infinite). Finite value is `2L + 2` iff
/// solvable, otherwise `2L + 1 + 2L / (2L + 1)`.
pub fn gen_partition_transit(p: &PartitionInstance, mode: TransitMode) -> Result<GadgetBundle> {
    let l = p.half() as i64;
    let (horizon, switch) = match mode {
        TransitMode::Finite => (Horizon::until(q(2 * l + 2)), q(1)),
        TransitMode::Infinite => (Horizon::Infinite { core_lo: q(-1), core_hi: q(2 * l + 1) }, q(0)),
    };
    let mut b = NetworkBuilder::new("s", "t", horizon);
    let cap = b.constant(q(1));
    let transit = b.steps(q(1), &[(switch, q(0))]);
    b.edge("s", "x0", cap, transit);
    b.static_edge("x0", "t", q(1), q(0));
    let last = add_item_chain(&mut b, p);
    let mut segments = bypass_transits(l as u64 - 1);
    segments.push(l as u64 + 1);
    let expected = (0..=2 * l as u64).filter(|&d| d != l as u64).collect();
    add_bypass(&mut b, &last, &segments, expected)?;
    b.static_edge(&last, "t", Rational::frac(1, 2 * l + 1), q(0));
    let name = match mode {
        TransitMode::Finite => "partition-transit-finite",
        TransitMode::Infinite => "partition-transit-infinite",
    };
    let mut bundle = GadgetBundle::new(
        name,
        b.build(),
        "partition reduction with one transit change on (s,x0); bypass transits {0..L-1} plus a \
         series pair (L+1, 0), (x_k,t) capacity 1/(2L+1)",
    );
    if mode == TransitMode::Finite {
        let full = q(2 * l + 2);
        bundle.predicted_value = Some(if partition_solvable(p) { full } else { full - Rational::frac(1, 2 * l + 1) });
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{common_step, validate};

    fn inst(items: &[u64]) -> PartitionInstance {
        PartitionInstance::new(items.to_vec()).unwrap()
    }

    #[test]
    fn generated_instances_validate() {
        for items in [&[1, 1][..], &[1, 1, 2], &[1, 1, 4], &[2, 2], &[3, 5, 2, 6]] {
            let p = inst(items);
            for bundle in [
                gen_partition_cap(&p).unwrap(),
                gen_partition_cap_inf(&p).unwrap(),
                gen_partition_transit(&p, TransitMode::Finite).unwrap(),
                gen_partition_transit(&p, TransitMode::Infinite).unwrap(),
            ] {
                assert!(validate(&bundle.network).is_empty(), "{}", bundle.name);
            }
        }
    }

    #[test]
    fn single_capacity_change_and_horizon() {
        let p = inst(&[1, 1, 2]);
        let net = gen_partition_cap(&p).unwrap().network;
        let changes: usize = net.edges.iter().map(|e| e.capacity.count_changes() + e.transit.count_changes()).sum();
        assert_eq!(changes, 1);
        assert_eq!(net.horizon, Horizon::until(q(5)));
        assert_eq!(common_step(&net).unwrap(), q(1));
        let gate = &net.edges.last().unwrap().capacity;
        assert_eq!(gate.integrate(&q(0), &q(5)).unwrap(), q(2));
    }
}
