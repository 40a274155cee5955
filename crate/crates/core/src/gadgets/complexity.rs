//! Networks separating the complexity of maximum flows from that of
//! minimum cuts.

use super::{toggling, ExpectedPattern, GadgetBundle};
use crate::dynamic::{DynamicCut, DynamicFlow};
use crate::error::{Error, Result};
use crate::network::{Horizon, NetworkBuilder};
use crate::numeric::Rational;
use crate::piecewise::PiecewiseConstantFn;

fn q(n: i64) -> Rational {
    Rational::int(n)
}

/// Every maximum flow changes exponentially often, while the cut `{s}` is
/// minimum. Entry into `v_0` is limited to `[0, 1)` by a capacity drop, or
/// by a transit jump to the horizon when `transit_variant` is set.
pub fn gen_expflow_simplecut(k: u32, transit_variant: bool) -> Result<GadgetBundle> {
    if k == 0 || k > 40 {
        return Err(Error::InvalidInput("size must be between 1 and 40".into()));
    }
    let horizon = q(1i64 << k);
    let mut b = NetworkBuilder::new("s", "t", Horizon::until(horizon.clone()));
    if transit_variant {
        let cap = b.constant(q(1));
        let transit = b.steps(q(0), &[(q(1), horizon.clone())]);
        b.edge("s", "v0", cap, transit);
    } else {
        let cap = b.steps(q(1), &[(q(1), q(0))]);
        let transit = b.constant(q(0));
        b.edge("s", "v0", cap, transit);
    }
    for i in 0..k {
        let (from, to) = (format!("v{i}"), format!("v{}", i + 1));
        b.static_edge(&from, &to, q(1), q(1i64 << (k - i - 1)));
        b.static_edge(&from, &to, q(1), q(0));
    }
    b.static_edge(&format!("v{k}"), "t", Rational::pow2(-(k as i32)), q(0));
    let net = b.build();
    let mut bundle = GadgetBundle::new(
        if transit_variant { "expflow-simplecut-transit" } else { "expflow-simplecut" },
        net,
        "chain of edge pairs with transits (2^(k-i-1), 0), (v_k,t) capacity 2^-k, horizon 2^k",
    );
    bundle.predicted_value = Some(q(1));
    bundle.reference_cut = Some(DynamicCut::fixed(&bundle.network, &[]));
    bundle.reference_cut_is_minimum = true;
    Ok(bundle)
}

/// Every minimum cut changes exponentially often, while a flow with at most
/// one rate change per edge is maximum. `(x_{2k}, t)` opens at `2^k` by a
/// capacity change, or by a transit drop from the horizon to zero when
/// `transit_variant` is set.
pub fn gen_expcut_simpleflow(k: u32, transit_variant: bool) -> Result<GadgetBundle> {
    if k == 0 || k > 30 {
        return Err(Error::InvalidInput("size must be between 1 and 30".into()));
    }
    let two_k = 1i64 << k;
    let horizon = q(two_k + 1);
    let rate_unit = Rational::frac(1, two_k + 1);
    let mut b = NetworkBuilder::new("s", "t", Horizon::until(horizon.clone()));
    let e_in = b.static_edge("s", "s'", rate_unit.clone(), q(0));
    let e_y0 = b.static_edge("s'", "y0", q(1), q(0));
    let mut pairs = Vec::new();
    for i in 0..k {
        let (from, to) = (format!("y{i}"), format!("y{}", i + 1));
        let long = b.static_edge(&from, &to, q(1), q(1i64 << (k - i - 1)));
        let short = b.static_edge(&from, &to, q(1), q(0));
        pairs.push((i, long, short));
    }
    let last_x = format!("x{}", 2 * k);
    let e_join = b.static_edge(&format!("y{k}"), &last_x, q(1), q(0));
    b.static_edge("s'", "x0", q(1), q(1));
    for i in 0..2 * k {
        let d = if i < k { 1i64 << (i + 1) } else { 1i64 << (2 * k - i) };
        let (from, to) = (format!("x{i}"), format!("x{}", i + 1));
        b.static_edge(&from, &to, q(1), q(d));
        b.static_edge(&from, &to, q(1), q(0));
    }
    let e_out = if transit_variant {
        let cap = b.constant(q(1));
        let transit = b.steps(horizon.clone(), &[(q(two_k), q(0))]);
        b.edge(&last_x, "t", cap, transit)
    } else {
        let cap = b.steps(q(0), &[(q(two_k), q(1))]);
        let transit = b.constant(q(0));
        b.edge(&last_x, "t", cap, transit)
    };
    let net = b.build();

    let (lo, hi) = (q(0), horizon.clone());
    let mut flow = DynamicFlow::zero(&net);
    let window =
        |a: Rational, z: Rational, r: Rational| PiecewiseConstantFn::from_pieces(lo.clone(), hi.clone(), [(a, z, r)]);
    flow.rates[e_in] = window(q(1), hi.clone(), rate_unit.clone());
    flow.rates[e_y0] = window(q(1), hi.clone(), rate_unit.clone());
    for (i, long, short) in pairs {
        let rate = Rational::pow2(i as i32) * &rate_unit;
        let start = q(two_k - (1i64 << (k - i)) + 1);
        let switch = q(two_k - (1i64 << (k - i - 1)) + 1);
        flow.rates[long] = window(start, switch.clone(), rate.clone());
        flow.rates[short] = window(switch, hi.clone(), rate);
    }
    let full = q(two_k) * &rate_unit;
    flow.rates[e_join] = window(q(two_k), hi.clone(), full.clone());
    flow.rates[e_out] = window(q(two_k), hi.clone(), full);

    let times: Vec<Rational> = (1..=two_k).map(q).collect();
    let x_k = ExpectedPattern {
        vertex: format!("x{k}"),
        membership: toggling(&lo, &hi, false, &times),
        changes: times.len(),
    };
    let s_prime = ExpectedPattern { vertex: "s'".into(), membership: toggling(&lo, &hi, true, &[q(1)]), changes: 1 };
    let mut bundle = GadgetBundle::new(
        if transit_variant { "expcut-simpleflow-transit" } else { "expcut-simpleflow" },
        net,
        "bypass pairs (2^(k-i-1), 0); x-chain pairs (2^(i+1), 0) for i < k and (2^(2k-i), 0) \
         afterwards; (s',x0) transit 1; reference flow routes everything over the bypass",
    );
    bundle.predicted_value = Some(q(two_k) * rate_unit);
    bundle.reference_flow = Some(flow);
    bundle.expected_patterns = vec![s_prime, x_k];
    Ok(bundle)
}
