//! Chained binary counting gadgets forcing exponentially many membership
//! changes of one vertex in every minimum cut.

use super::{check_mimicking, toggling, ExpectedPattern, GadgetBundle};
use crate::error::{Error, Result};
use crate::network::{DynamicNetwork, Horizon, NetworkBuilder};
use crate::numeric::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainVariant {
    CapFinite,
    CapInfinite,
    TransitFinite,
    TransitInfinite,
}

impl ChainVariant {
    pub const ALL: [ChainVariant; 4] = [
        ChainVariant::CapFinite,
        ChainVariant::CapInfinite,
        ChainVariant::TransitFinite,
        ChainVariant::TransitInfinite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChainVariant::CapFinite => "cap-finite",
            ChainVariant::CapInfinite => "cap-infinite",
            ChainVariant::TransitFinite => "transit-finite",
            ChainVariant::TransitInfinite => "transit-infinite",
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ChainVariant::CapFinite | ChainVariant::TransitFinite)
    }
}

/// Time scale, offset and capacity scale of the gadget of size `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLevel {
    pub k: u32,
    /// `2^-k`
    pub delta: Rational,
    /// `2 + 3(1 - 2Δ_k) + Δ_k`
    pub t0: Rational,
    /// `5^-k`
    pub lambda: Rational,
}

pub fn counting_parameters(k: u32) -> ChainLevel {
    let delta = Rational::pow2(-(k as i32));
    let t0 = Rational::int(2) + Rational::int(3) * (Rational::one() - Rational::int(2) * &delta) + &delta;
    let lambda = Rational::int(5).powi(-(k as i32));
    ChainLevel { k, delta, t0, lambda }
}

fn epsilon() -> Rational {
    Rational::frac(1, 6)
}

fn gamma(i: u32) -> Rational {
    Rational::pow2(i as i32) + Rational::int(4) * epsilon()
}

fn q(n: i64) -> Rational {
    Rational::int(n)
}

pub fn central(k: u32) -> String {
    format!("v{k}")
}

pub fn counter(k: u32, i: u32) -> String {
    format!("a{k}_{i}")
}

fn mirror(k: u32, i: u32) -> String {
    format!("b{k}_{i}")
}

fn add_start(b: &mut NetworkBuilder, variant: ChainVariant) {
    match variant {
        ChainVariant::CapFinite | ChainVariant::CapInfinite => {
            b.static_edge("s", "v0", q(2), q(1));
            let mut steps = vec![(q(2), q(3))];
            if variant == ChainVariant::CapInfinite {
                steps.push((q(3), q(0)));
            }
            let cap = b.steps(q(1), &steps);
            let transit = b.constant(q(3));
            b.edge("v0", "t", cap, transit);
        }
        ChainVariant::TransitFinite | ChainVariant::TransitInfinite => {
            // nothing reaches v0 during [2, 3): entries before 1 arrive
            // before 2, later ones after 3
            let cap = b.constant(q(2));
            let transit = b.steps(q(1), &[(q(1), q(2))]);
            b.edge("s", "v0", cap, transit);
            b.static_edge("v0", "t", q(1), q(3));
        }
    }
}

fn add_counting_gadget(b: &mut NetworkBuilder, k: u32) {
    let ChainLevel { delta, lambda, .. } = counting_parameters(k);
    let eps = epsilon();
    let v = central(k);
    b.static_edge("s", &v, &lambda * (Rational::one() - &eps), delta.clone());
    for i in 1..=k {
        let (a, m) = (counter(k, i), mirror(k, i));
        let half = Rational::pow2(i as i32 - 1);
        let alpha = &half + Rational::int(2) * &eps;
        let beta = &half + &eps;
        let period = Rational::pow2(i as i32);
        b.static_edge(&a, &m, &lambda * alpha, (period + Rational::one()) * &delta);
        b.static_edge(&m, "t", &lambda * beta, delta.clone());
        b.static_edge(&a, &v, &lambda * &half, delta.clone());
        b.static_edge(&v, &m, &lambda * &half, delta.clone());
        // a_{k,i} copies v_{k-i}, whose period matches 2^i steps of size Δ_k
        let source_level = Rational::pow2(-((k - i) as i32));
        let delay = Rational::int(3) * (source_level - Rational::int(2) * &delta) + &delta;
        b.static_edge(&central(k - i), &a, &lambda * gamma(i), delay);
        b.static_edge(&a, "t", &lambda * &eps, delta.clone());
    }
}

fn check_budget(l: u32) -> Result<()> {
    for k in 0..l {
        let outgoing: Rational = (1..=l - k).map(|i| counting_parameters(k + i).lambda * gamma(i)).sum();
        let allowance = counting_parameters(k).lambda * (Rational::one() - epsilon());
        if outgoing >= allowance {
            return Err(Error::Gadget(format!("links leaving v{k} carry {outgoing}, not below {allowance}")));
        }
    }
    Ok(())
}

/// Expected memberships of `v_0`, every `v_k` and every `a_{k,i}`.
fn patterns(l: u32) -> Vec<ExpectedPattern> {
    let mut out = Vec::new();
    let pattern = |vertex: String, lo: Rational, hi: Rational, times: Vec<Rational>| {
        let membership = toggling(&lo, &hi, true, &times);
        ExpectedPattern { vertex, changes: times.len(), membership }
    };
    out.push(pattern("v0".into(), q(1), q(4), vec![q(2), q(3)]));
    for k in 1..=l {
        let ChainLevel { delta, t0, .. } = counting_parameters(k);
        let times = (0..1u64 << k).map(|j| &t0 + Rational::int(j as i64 + 2) * &delta).collect();
        let end = &t0 + Rational::one() + Rational::int(2) * &delta;
        out.push(pattern(central(k), &t0 + &delta, end, times));
        for i in 1..k {
            let period = Rational::pow2(i as i32) * &delta;
            let times = (0..1u64 << (k - i)).map(|m| &t0 + Rational::int(m as i64) * &period).collect();
            out.push(pattern(counter(k, i), &t0 - &delta, &t0 + Rational::one(), times));
        }
        let last = vec![t0.clone(), &t0 + Rational::one()];
        out.push(pattern(counter(k, k), &t0 - &delta, &t0 + Rational::one() + &delta, last));
    }
    out
}

/// Counting chain of depth `l`: a start gadget driving `v_0`, then counting
/// gadgets of sizes `1..=l`, the one of size `k` compressed by `2^-k`,
/// shifted to start at `T_{0,k}` and scaled by `5^-k` in capacity.
pub fn gen_counting_chain(l: u32, variant: ChainVariant) -> Result<GadgetBundle> {
    if l == 0 {
        return Err(Error::InvalidInput("counting chain needs depth at least 1".into()));
    }
    let horizon =
        if variant.is_finite() { Horizon::until(q(6)) } else { Horizon::Infinite { core_lo: q(0), core_hi: q(6) } };
    let mut b = NetworkBuilder::new("s", "t", horizon);
    add_start(&mut b, variant);
    for k in 1..=l {
        add_counting_gadget(&mut b, k);
    }
    let net = b.build();
    check_links(&net, l)?;
    check_budget(l)?;
    let mut bundle = GadgetBundle::new(
        format!("counting-chain-{}", variant.name()),
        net,
        "chained binary counting gadgets with epsilon 1/6; links (a_{k,i},t) use transit 2^-k; \
         the chain includes the gadget of size 1",
    );
    bundle.expected_patterns = patterns(l);
    Ok(bundle)
}

fn check_links(net: &DynamicNetwork, l: u32) -> Result<()> {
    for k in 1..=l {
        for i in 1..=k {
            check_mimicking(net, &counter(k, i), &mirror(k, i))?;
            check_mimicking(net, &central(k - i), &counter(k, i))?;
        }
    }
    Ok(())
}
