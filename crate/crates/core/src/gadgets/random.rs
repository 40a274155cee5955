use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{DynamicNetwork, Horizon, NetworkBuilder};
use crate::numeric::Rational;

/// Reproducible random DAG with constant integer capacities in
/// `1..=max_cap` and transits in `0..=max_transit`. Vertices are `s`,
/// `v1..v{n-2}`, `t` in topological order; every edge points forward.
pub fn gen_random_static(n: usize, m: usize, max_cap: u32, max_transit: u32, seed: u64) -> Result<DynamicNetwork> {
    if n < 2 || m < 1 || max_cap < 1 {
        return Err(Error::InvalidInput("need n >= 2, m >= 1 and max_cap >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = |i: usize| match i {
        0 => "s".to_string(),
        i if i == n - 1 => "t".to_string(),
        i => format!("v{i}"),
    };
    let longest = max_transit as i64 * (n as i64 - 1);
    let horizon = rng.gen_range(1..=longest + 2);
    let mut b = NetworkBuilder::new("s", "t", Horizon::until(Rational::int(horizon)));
    for i in 1..n - 1 {
        b.vertex(&name(i));
    }
    for _ in 0..m {
        let tail = rng.gen_range(0..n - 1);
        let head = rng.gen_range(tail + 1..n);
        let cap = rng.gen_range(1..=max_cap) as i64;
        let transit = rng.gen_range(0..=max_transit) as i64;
        b.static_edge(&name(tail), &name(head), Rational::int(cap), Rational::int(transit));
    }
    Ok(b.build())
}
