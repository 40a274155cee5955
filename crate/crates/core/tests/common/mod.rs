#![allow(dead_code)]

use dynflow::gadgets::*;
use dynflow::{DynamicNetwork, PartitionInstance, Rational};

pub fn q(n: i64) -> Rational {
    Rational::int(n)
}

pub struct Case {
    pub name: String,
    pub network: DynamicNetwork,
    pub bundle: Option<GadgetBundle>,
}

impl Case {
    fn from_bundle(name: String, b: GadgetBundle) -> Self {
        Case { name, network: b.network.clone(), bundle: Some(b) }
    }
}

/// Parameters of the `i`-th instance of the random static suite.
pub fn random_params(i: u64) -> (usize, usize, u32, u32) {
    let n = 2 + (i % 11) as usize;
    let m = 1 + (i as usize * 7) % (3 * n);
    (n, m, 1 + (i % 5) as u32, (i % 4) as u32)
}

pub fn random_static(i: u64) -> DynamicNetwork {
    let (n, m, cap, transit) = random_params(i);
    gen_random_static(n, m, cap, transit, i).unwrap()
}

pub fn random_suite(count: u64) -> Vec<Case> {
    (0..count).map(|i| Case { name: format!("random-{i}"), network: random_static(i), bundle: None }).collect()
}

pub const PARTITION_SAMPLES: [&[u64]; 6] = [&[1, 1], &[1, 1, 2], &[1, 1, 4], &[2, 2], &[3, 5, 2, 6], &[1, 3]];

pub fn partition_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for items in PARTITION_SAMPLES {
        let p = PartitionInstance::new(items.to_vec()).unwrap();
        let bundles = [
            gen_partition_cap(&p).unwrap(),
            gen_partition_cap_inf(&p).unwrap(),
            gen_partition_transit(&p, TransitMode::Finite).unwrap(),
            gen_partition_transit(&p, TransitMode::Infinite).unwrap(),
        ];
        for b in bundles {
            out.push(Case::from_bundle(format!("{} {items:?}", b.name), b));
        }
    }
    out
}

pub fn counting_cases(max_l: u32) -> Vec<Case> {
    let mut out = Vec::new();
    for l in 1..=max_l {
        for variant in ChainVariant::ALL {
            let b = gen_counting_chain(l, variant).unwrap();
            out.push(Case::from_bundle(format!("{} l={l}", b.name), b));
        }
    }
    out
}

pub fn expflow_cases(max_k: u32) -> Vec<Case> {
    (1..=max_k)
        .flat_map(|k| [false, true].map(move |t| (k, t)))
        .map(|(k, t)| {
            let b = gen_expflow_simplecut(k, t).unwrap();
            Case::from_bundle(format!("{} k={k}", b.name), b)
        })
        .collect()
}

pub fn expcut_cases(max_k: u32) -> Vec<Case> {
    (1..=max_k)
        .flat_map(|k| [false, true].map(move |t| (k, t)))
        .map(|(k, t)| {
            let b = gen_expcut_simpleflow(k, t).unwrap();
            Case::from_bundle(format!("{} k={k}", b.name), b)
        })
        .collect()
}

/// Every multiset of `1..=max_value` with `1..=max_len` items and even sum.
pub fn all_multisets(max_len: usize, max_value: u64) -> Vec<Vec<u64>> {
    fn rec(start: u64, max_value: u64, left: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !cur.is_empty() && cur.iter().sum::<u64>() % 2 == 0 {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for v in start..=max_value {
            cur.push(v);
            rec(v, max_value, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, max_value, max_len, &mut Vec::new(), &mut out);
    out
}
