mod common;

use common::q;
use dynflow::dynamic::*;
use dynflow::gadgets::*;
use dynflow::{DynamicNetwork, PartitionInstance, Rational};

fn membership_changes(net: &DynamicNetwork, r: &SolveReport, v: &str, lo: &Rational, hi: &Rational) -> usize {
    let idx = net.vertex_index();
    r.cut.membership[idx[v]].restrict(lo, hi).unwrap().count_changes()
}

fn window(b: &GadgetBundle, v: &str) -> (Rational, Rational) {
    let p = b.expected_patterns.iter().find(|p| p.vertex == v).unwrap();
    (p.membership.lo().clone(), p.membership.hi().clone())
}

#[test]
fn one_level_chain_toggles_twice() {
    let b = gen_counting_chain(1, ChainVariant::CapFinite).unwrap();
    let r = solve(&b.network, &SolveOptions::default()).unwrap();
    let (lo, hi) = window(&b, "v1");
    assert_eq!(membership_changes(&b.network, &r, "v1", &lo, &hi), 2);
    assert_eq!(r.value, b.predicted_value.clone().unwrap_or_else(|| r.value.clone()));
}

#[test]
fn three_level_infinite_transit_chain() {
    let b = gen_counting_chain(3, ChainVariant::TransitInfinite).unwrap();
    let r = solve(&b.network, &SolveOptions::default()).unwrap();
    assert!(r.padding.is_some());
    let idx = b.network.vertex_index();
    assert_eq!(r.complexity.vertex_changes[idx["v3"]], 8);
    assert_eq!(r.complexity.vertex_changes[idx["a3_1"]], 4);
    assert_eq!(r.complexity.vertex_changes[idx["a3_2"]], 2);
    assert_eq!(r.complexity.vertex_changes[idx["a3_3"]], 2);
}

#[test]
fn chain_variants_agree_on_counts() {
    for variant in ChainVariant::ALL {
        let b = gen_counting_chain(2, variant).unwrap();
        let r = solve(&b.network, &SolveOptions::default()).unwrap();
        for p in &b.expected_patterns {
            let (lo, hi) = (p.membership.lo(), p.membership.hi());
            let got = r.cut.membership[b.network.vertex_index()[p.vertex.as_str()]].restrict(lo, hi).unwrap();
            assert_eq!(got, p.membership, "{} {}", variant.name(), p.vertex);
        }
    }
}

#[test]
fn chain_parameters_shrink_geometrically() {
    for k in 1..5 {
        let (a, b) = (counting_parameters(k), counting_parameters(k + 1));
        assert_eq!(a.delta, Rational::int(2) * &b.delta);
        assert_eq!(a.lambda, Rational::int(5) * &b.lambda);
        assert!(b.t0 > a.t0);
    }
}

#[test]
fn smallest_exponential_flow_gadgets() {
    for transit in [false, true] {
        let b = gen_expflow_simplecut(1, transit).unwrap();
        let r = solve(&b.network, &SolveOptions::default()).unwrap();
        assert_eq!(r.value, q(1));
        assert_eq!(b.predicted_value, Some(q(1)));
        assert!(!b.network.is_static());
        let timed = b.network.edges.iter().any(|e| !e.has_constant_transit());
        assert_eq!(timed, transit);
    }
}

#[test]
fn exponential_cut_value_at_three() {
    for transit in [false, true] {
        let b = gen_expcut_simpleflow(3, transit).unwrap();
        let r = solve(&b.network, &SolveOptions::default()).unwrap();
        assert_eq!(r.value, Rational::frac(8, 9));
        let flow = b.reference_flow.as_ref().unwrap();
        assert_eq!(flow_value(&b.network, flow).unwrap(), Rational::frac(8, 9));
        assert!(membership_changes(&b.network, &r, "x3", &q(0), &q(8)) >= 4);
    }
}

#[test]
fn partition_values() {
    let cases: [(&[u64], Rational, Rational, Rational); 4] = [
        (&[1, 1, 2], q(1), q(1), q(6)),
        (&[1, 1, 4], Rational::frac(3, 4), Rational::frac(6, 7), Rational::frac(55, 7)),
        (&[1, 3], Rational::frac(2, 3), Rational::frac(4, 5), Rational::frac(29, 5)),
        (&[2, 2], q(1), q(1), q(6)),
    ];
    for (items, cap, cap_inf, transit) in cases {
        let p = PartitionInstance::new(items.to_vec()).unwrap();
        let value = |b: GadgetBundle| solve(&b.network, &SolveOptions::default()).unwrap().value;
        assert_eq!(value(gen_partition_cap(&p).unwrap()), cap, "{items:?}");
        assert_eq!(value(gen_partition_cap_inf(&p).unwrap()), cap_inf, "{items:?}");
        assert_eq!(value(gen_partition_transit(&p, TransitMode::Finite).unwrap()), transit, "{items:?}");
    }
}

#[test]
fn mimicking_rejects_weak_edges() {
    let b = gen_counting_chain(1, ChainVariant::CapFinite).unwrap();
    assert!(check_mimicking(&b.network, "a1_1", "b1_1").is_ok());
    let mut weak = b.network.clone();
    for e in weak.edges.iter_mut().filter(|e| e.tail == "a1_1" && e.head == "b1_1") {
        e.capacity = e.capacity.map_values(|_| Rational::frac(1, 1_000_000));
    }
    assert!(check_mimicking(&weak, "a1_1", "b1_1").is_err());
}

#[test]
fn random_generator_is_seeded() {
    let a = gen_random_static(7, 15, 4, 3, 11).unwrap();
    assert_eq!(a, gen_random_static(7, 15, 4, 3, 11).unwrap());
    assert_ne!(a, gen_random_static(7, 15, 4, 3, 12).unwrap());
    assert!(a.is_static());
}
