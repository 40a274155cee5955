//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic
//! throughout. Runs as a plain binary so the lines always reach stdout.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use dynflow::dynamic::*;
use dynflow::gadgets::{counting_parameters, GadgetBundle};
use dynflow::network::common_step;
use dynflow::oracle::{check_reduction, tiny_flow_oracle, ReductionVariant};
use dynflow::static_maxflow::{expand, max_flow_oracle};
use dynflow::temporally_repeated::temporally_repeated;
use dynflow::{DynamicNetwork, Error, PartitionInstance, Rational};

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), summary: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

struct Solved {
    case: Case,
    report: SolveReport,
    eval: DynamicNetwork,
    elapsed: Duration,
}

fn solve_all(cases: Vec<Case>) -> Vec<Solved> {
    cases
        .into_iter()
        .map(|case| {
            let start = Instant::now();
            let report =
                solve(&case.network, &SolveOptions::default()).unwrap_or_else(|e| panic!("{}: {e}", case.name));
            let eval = report.evaluation_network(&case.network).unwrap();
            Solved { case, report, eval, elapsed: start.elapsed() }
        })
        .collect()
}

fn bundle(s: &Solved) -> &GadgetBundle {
    s.case.bundle.as_ref().expect("gadget case")
}

fn vertex_changes(s: &Solved, v: &str) -> usize {
    s.report.complexity.vertex_changes[s.case.network.vertex_index()[v]]
}

fn duality(solved: &[Solved]) -> Outcome {
    let mut out = Outcome::new();
    for s in solved {
        let value = flow_value(&s.eval, &s.report.flow);
        let cap = cut_capacity(&s.eval, &s.report.cut);
        let alt = cut_capacity(&s.eval, &s.report.alt_cut);
        let (Ok(value), Ok(cap), Ok(alt)) = (value, cap, alt) else {
            out.failures.push(format!("{}: evaluation error", s.case.name));
            continue;
        };
        out.check(value == cap && cap == alt && value == s.report.value, || {
            format!("{}: flow {value}, cut {cap}, other cut {alt}", s.case.name)
        });
        out.check(s.report.duality_gap.is_zero(), || format!("{}: reported gap", s.case.name));
        let infeasible = check_feasible(&s.eval, &s.report.flow);
        out.check(infeasible.is_empty(), || format!("{}: {:?}", s.case.name, infeasible));
    }
    out.summary = format!("{} instances, |f| = cap(S) for both canonical cuts", solved.len());
    out
}

fn random_multiset(rng: &mut ChaCha8Rng) -> Vec<u64> {
    loop {
        let len = rng.gen_range(1..=10);
        let items: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=12)).collect();
        if items.iter().sum::<u64>() % 2 == 0 {
            return items;
        }
    }
}

fn partition_equivalence() -> Outcome {
    let mut out = Outcome::new();
    let mut instances = all_multisets(6, 6);
    let exhaustive = instances.len();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    instances.extend((0..100).map(|_| random_multiset(&mut rng)));
    let mut solvable = 0;
    for items in &instances {
        let p = PartitionInstance::new(items.clone()).unwrap();
        for variant in [ReductionVariant::Cap, ReductionVariant::CapInf, ReductionVariant::TransitFinite] {
            match check_reduction(&p, variant, &SolveOptions::default()) {
                Ok(c) => {
                    solvable += (c.solvable && variant == ReductionVariant::Cap) as usize;
                    out.check(c.equivalent(), || {
                        format!(
                            "{items:?} {variant:?}: solvable {} but value {} vs {}",
                            c.solvable, c.value, c.threshold
                        )
                    });
                }
                Err(e) => out.failures.push(format!("{items:?} {variant:?}: {e}")),
            }
        }
    }
    out.summary = format!(
        "{} multisets ({exhaustive} exhaustive + 100 random, {solvable} solvable) x 3 variants agree with subset sum",
        instances.len()
    );
    out
}

fn counting_patterns(solved: &[Solved]) -> Outcome {
    let mut out = Outcome::new();
    let mut checked = 0;
    let (mut largest, mut top_time) = (0, Duration::ZERO);
    for s in solved.iter().filter(|s| s.case.name.starts_with("counting-chain")) {
        if s.case.name.ends_with("l=4") {
            largest = largest.max(s.report.expanded_nodes);
            top_time += s.elapsed;
        }
        let b = bundle(s);
        let l =
            b.expected_patterns.iter().filter_map(|p| p.vertex.strip_prefix('v')?.parse::<u32>().ok()).max().unwrap();
        let idx = s.case.network.vertex_index();
        let within = |v: &str| {
            let p = b.expected_patterns.iter().find(|p| p.vertex == v).unwrap();
            let m = &s.report.cut.membership[idx[v]];
            (m.restrict(p.membership.lo(), p.membership.hi()).unwrap(), p)
        };
        let vl = format!("v{l}");
        let (got, p) = within(&vl);
        let first = &counting_parameters(l).t0 + Rational::int(2) * &counting_parameters(l).delta;
        out.check(got == p.membership && got.count_changes() == 1 << l && got.change_times()[0] == first, || {
            format!("{}: v{l} changes {:?}", s.case.name, got.change_times())
        });
        for i in 1..=l {
            let a = format!("a{l}_{i}");
            let (got, p) = within(&a);
            let want = if i < l { 1usize << (l - i) } else { 2 };
            out.check(got == p.membership && got.count_changes() == want, || {
                format!("{}: {a} changes {:?}, want {want}", s.case.name, got.change_times())
            });
        }
        let e = s.case.network.edges.iter().position(|e| e.tail == format!("a{l}_1") && e.head == vl).unwrap();
        let fc = s.report.complexity.edge_changes[e];
        out.check(fc >= 1 << (l - 1), || format!("{}: flow on (a{l}_1,v{l}) changes {fc} times", s.case.name));
        checked += 1;
    }
    out.check(checked == 16, || format!("expected 16 chains, saw {checked}"));
    out.check(top_time < Duration::from_secs(600), || format!("l = 4 solves took {:.1}s", top_time.as_secs_f64()));
    out.summary = format!(
        "{checked} chains (l = 1..4, 4 variants): v_l changes 2^l times with period 2^-l inside its window, \
         a_(l,i) 2^(l-i) times (2 for i = l), flow on (a_(l,1), v_l) >= 2^(l-1); l = 4 solved in {:.1}s, \
         at most {largest} expanded nodes",
        top_time.as_secs_f64()
    );
    out
}

fn expflow(solved: &[Solved]) -> Outcome {
    let mut out = Outcome::new();
    let mut min_ratio = usize::MAX;
    for s in solved.iter().filter(|s| s.case.name.starts_with("expflow")) {
        let b = bundle(s);
        let k: u32 = s.case.name.rsplit("k=").next().unwrap().parse().unwrap();
        out.check(s.report.value == q(1), || format!("{}: value {}", s.case.name, s.report.value));
        let reference = b.reference_cut.as_ref().unwrap();
        let cap = cut_capacity(&s.case.network, reference).unwrap();
        let constant = reference.membership.iter().all(|m| m.count_changes() == 0);
        out.check(cap == q(1) && constant && b.reference_cut_is_minimum, || {
            format!("{}: reference cut capacity {cap}", s.case.name)
        });
        let total = s.report.complexity.flow_total;
        out.check(total >= 1 << (k - 1), || format!("{}: flow complexity {total}", s.case.name));
        min_ratio = min_ratio.min(total / (1 << (k - 1)));
    }
    out.summary = format!(
        "k = 1..8, capacity and transit variants: value 1, constant cut of capacity 1, flow complexity >= 2^(k-1) \
         (smallest ratio {min_ratio})"
    );
    out
}

fn expcut(solved: &[Solved]) -> Outcome {
    let mut out = Outcome::new();
    for s in solved.iter().filter(|s| s.case.name.starts_with("expcut")) {
        let b = bundle(s);
        let k: u32 = s.case.name.rsplit("k=").next().unwrap().parse().unwrap();
        let two_k = 1i64 << k;
        let want = Rational::frac(two_k, two_k + 1);
        out.check(s.report.value == want, || format!("{}: value {}", s.case.name, s.report.value));
        let net = &s.case.network;
        let flow = b.reference_flow.as_ref().unwrap();
        let infeasible = check_feasible(net, flow);
        out.check(infeasible.is_empty(), || format!("{}: reference flow {infeasible:?}", s.case.name));
        out.check(flow_value(net, flow).ok() == Some(want.clone()), || format!("{}: reference value", s.case.name));
        let (lo, hi) = net.horizon.domain();
        let most = flow_changes(net, flow, lo, hi).into_iter().max().unwrap_or(0);
        out.check(most <= 1, || format!("{}: reference flow has {most} changes on an edge", s.case.name));
        let ch = vertex_changes(s, &format!("x{k}"));
        out.check(ch >= 1 << (k - 1), || format!("{}: x{k} changes {ch} times", s.case.name));
    }
    out.summary = "k = 1..6, capacity and transit variants: value 2^k/(2^k+1), reference flow feasible with at most \
                   one change per edge, ch(x_k) >= 2^(k-1)"
        .into();
    out
}

fn cross_solver(random: &[Solved]) -> Outcome {
    let mut out = Outcome::new();
    let mut tiny = 0;
    for s in random {
        let net = &s.case.network;
        let value = &s.report.value;
        match temporally_repeated(net) {
            Ok((_, tr, _)) => out.check(&tr == value, || format!("{}: repeated {tr} vs {value}", s.case.name)),
            Err(e) => out.failures.push(format!("{}: {e}", s.case.name)),
        }
        let g = expand(net, &s.report.delta, 2_000_000).unwrap();
        let oracle = max_flow_oracle(&g);
        out.check(&oracle == value, || format!("{}: push-relabel {oracle} vs {value}", s.case.name));
        match tiny_flow_oracle(net) {
            Ok(t) => {
                tiny += 1;
                out.check(&t == value, || format!("{}: tiny oracle {t} vs {value}", s.case.name));
            }
            Err(Error::NodeBudget { .. }) => {}
            Err(e) => out.failures.push(format!("{}: tiny oracle {e}", s.case.name)),
        }
    }
    out.summary = format!(
        "{} random static instances: repeated-path and push-relabel values equal the solver everywhere, tiny oracle on {tiny}",
        random.len()
    );
    out
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::frac(rng.gen_range(1..=5), rng.gen_range(1..=5))
}

fn scaling(random: &[Solved], gadgets: &[Solved]) -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let picked: Vec<&Solved> = random.iter().skip(20).step_by(9).take(14).chain(gadgets.iter().take(6)).collect();
    for s in &picked {
        let (r, c) = (random_rational(&mut rng), random_rational(&mut rng));
        let offset = Rational::frac(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        let scaled = s.case.network.affine_time(&r, &offset).scale_capacities(&c);
        let report = match solve(&scaled, &SolveOptions::default()) {
            Ok(rep) => rep,
            Err(e) => {
                out.failures.push(format!("{}: {e}", s.case.name));
                continue;
            }
        };
        let expected = &r * &c * &s.report.value;
        out.check(report.value == expected, || format!("{} r={r} c={c}: {} vs {expected}", s.case.name, report.value));
        out.check(report.complexity == s.report.complexity, || format!("{} r={r}: change counts differ", s.case.name));
        let mapped: Vec<_> = s.report.cut.membership.iter().map(|m| m.affine_time(&r, &offset)).collect();
        out.check(mapped == report.cut.membership, || format!("{} r={r}: cut is not the scaled cut", s.case.name));
    }
    out.summary = format!(
        "{} instances under t -> r t + d and u -> c u: value scales by r c, identical change counts and mapped cut",
        picked.len()
    );
    out
}

fn refinement(random: &[Solved], gadgets: &[Solved]) -> Outcome {
    let mut out = Outcome::new();
    let picked: Vec<&Solved> = random.iter().take(60).chain(gadgets.iter()).collect();
    for s in &picked {
        let step = common_step(&s.case.network).unwrap();
        let halved = SolveOptions { delta: Some(&step / Rational::int(2)), ..SolveOptions::default() };
        match solve(&s.case.network, &halved) {
            Ok(r) => {
                out.check(r.value == s.report.value, || format!("{}: {} vs {}", s.case.name, r.value, s.report.value))
            }
            Err(e) => out.failures.push(format!("{}: {e}", s.case.name)),
        }
    }
    out.summary = format!("{} instances give the same value at step Δ and Δ/2", picked.len());
    out
}

fn saturation(solved: &[Solved]) -> Outcome {
    let mut out = Outcome::new();
    for s in solved {
        for cut in [&s.report.cut, &s.report.alt_cut] {
            let diags = check_saturation(&s.eval, &s.report.flow, cut);
            out.check(diags.is_empty(), || format!("{}: {:?}", s.case.name, &diags[..diags.len().min(3)]));
        }
    }
    out.summary = format!(
        "{} solves: forward crossing edges saturated, backward crossing edges empty, for both canonical cuts",
        solved.len()
    );
    out
}

fn static_cut_simplicity(random: &[Solved]) -> Outcome {
    let mut out = Outcome::new();
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for s in random {
        let (lo, hi) = &s.report.counted;
        let simple = |cut: &DynamicCut| cut_changes(cut, lo, hi).into_iter().all(|c| c <= 1);
        let first = simple(&s.report.cut);
        let second = simple(&s.report.alt_cut);
        let key = match (first, second) {
            (true, true) => "both",
            (true, false) => "source-reachable only",
            (false, true) => "sink-co-reachable only",
            (false, false) => "neither",
        };
        *tally.entry(key).or_default() += 1;
        out.check(first || second, || format!("{}: neither canonical cut is monotone", s.case.name));
    }
    out.summary = format!("{} random static instances, ch_v <= 1 by extraction: {tally:?}", random.len());
    out
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome, Duration)> = Vec::new();
    let mut run = |id: u32, name: &'static str, budget: u64, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(budget) {
            outcome.failures.push(format!("took {:.1}s, budget {budget}s", elapsed.as_secs_f64()));
        }
        let status = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {id:>2} {name}: {} ({:.1}s)", outcome.summary, elapsed.as_secs_f64());
        for f in outcome.failures.iter().take(10) {
            println!("         {f}");
        }
        results.push((id, name, outcome, elapsed));
    };

    // shared solves are timed under criterion 1, which is the first to need them
    let mut random = Vec::new();
    let mut gadgets = Vec::new();
    let mut finite_gadgets = Vec::new();
    run(1, "duality", 300, &mut || {
        random = solve_all(random_suite(200));
        let mut cases = partition_cases();
        cases.extend(counting_cases(4));
        cases.extend(expflow_cases(8));
        cases.extend(expcut_cases(6));
        gadgets = solve_all(cases);
        let mut out = duality(&random);
        let g = duality(&gadgets);
        out.failures.extend(g.failures);
        out.summary = format!(
            "{} random + {} gadget instances, |f| = cap(S) for both canonical cuts",
            random.len(),
            gadgets.len()
        );
        out
    });
    for s in &gadgets {
        let small_chain =
            !s.case.name.starts_with("counting-chain") || s.case.name.ends_with("l=1") || s.case.name.ends_with("l=2");
        if s.case.network.horizon.is_finite() && small_chain && !s.case.name.contains("k=8") {
            finite_gadgets.push(Solved {
                case: Case { name: s.case.name.clone(), network: s.case.network.clone(), bundle: None },
                report: s.report.clone(),
                eval: s.eval.clone(),
                elapsed: s.elapsed,
            });
        }
    }
    run(2, "partition equivalence", 600, &mut partition_equivalence);
    run(3, "counting-chain cut pattern", 600, &mut || counting_patterns(&gadgets));
    run(4, "exponential flow, simple cut", 300, &mut || expflow(&gadgets));
    run(5, "exponential cut, simple flow", 300, &mut || expcut(&gadgets));
    run(6, "cross-solver agreement", 300, &mut || cross_solver(&random));
    let mut scaling_pool: Vec<Solved> = Vec::new();
    for name in [
        "counting-chain-cap-finite l=2",
        "counting-chain-transit-finite l=2",
        "expflow-simplecut k=3",
        "expcut-simpleflow k=3",
        "partition-cap [1, 1, 2]",
        "partition-transit-finite [1, 1, 4]",
    ] {
        let s = gadgets.iter().find(|s| s.case.name == name).unwrap_or_else(|| panic!("{name}"));
        scaling_pool.push(Solved {
            case: Case { name: s.case.name.clone(), network: s.case.network.clone(), bundle: None },
            report: s.report.clone(),
            eval: s.eval.clone(),
            elapsed: s.elapsed,
        });
    }
    run(7, "scaling and translation invariance", 120, &mut || scaling(&random, &scaling_pool));
    run(8, "refinement invariance", 300, &mut || refinement(&random, &finite_gadgets));
    run(9, "saturation", 120, &mut || {
        let mut out = saturation(&random);
        let g = saturation(&gadgets);
        out.failures.extend(g.failures);
        out.summary = format!(
            "{} solves: forward crossing edges saturated, backward crossing edges empty, both canonical cuts",
            random.len() + gadgets.len()
        );
        out
    });
    run(10, "static cut simplicity", 120, &mut || static_cut_simplicity(&random));

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.failures.is_empty()).map(|r| r.0).collect();
    let total: f64 = results.iter().map(|r| r.3.as_secs_f64()).sum();
    println!("acceptance: {}/{} criteria passed in {total:.1}s", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
