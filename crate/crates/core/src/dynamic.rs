//! Dynamic flows and cuts: projection from the time-expanded graph,
//! evaluation of excess and cut capacity from their integral definitions,
//! change counting and the solve pipeline.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::network::{common_step, finite_window, DynamicNetwork, Edge, Horizon};
use crate::numeric::Rational;
use crate::piecewise::PiecewiseConstantFn;
use crate::static_maxflow::{
    self, expand, max_source_side_cut, min_cut, ArcKind, StaticCut, StaticFlow, TimeExpandedGraph,
};

/// Per-edge flow rate, indexed like the network's edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicFlow {
    pub rates: Vec<PiecewiseConstantFn>,
}

/// Per-vertex membership in the source side (1) or not (0), indexed like
/// the network's vertices. Beyond the horizon every vertex counts as 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicCut {
    pub membership: Vec<PiecewiseConstantFn>,
}

impl DynamicFlow {
    pub fn zero(net: &DynamicNetwork) -> Self {
        let (lo, hi) = net.horizon.domain();
        DynamicFlow {
            rates: vec![PiecewiseConstantFn::constant(lo.clone(), hi.clone(), Rational::zero()); net.edges.len()],
        }
    }
}

impl DynamicCut {
    /// Cut whose source side is the same vertex set at all times.
    pub fn fixed(net: &DynamicNetwork, source_side: &[&str]) -> Self {
        let (lo, hi) = net.horizon.domain();
        let membership = net
            .vertices
            .iter()
            .map(|v| {
                let inside = v == &net.source || source_side.contains(&v.as_str());
                let value = if inside && v != &net.target { Rational::one() } else { Rational::zero() };
                PiecewiseConstantFn::constant(lo.clone(), hi.clone(), value)
            })
            .collect();
        DynamicCut { membership }
    }

    /// Restriction of every membership function to `[lo, hi)`.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Result<Self> {
        let membership = self.membership.iter().map(|m| m.restrict(lo, hi)).collect::<Result<_>>()?;
        Ok(DynamicCut { membership })
    }
}

/// `f_e(Θ) = flow on the copy of e entering at the step of Θ, divided by Δ`.
pub fn project_flow(net: &DynamicNetwork, g: &TimeExpandedGraph, f: &StaticFlow) -> DynamicFlow {
    let (lo, hi) = (g.lo.clone(), g.hi());
    let mut pieces: Vec<Vec<(Rational, Rational, Rational)>> = vec![Vec::new(); net.edges.len()];
    for (arc, x) in g.arcs.iter().zip(&f.arc_flow) {
        if let ArcKind::Transit { edge, step } = arc.kind {
            if x.is_positive() {
                let start = g.step_start(step);
                let end = &start + &g.delta;
                pieces[edge].push((start, end, x / &g.delta));
            }
        }
    }
    DynamicFlow {
        rates: pieces.into_iter().map(|p| PiecewiseConstantFn::from_pieces(lo.clone(), hi.clone(), p)).collect(),
    }
}

/// `S_v(Θ) = 1` iff the copy of `v` at the step of `Θ` is on the source side.
pub fn project_cut(g: &TimeExpandedGraph, c: &StaticCut) -> DynamicCut {
    let hi = g.hi();
    let membership = (0..g.num_vertices)
        .map(|v| {
            let pieces = (0..g.steps).filter(|&step| c.contains(g.node(v, step))).map(|step| {
                let start = g.step_start(step);
                let end = &start + &g.delta;
                (start, end, Rational::one())
            });
            PiecewiseConstantFn::from_pieces(g.lo.clone(), hi.clone(), pieces)
        })
        .collect();
    DynamicCut { membership }
}

fn finite_domain(net: &DynamicNetwork) -> Result<(&Rational, &Rational)> {
    match &net.horizon {
        Horizon::Finite { lo, hi } => Ok((lo, hi)),
        Horizon::Infinite { .. } => {
            Err(Error::InvalidInput("evaluate infinite-horizon solutions on their finite window".into()))
        }
    }
}

fn check_flow_shape(net: &DynamicNetwork, flow: &DynamicFlow) -> Result<()> {
    let (lo, hi) = finite_domain(net)?;
    if flow.rates.len() != net.edges.len() {
        return Err(Error::InvalidInput(format!(
            "flow has {} rate functions for {} edges",
            flow.rates.len(),
            net.edges.len()
        )));
    }
    if flow.rates.iter().any(|r| r.lo() != lo || r.hi() != hi) {
        return Err(Error::InvalidInput("flow rate domain differs from the horizon".into()));
    }
    Ok(())
}

/// Flow that entered `e` during `[a, b)` and has arrived at its head by `theta`.
fn arrived(e: &Edge, rate: &PiecewiseConstantFn, theta: &Rational) -> Result<Rational> {
    let mut total = Rational::zero();
    for (a, b, c) in e.transit.pieces() {
        let latest = theta - c;
        if latest <= *a {
            continue;
        }
        let end = if latest < *b { latest } else { b.clone() };
        total += rate.integrate(a, &end)?;
    }
    Ok(total)
}

/// `ex_f(v, Θ)`: flow that arrived at `v` minus flow sent from `v` during
/// `[lo, Θ]`.
pub fn excess(net: &DynamicNetwork, flow: &DynamicFlow, v: &str, theta: &Rational) -> Result<Rational> {
    check_flow_shape(net, flow)?;
    let (lo, _) = finite_domain(net)?;
    if !net.vertices.iter().any(|w| w == v) {
        return Err(Error::InvalidInput(format!("unknown vertex {v}")));
    }
    let mut total = Rational::zero();
    for (e, rate) in net.edges.iter().zip(&flow.rates) {
        if e.head == v {
            total += arrived(e, rate, theta)?;
        }
        if e.tail == v && theta > lo {
            total -= &rate.integrate(lo, theta)?;
        }
    }
    Ok(total)
}

/// `|f| = ex_f(t, hi) = -ex_f(s, hi)`.
pub fn flow_value(net: &DynamicNetwork, flow: &DynamicFlow) -> Result<Rational> {
    let (_, hi) = finite_domain(net)?;
    let at_target = excess(net, flow, &net.target, hi)?;
    let at_source = excess(net, flow, &net.source, hi)?;
    if at_target != -&at_source {
        return Err(Error::ValueMismatch { at_target: at_target.to_string(), at_source: at_source.to_string() });
    }
    Ok(at_target)
}

/// Membership diagnostics: values in {0, 1}, `s` always in, `t` always out.
pub fn check_cut(net: &DynamicNetwork, cut: &DynamicCut) -> Vec<String> {
    let mut diags = Vec::new();
    let Ok((lo, hi)) = finite_domain(net) else {
        return vec!["cut must be evaluated on a finite horizon".into()];
    };
    if cut.membership.len() != net.vertices.len() {
        return vec![format!(
            "cut has {} membership functions for {} vertices",
            cut.membership.len(),
            net.vertices.len()
        )];
    }
    for (v, m) in net.vertices.iter().zip(&cut.membership) {
        if m.lo() != lo || m.hi() != hi {
            diags.push(format!("membership of {v} has domain [{}, {})", m.lo(), m.hi()));
        }
        if m.values().iter().any(|x| !x.is_zero() && *x != Rational::one()) {
            diags.push(format!("membership of {v} is not boolean"));
        }
    }
    let idx = net.vertex_index();
    if let Some(&s) = idx.get(net.source.as_str()) {
        if cut.membership[s].values().iter().any(|x| x.is_zero()) {
            diags.push(format!("source {} leaves the source side", net.source));
        }
    }
    if let Some(&t) = idx.get(net.target.as_str()) {
        if cut.membership[t].values().iter().any(|x| !x.is_zero()) {
            diags.push(format!("target {} enters the source side", net.target));
        }
    }
    diags
}

/// Subintervals of the transit piece `[a, b)` (transit `c`) on which the
/// capacity, the flow rate, the tail membership and the head membership at
/// arrival are all constant.
fn refine(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    hi: &Rational,
    fns: &[&PiecewiseConstantFn],
    head: &PiecewiseConstantFn,
) -> Vec<(Rational, Rational)> {
    let mut points: BTreeSet<Rational> = BTreeSet::new();
    points.insert(a.clone());
    points.insert(b.clone());
    let inside = |t: &Rational| t > a && t < b;
    for f in fns {
        points.extend(f.breakpoints().iter().filter(|t| inside(t)).cloned());
    }
    points.extend(head.breakpoints().iter().map(|t| t - c).filter(|t| inside(t)));
    let arrival_end = hi - c;
    if inside(&arrival_end) {
        points.insert(arrival_end);
    }
    let points: Vec<Rational> = points.into_iter().collect();
    points.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

/// `cap(S)`: integral over entry times `Θ` of the capacity of every edge
/// with tail in `S(Θ)` and head outside `S(Θ + τ_e(Θ))`.
pub fn cut_capacity(net: &DynamicNetwork, cut: &DynamicCut) -> Result<Rational> {
    let diags = check_cut(net, cut);
    if !diags.is_empty() {
        return Err(Error::InvalidInput(diags.join("; ")));
    }
    let (_, hi) = finite_domain(net)?;
    let topo = net.topology()?;
    let one = Rational::one();
    let mut total = Rational::zero();
    for (e, &(tail, head)) in net.edges.iter().zip(&topo.ends) {
        let (s_tail, s_head) = (&cut.membership[tail], &cut.membership[head]);
        for (a, b, c) in e.transit.pieces() {
            for (x, y) in refine(a, b, c, hi, &[&e.capacity, s_tail], s_head) {
                let out = s_tail.eval(&x, &one).is_positive();
                let arrival_outside = s_head.eval(&(&x + c), &one).is_zero();
                if out && arrival_outside {
                    total += (&y - &x) * e.capacity.value_at(&x).expect("inside domain");
                }
            }
        }
    }
    Ok(total)
}

/// Capacity and strong conservation diagnostics; empty iff the flow is
/// feasible.
pub fn check_feasible(net: &DynamicNetwork, flow: &DynamicFlow) -> Vec<String> {
    if let Err(e) = check_flow_shape(net, flow) {
        return vec![e.to_string()];
    }
    let (lo, hi) = finite_domain(net).expect("checked above");
    let mut diags = Vec::new();
    for (i, (e, rate)) in net.edges.iter().zip(&flow.rates).enumerate() {
        let label = net.edge_label(i);
        let pieces = rate.combine(&e.capacity, |f, u| {
            if f.is_negative() {
                Rational::int(-1)
            } else if f > u {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        for (a, b, v) in pieces.expect("same domain").pieces() {
            if v.is_negative() {
                diags.push(format!("{label}: negative rate on [{a}, {b})"));
            } else if v.is_positive() {
                diags.push(format!("{label}: rate exceeds capacity on [{a}, {b})"));
            }
        }
        for (a, b, c) in e.transit.pieces() {
            let latest = hi - c;
            let start = if latest > *a { latest } else { a.clone() };
            if start < *b && rate.integrate(&start, b).map_or(true, |x| !x.is_zero()) {
                diags.push(format!("{label}: flow entering in [{start}, {b}) arrives after {hi}"));
            }
        }
    }
    let topo = match net.topology() {
        Ok(t) => t,
        Err(e) => return vec![e.to_string()],
    };
    let mut net_rate: Vec<Vec<(Rational, Rational, Rational)>> = vec![Vec::new(); net.vertices.len()];
    for ((e, rate), &(tail, head)) in net.edges.iter().zip(&flow.rates).zip(&topo.ends) {
        for (x, y, r) in rate.pieces() {
            if r.is_zero() {
                continue;
            }
            net_rate[tail].push((x.clone(), y.clone(), -r));
            for (a, b, c) in e.transit.pieces() {
                let s = if x > a { x } else { a };
                let t = if y < b { y } else { b };
                if s < t {
                    net_rate[head].push((s + c, t + c, r.clone()));
                }
            }
        }
    }
    for (v, pieces) in net_rate.into_iter().enumerate() {
        if v == topo.source || v == topo.target {
            continue;
        }
        let rate = PiecewiseConstantFn::from_pieces(lo.clone(), hi.clone(), pieces);
        let mut ex = Rational::zero();
        for (a, b, r) in rate.pieces() {
            ex += (b - a) * r;
            if !ex.is_zero() {
                diags.push(format!("{}: excess {ex} at {b}", net.vertices[v]));
                break;
            }
        }
    }
    diags
}

/// Edges crossing the cut forward must be saturated, edges crossing it
/// backwards must be empty, at every entry time.
pub fn check_saturation(net: &DynamicNetwork, flow: &DynamicFlow, cut: &DynamicCut) -> Vec<String> {
    if let Err(e) = check_flow_shape(net, flow) {
        return vec![e.to_string()];
    }
    let mut diags = check_cut(net, cut);
    if !diags.is_empty() {
        return diags;
    }
    let (_, hi) = finite_domain(net).expect("checked above");
    let topo = net.topology().expect("valid network");
    let one = Rational::one();
    for (i, ((e, rate), &(tail, head))) in net.edges.iter().zip(&flow.rates).zip(&topo.ends).enumerate() {
        let (s_tail, s_head) = (&cut.membership[tail], &cut.membership[head]);
        for (a, b, c) in e.transit.pieces() {
            for (x, y) in refine(a, b, c, hi, &[&e.capacity, rate, s_tail], s_head) {
                let tail_in = s_tail.eval(&x, &one).is_positive();
                let head_in = s_head.eval(&(&x + c), &one).is_positive();
                let f = rate.value_at(&x).expect("inside domain");
                let u = e.capacity.value_at(&x).expect("inside domain");
                if tail_in && !head_in && f != u {
                    diags.push(format!("{}: crossing edge carries {f} < {u} on [{x}, {y})", net.edge_label(i)));
                }
                if !tail_in && head_in && f.is_positive() {
                    diags.push(format!("{}: reverse edge carries {f} on [{x}, {y})", net.edge_label(i)));
                }
            }
        }
    }
    diags
}

/// Membership changes of every vertex strictly inside `[lo, hi)`.
pub fn cut_changes(cut: &DynamicCut, lo: &Rational, hi: &Rational) -> Vec<usize> {
    cut.membership.iter().map(|m| m.change_times().iter().filter(|t| *t > lo && *t < hi).count()).collect()
}

/// Rate changes of every edge strictly inside `[lo, hi)`, counting only
/// changes between entry times whose flow can still arrive by the end of
/// the network's horizon.
pub fn flow_changes(net: &DynamicNetwork, flow: &DynamicFlow, lo: &Rational, hi: &Rational) -> Vec<usize> {
    let horizon_end = net.horizon.domain().1;
    net.edges
        .iter()
        .zip(&flow.rates)
        .map(|(e, rate)| {
            rate.change_times()
                .iter()
                .filter(|t| *t > lo && *t < hi)
                .filter(|t| {
                    let after = e.transit.value_at(t).is_some_and(|c| *t + c < *horizon_end);
                    let before = e.transit.value_before(t).is_some_and(|c| *t + c <= *horizon_end);
                    after && before
                })
                .count()
        })
        .collect()
}

/// Per-element and total change counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complexity {
    pub vertex_changes: Vec<usize>,
    pub edge_changes: Vec<usize>,
    pub cut_total: usize,
    pub flow_total: usize,
}

pub fn complexity(
    net: &DynamicNetwork,
    flow: &DynamicFlow,
    cut: &DynamicCut,
    lo: &Rational,
    hi: &Rational,
) -> Complexity {
    let vertex_changes = cut_changes(cut, lo, hi);
    let edge_changes = flow_changes(net, flow, lo, hi);
    Complexity {
        cut_total: vertex_changes.iter().sum(),
        flow_total: edge_changes.iter().sum(),
        vertex_changes,
        edge_changes,
    }
}

/// Which canonical minimum cut the report carries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CutExtraction {
    /// Nodes reachable from the source in the residual network.
    #[default]
    SourceReachable,
    /// Nodes that cannot reach the sink in the residual network.
    SinkCoReachable,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Time step; defaults to the common step of the instance.
    pub delta: Option<Rational>,
    pub max_nodes: u128,
    /// Initial padding multiplier for infinite horizons.
    pub padding: u64,
    pub max_doublings: u32,
    pub extraction: CutExtraction,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            delta: None,
            max_nodes: 2_000_000,
            padding: 1,
            max_doublings: 6,
            extraction: CutExtraction::default(),
        }
    }
}

/// Result of a solve. For infinite horizons every function lives on the
/// accepted finite window and change counts refer to the core interval.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub value: Rational,
    pub flow: DynamicFlow,
    pub cut: DynamicCut,
    /// The other canonical minimum cut.
    pub alt_cut: DynamicCut,
    pub extraction: CutExtraction,
    pub cut_capacity: Rational,
    pub duality_gap: Rational,
    pub delta: Rational,
    pub window: (Rational, Rational),
    /// Interval on which changes are counted.
    pub counted: (Rational, Rational),
    pub padding: Option<u64>,
    /// Value gained per unit of window length outside the core.
    pub density: Option<Rational>,
    pub expanded_nodes: usize,
    pub complexity: Complexity,
    /// Feasibility diagnostics of the flow; empty for a correct solve.
    pub diagnostics: Vec<String>,
}

impl SolveReport {
    /// The finite network the report's functions are defined on.
    pub fn evaluation_network(&self, net: &DynamicNetwork) -> Result<DynamicNetwork> {
        match self.padding {
            Some(p) => finite_window(net, p),
            None => Ok(net.clone()),
        }
    }
}

/// Maximum dynamic flow and minimum dynamic cut of `net`.
pub fn solve(net: &DynamicNetwork, opts: &SolveOptions) -> Result<SolveReport> {
    match &net.horizon {
        Horizon::Finite { lo, hi } => solve_finite(net, opts, (lo.clone(), hi.clone())),
        Horizon::Infinite { core_lo, core_hi } => solve_infinite(net, opts, core_lo, core_hi),
    }
}

fn solve_finite(net: &DynamicNetwork, opts: &SolveOptions, counted: (Rational, Rational)) -> Result<SolveReport> {
    let delta = match &opts.delta {
        Some(d) => d.clone(),
        None => common_step(net)?,
    };
    let g = expand(net, &delta, opts.max_nodes)?;
    let f = static_maxflow::max_flow(&g)?;
    let small = project_cut(&g, &min_cut(&g, &f)?);
    let large = project_cut(&g, &max_source_side_cut(&g, &f)?);
    let (cut, alt_cut) = match opts.extraction {
        CutExtraction::SourceReachable => (small, large),
        CutExtraction::SinkCoReachable => (large, small),
    };
    let flow = project_flow(net, &g, &f);
    let value = flow_value(net, &flow)?;
    let cap = cut_capacity(net, &cut)?;
    let complexity = complexity(net, &flow, &cut, &counted.0, &counted.1);
    let mut diagnostics = check_feasible(net, &flow);
    if value != f.value {
        diagnostics.push(format!("projected value {value} differs from static value {}", f.value));
    }
    let (lo, hi) = net.horizon.domain();
    Ok(SolveReport {
        duality_gap: &cap - &value,
        value,
        flow,
        cut,
        alt_cut,
        extraction: opts.extraction,
        cut_capacity: cap,
        delta,
        window: (lo.clone(), hi.clone()),
        counted,
        padding: None,
        density: None,
        expanded_nodes: g.num_nodes(),
        complexity,
        diagnostics,
    })
}

/// Solves growing finite windows, doubling the padding, until the cut on
/// the core no longer changes and the value grows linearly in the padding.
fn solve_infinite(
    net: &DynamicNetwork,
    opts: &SolveOptions,
    core_lo: &Rational,
    core_hi: &Rational,
) -> Result<SolveReport> {
    if opts.padding == 0 {
        return Err(Error::InvalidInput("padding multiplier must be positive".into()));
    }
    let counted = (core_lo.clone(), core_hi.clone());
    let mut padding = opts.padding;
    let mut values: Vec<Rational> = Vec::new();
    let mut paddings: Vec<u64> = Vec::new();
    let mut previous_core: Option<DynamicCut> = None;
    for level in 0..=opts.max_doublings {
        let window = finite_window(net, padding)?;
        let mut report = solve_finite(&window, opts, counted.clone())?;
        let core = report.cut.restrict(core_lo, core_hi)?;
        values.push(report.value.clone());
        paddings.push(padding);
        let j = values.len() - 1;
        if level >= 2 && previous_core.as_ref() == Some(&core) {
            let last = &values[j] - &values[j - 1];
            let before = &values[j - 1] - &values[j - 2];
            if last == Rational::int(2) * &before {
                let unit = crate::network::window_unit(net);
                let grown = Rational::int(2) * unit * Rational::int((paddings[j] - paddings[j - 1]) as i64);
                report.padding = Some(padding);
                report.density = Some(last / grown);
                return Ok(report);
            }
        }
        previous_core = Some(core);
        padding = padding.checked_mul(2).ok_or_else(|| Error::InvalidInput("padding multiplier overflow".into()))?;
    }
    Err(Error::NotStabilized(opts.max_doublings))
}
