//! File formats: JSON instances, reports and prediction sidecars, CSV
//! timelines and DOT graphs. Rationals are written as `"num/den"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dynamic::{complexity, Complexity, CutExtraction, DynamicCut, DynamicFlow, SolveReport};
use crate::error::{Error, Result};
use crate::gadgets::GadgetBundle;
use crate::network::{validate, DynamicNetwork, Edge, Horizon};
use crate::numeric::Rational;
use crate::piecewise::{PiecewiseConstantFn, StepFnRepr};
use crate::static_maxflow::{ArcKind, Capacity, TimeExpandedGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HorizonJson {
    Finite { lo: Rational, hi: Rational },
    Infinite { core_lo: Rational, core_hi: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub tail: String,
    pub head: String,
    pub capacity: StepFnRepr,
    pub transit: StepFnRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub vertices: Vec<String>,
    pub source: String,
    pub target: String,
    pub horizon: HorizonJson,
    pub edges: Vec<EdgeJson>,
}

impl From<&DynamicNetwork> for NetworkJson {
    fn from(net: &DynamicNetwork) -> Self {
        let horizon = match &net.horizon {
            Horizon::Finite { lo, hi } => HorizonJson::Finite { lo: lo.clone(), hi: hi.clone() },
            Horizon::Infinite { core_lo, core_hi } => {
                HorizonJson::Infinite { core_lo: core_lo.clone(), core_hi: core_hi.clone() }
            }
        };
        NetworkJson {
            vertices: net.vertices.clone(),
            source: net.source.clone(),
            target: net.target.clone(),
            horizon,
            edges: net
                .edges
                .iter()
                .map(|e| EdgeJson {
                    tail: e.tail.clone(),
                    head: e.head.clone(),
                    capacity: e.capacity.to_repr(),
                    transit: e.transit.to_repr(),
                })
                .collect(),
        }
    }
}

impl NetworkJson {
    /// Builds the network and rejects it unless it validates.
    pub fn into_network(self) -> Result<DynamicNetwork> {
        let horizon = match self.horizon {
            HorizonJson::Finite { lo, hi } => Horizon::Finite { lo, hi },
            HorizonJson::Infinite { core_lo, core_hi } => Horizon::Infinite { core_lo, core_hi },
        };
        let (lo, hi) = horizon.domain();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            let at = |what: &str, err: Error| Error::Parse(format!("edge {i} ({}->{}) {what}: {err}", e.tail, e.head));
            edges.push(Edge {
                tail: e.tail.clone(),
                head: e.head.clone(),
                capacity: PiecewiseConstantFn::from_repr(lo, hi, &e.capacity).map_err(|err| at("capacity", err))?,
                transit: PiecewiseConstantFn::from_repr(lo, hi, &e.transit).map_err(|err| at("transit", err))?,
            });
        }
        let net = DynamicNetwork { vertices: self.vertices, source: self.source, target: self.target, edges, horizon };
        let diags = validate(&net);
        if !diags.is_empty() {
            return Err(Error::InvalidNetwork(diags));
        }
        Ok(net)
    }
}

pub fn network_to_json(net: &DynamicNetwork) -> Result<String> {
    Ok(serde_json::to_string_pretty(&NetworkJson::from(net))?)
}

pub fn network_from_json(text: &str) -> Result<DynamicNetwork> {
    serde_json::from_str::<NetworkJson>(text)?.into_network()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSeries {
    pub edge: usize,
    pub tail: String,
    pub head: String,
    pub values: StepFnRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSeries {
    pub vertex: String,
    pub values: StepFnRepr,
}

fn flow_series(net: &DynamicNetwork, flow: &DynamicFlow) -> Vec<EdgeSeries> {
    net.edges
        .iter()
        .zip(&flow.rates)
        .enumerate()
        .map(|(i, (e, r))| EdgeSeries { edge: i, tail: e.tail.clone(), head: e.head.clone(), values: r.to_repr() })
        .collect()
}

fn cut_series(net: &DynamicNetwork, cut: &DynamicCut) -> Vec<VertexSeries> {
    net.vertices
        .iter()
        .zip(&cut.membership)
        .map(|(v, m)| VertexSeries { vertex: v.clone(), values: m.to_repr() })
        .collect()
}

fn parse_flow(series: &[EdgeSeries], lo: &Rational, hi: &Rational) -> Result<DynamicFlow> {
    let rates = series.iter().map(|s| PiecewiseConstantFn::from_repr(lo, hi, &s.values)).collect::<Result<_>>()?;
    Ok(DynamicFlow { rates })
}

fn parse_cut(series: &[VertexSeries], lo: &Rational, hi: &Rational) -> Result<DynamicCut> {
    let membership = series.iter().map(|s| PiecewiseConstantFn::from_repr(lo, hi, &s.values)).collect::<Result<_>>()?;
    Ok(DynamicCut { membership })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityJson {
    pub vertex_changes: BTreeMap<String, usize>,
    pub edge_changes: BTreeMap<String, usize>,
    pub cut_total: usize,
    pub flow_total: usize,
}

impl ComplexityJson {
    pub fn new(net: &DynamicNetwork, c: &Complexity) -> Self {
        ComplexityJson {
            vertex_changes: net.vertices.iter().cloned().zip(c.vertex_changes.iter().copied()).collect(),
            edge_changes: (0..net.edges.len()).map(|e| net.edge_label(e)).zip(c.edge_changes.iter().copied()).collect(),
            cut_total: c.cut_total,
            flow_total: c.flow_total,
        }
    }
}

/// Serialized [`SolveReport`]. Flow and cut functions live on `window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub value: Rational,
    pub cut_capacity: Rational,
    pub duality_gap: Rational,
    pub delta: Rational,
    pub window: (Rational, Rational),
    pub counted: (Rational, Rational),
    pub padding: Option<u64>,
    pub density: Option<Rational>,
    pub extraction: String,
    pub expanded_nodes: usize,
    pub complexity: ComplexityJson,
    pub diagnostics: Vec<String>,
    pub flow: Vec<EdgeSeries>,
    pub cut: Vec<VertexSeries>,
    pub alt_cut: Vec<VertexSeries>,
}

fn extraction_name(e: CutExtraction) -> &'static str {
    match e {
        CutExtraction::SourceReachable => "source-reachable",
        CutExtraction::SinkCoReachable => "sink-co-reachable",
    }
}

impl ReportJson {
    pub fn new(net: &DynamicNetwork, r: &SolveReport) -> Self {
        ReportJson {
            value: r.value.clone(),
            cut_capacity: r.cut_capacity.clone(),
            duality_gap: r.duality_gap.clone(),
            delta: r.delta.clone(),
            window: r.window.clone(),
            counted: r.counted.clone(),
            padding: r.padding,
            density: r.density.clone(),
            extraction: extraction_name(r.extraction).into(),
            expanded_nodes: r.expanded_nodes,
            complexity: ComplexityJson::new(net, &r.complexity),
            diagnostics: r.diagnostics.clone(),
            flow: flow_series(net, &r.flow),
            cut: cut_series(net, &r.cut),
            alt_cut: cut_series(net, &r.alt_cut),
        }
    }

    pub fn flow(&self) -> Result<DynamicFlow> {
        parse_flow(&self.flow, &self.window.0, &self.window.1)
    }

    pub fn cut(&self) -> Result<DynamicCut> {
        parse_cut(&self.cut, &self.window.0, &self.window.1)
    }

    /// Change counts recomputed from the stored functions.
    pub fn recount(&self, net: &DynamicNetwork) -> Result<ComplexityJson> {
        let eval = match self.padding {
            Some(p) => crate::network::finite_window(net, p)?,
            None => net.clone(),
        };
        if eval.edges.len() != self.flow.len() || eval.vertices.len() != self.cut.len() {
            return Err(Error::InvalidInput("report does not belong to this instance".into()));
        }
        let c = complexity(&eval, &self.flow()?, &self.cut()?, &self.counted.0, &self.counted.1);
        Ok(ComplexityJson::new(net, &c))
    }
}

pub fn report_to_json(net: &DynamicNetwork, r: &SolveReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ReportJson::new(net, r))?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub vertex: String,
    pub lo: Rational,
    pub hi: Rational,
    pub membership: StepFnRepr,
    pub changes: usize,
}

/// Sidecar written next to a generated instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionsJson {
    pub name: String,
    pub provenance: String,
    pub predicted_value: Option<Rational>,
    pub reference_cut_is_minimum: bool,
    pub reference_flow: Option<Vec<EdgeSeries>>,
    pub reference_cut: Option<Vec<VertexSeries>>,
    pub expected_patterns: Vec<PatternJson>,
}

impl PredictionsJson {
    pub fn new(b: &GadgetBundle) -> Self {
        let net = &b.network;
        PredictionsJson {
            name: b.name.clone(),
            provenance: b.provenance.clone(),
            predicted_value: b.predicted_value.clone(),
            reference_cut_is_minimum: b.reference_cut_is_minimum,
            reference_flow: b.reference_flow.as_ref().map(|f| flow_series(net, f)),
            reference_cut: b.reference_cut.as_ref().map(|c| cut_series(net, c)),
            expected_patterns: b
                .expected_patterns
                .iter()
                .map(|p| PatternJson {
                    vertex: p.vertex.clone(),
                    lo: p.membership.lo().clone(),
                    hi: p.membership.hi().clone(),
                    membership: p.membership.to_repr(),
                    changes: p.changes,
                })
                .collect(),
        }
    }

    pub fn reference_flow(&self, net: &DynamicNetwork) -> Result<Option<DynamicFlow>> {
        let (lo, hi) = net.horizon.domain();
        self.reference_flow.as_deref().map(|s| parse_flow(s, lo, hi)).transpose()
    }

    pub fn reference_cut(&self, net: &DynamicNetwork) -> Result<Option<DynamicCut>> {
        let (lo, hi) = net.horizon.domain();
        self.reference_cut.as_deref().map(|s| parse_cut(s, lo, hi)).transpose()
    }

    pub fn patterns(&self) -> Result<Vec<crate::gadgets::ExpectedPattern>> {
        self.expected_patterns
            .iter()
            .map(|p| {
                Ok(crate::gadgets::ExpectedPattern {
                    vertex: p.vertex.clone(),
                    membership: PiecewiseConstantFn::from_repr(&p.lo, &p.hi, &p.membership)?,
                    changes: p.changes,
                })
            })
            .collect()
    }
}

/// One row per piece: `element_id, kind, lo, hi, value`, flow rows first.
pub fn timeline_csv(net: &DynamicNetwork, flow: &DynamicFlow, cut: &DynamicCut) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["element_id", "kind", "lo", "hi", "value"]).map_err(csv_err)?;
    let flows = flow.rates.iter().enumerate().map(|(e, f)| (net.edge_label(e), "flow", f));
    let cuts = cut.membership.iter().zip(&net.vertices).map(|(m, v)| (v.clone(), "cut", m));
    for (id, kind, f) in flows.chain(cuts) {
        for (a, b, v) in f.pieces() {
            w.write_record([id.as_str(), kind, &a.to_string(), &b.to_string(), &v.to_string()]).map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn intervals(f: &PiecewiseConstantFn) -> String {
    f.pieces().map(|(a, b, v)| format!("{v}@[{a},{b})")).collect::<Vec<_>>().join(" ")
}

/// Original graph; edges labelled with `capacity@interval` pieces followed
/// by the transit pieces.
pub fn dot_network(net: &DynamicNetwork) -> String {
    let mut out = String::from("digraph network {\n  rankdir=LR;\n");
    for v in &net.vertices {
        let shape = if *v == net.source || *v == net.target { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {} [shape={shape}];", quote(v));
    }
    for e in &net.edges {
        let label = format!("u {}\\ntau {}", intervals(&e.capacity), intervals(&e.transit));
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(&e.tail), quote(&e.head), quote(&label));
    }
    out.push_str("}\n");
    out
}

/// Time-expanded graph; nodes are `vertex@step`, arcs labelled with their
/// capacity and the entry interval they stand for.
pub fn dot_expanded(net: &DynamicNetwork, g: &TimeExpandedGraph) -> String {
    let node = |n: usize| {
        let (v, step) = g.vertex_step(n);
        quote(&format!("{}@{step}", net.vertices[v]))
    };
    let mut out = String::from("digraph expanded {\n  rankdir=LR;\n");
    for arc in &g.arcs {
        let (_, step) = g.vertex_step(arc.from);
        let interval = format!("[{},{})", g.step_start(step), g.step_start(step + 1));
        let cap = match &arc.capacity {
            Capacity::Finite(c) => c.to_string(),
            Capacity::Unbounded => "inf".into(),
        };
        let style = match arc.kind {
            ArcKind::Holdover => " style=dashed",
            ArcKind::Transit { .. } => "",
        };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            node(arc.from),
            node(arc.to),
            quote(&format!("{cap}@{interval}"))
        );
    }
    out.push_str("}\n");
    out
}
