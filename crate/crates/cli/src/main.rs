use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dynflow::dynamic::{
    check_feasible, check_saturation, cut_capacity, flow_value, solve, CutExtraction, SolveOptions, SolveReport,
};
use dynflow::gadgets::{self, ChainVariant, GadgetBundle, TransitMode};
use dynflow::io::{
    dot_expanded, dot_network, network_from_json, network_to_json, report_to_json, timeline_csv, PredictionsJson,
    ReportJson,
};
use dynflow::network::common_step;
use dynflow::oracle::{check_reduction, tiny_flow_oracle, ReductionVariant};
use dynflow::static_maxflow::{expand, max_flow_oracle};
use dynflow::temporally_repeated::temporally_repeated;
use dynflow::{DynamicNetwork, PartitionInstance, Rational};

#[derive(Parser)]
#[command(name = "dynflow", version, about = "Exact maximum flows and minimum cuts over time")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance and, for gadgets, a predictions sidecar
    Generate {
        #[command(subcommand)]
        family: Family,
        /// Output path; the sidecar goes next to it as `<stem>.predictions.json`
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Solve an instance exactly
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        /// Write the full report as JSON
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write flow and cut pieces as CSV
        #[arg(long)]
        timeline: Option<PathBuf>,
    },
    /// Check a claim; exits 1 when it does not hold
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Graphviz rendering of the network or its time-expanded graph
    ExportDot {
        instance: PathBuf,
        #[arg(long)]
        expanded: bool,
        /// Step of the expansion; defaults to the common step
        #[arg(long)]
        delta: Option<Rational>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recount change complexities from a stored report
    Complexity {
        report: PathBuf,
        /// Instance the report was computed for
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Args, Clone)]
struct SolveArgs {
    #[arg(long)]
    delta: Option<Rational>,
    #[arg(long, default_value_t = 2_000_000)]
    max_nodes: u128,
    /// Initial padding multiplier for infinite horizons
    #[arg(long, default_value_t = 1)]
    padding: u64,
    #[arg(long, value_enum, default_value_t = Extraction::Source)]
    extraction: Extraction,
}

impl SolveArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            delta: self.delta.clone(),
            max_nodes: self.max_nodes,
            padding: self.padding,
            extraction: match self.extraction {
                Extraction::Source => CutExtraction::SourceReachable,
                Extraction::Sink => CutExtraction::SinkCoReachable,
            },
            ..SolveOptions::default()
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum Extraction {
    /// Nodes reachable from the source in the residual network
    Source,
    /// Nodes that cannot reach the sink in the residual network
    Sink,
}

#[derive(ValueEnum, Clone, Copy)]
enum Variant {
    CapFinite,
    CapInfinite,
    TransitFinite,
    TransitInfinite,
}

#[derive(ValueEnum, Clone, Copy)]
enum Mode {
    Finite,
    Infinite,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReductionKind {
    Cap,
    CapInf,
    TransitFinite,
}

#[derive(Subcommand)]
enum Family {
    /// Partition reduction with one capacity change
    PartitionCap {
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<u64>,
    },
    /// Partition reduction over infinite time
    PartitionCapInf {
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<u64>,
    },
    /// Partition reduction with one transit time change
    PartitionTransit {
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Mode::Finite)]
        mode: Mode,
    },
    /// Chained binary counters; the central vertex changes 2^l times
    CountingChain {
        #[arg(long)]
        l: u32,
        #[arg(long, value_enum)]
        variant: Variant,
    },
    /// Constant minimum cut, exponentially complex maximum flow
    ExpflowSimplecut {
        #[arg(long)]
        k: u32,
        /// Restrict entry by a transit jump instead of a capacity drop
        #[arg(long)]
        transit: bool,
    },
    /// Simple maximum flow, exponentially complex minimum cut
    ExpcutSimpleflow {
        #[arg(long)]
        k: u32,
        /// Open the last edge by a transit drop instead of a capacity step
        #[arg(long)]
        transit: bool,
    },
    /// Seeded random acyclic network with constant parameters
    RandomStatic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        max_cap: u32,
        #[arg(long, default_value_t = 3)]
        max_transit: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Solve the flow reduction of a partition instance and compare with subset sum
    Partition {
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<u64>,
        #[arg(long, value_enum)]
        variant: ReductionKind,
    },
    /// Solve an instance and compare with its predictions sidecar
    GadgetPatterns {
        instance: PathBuf,
        /// Defaults to `<stem>.predictions.json` next to the instance
        #[arg(long)]
        predictions: Option<PathBuf>,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Recompute flow value and cut capacities of a solve independently
    Duality {
        instance: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Compare solver, repeated-path, push-relabel and tiny oracles on a static instance
    StaticCrossCheck { instance: PathBuf },
}

enum Failure {
    /// Bad input, I/O or solver refusal: exit code 2.
    Usage(String),
    /// The checked claim does not hold: exit code 1.
    Verification(String),
}

impl From<dynflow::Error> for Failure {
    fn from(e: dynflow::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<DynamicNetwork, Failure> {
    network_from_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn sidecar_path(instance: &Path) -> PathBuf {
    let stem = instance.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    instance.with_file_name(format!("{stem}.predictions.json"))
}

fn partition(items: &[u64]) -> Result<PartitionInstance, Failure> {
    Ok(PartitionInstance::new(items.to_vec())?)
}

fn generate(family: Family, output: Option<PathBuf>) -> Outcome {
    let bundle: Option<GadgetBundle> = match &family {
        Family::PartitionCap { items } => Some(gadgets::gen_partition_cap(&partition(items)?)?),
        Family::PartitionCapInf { items } => Some(gadgets::gen_partition_cap_inf(&partition(items)?)?),
        Family::PartitionTransit { items, mode } => {
            let mode = match mode {
                Mode::Finite => TransitMode::Finite,
                Mode::Infinite => TransitMode::Infinite,
            };
            Some(gadgets::gen_partition_transit(&partition(items)?, mode)?)
        }
        Family::CountingChain { l, variant } => {
            let variant = match variant {
                Variant::CapFinite => ChainVariant::CapFinite,
                Variant::CapInfinite => ChainVariant::CapInfinite,
                Variant::TransitFinite => ChainVariant::TransitFinite,
                Variant::TransitInfinite => ChainVariant::TransitInfinite,
            };
            Some(gadgets::gen_counting_chain(*l, variant)?)
        }
        Family::ExpflowSimplecut { k, transit } => Some(gadgets::gen_expflow_simplecut(*k, *transit)?),
        Family::ExpcutSimpleflow { k, transit } => Some(gadgets::gen_expcut_simpleflow(*k, *transit)?),
        Family::RandomStatic { .. } => None,
    };
    let network = match (&bundle, family) {
        (Some(b), _) => b.network.clone(),
        (None, Family::RandomStatic { n, m, max_cap, max_transit, seed }) => {
            gadgets::gen_random_static(n, m, max_cap, max_transit, seed)?
        }
        (None, _) => unreachable!("every gadget family yields a bundle"),
    };
    let text = network_to_json(&network)?;
    match output {
        Some(path) => {
            write(&path, &text)?;
            if let Some(b) = &bundle {
                let sidecar = sidecar_path(&path);
                let json = serde_json::to_string_pretty(&PredictionsJson::new(b))
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                write(&sidecar, &json)?;
                println!("wrote {} and {}", path.display(), sidecar.display());
            } else {
                println!("wrote {}", path.display());
            }
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn print_summary(net: &DynamicNetwork, r: &SolveReport) {
    println!("value {}", r.value);
    println!("cut capacity {} (gap {})", r.cut_capacity, r.duality_gap);
    println!("step {}, window [{}, {}), {} expanded nodes", r.delta, r.window.0, r.window.1, r.expanded_nodes);
    if let Some(p) = r.padding {
        let density = r.density.as_ref().map(|d| d.to_string()).unwrap_or_default();
        println!("infinite horizon: padding {p}, density {density}, counting on [{}, {})", r.counted.0, r.counted.1);
    }
    println!(
        "complexity: cut {} changes, flow {} changes over {} vertices and {} edges",
        r.complexity.cut_total,
        r.complexity.flow_total,
        net.vertices.len(),
        net.edges.len()
    );
}

fn run_solve(instance: &Path, args: &SolveArgs, report: Option<PathBuf>, timeline: Option<PathBuf>) -> Outcome {
    let net = load(instance)?;
    let r = solve(&net, &args.options())?;
    print_summary(&net, &r);
    if let Some(path) = report {
        write(&path, &report_to_json(&net, &r)?)?;
    }
    if let Some(path) = timeline {
        write(&path, &timeline_csv(&net, &r.flow, &r.cut)?)?;
    }
    if !r.duality_gap.is_zero() || !r.diagnostics.is_empty() {
        return Err(Failure::Verification(format!("gap {}, diagnostics {:?}", r.duality_gap, r.diagnostics)));
    }
    Ok(())
}

fn verify_partition(items: &[u64], kind: ReductionKind) -> Outcome {
    let p = partition(items)?;
    let variant = match kind {
        ReductionKind::Cap => ReductionVariant::Cap,
        ReductionKind::CapInf => ReductionVariant::CapInf,
        ReductionKind::TransitFinite => ReductionVariant::TransitFinite,
    };
    let c = check_reduction(&p, variant, &SolveOptions::default())?;
    let relation = if c.meets_threshold() { ">=" } else { "<" };
    let verdict = if c.equivalent() { "EQUIVALENT" } else { "MISMATCH" };
    let solvable = if c.solvable { "solvable" } else { "unsolvable" };
    println!("{solvable} / value {relation} {} / {verdict}", c.threshold.to_string().trim_end_matches("/1"));
    println!("value {}", c.value);
    if c.equivalent() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{kind:?} reduction disagrees with subset sum")))
    }
}

fn verify_patterns(instance: &Path, predictions: Option<PathBuf>, args: &SolveArgs) -> Outcome {
    let net = load(instance)?;
    let sidecar = predictions.unwrap_or_else(|| sidecar_path(instance));
    let pred: PredictionsJson =
        serde_json::from_str(&read(&sidecar)?).map_err(|e| Failure::Usage(format!("{}: {e}", sidecar.display())))?;
    let r = solve(&net, &args.options())?;
    let mut problems = Vec::new();
    if let Some(v) = &pred.predicted_value {
        if *v != r.value {
            problems.push(format!("value {} but predicted {v}", r.value));
        }
    }
    let idx = net.vertex_index();
    let patterns = pred.patterns()?;
    for p in &patterns {
        let Some(&v) = idx.get(p.vertex.as_str()) else {
            problems.push(format!("pattern vertex {} not in instance", p.vertex));
            continue;
        };
        let got = r.cut.membership[v].restrict(p.membership.lo(), p.membership.hi())?;
        if got != p.membership {
            problems.push(format!("{} changes at {:?}", p.vertex, got.change_times()));
        }
    }
    if let Some(flow) = pred.reference_flow(&net)? {
        let diags = check_feasible(&net, &flow);
        let value = flow_value(&net, &flow)?;
        if !diags.is_empty() || value > r.value {
            problems.push(format!("reference flow value {value}, diagnostics {diags:?}"));
        }
    }
    if let Some(cut) = pred.reference_cut(&net)? {
        let cap = cut_capacity(&net, &cut)?;
        if cap < r.value || (pred.reference_cut_is_minimum && cap != r.value) {
            problems.push(format!("reference cut capacity {cap}"));
        }
    }
    println!("{}: value {}, {} patterns checked", pred.name, r.value, patterns.len());
    if problems.is_empty() {
        println!("OK");
        Ok(())
    } else {
        problems.iter().for_each(|p| println!("  {p}"));
        Err(Failure::Verification(format!("{} predictions failed", problems.len())))
    }
}

fn verify_duality(instance: &Path, args: &SolveArgs) -> Outcome {
    let net = load(instance)?;
    let r = solve(&net, &args.options())?;
    let eval = r.evaluation_network(&net)?;
    let value = flow_value(&eval, &r.flow)?;
    let cap = cut_capacity(&eval, &r.cut)?;
    let alt = cut_capacity(&eval, &r.alt_cut)?;
    let mut diags = check_feasible(&eval, &r.flow);
    diags.extend(check_saturation(&eval, &r.flow, &r.cut));
    diags.extend(check_saturation(&eval, &r.flow, &r.alt_cut));
    println!("flow value {value}, cut capacity {cap}, other canonical cut {alt}");
    if value == cap && cap == alt && diags.is_empty() {
        println!("OK");
        Ok(())
    } else {
        diags.iter().take(10).for_each(|d| println!("  {d}"));
        Err(Failure::Verification("duality does not hold".into()))
    }
}

fn verify_static(instance: &Path) -> Outcome {
    let net = load(instance)?;
    if !net.is_static() || !net.horizon.is_finite() {
        return Err(Failure::Usage("static cross-check needs constant functions and a finite horizon".into()));
    }
    let r = solve(&net, &SolveOptions::default())?;
    let (_, repeated, paths) = temporally_repeated(&net)?;
    let oracle = max_flow_oracle(&expand(&net, &r.delta, 2_000_000)?);
    println!("solver {}", r.value);
    println!("temporally repeated {repeated} ({} paths)", paths.paths.len());
    println!("push-relabel {oracle}");
    let mut agree = repeated == r.value && oracle == r.value;
    match tiny_flow_oracle(&net) {
        Ok(t) => {
            println!("tiny oracle {t}");
            agree &= t == r.value;
        }
        Err(e) => println!("tiny oracle skipped: {e}"),
    }
    if agree {
        println!("OK");
        Ok(())
    } else {
        Err(Failure::Verification("solvers disagree".into()))
    }
}

fn export_dot(instance: &Path, expanded: bool, delta: Option<Rational>, output: Option<PathBuf>) -> Outcome {
    let net = load(instance)?;
    let dot = if expanded {
        let window = match &net.horizon {
            dynflow::Horizon::Finite { .. } => net.clone(),
            dynflow::Horizon::Infinite { .. } => dynflow::network::finite_window(&net, 1)?,
        };
        let delta = match delta {
            Some(d) => d,
            None => common_step(&window)?,
        };
        dot_expanded(&window, &expand(&window, &delta, 2_000_000)?)
    } else {
        dot_network(&net)
    };
    match output {
        Some(path) => write(&path, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn recount(report: &Path, instance: &Path) -> Outcome {
    let net = load(instance)?;
    let stored: ReportJson =
        serde_json::from_str(&read(report)?).map_err(|e| Failure::Usage(format!("{}: {e}", report.display())))?;
    let fresh = stored.recount(&net)?;
    println!("cut {} changes, flow {} changes", fresh.cut_total, fresh.flow_total);
    let mut busiest: Vec<(&String, &usize)> = fresh.vertex_changes.iter().filter(|(_, &c)| c > 0).collect();
    busiest.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    for (v, c) in busiest.iter().take(5) {
        println!("  {v}: {c}");
    }
    if fresh == stored.complexity {
        println!("matches stored counts");
        Ok(())
    } else {
        Err(Failure::Verification("recount differs from stored counts".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate { family, output } => generate(family, output),
        Command::Solve { instance, solve, report, timeline } => run_solve(&instance, &solve, report, timeline),
        Command::Verify { what } => match what {
            Verify::Partition { items, variant } => verify_partition(&items, variant),
            Verify::GadgetPatterns { instance, predictions, solve } => verify_patterns(&instance, predictions, &solve),
            Verify::Duality { instance, solve } => verify_duality(&instance, &solve),
            Verify::StaticCrossCheck { instance } => verify_static(&instance),
        },
        Command::ExportDot { instance, expanded, delta, output } => export_dot(&instance, expanded, delta, output),
        Command::Complexity { report, instance } => recount(&report, &instance),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
