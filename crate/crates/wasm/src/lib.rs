//! Browser bindings. Every function takes and returns JSON text; failures
//! come back as `{"error": "..."}` so the page never has to catch.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use dynflow::dynamic::{solve, SolveOptions};
use dynflow::gadgets::{self, ChainVariant, TransitMode};
use dynflow::io::{network_from_json, network_to_json, PredictionsJson};
use dynflow::oracle::{check_reduction, ReductionVariant};
use dynflow::{PartitionInstance, PiecewiseConstantFn};

/// Browser solves stay well below the native default budget.
const NODE_BUDGET: u128 = 400_000;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn parse_items(items: &str) -> Result<PartitionInstance, String> {
    let items = items
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| format!("not a positive integer: {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    PartitionInstance::new(items).map_err(err)
}

/// Generates a gadget. `size` is the depth `l` for `counting-chain`, `k` for
/// the complexity families and ignored otherwise; `option` picks the
/// variant, or carries comma-separated items for the partition families.
#[wasm_bindgen]
pub fn generate(family: &str, size: u32, option: &str) -> String {
    respond(generate_inner(family, size, option))
}

fn generate_inner(family: &str, size: u32, option: &str) -> Result<Value, String> {
    let bundle = match family {
        "counting-chain" => {
            let variant = ChainVariant::ALL
                .into_iter()
                .find(|v| v.name() == option)
                .ok_or_else(|| format!("unknown variant {option:?}"))?;
            gadgets::gen_counting_chain(size, variant)
        }
        "expflow-simplecut" => gadgets::gen_expflow_simplecut(size, option == "transit"),
        "expcut-simpleflow" => gadgets::gen_expcut_simpleflow(size, option == "transit"),
        "partition-cap" => gadgets::gen_partition_cap(&parse_items(option)?),
        "partition-cap-inf" => gadgets::gen_partition_cap_inf(&parse_items(option)?),
        "partition-transit" => gadgets::gen_partition_transit(&parse_items(option)?, TransitMode::Finite),
        other => return Err(format!("unknown family {other:?}")),
    }
    .map_err(err)?;
    let instance: Value = serde_json::from_str(&network_to_json(&bundle.network).map_err(err)?).map_err(err)?;
    let predictions = serde_json::to_value(PredictionsJson::new(&bundle)).map_err(err)?;
    Ok(json!({ "instance": instance, "predictions": predictions }))
}

fn pieces(f: &PiecewiseConstantFn) -> Vec<Value> {
    f.pieces()
        .map(|(a, b, v)| {
            json!({ "lo": a.to_string(), "hi": b.to_string(), "value": v.to_string(),
                                 "x0": a.to_f64(), "x1": b.to_f64(), "y": v.to_f64() })
        })
        .collect()
}

/// Solves an instance given in the JSON instance format and returns value,
/// cut memberships and flow rates as pieces ready for plotting.
#[wasm_bindgen]
pub fn solve_instance(instance_json: &str) -> String {
    respond(solve_inner(instance_json))
}

fn solve_inner(instance_json: &str) -> Result<Value, String> {
    let net = network_from_json(instance_json).map_err(err)?;
    let opts = SolveOptions { max_nodes: NODE_BUDGET, ..SolveOptions::default() };
    let r = solve(&net, &opts).map_err(err)?;
    let vertices: Vec<Value> = net
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            json!({ "name": v, "changes": r.complexity.vertex_changes[i], "pieces": pieces(&r.cut.membership[i]) })
        })
        .collect();
    let edges: Vec<Value> = (0..net.edges.len())
        .map(|e| {
            json!({ "label": net.edge_label(e), "changes": r.complexity.edge_changes[e],
                    "pieces": pieces(&r.flow.rates[e]) })
        })
        .collect();
    Ok(json!({
        "value": r.value.to_string(),
        "cut_capacity": r.cut_capacity.to_string(),
        "duality_gap": r.duality_gap.to_string(),
        "delta": r.delta.to_string(),
        "window": [r.window.0.to_f64(), r.window.1.to_f64()],
        "counted": [r.counted.0.to_f64(), r.counted.1.to_f64()],
        "padding": r.padding,
        "expanded_nodes": r.expanded_nodes,
        "cut_total": r.complexity.cut_total,
        "flow_total": r.complexity.flow_total,
        "vertices": vertices,
        "edges": edges,
    }))
}

/// Solves the flow reduction of a partition instance and compares the
/// outcome with subset sum. `variant` is `cap`, `cap-inf` or `transit-finite`.
#[wasm_bindgen]
pub fn verify_partition(items: &str, variant: &str) -> String {
    respond(verify_inner(items, variant))
}

fn verify_inner(items: &str, variant: &str) -> Result<Value, String> {
    let p = parse_items(items)?;
    let variant = match variant {
        "cap" => ReductionVariant::Cap,
        "cap-inf" => ReductionVariant::CapInf,
        "transit-finite" => ReductionVariant::TransitFinite,
        other => return Err(format!("unknown variant {other:?}")),
    };
    let opts = SolveOptions { max_nodes: NODE_BUDGET, ..SolveOptions::default() };
    let c = check_reduction(&p, variant, &opts).map_err(err)?;
    Ok(json!({
        "solvable": c.solvable,
        "value": c.value.to_string(),
        "threshold": c.threshold.to_string(),
        "meets_threshold": c.meets_threshold(),
        "equivalent": c.equivalent(),
    }))
}
