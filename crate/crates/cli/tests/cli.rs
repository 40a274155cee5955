use std::path::Path;
use std::process::{Command, Output};

fn dynflow(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynflow")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_solve_and_recount() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let g = dynflow(&["generate", "counting-chain", "--l", "3", "--variant", "cap-finite", "-o", "g3.json"], p);
    assert_eq!(g.status.code(), Some(0), "{}", String::from_utf8_lossy(&g.stderr));
    assert!(p.join("g3.json").exists() && p.join("g3.predictions.json").exists());

    let s = dynflow(&["solve", "g3.json", "--report", "report.json", "--timeline", "cut.csv"], p);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).contains("(gap 0/1)"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["duality_gap"], "0/1");
    let csv = std::fs::read_to_string(p.join("cut.csv")).unwrap();
    assert!(csv.starts_with("element_id,kind,lo,hi,value\n"));
    assert!(csv.lines().any(|l| l.starts_with("v3,cut,")));

    let c = dynflow(&["complexity", "report.json", "--instance", "g3.json"], p);
    assert_eq!(c.status.code(), Some(0));
    assert!(stdout(&c).contains("matches stored counts"));

    let v = dynflow(&["verify", "gadget-patterns", "g3.json"], p);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn partition_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = dynflow(&["verify", "partition", "--items", "1,1,4", "--variant", "cap"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("unsolvable / value < 1 / EQUIVALENT"));
    let o = dynflow(&["verify", "partition", "--items", "1,1,2", "--variant", "transit-finite"], dir.path());
    assert!(stdout(&o).starts_with("solvable / value >= 6 / EQUIVALENT"));
}

#[test]
fn duality_and_static_checks() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    dynflow(&["generate", "random-static", "--n", "6", "--m", "12", "--seed", "3", "-o", "r.json"], p);
    assert!(!p.join("r.predictions.json").exists());
    assert_eq!(dynflow(&["verify", "duality", "r.json"], p).status.code(), Some(0));
    let x = dynflow(&["verify", "static-cross-check", "r.json"], p);
    assert_eq!(x.status.code(), Some(0), "{}", stdout(&x));

    dynflow(&["generate", "partition-cap-inf", "--items", "1,1,2", "-o", "inf.json"], p);
    let d = dynflow(&["verify", "duality", "inf.json"], p);
    assert_eq!(d.status.code(), Some(0), "{}", stdout(&d));
    // static cross-check refuses time-dependent instances
    assert_eq!(dynflow(&["verify", "static-cross-check", "inf.json"], p).status.code(), Some(2));
}

#[test]
fn wrong_prediction_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    dynflow(&["generate", "expflow-simplecut", "--k", "3", "-o", "a.json"], p);
    dynflow(&["generate", "expflow-simplecut", "--k", "3", "--transit", "-o", "b.json"], p);
    assert_eq!(dynflow(&["verify", "gadget-patterns", "b.json"], p).status.code(), Some(0));
    let sidecar = p.join("a.predictions.json");
    let text = std::fs::read_to_string(&sidecar)
        .unwrap()
        .replace("\"predicted_value\": \"1/1\"", "\"predicted_value\": \"2/1\"");
    std::fs::write(&sidecar, text).unwrap();
    let o = dynflow(&["verify", "gadget-patterns", "a.json"], p);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("predicted 2/1"));
    // a sidecar belonging to another instance is an input error
    dynflow(&["generate", "expcut-simpleflow", "--k", "2", "-o", "c.json"], p);
    let o = dynflow(&["verify", "gadget-patterns", "b.json", "--predictions", "c.predictions.json"], p);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    dynflow(&["generate", "partition-cap", "--items", "1,1", "-o", "p.json"], p);
    let o = dynflow(&["export-dot", "p.json"], p);
    assert!(stdout(&o).starts_with("digraph network"));
    assert!(stdout(&o).contains("u 0/1@[0/1,2/1) 1/1@[2/1,4/1)"));
    let o = dynflow(&["export-dot", "p.json", "--expanded", "-o", "g.dot"], p);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(p.join("g.dot")).unwrap().contains("\"s@0\" -> \"s@1\""));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(dynflow(&["frobnicate"], p).status.code(), Some(2));
    std::fs::write(p.join("bad.json"), "{ \"vertices\": [").unwrap();
    assert_eq!(dynflow(&["solve", "bad.json"], p).status.code(), Some(2));
    assert_eq!(dynflow(&["solve", "missing.json"], p).status.code(), Some(2));
    assert_eq!(dynflow(&["verify", "partition", "--items", "1,2", "--variant", "cap"], p).status.code(), Some(2));
    dynflow(&["generate", "expcut-simpleflow", "--k", "6", "-o", "big.json"], p);
    assert_eq!(dynflow(&["solve", "big.json", "--max-nodes", "10"], p).status.code(), Some(2));
}
