use std::process::{Command, Output};

use markoff_systole::dot::parse_dot;
use markoff_systole::{MarkoffMap, MarkoffTriple, MuParams};
use serde_json::Value;

fn markoff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markoff"))
        .args(args)
        .output()
        .expect("spawn markoff")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let out = markoff(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("json output")
}

#[test]
fn cusp_torus_tys() {
    let out = markoff(&["tys", "torus", "-2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "3");
}

#[test]
fn gt_of_twos() {
    let out = markoff(&["gt", "2", "2", "2", "2"]);
    assert_eq!(stdout(&out).trim(), "(8,8,8,-28)");
    let v = json(&["gt", "2", "2", "2", "2"]);
    assert_eq!(v[3][0].as_f64(), Some(-28.0));
}

#[test]
fn sink_complex_run() {
    let v = json(&["verify", "sink-complex", "--mu", "0", "--samples", "100000", "--seed", "1"]);
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(v["worst_margin"].as_f64().unwrap() >= -1e-6);
    assert_eq!(v["bound"].as_f64().unwrap(), 1.0 / 9.0);
    assert_eq!(v["seed"].as_u64(), Some(1));
}

#[test]
fn json_is_byte_identical_across_runs_and_workers() {
    let args = ["verify", "sink-complex", "--mu", "2+i", "--samples", "30000", "--seed", "9", "--output", "json"];
    let a = markoff(&args);
    let b = markoff(&args);
    let mut with_workers = args.to_vec();
    with_workers.extend(["--workers", "3"]);
    let c = markoff(&with_workers);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn failed_verification_exits_one() {
    // a single draw is rejected, so nothing is verified
    let out = markoff(&["verify", "sink-complex", "--mu", "0", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAILED"));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        vec!["tys", "torus", "2"],
        vec!["root", "dominant", "x+y"],
        vec!["frobnicate"],
        vec!["verify", "hat", "--samples", "0"],
        vec!["map", "eval", "--mu", "0", "--base", "1,1,1", "--slope", "1/2"],
        vec!["map", "eval", "--mu", "0", "--base", "3,3,3", "--slope", "0/0"],
        vec!["verify", "sink-complex", "--mu", "4"],
        vec!["tys", "sphere", "2", "2", "2", "2", "--precision", "high"],
        vec!["gt", "1", "1", "1", "1", "--output", "dot"],
    ] {
        let out = markoff(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn map_eval_and_precision() {
    let out = markoff(&["map", "eval", "--mu", "0", "--base", "3,3,3", "--slope", "1/2"]);
    assert_eq!(stdout(&out).trim(), "6");
    let out = markoff(&["map", "eval", "--mu", "0", "--base", "3,3,3", "--slope", "2/5", "--precision", "high"]);
    assert_eq!(out.status.code(), Some(0));
    // 2/5 is the mediant of 1/3 (15) and 1/2 (6) opposite 0/1 (3): 15·6 − 3 = 87
    assert_eq!(stdout(&out).trim(), "87");
}

#[test]
fn reduce_finds_classic_sink() {
    let v = json(&["map", "reduce", "--mu", "0", "--base", "3,15,39"]);
    assert_eq!(v["outcome"], "sink_found");
    assert_eq!(v["triple"][0][0].as_f64(), Some(3.0));
}

#[test]
fn dot_round_trips() {
    let out = markoff(&["map", "dot", "--mu", "0", "--base", "3,3,3", "--radius", "3"]);
    let g = parse_dot(&stdout(&out)).unwrap();
    assert_eq!(g.nodes.len(), 1 + 3 + 6 + 12);
    let map = MarkoffMap::new(MuParams::real(0.0, 0.0, 0.0, 0.0), MarkoffTriple::real(3.0, 3.0, 3.0)).unwrap();
    for (_, regions) in &g.nodes {
        for (s, v) in regions {
            assert_eq!(*v, map.region_value(s).unwrap());
        }
    }
}

#[test]
fn oracle_small() {
    let v = json(&["oracle", "cross-check", "--trials", "5", "--max-denominator", "13"]);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["matched"].as_u64(), Some(5));
}

#[test]
fn n3_commands() {
    let out = markoff(&["tys", "n3"]);
    let t: f64 = stdout(&out).trim().parse().unwrap();
    assert!((t - (3.0 + 17f64.sqrt()).sqrt()).abs() < 1e-10);
    let t = (3.0 + 17f64.sqrt()).sqrt();
    let chi = format!("{t}i,{t}i,{t}i,-{t}i");
    let v = json(&["tys", "n3", "--character", &chi]);
    assert_eq!(v["within_bound"], Value::Bool(true));
    assert!((v["trace_modulus"].as_f64().unwrap() - t).abs() < 1e-9);
}

#[test]
fn roots() {
    assert_eq!(stdout(&markoff(&["root", "dominant", "54"])).trim(), "3+3i");
    assert_eq!(stdout(&markoff(&["root", "real", "54"])).trim(), "-3");
    let v = json(&["root", "classify", "2"]);
    assert_eq!(v["case"], "ThreeReal");
}
