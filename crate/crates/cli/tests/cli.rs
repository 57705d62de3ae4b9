use serde_json::Value;
use std::process::{Command, Output};
use wittcoh::cochain::Cochain;
use wittcoh::exactnum::parse_rational;
use wittcoh::massey::{mc_residual, related_cocycle, FormalConnection};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittcoh")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = run(&a);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn form_of(v: &Value) -> Cochain {
    let mut f = Cochain::zero();
    for t in v["terms"].as_array().unwrap() {
        let idx: Vec<u32> = t[0].as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as u32).collect();
        f = f.add(&Cochain::monomial(idx, parse_rational(t[1].as_str().unwrap()).unwrap()));
    }
    f
}

#[test]
fn betti_cells() {
    let v = json(&["betti", "--qmax", "2", "--wmax", "8"]);
    let cells: Vec<(u64, u64)> = v["payload"]["nonzero"].as_array().unwrap().iter().map(|c| (c["q"].as_u64().unwrap(), c["mu"].as_u64().unwrap())).collect();
    assert_eq!(cells, [(1, 1), (1, 2), (2, 5), (2, 7)]);
    let v = json(&["betti", "--qmax", "3", "--wmax", "16"]);
    assert_eq!(v["payload"]["nonzero"].as_array().unwrap().len(), 6);
    assert_eq!(v["schema"], "wittcoh-report/1");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["betti", "--qmax", "6"]).status.code(), Some(2));
    assert_eq!(run(&["massey", "e3,e1"]).status.code(), Some(3));
    assert_eq!(run(&["massey", "e1,bogus"]).status.code(), Some(3));
    assert_eq!(run(&["nonsense"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(3));
    assert_eq!(run(&["singular", "--p", "2", "--q", "2", "--t", "x"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "bsa"]).status.code(), Some(0));
    // the uniqueness check carries a documented failure
    assert_eq!(run(&["verify", "thread"]).status.code(), Some(1));
    assert_eq!(run(&["--budget-seconds", "0", "verify", "verma"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let a = run(&["massey", "e1,e2,e1,e1,e2", "--format", "json"]);
    let b = run(&["massey", "e1,e2,e1,e1,e2", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn triple_product_report() {
    let v = json(&["massey", "e1,e2,e2"]);
    let p = &v["payload"];
    assert_eq!(p["value_set"], "point");
    assert_eq!(p["trivial"], "NonTrivial");
    assert_eq!(p["base"][0]["class"], "g2-");
    assert_eq!(p["base"][0]["coeff"], "3");
    assert_eq!(p["rigidity"]["pass"], true);
    let labels = v["labels"].as_array().unwrap();
    let g2m = labels.iter().find(|l| l["label"] == "g2-").unwrap();
    assert_eq!(form_of(&g2m["representative"]), Cochain::monomial(vec![1, 4], parse_rational("1").unwrap()));
}

/// Rebuilds the embedded connection and checks it without the solver.
#[test]
fn certificate_reverifies() {
    let v = json(&["massey", "e1^2,e2,e1,g2+"]);
    let cert = &v["payload"]["certificate"];
    let conn = &cert["connection"];
    let mut a = FormalConnection::new(conn["size"].as_u64().unwrap() as usize);
    for e in conn["entries"].as_array().unwrap() {
        a.set(e["row"].as_u64().unwrap() as usize, e["col"].as_u64().unwrap() as usize, form_of(&e["form"]));
    }
    let tau = mc_residual(&a).expect("residual only in the corner");
    assert_eq!(tau, form_of(&cert["mc_residual"]));
    assert_eq!(related_cocycle(&a), form_of(&cert["related_cocycle"]));
    assert_eq!(tau, related_cocycle(&a).neg());
    assert!(tau.d().is_zero());
    assert_eq!(v["payload"]["base"][0]["class"], "g3-");
    assert_eq!(v["payload"]["trivial"], "NonTrivial");
    assert_eq!(v["payload"]["spectral"]["r"], 5);
}

#[test]
fn alpha_connection() {
    let v = json(&["massey", "e1,e1,e1,e2", "--alpha", "1/6"]);
    assert_eq!(v["payload"]["trivial_at_alpha"], true);
    assert_eq!(v["payload"]["trivial_alphas"], serde_json::json!(["1/6"]));
    let v = json(&["massey", "e1,e1,e1,e2", "--alpha", "1/24"]);
    assert_eq!(v["payload"]["trivial_at_alpha"], false);
    assert_eq!(run(&["massey", "e1,e2,e2", "--alpha", "1"]).status.code(), Some(3));
}

#[test]
fn singular_and_resolution() {
    let v = json(&["singular", "--p", "3", "--q", "1", "--t", "-3/2"]);
    assert_eq!(v["payload"]["operator"]["text"], "e1^3 - 6*e2*e1 + 6*e3");
    assert_eq!(v["payload"]["closed_formula_agrees"], true);
    assert_eq!(run(&["singular", "--p", "5", "--q", "4"]).status.code(), Some(2));
    let v = json(&["resolution", "--kmax", "1"]);
    assert_eq!(v["payload"]["composites"][0]["zero"], true);
}

#[test]
fn thread_module_agrees() {
    let v = json(&["thread", "a(1/6)[0,6]", "--smin", "-4", "--smax", "4"]);
    assert!(v["payload"].as_array().unwrap().iter().all(|r| r["cochains_agree"] == true));
    assert_eq!(run(&["thread", "q[0,1]"]).status.code(), Some(3));
}

#[test]
fn cocycles_are_closed() {
    let v = json(&["cocycles", "--qmax", "2", "--wmax", "8"]);
    let items = v["payload"].as_array().unwrap();
    assert_eq!(items.len(), 4);
    for it in items {
        assert_eq!(it["closed"], true);
        assert!(form_of(&it["representative"]).d().is_zero());
    }
}
