use serde_json::Value;
use std::process::Command;

fn qtoda(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_qtoda")).args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("qtoda-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn coeff_value_and_job() {
    let (code, out, _) = qtoda(&["coeff", "--r", "2", "--n", "1,1", "--q", "1/2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["value"], "24");
    assert_eq!(v["agree"], true);
    assert_eq!(v["job"]["command"], "coeff");
    assert_eq!(v["job"]["inst"]["n"], "1,1");
}

#[test]
fn enumerate_diagonal_and_sigma_file() {
    let (code, out, _) = qtoda(&["enumerate", "--n", "1,1", "--q", "1/2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["count"], 2);
    assert_eq!(v["weights"].as_array().unwrap().len(), 2);

    let p = tmp("sigma.json");
    std::fs::write(&p, r#"{"lambda":[3,3,3],"mu":[2,2],"alpha":[1,0,1],"q":"2/3","cells":[[1,3,1],[2,3,1],[3,1,1],[3,2,1],[3,3,1]]}"#)
        .unwrap();
    let (code, out, _) = qtoda(&["enumerate", "--sigma", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    let n = v["count"].as_u64().unwrap();
    assert!(n > 1);
    for a in v["arrays"].as_array().unwrap() {
        assert_eq!(a["cells"].as_array().unwrap().len(), 9);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["coeff"],
        vec!["coeff", "--n", "1,x"],
        vec!["coeff", "--n", "1", "--q", "2"],
        vec!["coeff", "--r", "3", "--n", "1,1"],
        vec!["check", "--suite", "nope"],
        vec!["enumerate", "--lambda", "2,1", "--mu", "2"],
        vec!["enumerate", "--sigma", "/nonexistent/x.json"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = qtoda(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn check_suites_exit_codes() {
    let (code, out, _) = qtoda(&["check", "--suite", "kernel"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["checks"], 18);

    let (code, out, _) = qtoda(&["check", "--suite", "intertwine"]);
    let v = json(&out);
    let fails = v["failures"].as_u64().unwrap();
    assert_eq!(code, if fails == 0 { 0 } else { 1 });
}

#[test]
fn simulate_writes_jsonl() {
    let p = tmp("runs.jsonl");
    let (code, out, _) =
        qtoda(&["simulate", "--n", "2,1", "--q", "1/2", "--replicas", "3", "--seed", "4", "--out", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&p).unwrap();
    let headers: Vec<Value> =
        text.lines().map(json).filter(|v| v.get("header").is_some()).collect();
    assert_eq!(headers.len(), 3);
    for (i, h) in headers.iter().enumerate() {
        assert_eq!(h["header"]["job"]["replica"], i);
        assert_eq!(h["header"]["seed"], 4 ^ i as u64);
    }
    let (_, again, _) = qtoda(&["simulate", "--n", "2,1", "--q", "1/2", "--replicas", "3", "--seed", "4"]);
    let events = |s: &str| s.lines().filter(|l| !l.contains("header")).map(String::from).collect::<Vec<_>>();
    assert_eq!(events(&again), events(&text));
}

#[test]
fn audit_staircase_passes() {
    let (code, out, _) = qtoda(&["audit", "--n", "1,1", "--q", "1/2", "--replicas", "5000", "--seed", "1"]);
    let v = json(&out);
    assert_eq!(v["theory"], "doob");
    assert_eq!(code, 0, "{}", v["audit"]["max_abs_z"]);
    let (code, _, _) = qtoda(&["audit", "--lambda", "2,2", "--mu", "1", "--replicas", "10", "--theory", "doob"]);
    assert_eq!(code, 2);
}

#[test]
fn limit_points() {
    let (code, out, _) = qtoda(&["limit", "--probe", "coeff", "--n", "1,1", "--steps", "6"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 6);
    assert!(pts[5]["gap"].as_f64().unwrap() < pts[3]["gap"].as_f64().unwrap());
}
