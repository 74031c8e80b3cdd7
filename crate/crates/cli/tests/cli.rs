use std::io::Write;
use std::process::{Command, Output, Stdio};

fn omn(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_omn"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn kgroups_example() {
    let o = omn(&["kgroups", "--m", "1", "--n", "2"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), r#"{"K0":{"free_rank":1,"torsion":[]},"K1":{"free_rank":1,"torsion":[]}}"#);
    let o = omn(&["kgroups", "--m", "5", "--n", "7", "--method", "pv"], None);
    assert_eq!(stdout(&o), r#"{"K0":{"free_rank":0,"torsion":[6]},"K1":{"free_rank":0,"torsion":[4]}}"#);
}

#[test]
fn rieffel_numbers() {
    assert_eq!(stdout(&omn(&["rieffel", "trace"], None)), "7/16");
    assert_eq!(stdout(&omn(&["rieffel", "k0class"], None)), "-4");
    let o = omn(&["rieffel", "verify", "--json"], None);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"]["trace"], "7/16");
}

#[test]
fn cuntz_relation_is_zero() {
    let x = r#"[{"mu":[1],"k":0,"nu":[1],"re":"1","im":"0"},
               {"mu":[2],"k":0,"nu":[2],"re":"1","im":"0"},
               {"mu":[],"k":0,"nu":[],"re":"-1","im":"0"}]"#;
    assert_eq!(stdout(&omn(&["iszero"], Some(x))), "true");
    assert_eq!(stdout(&omn(&["iszero", "--n", "3"], Some(x))), "false");
}

#[test]
fn algebra_commands() {
    let mul = r#"[[{"mu":[1],"k":1,"nu":[2],"re":"1","im":"0"}], [{"mu":[2],"k":0,"nu":[1],"re":"1","im":"0"}]]"#;
    let v: serde_json::Value = serde_json::from_str(&stdout(&omn(&["mul"], Some(mul)))).unwrap();
    assert_eq!(v, serde_json::json!([{"mu":[1],"k":1,"nu":[1],"re":"1/1","im":"0/1"}]));
    let kms = r#"[{"mu":[1],"k":0,"nu":[1],"re":"1","im":"0"}]"#;
    assert_eq!(stdout(&omn(&["kms", "--n", "3"], Some(kms))), "1/3");
}

#[test]
fn json_report_shape() {
    let o = omn(&["--json", "subalgebra", "zk", "--m", "2", "--n", "3", "--k", "5"], None);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["params"]["m"], 2);
    assert!(v["command"].as_array().unwrap().iter().any(|a| a == "zk"));
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn fixed_point_commands() {
    let o = omn(&["fixed-point", "rewrite", "--m", "1", "--n", "3", "--monomial", r#"{"mu":[2],"k":1,"nu":[1]}"#], None);
    assert_eq!(stdout(&o), "[Z(4), CREATE, Z(0), ANNIHILATE, Z(0)]");
    let o = omn(&["fixed-point", "test", "--m", "1", "--n", "3"], Some(r#"{"mu":[1],"k":1,"nu":[1]}"#));
    assert_eq!(stdout(&o), "false");
    let o = omn(&["fixed-point", "rewrite", "--m", "1", "--n", "3", "--monomial", r#"{"mu":[1],"k":1,"nu":[1]}"#], None);
    assert!(!o.status.success());
}

#[test]
fn flagged_fixed_point_groups() {
    let o = omn(&["kgroups-fixed", "--m-parity", "even", "--n", "4", "--json"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["agrees_with_reference"], false);
    assert!(v["results"]["flag"].is_string());
    let o = omn(&["kgroups-fixed", "--m-parity", "odd", "--n", "5", "--json"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["K0"], serde_json::json!({"free_rank": 1, "torsion": [4, 4]}));
}

#[test]
fn usage_errors_exit_nonzero() {
    assert_eq!(omn(&["bogus"], None).status.code(), Some(2));
    assert_eq!(omn(&["iszero"], Some("{")).status.code(), Some(2));
    assert_eq!(omn(&["kgroups", "--m", "2", "--n", "4"], None).status.code(), Some(2));
}

#[test]
fn reproduce_single_criterion_is_deterministic() {
    let a = omn(&["reproduce", "--criterion", "3", "--seed", "7", "--json"], None);
    let b = omn(&["reproduce", "--criterion", "3", "--seed", "7", "--json"], None);
    assert!(a.status.success());
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["elapsed_ms"] = 0.into();
        v["results"]["criteria"][0]["elapsed_ms"] = 0.into();
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn solenoid_and_representation_commands() {
    assert_eq!(stdout(&omn(&["solenoid", "points", "--m", "3", "--period", "2"], None)), "6 points of exact period 2 in 3 orbits");
    assert!(omn(&["solenoid", "rep", "--m", "2", "--period", "3", "--phase", "1/3"], None).status.success());
    assert!(omn(&["rep", "--m", "2", "--n", "3", "--variant", "b", "--window", "64,2"], None).status.success());
}
