use assert_cmd::Command;

fn picentral() -> Command {
    let mut c = Command::cargo_bin("picentral").unwrap();
    c.env_remove("PI_CENTRAL_BUDGET");
    c
}

fn stdout(args: &[&str]) -> (i32, String) {
    let out = picentral().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn nf_of_reversed_product() {
    let (code, out) = stdout(&["nf", "x2*x1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "x1*x2 - [x1,x2]");
}

#[test]
fn nf_json_has_coordinates() {
    let (code, out) = stdout(&["nf", "x1^3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["normal_form"], "0");
    assert_eq!(v["coordinates"].as_array().unwrap().len(), 0);
}

#[test]
fn w1_is_decided_not_member() {
    let (code, out) = stdout(&["member", "--target", "w(1)", "--span", "S2+TG0", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "not_member");
    assert_eq!(v["components"][0]["dimension"], 19);
    assert_eq!(v["components"][0]["words"], 20);
}

#[test]
fn commutator_is_member_of_s2() {
    let (code, out) = stdout(&["member", "--target", "[x1, x2^2]", "--span", "S2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("member:"), "{out}");
}

#[test]
fn tiny_budget_gives_unknown() {
    let (code, out) = stdout(&[
        "member", "--target", "w(1)", "--span", "S2+TG0", "--budget-vectors", "5", "--budget-entries", "5",
    ]);
    assert_eq!(code, 2);
    assert!(out.starts_with("unknown:"), "{out}");
}

#[test]
fn env_budget_is_overridden_by_flags() {
    let out = picentral()
        .env("PI_CENTRAL_BUDGET", "5,5")
        .args(["span", "--span", "TG0", "--multidegree", "3,3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = picentral()
        .env("PI_CENTRAL_BUDGET", "vectors=5,entries=5")
        .args(["span", "--span", "TG0", "--multidegree", "x1:3,x2:3"])
        .args(["--budget-vectors", "100000", "--budget-entries", "100000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("dimension=19"));
}

#[test]
fn verify_handy_v_at_p5() {
    let (code, out) = stdout(&["verify", "L-handy-v", "--p", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("pass"), "{out}");
}

#[test]
fn controls_fail_as_expected() {
    let (code, out) = stdout(&["verify", "--controls", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let certs = v.as_array().unwrap();
    assert_eq!(certs.len(), 5);
    assert!(certs.iter().all(|c| c["verdict"] == "fail"));
    // a control run on its own reports its raw verdict
    let (code, _) = stdout(&["verify", "NC-handy-v-sign"]);
    assert_eq!(code, 3);
    let (code, _) = stdout(&["verify", "NC-handy-iv-sign"]);
    assert_eq!(code, 1);
}

#[test]
fn manifest_runs_each_entry() {
    let dir = std::env::temp_dir().join(format!("picentral-manifest-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    std::fs::write(
        &path,
        r#"[{"claim": "L-handy-i"}, {"claim": "L-handy-v", "params": {"p": 5, "seed": 7}}]"#,
    )
    .unwrap();
    let (code, out) = stdout(&["verify", "--manifest", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[1]["params"]["p"], 5);
    assert_eq!(v[1]["seed"], 7);
    assert!(v[0].get("runtime_ms").is_none());
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "L-handy-vii", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
    let args = ["eval", "x1*x2", "--seed", "11"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn eval_with_explicit_assignment() {
    let (code, out) = stdout(&["eval", "[x1,x2]", "--assign", "x1=e1", "--assign", "x2=e2"]);
    assert_eq!(code, 0);
    assert!(out.contains("value = 2*e1e2"), "{out}");
}

#[test]
fn w1_witness_is_top_blade_multiple() {
    let (code, out) = stdout(&["witness", "w(1)", "--N", "10", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["top_blade_multiple"], true);
}

#[test]
fn chain_m0_passes() {
    let (code, out) = stdout(&["chain", "--m", "0"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn audit_is_total() {
    let (code, _) = stdout(&["audit"]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(stdout(&["bogus"]).0, 3);
    assert_eq!(stdout(&["nf", "x1 +"]).0, 3);
    assert_eq!(stdout(&["nf", "x1", "--p", "4"]).0, 3);
    assert_eq!(stdout(&["verify"]).0, 3);
    assert_eq!(stdout(&["--help"]).0, 0);
}
