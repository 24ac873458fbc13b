use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

const P2: &str = r#"{"d":2,"field":{"kind":"rational"},
    "theta":["1","0","-1"],"theta_star":["1","0","-1"],
    "varphi":["-1","-1"],"phi":["1","1"]}"#;

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("lpkit-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn lpkit() -> Command {
    Command::cargo_bin("lpkit").unwrap()
}

#[test]
fn validate_valid_array_exits_zero() {
    let path = write_temp("p2.json", P2);
    let output = lpkit().arg("validate").arg(&path).assert().success();
    let report: Value = serde_json::from_slice(&output.get_output().stdout).unwrap();
    assert_eq!(report["report"]["valid"], Value::Bool(true));
    let conditions = report["report"]["conditions"].as_array().unwrap();
    assert_eq!(conditions.len(), 5);
    assert!(conditions.iter().all(|c| c["holds"] == Value::Bool(true)));
}

#[test]
fn validate_zero_varphi_exits_one_with_witness() {
    let broken = P2.replace(r#""varphi":["-1","-1"]"#, r#""varphi":["-1","0"]"#);
    let path = write_temp("p2-broken.json", &broken);
    let output = lpkit().arg("validate").arg(&path).assert().code(1);
    let report: Value = serde_json::from_slice(&output.get_output().stdout).unwrap();
    let conditions = report["report"]["conditions"].as_array().unwrap();
    assert_eq!(conditions[0]["condition"], "i");
    assert_eq!(conditions[0]["holds"], Value::Bool(false));
    assert_eq!(conditions[0]["witness"], Value::from(2));
}

#[test]
fn validate_malformed_json_exits_two() {
    let path = write_temp("garbage.json", "{not json");
    lpkit().arg("validate").arg(&path).assert().code(2);
}

#[test]
fn validate_missing_file_exits_two() {
    lpkit()
        .arg("validate")
        .arg("/nonexistent/nope.json")
        .assert()
        .code(2);
}

#[test]
fn verify_traces_suite_passes_on_p2() {
    let path = write_temp("p2-verify.json", P2);
    let output = lpkit()
        .args(["verify", "--suite", "traces"])
        .arg(&path)
        .assert()
        .success();
    let report: Value = serde_json::from_slice(&output.get_output().stdout).unwrap();
    for eq in ["eq7", "eq8", "eq9", "eq10", "eq11", "eq12", "eq13", "eq14"] {
        let flags = report["prop_trace"][eq].as_array().unwrap();
        assert_eq!(flags.len(), 3, "{eq} has one flag per i in 0..=2");
        assert!(flags.iter().all(|b| *b == Value::Bool(true)), "{eq}");
    }
}

#[test]
fn verify_transition_without_scalar_exits_three() {
    let path = write_temp("p2-noctx.json", P2);
    lpkit()
        .args(["verify", "--suite", "transition"])
        .arg(&path)
        .assert()
        .code(3)
        .stderr(predicate::str::contains("--s"));
}

#[test]
fn verify_all_with_scalar_passes_on_p2() {
    let path = write_temp("p2-all.json", P2);
    let output = lpkit()
        .args(["verify", "--suite", "all", "--s", "2"])
        .arg(&path)
        .assert()
        .success();
    let report: Value = serde_json::from_slice(&output.get_output().stdout).unwrap();
    assert_eq!(report["pass"], Value::Bool(true));
    assert_eq!(report["manifest"]["suite"], "all");
    assert_eq!(report["manifest"]["s"], "2");
    assert!(report["recovery"]["varphi_routes_agree"].as_bool().unwrap());
}

#[test]
fn full_pipeline_generate_then_verify_all_d3() {
    // generate a q-structured d=3 instance, then run every suite on it
    let output = lpkit()
        .args([
            "generate", "--kind", "q-form", "--d", "3", "--s", "2", "--alpha", "0", "--mu", "1",
            "--nu", "1", "--alpha-star", "1", "--mu-star", "2", "--nu-star=-1", "--phi1", "3",
        ])
        .assert()
        .success();
    let report: Value = serde_json::from_slice(&output.get_output().stdout).unwrap();
    let array = serde_json::to_string(&report["array"]).unwrap();
    let path = write_temp("qform-d3.json", &array);
    lpkit()
        .args(["verify", "--suite", "all", "--s", "2"])
        .arg(&path)
        .assert()
        .success();
}

#[test]
fn generate_q_form_worked_eigenvalues() {
    let output = lpkit()
        .args([
            "generate", "--kind", "q-form", "--d", "2", "--s", "2", "--alpha", "0", "--mu", "1",
            "--nu", "1", "--alpha-star", "0", "--mu-star", "1", "--nu-star", "1", "--phi1", "1",
        ])
        .assert()
        .success();
    let report: Value = serde_json::from_slice(&output.get_output().stdout).unwrap();
    let theta: Vec<&str> = report["array"]["theta"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(theta, ["2", "17/4", "257/16"]);
}

#[test]
fn generated_random_array_revalidates() {
    let output = lpkit()
        .args(["generate", "--kind", "random-rational", "--d", "1", "--seed", "7"])
        .assert()
        .success();
    let report: Value = serde_json::from_slice(&output.get_output().stdout).unwrap();
    assert_eq!(report["manifest"]["seed"], Value::from(7));
    let array = serde_json::to_string(&report["array"]).unwrap();
    let path = write_temp("gen-d1.json", &array);
    lpkit().arg("validate").arg(&path).assert().success();
}

#[test]
fn generate_is_deterministic_given_seed() {
    let run = || {
        let output = lpkit()
            .args(["generate", "--kind", "random-rational", "--d", "2", "--seed", "99"])
            .assert()
            .success();
        String::from_utf8(output.get_output().stdout.clone()).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn generate_zero_diameter_is_usage_error() {
    lpkit()
        .args(["generate", "--kind", "random-rational", "--d", "0"])
        .assert()
        .code(2);
}

#[test]
fn generate_exhaustion_exits_four() {
    // F_2 has no room for d+1 distinct eigenvalues
    lpkit()
        .args(["generate", "--kind", "random-rational", "--d", "3", "--prime", "2"])
        .env("LPKIT_MAX_RETRIES", "10")
        .assert()
        .code(4);
}

#[test]
fn relatives_table_order_and_ddown_entry() {
    let path = write_temp("p2-rel.json", P2);
    let output = lpkit().arg("relatives").arg(&path).assert().success();
    let report: Value = serde_json::from_slice(&output.get_output().stdout).unwrap();
    let rel = report["relatives"].as_array().unwrap();
    assert_eq!(rel.len(), 8);
    let names: Vec<&str> = rel.iter().map(|r| r["word"].as_str().unwrap()).collect();
    assert_eq!(
        names,
        [
            "1",
            "down",
            "ddown",
            "down.ddown",
            "star",
            "down.star",
            "ddown.star",
            "down.ddown.star"
        ]
    );
    // the ddown entry reverses theta and swaps the split sequences
    let ddown = &rel[2]["array"];
    assert_eq!(ddown["theta"], serde_json::json!(["-1", "0", "1"]));
    assert_eq!(ddown["theta_star"], serde_json::json!(["1", "0", "-1"]));
    assert_eq!(ddown["varphi"], serde_json::json!(["1", "1"]));
    assert_eq!(ddown["phi"], serde_json::json!(["-1", "-1"]));
}

#[test]
fn relatives_orbit_closed_under_star() {
    let path = write_temp("p2-orbit.json", P2);
    let output = lpkit().arg("relatives").arg(&path).assert().success();
    let report: Value = serde_json::from_slice(&output.get_output().stdout).unwrap();
    let orbit: Vec<String> = report["relatives"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| serde_json::to_string(&r["array"]).unwrap())
        .collect();

    let star = &report["relatives"][4]["array"];
    let star_path = write_temp("p2-star.json", &serde_json::to_string(star).unwrap());
    let output2 = lpkit().arg("relatives").arg(&star_path).assert().success();
    let report2: Value = serde_json::from_slice(&output2.get_output().stdout).unwrap();
    let orbit2: Vec<String> = report2["relatives"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| serde_json::to_string(&r["array"]).unwrap())
        .collect();

    let mut a = orbit.clone();
    let mut b = orbit2.clone();
    a.sort();
    b.sort();
    assert_eq!(a, b, "orbit is the same set from any member");
}

#[test]
fn relatives_invalid_input_exits_one() {
    let broken = P2.replace(r#""varphi":["-1","-1"]"#, r#""varphi":["0","-1"]"#);
    let path = write_temp("p2-invalid.json", &broken);
    lpkit().arg("relatives").arg(&path).assert().code(1);
}
