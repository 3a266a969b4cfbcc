use std::process::{Command, Output};

use swallowtail_cli::{L1_JSON, L2_JSON};
use swallowtail_core::braid::LoopSpec;

fn swallowtail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swallowtail"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = swallowtail(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    swallowtail(args).status.code().unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

#[test]
fn bundled_configs_match_presets() {
    assert_eq!(
        serde_json::from_str::<LoopSpec>(L1_JSON).unwrap(),
        LoopSpec::L1
    );
    assert_eq!(
        serde_json::from_str::<LoopSpec>(L2_JSON).unwrap(),
        LoopSpec::L2
    );
}

#[test]
fn classify_examples() {
    assert_eq!(
        json(&["classify", "--q", "2", "--r", "0", "--s", "1"])["kind"],
        "ELplus"
    );
    assert_eq!(
        json(&["classify", "--q", "0", "--r", "0", "--s", "0"])["kind"],
        "EP4"
    );
    let v = json(&["classify", "--q", "1", "--r", "1", "--s", "1"]);
    assert_eq!(v["kind"], "Regular");
    assert_eq!(v["witnesses"]["d"], 257.0);
    let csv = stdout(&["classify", "--q", "-2", "--r", "0", "--s", "1"]);
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("ELminus,Unknown,0,0,-2,0,1,"));
}

#[test]
fn classify_with_parameters_reports_defectiveness() {
    // u = 0, γ₋ = 4g
    let v = json(&[
        "classify",
        "--delta-omega-1",
        "1",
        "--xi-1",
        "1",
        "--g",
        "1",
        "--gamma-1",
        "4",
    ]);
    assert_eq!(v["kind"], "EP4");
    assert_eq!(v["defectiveness"], "Exceptional");
}

#[test]
fn classify_input_errors() {
    assert_eq!(code(&["classify", "--q", "1", "--r", "0"]), 2);
    assert_eq!(code(&["classify"]), 2);
    assert_eq!(
        code(&["classify", "--q", "1", "--r", "0", "--s", "0", "--g", "1"]),
        2
    );
    assert_eq!(code(&["classify", "--g", "-1"]), 2);
    assert_eq!(code(&["classify", "--q", "nan", "--r", "0", "--s", "0"]), 2);
    assert_eq!(
        code(&[
            "classify",
            "--q",
            "0",
            "--r",
            "0",
            "--s",
            "0",
            "--tol-scale",
            "0"
        ]),
        2
    );
    assert_eq!(code(&["classify", "--params", "/nonexistent.json"]), 2);
}

#[test]
fn sweep_examples() {
    let out = stdout(&["sweep", "--q", "-1.5", "--r", "-2:2:5", "--s", "-0.375:0:3"]);
    let dl3: Vec<&str> = out.lines().filter(|l| l.ends_with(",DL3")).collect();
    assert!(dl3.iter().any(|l| l.starts_with("-1.5,-1,-0.1875,")));
    assert!(dl3.iter().any(|l| l.starts_with("-1.5,1,-0.1875,")));

    let out = stdout(&["sweep", "--q", "2", "--r", "-1:1:3", "--s", "0:2:3"]);
    assert!(out
        .lines()
        .any(|l| l.starts_with("2,0,1,") && l.ends_with(",ELplus")));

    let out = stdout(&["sweep", "--q", "0", "--r", "0:0:1", "--s", "0:0:1"]);
    assert_eq!(
        out,
        "q,r,s,re_1,im_1,re_2,im_2,re_3,im_3,re_4,im_4,kind\n0,0,0,0,0,0,0,0,0,0,0,EP4\n"
    );
    assert_eq!(
        code(&["sweep", "--q", "0", "--r", "1:1:3", "--s", "0:1:2"]),
        2
    );
    assert_eq!(
        code(&["sweep", "--q", "0", "--r", "1:0:3", "--s", "0:1:2"]),
        2
    );
}

#[test]
fn braid_examples() {
    assert_eq!(
        json(&["braid", "--preset", "l1"])["word"],
        serde_json::json!([])
    );
    let l2 = json(&["braid", "--preset", "l2"]);
    assert_eq!(l2["word"], serde_json::json!([-1, 3]));
    assert_eq!(l2["permutation"], serde_json::json!([2, 1, 4, 3]));
    assert_eq!(l2["exponent_sum"], 0);

    let out = swallowtail(&[
        "braid",
        "--preset",
        "l2",
        "--delta-omega-2",
        "0",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["word"], serde_json::json!([]));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn braid_through_degeneracy_exits_3() {
    let dir = std::env::temp_dir().join(format!("swallowtail-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g_zero.json");
    std::fs::write(
        &path,
        r#"{"a_xi":1.0,"m_xi":0.2,"a_g":0.0,"m_g":0.0,"a_gamma":0.3,"m_gamma":0.5,"n_samples":64}"#,
    )
    .unwrap();
    let out = swallowtail(&["braid", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gap"));
    assert_eq!(code(&["braid", "--preset", "l2", "--n-samples", "8"]), 2);
    assert_eq!(code(&["braid"]), 2);
}

#[test]
fn braid_writes_strands() {
    let dir = std::env::temp_dir().join(format!("swallowtail-strands-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let strands = dir.join("strands.csv");
    let out = dir.join("braid.json");
    stdout(&[
        "braid",
        "--preset",
        "l2",
        "--n-samples",
        "64",
        "--strands",
        strands.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let csv = std::fs::read_to_string(&strands).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("phi,strand,re_lambda,im_lambda"));
    assert_eq!(lines.count(), 65 * 4);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["n_samples"], 64);
}

#[test]
fn surface_examples() {
    let out = stdout(&["surface", "--mode", "double-complex", "--resolution", "20"]);
    assert_eq!(out.lines().count(), 401);
    let out = stdout(&[
        "surface",
        "--mode",
        "g-zero-diabolical",
        "--x",
        "0.1:4.9:9",
        "--y",
        "-4.9:4.9:8",
    ]);
    assert!(out.lines().skip(1).all(|l| l.contains(",S1,")));
    let out = stdout(&[
        "surface", "--mode", "implicit", "--q", "1:1:1", "--r", "1:1:1", "--s", "1:2:3",
    ]);
    assert_eq!(out, "q,r,s,kind,defectiveness\n");
    assert_eq!(code(&["surface", "--mode", "implicit", "--x", "0:1:2"]), 2);
    assert_eq!(code(&["surface", "--mode", "double-real", "--x", "0:1"]), 2);
}

#[test]
fn check_examples() {
    let v = json(&[
        "check",
        "--g",
        "0.7",
        "--xi-1",
        "0.4",
        "--chi",
        "0.3",
        "--phi-chi",
        "1",
    ]);
    assert_eq!(v["pseudo_hermiticity_residual"], 0.0);
    assert_eq!(v["from_traces"]["r"], 0.0);

    let out = stdout(&["check", "--g", "1", "--xi-1", "1"]);
    assert!(out.lines().any(|l| l == "det_J,4"));

    let out = stdout(&["check"]);
    for line in out.lines().skip(1) {
        let value = line.split(',').nth(1).unwrap();
        assert_eq!(value, "0", "{line}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "surface",
        "--mode",
        "implicit",
        "--resolution",
        "30",
        "--threads",
        "3",
    ];
    let a = stdout(&args);
    let b = stdout(&[
        "surface",
        "--mode",
        "implicit",
        "--resolution",
        "30",
        "--threads",
        "1",
    ]);
    assert_eq!(a, b);
    assert_eq!(
        stdout(&["braid", "--preset", "l2"]),
        stdout(&["braid", "--preset", "l2"])
    );
}
