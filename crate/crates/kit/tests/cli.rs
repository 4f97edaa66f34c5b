use std::process::Command;

fn kit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_melnikov-kit"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

const SIX: &str = "systems/six_cycles.sys";
const DELTA: [&str; 12] =
    ["-p", "c00=3/4", "-p", "c10=-1/2", "-p", "c01=5/4", "-p", "c20=1/4", "-p", "c11=-1", "-p", "c02=1/2"];

#[test]
fn expand_json_is_deterministic_and_exact() {
    let args = ["expand", "-i", SIX, "-L", "2", "-f", "json", "-p", "r=1/3"];
    let (code, a, _) = kit(&args);
    assert_eq!(code, 0);
    assert_eq!(a, kit(&args).1);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let b0 = &v["coefficients"][0]["terms"][0];
    assert_eq!(b0["monomial"]["c00"], 1);
    assert_eq!(b0["constant"], "pi*(2)");
    assert!(b0["float"].as_str().unwrap().starts_with("6.283185307179586476"));
    // Keys come out sorted.
    let keys: Vec<&str> = b0.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, ["constant", "float", "monomial"]);
    assert!(a.find("\"assumptions\"").unwrap() < a.find("\"coefficients\"").unwrap());
}

#[test]
fn classify_and_transport() {
    let (code, out, _) = kit(&["classify", "-i", "systems/nilpotent_form.sys", "-p", "A=0", "-p", "B=1"]);
    assert_eq!(code, 0);
    assert!(out.contains("nilpotent center of order 1"), "{out}");
    let (code, out, _) = kit(&["transport", "-i", "systems/symmetric_nilpotent.sys", "-f", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["divergence_coefficients"]["10"], "4*c02*h11 - 2*c11");
}

#[test]
fn certify_six_cycles() {
    let (code, out, _) =
        kit(&["certify", "-i", SIX, "-L", "6", "--eliminate", "c00,c02,c11,c10,c20", "--chain", "r", "-f", "json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cycles"], 6);
    assert_eq!(v["established"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
}

#[test]
fn verify_writes_csv() {
    let mut args = vec!["verify", "-i", SIX, "-p", "r=1/3", "-f", "csv"];
    args.extend(DELTA);
    let dir = std::env::temp_dir().join(format!("melnikov-kit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ladder.csv");
    args.extend(["--out", path.to_str().unwrap()]);
    let (code, stdout, _) = kit(&args);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("h,M_num,err_est"));
    assert_eq!(lines.count(), 6);
    // An unattainable tolerance is a mismatch, not an input error.
    let mut strict = vec!["verify", "-i", SIX, "-p", "r=1/3", "--tol", "1e-30"];
    strict.extend(DELTA);
    assert_eq!(kit(&strict).0, 1);
}

#[test]
fn reproduce_reports_per_key() {
    let (code, out, _) = kit(&["reproduce", "thm8"]);
    assert_eq!(code, 0);
    assert!(out.contains("match     b0 (Exact)"));
    assert!(out.ends_with("thm8: reproduced\n"));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(kit(&["expand", "-i", "systems/missing.sys"]).0, 2);
    assert_eq!(kit(&["expand", "-i", SIX, "-p", "nope=1"]).0, 2);
    assert_eq!(kit(&["expand", "-i", SIX, "-p", "r=sqrt(2)"]).0, 2);
    assert_eq!(kit(&["expand", "-i", SIX, "-f", "csv"]).0, 2);
    assert_eq!(kit(&["reproduce", "thm11"]).0, 2);
    let dir = std::env::temp_dir().join(format!("melnikov-kit-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.sys");
    std::fs::write(&bad, "H = 1/2*x^2 + 1/2*y^2 +\n").unwrap();
    let (code, _, err) = kit(&["expand", "-i", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
}
