use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apnspectra"))
        .args(args)
        .env_remove("APNSPECTRA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn spectrum_values(report: &Value) -> Vec<i64> {
    report["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_i64().unwrap())
        .collect()
}

#[test]
fn field_command() {
    let v: Value = serde_json::from_str(&ok(&["field", "--n", "3"])).unwrap();
    assert_eq!(v["poly"], "0xB");
    assert_eq!(v["alpha"], "0x2");
    let v: Value = serde_json::from_str(&ok(&["field", "--n", "2"])).unwrap();
    assert_eq!(v["poly"], "0x7");
    let text = ok(&["field", "--n", "6", "--format", "text"]);
    assert!(text.contains("order: 63 = 3^2 * 7"), "{text}");
    assert_eq!(code(&["field", "--n", "1"]), 2);
    assert_eq!(code(&["field", "--n", "25"]), 2);
    assert_eq!(code(&["field", "--n", "4", "--poly-override", "0x15"]), 2);
}

#[test]
fn analyze_f5_even() {
    let out = ok(&["analyze", "--family", "f5", "--n", "6", "--k", "2", "--s", "1", "--v", "0", "--w", "0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(spectrum_values(&v), vec![-16, -8, 0, 8, 16]);
    assert_eq!(v["nonlinearity"], 24);
    assert_eq!(v["is_apn"], true);
    assert_eq!(v["differential_uniformity"], 2);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys.len(), 6);
    let total: u64 = v["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["count"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 64 * 63);
}

#[test]
fn analyze_dillon_has_seven_values() {
    let out = ok(&["analyze", "--family", "dillon", "--n", "6"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(spectrum_values(&v).len(), 7);
    assert_eq!(v["is_apn"], true);
}

#[test]
fn analyze_rejects_bad_params() {
    let o = run(&["analyze", "--family", "f5", "--n", "9", "--k", "3", "--s", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(3,k)=1"));
    assert_eq!(code(&["analyze", "--family", "nope", "--n", "6"]), 2);
    assert_eq!(code(&["analyze", "--n", "6"]), 2);
    assert_eq!(code(&["analyze", "--n", "3", "--poly", "x^3+"]), 2);
    assert_eq!(code(&["analyze", "--n", "3", "--poly", "8*x^3"]), 2);
}

#[test]
fn cap_and_sampling() {
    assert_eq!(code(&["analyze", "--family", "gold", "--n", "17"]), 3);
    assert_eq!(code(&["analyze", "--family", "gold", "--n", "9", "--n-cap", "8"]), 3);
    assert_eq!(code(&["kernels", "--family", "gold", "--n", "9", "--n-cap", "8"]), 3);
    // seed is mandatory with a sample
    assert_eq!(code(&["analyze", "--family", "gold", "--n", "9", "--sample-b", "4"]), 2);
    assert_eq!(code(&["analyze", "--family", "gold", "--n", "3", "--sample-b", "8", "--seed", "1"]), 2);
    let args = ["analyze", "--family", "gold", "--n", "9", "--n-cap", "8", "--sample-b", "5", "--seed", "7"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["sample"]["b"].as_array().unwrap().len(), 5);
    assert_eq!(v["sample"]["seed"], 7);
    assert_eq!(spectrum_values(&v), vec![-32, 0, 32]);
    let forced = ok(&["analyze", "--family", "gold", "--n", "9", "--n-cap", "8", "--force"]);
    let v: Value = serde_json::from_str(&forced).unwrap();
    assert_eq!(spectrum_values(&v), vec![-32, 0, 32]);
}

#[test]
fn family_and_poly_reports_match() {
    for (fam, n) in [("f5", "6"), ("f4", "5"), ("gold", "7"), ("dillon", "6"), ("f3", "6")] {
        let by_family = ok(&["analyze", "--family", fam, "--n", n]);
        let poly = ok(&["export-table", "--family", fam, "--n", n, "--as-poly"]);
        let by_poly = ok(&["analyze", "--n", n, "--poly", poly.trim()]);
        assert_eq!(by_family, by_poly, "{fam}");
    }
}

#[test]
fn json_is_identical_across_thread_counts() {
    let args = ["analyze", "--family", "f5", "--n", "12"];
    let one = ok(&[&["--threads", "1"], &args[..]].concat());
    let many = ok(&[&["--threads", "8"], &args[..]].concat());
    assert_eq!(one, many);
    let via_env = Command::new(env!("CARGO_BIN_EXE_apnspectra"))
        .args(["kernels", "--family", "f5", "--n", "6"])
        .env("APNSPECTRA_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&via_env), ok(&["--threads", "1", "kernels", "--family", "f5", "--n", "6"]));
}

#[test]
fn csv_and_text_formats() {
    let csv = ok(&["analyze", "--family", "gold", "--n", "3", "--format", "csv"]);
    assert_eq!(csv, "value,count\n-4,7\n0,28\n4,21\n");
    let text = ok(&["analyze", "--family", "gold", "--n", "3", "--format", "text"]);
    assert!(text.contains("nonlinearity: 2"), "{text}");
    assert!(text.contains("(APN)"));
}

#[test]
fn kernels_command() {
    let out = ok(&["kernels", "--family", "gold", "--n", "5"]);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 32);
    for l in &lines[..31] {
        assert_eq!(l["dim"], 1);
        assert_eq!(l["kernel"].as_array().unwrap().len(), 2);
    }
    assert_eq!(lines[31]["summary"]["dims"]["1"], 31);

    let out = ok(&["kernels", "--family", "f5", "--n", "6"]);
    let summary: Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    let dims = summary["summary"]["dims"].as_object().unwrap();
    assert!(dims.keys().all(|d| ["0", "1", "2"].contains(&d.as_str())));
    assert_eq!(summary["summary"]["violations"].as_array().unwrap().len(), 0);

    // linear: every component has the whole field as kernel
    let out = ok(&["kernels", "--n", "4", "--poly", "x^2+3*x"]);
    let summary: Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(summary["summary"]["dims"]["4"], 15);

    assert_eq!(code(&["kernels", "--n", "4", "--poly", "x^7"]), 2);
}

#[test]
fn verify_proof_command() {
    let out = ok(&["verify-proof", "--family", "f5", "--n", "6"]);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 64);
    for l in &lines[..63] {
        assert_eq!(l["pass"], true);
        assert_eq!(l["checks"]["eq2"], true);
        assert_eq!(l["checks"]["p_theta_in_subfield"], true);
    }
    assert_eq!(lines[63]["overall"]["pass"], true);
    assert_eq!(lines[63]["overall"]["tested"], 63);

    ok(&["verify-proof", "--family", "f5", "--n", "3", "--k", "1", "--s", "2"]);
    assert_eq!(code(&["verify-proof", "--family", "gold", "--n", "6"]), 2);
    assert_eq!(code(&["verify-proof", "--n", "6", "--poly", "x^3"]), 2);
    let sampled = ok(&["verify-proof", "--family", "f5", "--n", "12", "--sample-b", "16", "--seed", "3", "--format", "text"]);
    assert!(sampled.ends_with("16 of 16 components pass\n"), "{sampled}");
}

#[test]
fn export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f5.txt");
    let p = path.to_str().unwrap();
    ok(&["export-table", "--family", "f5", "--n", "6", "--output", p]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 64);

    let imported: Value = serde_json::from_str(&ok(&["import-table", "--n", "6", "--input", p])).unwrap();
    let direct: Value = serde_json::from_str(&ok(&["analyze", "--family", "f5", "--n", "6"])).unwrap();
    assert_eq!(imported["provenance"], "imported");
    assert_eq!(imported["spectrum"], direct["spectrum"]);

    let again = dir.path().join("again.txt");
    let mut lines: Vec<&str> = text.lines().collect();
    std::fs::write(&again, lines.join("\n")).unwrap();
    ok(&["import-table", "--n", "6", "--input", again.to_str().unwrap()]);

    lines.pop();
    std::fs::write(&again, lines.join("\n")).unwrap();
    let o = run(&["import-table", "--n", "6", "--input", again.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    lines.push("40");
    std::fs::write(&again, lines.join("\n")).unwrap();
    let o = run(&["import-table", "--n", "6", "--input", again.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 64"));

    assert_eq!(code(&["import-table", "--n", "6", "--input", "/nonexistent/table"]), 2);
}
