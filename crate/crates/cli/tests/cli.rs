use std::fs;
use std::path::Path;
use std::process::Command;

use hamming_equitable_cli::run;
use serde_json::{json, Value};
use tempfile::TempDir;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hamming-eq").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn json_of(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn eight_cycle_verifies() {
    let dir = TempDir::new().unwrap();
    let (code, doc, _) = call(&["eight-cycle"]);
    assert_eq!(code, 0);
    assert_eq!(doc.trim(), r#"{"format_version":1,"n":4,"q":2,"cell":"e427"}"#);
    let path = write(&dir, "c8.json", &doc);
    let (code, out, _) = call(&["verify", &path]);
    assert_eq!(code, 0);
    let report = json_of(&out);
    assert_eq!(report["certificates"][0]["quotient"], json!([[2, 2], [2, 2]]));
    assert_eq!(report["certificates"][0]["eigenvalues"], json!([4, 0]));
    assert_eq!(report["certificates"][1]["kind"], json!("spectral"));
    assert_eq!(report["certificates"][2]["kind"], json!("oa"));
    assert_eq!(report["essential_coordinates"], json!([0, 1, 2, 3]));
    assert_eq!(report["cells"][0]["induced_cycle"]["length"], json!(8));
}

#[test]
fn verify_reproduces_its_own_verdict() {
    let dir = TempDir::new().unwrap();
    for doc in [
        r#"{"format_version":1,"n":2,"q":2,"cell":"1"}"#,
        r#"{"format_version":1,"n":3,"q":2,"vertices":[[0,0,0],[1,1,1]]}"#,
    ] {
        let path = write(&dir, "in.json", doc);
        let (code, out, _) = call(&["verify", &path]);
        let report = json_of(&out);
        let again = write(&dir, "again.json", &report["partition"].to_string());
        let (code2, out2, _) = call(&["verify", &again]);
        assert_eq!(code, code2);
        assert_eq!(json_of(&out2), report);
    }
    let path = write(&dir, "bad.json", r#"{"format_version":1,"n":2,"q":2,"cell":"1"}"#);
    assert_eq!(call(&["verify", &path]).0, 1);
}

#[test]
fn format_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let stray = write(&dir, "stray.json", r#"{"format_version":1,"n":4,"q":2,"cell":"e4271"}"#);
    let (code, _, err) = call(&["verify", &stray]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    assert_eq!(call(&["verify", "/nonexistent/file.json"]).0, 2);
    assert_eq!(call(&["no-such-command"]).0, 2);
    assert_eq!(call(&["enumerate", "--n", "2"]).0, 2);
    assert_eq!(call(&["enumerate", "--n", "2", "--q", "2", "--eig-index", "1", "--quotient", "0,2;2,0"]).0, 2);
    assert_eq!(call(&["construct-b", "--q", "4", "--split", "0|1"]).0, 2);
}

#[test]
fn constructions() {
    let dir = TempDir::new().unwrap();
    let base = write(
        &dir,
        "base.json",
        r#"{"format_version":1,"n":2,"q":4,"vertices":[[0,0],[0,2],[1,1],[1,3],[2,0],[2,2],[3,1],[3,3]]}"#,
    );
    let (code, out, _) = call(&["construct-a", "--q", "4", "--blocks", "0,1|2,3", "--base", &base]);
    assert_eq!(code, 0);
    let switched = write(&dir, "a.json", &out);
    let report = json_of(&call(&["verify", &switched]).1);
    assert_eq!(report["certificates"][0]["quotient"], json!([[5, 4], [4, 5]]));
    assert_eq!(report["essential_coordinates"], json!([0, 1, 2]));

    // singleton blocks with a half-filled base are rejected by the balance gate
    let half = write(&dir, "half.json", r#"{"format_version":1,"n":2,"q":2,"vertices":[[0,0],[1,0]]}"#);
    assert_eq!(call(&["construct-a", "--q", "2", "--blocks", "0|1", "--base", &half]).0, 1);

    let (code, out, _) = call(&["construct-b", "--q", "4", "--split", "0,1"]);
    assert_eq!(code, 0);
    let b = write(&dir, "b.json", &out);
    let report = json_of(&call(&["verify", &b]).1);
    assert_eq!(report["certificates"][0]["eigenvalues"][1], json!(4));
    assert_eq!(report["cells"][0]["size"], json!(128));
    assert_eq!(call(&["construct-b", "--q", "3", "--split", "0"]).0, 1);

    let code3 = write(&dir, "code.json", r#"{"format_version":1,"n":3,"q":2,"vertices":[[0,0,0],[1,1,1]]}"#);
    let (code, lifted, _) = call(&["lift", "--blocks", "0,1|2,3", "--input", &code3]);
    assert_eq!(code, 0);
    let lifted = write(&dir, "lifted.json", &lifted);
    let report = json_of(&call(&["verify", &lifted]).1);
    assert_eq!(report["certificates"][0]["eigenvalues"], json!([9, 1]));
    assert_eq!(report["certificates"][0]["second_eigenvalue_index"], json!(2));
}

#[test]
fn classify_and_reduce() {
    let dir = TempDir::new().unwrap();
    // (A, B, i) = ({0}, {2}, 1) on H(2,3): value depends on the last digit
    let values: Vec<i64> = (0..9).map(|v| [1, 0, -1][v % 3]).collect();
    let doc = json!({"format_version": 1, "n": 2, "q": 3, "values": values}).to_string();
    let path = write(&dir, "f.json", &doc);
    let (code, out, _) = call(&["classify-fn", &path]);
    assert_eq!(code, 0);
    let cert = json_of(&out);
    assert_eq!(cert["u0u1"], json!({"form": "quasi_string", "a": [0], "b": [2], "i": 1}));
    assert_eq!(cert["lambda1"]["form"], json!("string"));

    let not_member = write(&dir, "g.json", r#"{"format_version":1,"n":2,"q":2,"values":[1,0,0,0]}"#);
    assert_eq!(call(&["classify-fn", &not_member]).0, 1);
    let not_ternary = write(&dir, "h.json", r#"{"format_version":1,"n":2,"q":2,"values":[2,0,0,0]}"#);
    assert_eq!(call(&["classify-fn", &not_ternary]).0, 2);

    let ext = write(&dir, "ext.json", r#"{"format_version":1,"n":3,"q":2,"vertices":[[0,0,0],[0,0,1],[1,1,0],[1,1,1]]}"#);
    let (code, out, _) = call(&["reduce", &ext]);
    assert_eq!(code, 0);
    let reduced = json_of(&out);
    assert_eq!(reduced["removed_coordinates"], json!([2]));
    assert_eq!(reduced["partition"], json!({"format_version": 1, "n": 2, "q": 2, "cell": "9"}));
}

#[test]
fn structural_classification_tags() {
    let dir = TempDir::new().unwrap();
    let c8 = write(&dir, "c8.json", &call(&["eight-cycle"]).1);
    let (code, out, _) = call(&["classify-t5", &c8]);
    assert_eq!(code, 0);
    let cert = json_of(&out);
    assert_eq!(cert["tag"], json!("construction_b"));
    assert_eq!(cert["verdict"], json!("pass"));
    let code3 = write(&dir, "code.json", r#"{"format_version":1,"n":3,"q":2,"vertices":[[0,0,0],[1,1,1]]}"#);
    assert_eq!(json_of(&call(&["classify-t5", &code3]).1)["tag"], json!("small_base"));
    let not_eq = write(&dir, "ne.json", r#"{"format_version":1,"n":2,"q":2,"cell":"1"}"#);
    assert_eq!(call(&["classify-t5", &not_eq]).0, 1);
}

#[test]
fn enumeration_methods_agree() {
    let base = ["enumerate", "--n", "3", "--q", "2", "--eig-index", "2"];
    let brute = call(&[&base[..], &["--brute-force"]].concat());
    let back = call(&[&base[..], &["--backtrack"]].concat());
    assert_eq!(brute.0, 0);
    assert_eq!(brute.1, back.1);
    let lines: Vec<&str> = brute.1.lines().collect();
    let summary = json_of(lines.last().unwrap());
    assert_eq!(summary["kind"], json!("summary"));
    assert_eq!(summary["count"], json!(lines.len() - 1));
    let q = call(&["enumerate", "--n", "3", "--q", "2", "--quotient", "0,3;1,2"]);
    assert_eq!(q.1.lines().count(), 5);
}

#[test]
fn sweep_reports_census() {
    let (code, out, _) = call(&["sweep-ternary", "--n", "2", "--q", "2"]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["census"]["constants"], json!(3));
    assert_eq!(v["census"]["disagreements"], json!(0));
    let (code, out, _) = call(&["sweep-ternary", "--n", "2", "--q", "2", "--lambda1", "--threads", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["census"]["zero"], json!(1));
    assert_eq!(call(&["sweep-ternary", "--n", "4", "--q", "2"]).0, 2);
}

#[test]
fn binary_output_is_thread_independent() {
    let bin = Path::new(env!("CARGO_BIN_EXE_hamming-eq"));
    let outputs: Vec<(Option<i32>, Vec<u8>)> = ["1", "2", "8"]
        .iter()
        .map(|t| {
            let o = Command::new(bin)
                .args(["enumerate", "--n", "4", "--q", "2", "--eig-index", "2", "--reduced", "--threads", t])
                .output()
                .unwrap();
            (o.status.code(), o.stdout)
        })
        .collect();
    assert_eq!(outputs[0].0, Some(0));
    assert!(!outputs[0].1.is_empty());
    assert!(outputs.iter().all(|o| *o == outputs[0]));
}
