use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn qtoric(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qtoric"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(bytes) = stdin {
        pipe.write_all(bytes).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const TETRA: &str = r#"{"type":"simplex_product","factors":[3]}"#;

#[test]
fn decide_cp3_from_file() {
    let dir = std::env::temp_dir().join(format!("qtoric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let b = dir.join("B.json");
    std::fs::write(&b, "[[1,0,0,1],[0,1,0,1],[0,0,1,1]]").unwrap();
    let out = qtoric(&["decide", "--polytope", TETRA, "--matrix", b.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "commutative");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn family_gen_pipes_into_decide() {
    let gen = qtoric(&["family-gen", "--k", "1", "--n", "2"], None);
    assert_eq!(gen.status.code(), Some(0));
    let out = qtoric(&["decide", "--stdin"], Some(&gen.stdout));
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "not_commutative");
    assert_eq!(r["stage"], "parity");
}

#[test]
fn exit_statuses() {
    let bad = r#"{"entries":[[1,0,0,1],[0,1,0,1],[0,0,1,0]],"polytope":{"type":"simplex_product","factors":[3]}}"#;
    let out = qtoric(&["validate", "--json", bad], None);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["simplex"], serde_json::json!([1, 2, 4]));

    let out = qtoric(&["decide", "--json", bad], None);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["status"], 3);

    assert_eq!(qtoric(&["decide", "--stdin"], Some(b"{oops")).status.code(), Some(2));
    assert_eq!(qtoric(&["family-gen", "--k", "0", "--n", "2"], None).status.code(), Some(2));
    assert_ne!(qtoric(&["decide", "--stdin", "--unknown"], None).status.code(), Some(0));
}

#[test]
fn byte_identical_reports() {
    let a = qtoric(&["decide", "--json", r#"{"k":3,"n":3}"#], None);
    let b = qtoric(&["decide", "--json", r#"{"k":3,"n":3}"#], None);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    // keys appear in sorted order
    let cert = text.find("\"certificate\"").unwrap();
    let stage = text.find("\"stage\"").unwrap();
    let verdict = text.find("\"verdict\"").unwrap();
    assert!(cert < stage && stage < verdict);
}

#[test]
fn output_file_and_text_format() {
    let dir = std::env::temp_dir().join(format!("qtoric-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = qtoric(&["family-invariants", "--k", "2", "--n", "3", "--output", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["fourth_power_locus"]["proof_lines"], serde_json::json!([3]));

    let out = qtoric(&["family-iso", "--k", "2", "--l", "2", "--n", "3", "--format", "text"], None);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "H(2,3) and H(2,3): isomorphic");
    std::fs::remove_dir_all(&dir).ok();
}
