//! Golden reports for the checked-in corpus. Each `<name>.input.json` has a
//! `<name>.expected.json` holding the `validate`, `decide`, `normalize` and
//! `cohomology --ranks` reports (or the error each produced). Set
//! `QTORIC_BLESS=1` to regenerate the expected files.

use std::path::{Path, PathBuf};

use clap::Parser;
use qtoric::cli::{execute, exit_code, Cli};
use serde_json::{json, Map, Value};

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut inputs: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".input.json"))
        .collect();
    inputs.sort();
    inputs
}

fn run(args: &[&str]) -> Value {
    let cli = Cli::try_parse_from(std::iter::once("qtoric").chain(args.iter().copied())).unwrap();
    match execute(&cli.command, &mut std::io::empty()) {
        Ok(out) => json!({"status": out.code, "report": out.report}),
        Err(e) => json!({"status": exit_code(&e), "error": e.to_string()}),
    }
}

fn reports_for(input: &Path) -> Value {
    let path = input.to_str().unwrap();
    let mut all = Map::new();
    all.insert("validate".into(), run(&["validate", "--matrix", path]));
    all.insert("decide".into(), run(&["decide", "--matrix", path]));
    all.insert("normalize".into(), run(&["normalize", "--matrix", path]));
    all.insert("cohomology".into(), run(&["cohomology", "--ranks", "--matrix", path]));
    Value::Object(all)
}

#[test]
fn golden_corpus() {
    let bless = std::env::var_os("QTORIC_BLESS").is_some();
    let inputs = corpus();
    assert!(inputs.len() >= 18, "corpus has {} inputs", inputs.len());
    let mut stale = Vec::new();
    for input in &inputs {
        let expected_path = PathBuf::from(input.to_string_lossy().replace(".input.json", ".expected.json"));
        let got = reports_for(input);
        let rendered = serde_json::to_string_pretty(&got).unwrap() + "\n";
        if bless {
            std::fs::write(&expected_path, rendered).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&expected_path)
            .unwrap_or_else(|_| panic!("missing {}; run with QTORIC_BLESS=1", expected_path.display()));
        if expected != rendered {
            stale.push(expected_path.display().to_string());
        }
    }
    assert!(stale.is_empty(), "golden mismatches: {stale:?}");
}

/// Spot checks that do not depend on the blessed files.
#[test]
fn corpus_verdicts() {
    for input in corpus() {
        let name = input.file_name().unwrap().to_string_lossy().replace(".input.json", "");
        let reports = reports_for(&input);
        let verdict = reports["decide"]["report"]["verdict"].as_str().unwrap().to_string();
        let expected = match name.as_str() {
            "cp3" | "cp3_power2" | "cp3_power3" => "commutative",
            n if n.starts_with("bott_k") => {
                let k: u32 = n["bott_k".len()..n.find("_n").unwrap()].parse().unwrap();
                if k.is_multiple_of(2) { "commutative" } else { "not_commutative" }
            }
            "mixed_blocks" => "commutative",
            _ => "not_commutative",
        };
        assert_eq!(verdict, expected, "{name}");
        assert_eq!(reports["validate"]["status"], 0, "{name}");
    }
}

/// Outputs of `normalize` and `cohomology` re-parse as inputs.
#[test]
fn outputs_round_trip() {
    let dir = std::env::temp_dir().join(format!("qtoric-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for input in corpus() {
        let reports = reports_for(&input);
        if reports["normalize"]["status"] != 0 {
            continue;
        }
        let normalized = dir.join("normalized.json");
        std::fs::write(&normalized, reports["normalize"]["report"].to_string()).unwrap();
        let n = normalized.to_str().unwrap();
        let again = run(&["decide", "--matrix", n]);
        assert_eq!(again["report"]["verdict"], reports["decide"]["report"]["verdict"], "{}", input.display());
        let coh = run(&["cohomology", "--ranks", "--matrix", n]);
        assert_eq!(coh["report"]["relations"], reports["cohomology"]["report"]["relations"]);

        let presentation = dir.join("presentation.json");
        std::fs::write(&presentation, reports["cohomology"]["report"].to_string()).unwrap();
        let p = presentation.to_str().unwrap();
        let ranks = run(&["rank", "--matrix", p]);
        assert_eq!(ranks["report"]["ranks"], reports["cohomology"]["report"]["ranks"]);
    }
    std::fs::remove_dir_all(&dir).ok();
}
