//! Golden-file tests: each script under `tests/scripts/` is run against the
//! frozen expected output under `tests/golden/`. Set `GOLDEN_BLESS=1` to
//! regenerate the expectations after an intentional change.
//!
//! Every script is run twice to pin down byte-for-byte determinism, and
//! every JSON golden is re-parsed and re-emitted to pin down the
//! round-trip guarantee.

use std::fs;
use std::path::{Path, PathBuf};

use fatarc_cli::{run_source, Options};

fn scripts_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/scripts")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn bless() -> bool {
    std::env::var("GOLDEN_BLESS").map(|v| v == "1").unwrap_or(false)
}

fn check(name: &str, actual: &str, expected_path: &Path) {
    if bless() {
        fs::write(expected_path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(expected_path).unwrap_or_else(|_| {
        panic!(
            "missing golden file {:?} for {}; run with GOLDEN_BLESS=1 to create it",
            expected_path, name
        )
    });
    if actual != expected {
        panic!(
            "golden mismatch for {}\n--- expected ({:?})\n{}\n--- actual\n{}",
            name, expected_path, expected, actual
        );
    }
}

#[test]
fn scripts_match_their_golden_outputs() {
    let mut entries: Vec<PathBuf> = fs::read_dir(scripts_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().map(|x| x == "fat").unwrap_or(false))
        .collect();
    entries.sort();
    assert!(!entries.is_empty(), "no golden scripts found");

    for script_path in entries {
        let name = script_path.file_stem().unwrap().to_string_lossy().to_string();
        let source = fs::read_to_string(&script_path).unwrap();

        // Text mode, run twice: identical scripts give identical bytes.
        let opts = Options::default();
        let first = run_source(&source, &opts);
        let second = run_source(&source, &opts);
        assert!(first.error.is_none(), "{}: {:?}", name, first.error);
        assert_eq!(first.stdout, second.stdout, "{}: nondeterministic output", name);
        check(&name, &first.stdout, &golden_dir().join(format!("{}.txt", name)));

        // JSON mode where a golden exists (or when blessing the seed set).
        let json_path = golden_dir().join(format!("{}.json", name));
        if json_path.exists() || (bless() && matches!(name.as_str(), "00_intro" | "02_igusa")) {
            let jopts = Options { json: true, ..Options::default() };
            let jout = run_source(&source, &jopts);
            assert!(jout.error.is_none(), "{}: {:?}", name, jout.error);
            check(&name, &jout.stdout, &json_path);

            // Round-trip: parse the emitted report and re-emit; bytes match.
            let value: serde_json::Value = serde_json::from_str(&jout.stdout).unwrap();
            let mut reprinted = serde_json::to_string_pretty(&value).unwrap();
            reprinted.push('\n');
            assert_eq!(jout.stdout, reprinted, "{}: JSON round-trip not byte-identical", name);
        }
    }
}
