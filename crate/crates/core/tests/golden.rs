//! Exact-mode reports of the catalog entries against committed JSON.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test --test golden`.

use std::path::PathBuf;
use std::process::Command;

use lcak::catalog::{catalog, NAMES};
use lcak::report::{run_report, Report, ReportOptions};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{}.json", name))
}

fn options() -> ReportOptions {
    ReportOptions { feasibility: true, require: Vec::new() }
}

#[test]
fn catalog_reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for e in catalog() {
        let text = run_report(&e.structure, e.name, &options()).to_json() + "\n";
        let path = golden_path(e.name);
        if update {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        if want != text {
            mismatched.push(e.name);
        }
    }
    assert!(mismatched.is_empty(), "reports differ from golden files: {:?}", mismatched);
}

#[test]
fn golden_files_parse_and_pass() {
    for name in NAMES {
        let text = std::fs::read_to_string(golden_path(name)).unwrap();
        let r = Report::from_json(&text).unwrap();
        assert_eq!(r.status, "pass", "{}: {:?}", name, r.failures);
        assert_eq!(r.to_json() + "\n", text);
    }
}

#[test]
fn cli_output_matches_golden_file() {
    let o = Command::new(env!("CARGO_BIN_EXE_lcak")).args(["catalog", "A4_1", "--json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let want = std::fs::read_to_string(golden_path("A4_1")).unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), want);
}

#[test]
fn report_is_stable_across_runs() {
    let e = &catalog()[1];
    let a = run_report(&e.structure, e.name, &options()).to_json();
    let b = run_report(&e.structure, e.name, &options()).to_json();
    assert_eq!(a, b);
}
