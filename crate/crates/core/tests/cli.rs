use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use spec_align::curation::read_manifest;
use spec_align::curation::synthetic::SyntheticPlan;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spec-align"));
    c.env_remove("SPEC_ALIGN_SANDBOX");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn path(rel: &str) -> String {
    fixture(rel).display().to_string()
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", &path("identity/bar.chartspec.json"), &path("identity/pie.chartspec.json")]);
    assert_eq!(ok.status.code(), Some(0));

    let bad = run(&["validate", &path("identity/bar.chartspec.json"), &path("cli/treemap_ratio_sum.chartspec.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("treemap_ratios_sum"));

    let missing = run(&["validate", &path("cli/does_not_exist.json")]);
    assert_eq!(missing.status.code(), Some(2));
}

fn score(reference: &str, report: &str, extra: &[&str]) -> Value {
    let mut args = vec!["score".to_string(), path("identity/response.txt"), path(reference)];
    args.extend(["--no-exec".to_string(), path(report)]);
    args.extend(extra.iter().map(|s| s.to_string()));
    let out = bin().args(&args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn score_identity_failure_and_gate() {
    assert_eq!(score("identity/line.chartspec.json", "identity/line.report.json", &[])["total"], 8.0);
    let failed = score("identity/line.chartspec.json", "cli/syntax_error.report.json", &[]);
    assert_eq!(failed["total"], -1.0);
    let gated = score("identity/line.chartspec.json", "cli/line_two_panels.report.json", &[]);
    assert_eq!(gated["semantic"]["subtotal"], 0.0);
    assert_eq!(gated["code"]["subtotal"], 0.0);
    assert_eq!(gated["total"], 0.5);
}

#[test]
fn score_reads_settings() {
    let settings = path("cli/settings.json");
    let v = score("identity/line.chartspec.json", "identity/line.report.json", &["--config", &settings]);
    assert_eq!(v["total"], 8.5);
}

#[test]
fn score_rejects_invalid_reference() {
    let out = run(&[
        "score",
        &path("identity/response.txt"),
        &path("cli/treemap_ratio_sum.chartspec.json"),
        "--no-exec",
        &path("identity/treemap.report.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

fn request(id: &str, family: &str, report: &str) -> String {
    format!(
        r#"{{"id":"{id}","response_text":{},"ref_spec_path":{},"report":{}}}"#,
        serde_json::to_string(&fs::read_to_string(fixture("identity/response.txt")).unwrap()).unwrap(),
        serde_json::to_string(&path(&format!("identity/{family}.chartspec.json"))).unwrap(),
        fs::read_to_string(fixture(report)).unwrap().trim()
    )
}

#[test]
fn serve_batches_in_order() {
    let input = [
        request("a", "line", "identity/line.report.json"),
        request("b", "line", "cli/syntax_error.report.json"),
        "not json".to_string(),
        request("d", "bar", "identity/bar.report.json"),
        r#"{"group":["a","b"]}"#.to_string(),
        request("e", "pie", "identity/pie.report.json"),
    ]
    .join("\n");
    let out = run_with_stdin(&["serve", "--workers", "2"], &input);
    assert!(out.status.success());
    let lines: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0]["id"], "a");
    assert_eq!(lines[0]["breakdown"]["total"], 8.0);
    assert_eq!(lines[1]["status"], "syntax_error");
    assert_eq!(lines[2]["line"], 3);
    assert_eq!(lines[3]["id"], "d");
    assert_eq!(lines[4]["advantages"], serde_json::json!([1.0, -1.0]));
    assert_eq!(lines[5]["breakdown"]["total"], 7.0);
}

#[test]
fn advantage_command() {
    let out = run_with_stdin(&["advantage"], "[0, 2]\n[1,1,1,1]\n");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[-1.0,1.0]\n[0.0,0.0,0.0,0.0]\n");
    let bad = run_with_stdin(&["advantage"], "[]\n");
    assert_eq!(bad.status.code(), Some(1));
}

fn write_plan_pool(dir: &Path) -> PathBuf {
    let plan = SyntheticPlan::from_json(&fs::read_to_string(fixture("balanced_pool_plan.json")).unwrap()).unwrap();
    plan.write_pool(dir).unwrap()
}

fn curate(pool: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["curate".to_string(), pool.display().to_string(), "--out".into(), out.display().to_string()];
    args.extend(extra.iter().map(|s| s.to_string()));
    bin().args(&args).output().unwrap()
}

#[test]
fn curate_is_deterministic_and_trims_to_budget() {
    let dir = tempfile::tempdir().unwrap();
    let pool = write_plan_pool(dir.path());
    let (m1, m2, m3) = (dir.path().join("m1.jsonl"), dir.path().join("m2.jsonl"), dir.path().join("m3.jsonl"));

    let first = curate(&pool, &m1, &["--seed", "7"]);
    assert!(first.status.success());
    let table = String::from_utf8(first.stdout.clone()).unwrap();
    assert!(table.lines().any(|l| l.starts_with("Total") && l.contains(" 3996 ")), "{table}");
    let second = curate(&pool, &m2, &["--seed", "7"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read(&m1).unwrap(), fs::read(&m2).unwrap());

    let trimmed = curate(&pool, &m3, &["--seed", "7", "--budget", "3008"]);
    assert!(trimmed.status.success());
    assert!(String::from_utf8_lossy(&trimmed.stdout).contains("trimmed 988 entries from tier 3"));
    let (full, _) = read_manifest(fs::File::open(&m1).map(std::io::BufReader::new).unwrap()).unwrap();
    let (cut, _) = read_manifest(fs::File::open(&m3).map(std::io::BufReader::new).unwrap()).unwrap();
    assert_eq!(cut.total, 3008);
    for fam in ["mix", "3d", "multi_axes", "radar", "rose", "contour", "quiver"] {
        assert_eq!(full.family_counts[fam], cut.family_counts[fam], "{fam}");
    }
}

#[test]
fn curate_empty_pool_fails() {
    let dir = tempfile::tempdir().unwrap();
    let pool = dir.path().join("pool.jsonl");
    fs::write(&pool, "").unwrap();
    assert_eq!(curate(&pool, &dir.path().join("m.jsonl"), &[]).status.code(), Some(1));
    assert_eq!(curate(&dir.path().join("absent.jsonl"), &dir.path().join("m.jsonl"), &[]).status.code(), Some(2));
}

#[test]
fn curate_applies_tier_settings() {
    let dir = tempfile::tempdir().unwrap();
    let pool = write_plan_pool(dir.path());
    let out = curate(&pool, &dir.path().join("m.jsonl"), &["--config", &path("cli/settings.json")]);
    assert!(out.status.success());
    // tier 3 has 20 signatures; 14 fewer per signature
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l.starts_with("Total") && l.contains(" 3716 ")));
}
