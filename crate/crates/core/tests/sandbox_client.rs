#![cfg(unix)]

use std::fs;
use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::process::Command;

use spec_align::exec::{ExecRequest, ExecStatus, Sandbox, SandboxError};
use spec_align::spec::CanonicalFamily;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

/// Writes an executable script that reads one request line and prints `reply`.
fn fake_sandbox(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, format!("#!/bin/sh\nread -r line\n{body}\n")).unwrap();
    fs::set_permissions(&path, fs::Permissions::from_mode(0o755)).unwrap();
    path
}

fn request(id: &str, timeout: f64) -> ExecRequest {
    ExecRequest { id: id.into(), code: "print(1)".into(), timeout, family_hint: Some(CanonicalFamily::Line) }
}

#[test]
fn ok_reply_round_trips_the_spec() {
    let dir = tempfile::tempdir().unwrap();
    let report = fs::read_to_string(fixture("identity/line.report.json")).unwrap();
    let report = report.trim().replace("\"id\":\"line\"", "\"id\":\"r1\"");
    let sb = fake_sandbox(dir.path(), "ok.sh", &format!("cat <<'JSON'\n{report}\nJSON"));
    let got = Sandbox::new(&sb).run(&request("r1", 5.0)).unwrap();
    assert_eq!(got.status, ExecStatus::Ok);
    assert_eq!(got.runtime_spec.unwrap().family, CanonicalFamily::Line);
}

#[test]
fn request_reaches_the_sandbox_as_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let seen = dir.path().join("seen.txt");
    let body = format!(
        "printf '%s\\n' \"$line\" > {}\necho '{{\"id\":\"r2\",\"status\":\"runtime_error\",\"stderr_excerpt\":\"boom\"}}'",
        seen.display()
    );
    let sb = fake_sandbox(dir.path(), "echo.sh", &body);
    let got = Sandbox::new(&sb).run(&request("r2", 5.0)).unwrap();
    assert_eq!(got.status, ExecStatus::RuntimeError);
    let line = fs::read_to_string(&seen).unwrap();
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["id"], "r2");
    assert_eq!(v["family_hint"], "line");
    assert_eq!(v["code"], "print(1)");
}

#[test]
fn mismatched_id_is_a_protocol_error() {
    let dir = tempfile::tempdir().unwrap();
    let sb = fake_sandbox(dir.path(), "wrong.sh", "echo '{\"id\":\"other\",\"status\":\"timeout\"}'");
    assert!(matches!(Sandbox::new(&sb).run(&request("r3", 5.0)), Err(SandboxError::Protocol(_))));
}

#[test]
fn silent_sandbox_is_a_protocol_error() {
    let dir = tempfile::tempdir().unwrap();
    let sb = fake_sandbox(dir.path(), "quiet.sh", "exit 0");
    assert!(matches!(Sandbox::new(&sb).run(&request("r4", 5.0)), Err(SandboxError::Protocol(_))));
}

#[test]
fn missing_executable_is_unreachable() {
    let err = Sandbox::new("/nonexistent/sandbox").run(&request("r5", 1.0)).unwrap_err();
    assert!(matches!(err, SandboxError::Unreachable(_)));
}

#[test]
fn score_command_uses_the_sandbox() {
    let dir = tempfile::tempdir().unwrap();
    let report = fs::read_to_string(fixture("identity/line.report.json")).unwrap();
    let report = report.trim().replace("\"id\":\"line\"", "\"id\":\"score\"");
    let sb = fake_sandbox(dir.path(), "ok.sh", &format!("cat <<'JSON'\n{report}\nJSON"));
    let out = Command::new(env!("CARGO_BIN_EXE_spec-align"))
        .arg("score")
        .arg(fixture("identity/response.txt"))
        .arg(fixture("identity/line.chartspec.json"))
        .env("SPEC_ALIGN_SANDBOX", &sb)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total"], 8.0);

    let out = Command::new(env!("CARGO_BIN_EXE_spec-align"))
        .arg("score")
        .arg(fixture("identity/response.txt"))
        .arg(fixture("identity/line.chartspec.json"))
        .arg("--sandbox")
        .arg(dir.path().join("absent.sh"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
