//! Execution reports and the client side of the sandbox wire protocol.
//!
//! The sandbox is an external executable. It reads one JSON request per line
//! on stdin and answers each with one [`ExecutionReport`] line on stdout.
//! Each candidate runs in a freshly spawned sandbox process.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spec::{parse_spec, to_canonical_string, CanonicalFamily, ChartSpec};

/// Environment variable naming the sandbox executable.
pub const SANDBOX_ENV: &str = "SPEC_ALIGN_SANDBOX";
/// Longest stderr excerpt kept in a report, in bytes.
pub const STDERR_EXCERPT_LIMIT: usize = 4096;
/// Extra time the client waits beyond the requested timeout.
const CLIENT_GRACE: Duration = Duration::from_secs(5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecStatus {
    Ok,
    SyntaxError,
    RuntimeError,
    Timeout,
}

impl ExecStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::SyntaxError => "syntax_error",
            Self::RuntimeError => "runtime_error",
            Self::Timeout => "timeout",
        }
    }
}

/// Outcome of running one candidate script.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionReport {
    #[serde(default)]
    pub id: Option<String>,
    pub status: ExecStatus,
    #[serde(default)]
    pub wall_time: f64,
    #[serde(default)]
    pub runtime_spec: Option<ChartSpec>,
    #[serde(default)]
    pub stderr_excerpt: String,
}

impl ExecutionReport {
    pub fn new(status: ExecStatus) -> Self {
        Self { id: None, status, wall_time: 0.0, runtime_spec: None, stderr_excerpt: String::new() }
    }

    pub fn ok(spec: ChartSpec) -> Self {
        Self { runtime_spec: Some(spec), ..Self::new(ExecStatus::Ok) }
    }

    pub fn failed(status: ExecStatus, stderr: &str) -> Self {
        Self { stderr_excerpt: truncate_excerpt(stderr), ..Self::new(status) }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed execution report: {0}")]
    Malformed(#[from] serde_json::Error),
}

/// A parsed report plus anything odd noticed while reading it.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedReport {
    pub report: ExecutionReport,
    pub notes: Vec<String>,
}

#[derive(Deserialize)]
struct RawReport {
    #[serde(default)]
    id: Option<String>,
    status: ExecStatus,
    #[serde(default)]
    wall_time: f64,
    #[serde(default)]
    runtime_spec: Option<serde_json::Value>,
    #[serde(default)]
    stderr_excerpt: String,
}

/// Reads a report document. The embedded runtime spec goes through the full
/// spec parser; if it is rejected the report keeps no spec and the reason is
/// returned in `notes`.
pub fn parse_report(bytes: &[u8]) -> Result<ParsedReport, ReportError> {
    let raw: RawReport = serde_json::from_slice(bytes)?;
    let mut notes = Vec::new();
    let runtime_spec = match raw.runtime_spec {
        None | Some(serde_json::Value::Null) => None,
        Some(v) => match parse_spec(v.to_string().as_bytes()) {
            Ok(spec) => Some(spec),
            Err(e) => {
                notes.push(format!("runtime spec rejected: {e}"));
                None
            }
        },
    };
    Ok(ParsedReport {
        report: ExecutionReport {
            id: raw.id,
            status: raw.status,
            wall_time: raw.wall_time,
            runtime_spec,
            stderr_excerpt: truncate_excerpt(&raw.stderr_excerpt),
        },
        notes,
    })
}

/// Cuts `s` to at most [`STDERR_EXCERPT_LIMIT`] bytes on a char boundary.
pub fn truncate_excerpt(s: &str) -> String {
    if s.len() <= STDERR_EXCERPT_LIMIT {
        return s.to_string();
    }
    let mut end = STDERR_EXCERPT_LIMIT;
    while !s.is_char_boundary(end) {
        end -= 1;
    }
    s[..end].to_string()
}

/// One sandbox request line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecRequest {
    pub id: String,
    pub code: String,
    /// Seconds.
    pub timeout: f64,
    pub family_hint: Option<CanonicalFamily>,
}

#[derive(Debug, Error)]
pub enum SandboxError {
    #[error("sandbox unreachable: {0}")]
    Unreachable(String),
    #[error("sandbox protocol error: {0}")]
    Protocol(String),
}

/// Handle on a sandbox executable.
#[derive(Debug, Clone)]
pub struct Sandbox {
    program: PathBuf,
}

impl Sandbox {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        Self { program: program.into() }
    }

    /// Uses `explicit` if given, else the [`SANDBOX_ENV`] variable.
    pub fn locate(explicit: Option<&Path>) -> Result<Self, SandboxError> {
        if let Some(p) = explicit {
            return Ok(Self::new(p));
        }
        match std::env::var_os(SANDBOX_ENV) {
            Some(p) if !p.is_empty() => Ok(Self::new(p)),
            _ => Err(SandboxError::Unreachable(format!("no sandbox given; pass --sandbox or set {SANDBOX_ENV}"))),
        }
    }

    pub fn program(&self) -> &Path {
        &self.program
    }

    /// Runs one request in a fresh sandbox process.
    pub fn run(&self, request: &ExecRequest) -> Result<ExecutionReport, SandboxError> {
        let mut child = Command::new(&self.program)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| SandboxError::Unreachable(format!("{}: {e}", self.program.display())))?;

        let line = to_canonical_string(request);
        {
            let mut stdin = child.stdin.take().expect("stdin is piped");
            if let Err(e) = writeln!(stdin, "{line}").and_then(|_| stdin.flush()) {
                kill(&mut child);
                return Err(SandboxError::Protocol(format!("writing request: {e}")));
            }
            // dropping stdin sends EOF so the sandbox exits after answering
        }

        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            let mut reply = String::new();
            let res = BufReader::new(stdout).read_line(&mut reply).map(|_| reply);
            let _ = tx.send(res);
        });
        let deadline = Duration::from_secs_f64(request.timeout.max(0.0)) + CLIENT_GRACE;
        let reply = match rx.recv_timeout(deadline) {
            Ok(Ok(reply)) => reply,
            Ok(Err(e)) => {
                kill(&mut child);
                return Err(SandboxError::Protocol(format!("reading reply: {e}")));
            }
            Err(_) => {
                kill(&mut child);
                let mut report = ExecutionReport::failed(ExecStatus::Timeout, "sandbox did not answer in time");
                report.id = Some(request.id.clone());
                report.wall_time = deadline.as_secs_f64();
                return Ok(report);
            }
        };
        let _ = child.wait();
        if reply.trim().is_empty() {
            return Err(SandboxError::Protocol("sandbox closed stdout without a reply".into()));
        }
        let parsed = parse_report(reply.as_bytes()).map_err(|e| SandboxError::Protocol(e.to_string()))?;
        if parsed.report.id.as_deref() != Some(request.id.as_str()) {
            return Err(SandboxError::Protocol(format!(
                "reply id {:?} does not match request id {:?}",
                parsed.report.id, request.id
            )));
        }
        Ok(parsed.report)
    }
}

fn kill(child: &mut Child) {
    let _ = child.kill();
    let _ = child.wait();
}
