//! Request scoring and the line-delimited reward-serving loop.
//!
//! Input lines are [`ScoreRequest`]s. A batch ends at a `{"group": [...]}`
//! line, an empty line or end of input. Every batch line gets exactly one
//! output line, in input order; a group line is answered with the
//! advantages of the named requests' totals.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::exec::{ExecRequest, ExecStatus, ExecutionReport, Sandbox, SandboxError};
use crate::grpo::{group_advantages, RewardGroup};
use crate::reward::{extract_code, total_reward, RewardBreakdown, RewardConfig};
use crate::spec::{parse_spec, to_canonical_string, validate, ChartSpec, ParseError};

/// Default per-candidate execution limit, in seconds.
pub const DEFAULT_TIMEOUT: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRequest {
    pub id: String,
    pub response_text: String,
    #[serde(default)]
    pub ref_spec: Option<ChartSpec>,
    #[serde(default)]
    pub ref_spec_path: Option<PathBuf>,
    /// Reward settings merged over the server's, key by key.
    #[serde(default)]
    pub config: Option<serde_json::Map<String, Value>>,
    /// Skips the sandbox and scores against this report.
    #[serde(default)]
    pub report: Option<ExecutionReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub id: String,
    pub breakdown: RewardBreakdown,
    pub status: ExecStatus,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRequest {
    pub group: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupResponse {
    pub group: Vec<String>,
    pub advantages: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorLine {
    pub error: String,
    pub line: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
}

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("request id must be non-empty")]
    EmptyId,
    #[error("give exactly one of ref_spec and ref_spec_path")]
    AmbiguousReference,
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("reference spec: {0}")]
    Reference(#[from] ParseError),
    #[error("config override: {0}")]
    Config(String),
    #[error(transparent)]
    Sandbox(#[from] SandboxError),
    #[error("no report given and no sandbox configured")]
    NoExecutor,
}

/// Scores requests with shared settings and an optional sandbox.
#[derive(Debug, Clone)]
pub struct Scorer {
    cfg: RewardConfig,
    sandbox: Option<Sandbox>,
    timeout: f64,
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl Scorer {
    pub fn new(cfg: RewardConfig, sandbox: Option<Sandbox>) -> Self {
        Self { cfg, sandbox, timeout: DEFAULT_TIMEOUT, pool: None }
    }

    pub fn with_timeout(mut self, seconds: f64) -> Self {
        self.timeout = seconds;
        self
    }

    /// Scores batches on a dedicated pool of `workers` threads; 0 means one
    /// per logical core. Without this the global rayon pool is used.
    pub fn with_workers(mut self, workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        self.pool = Some(Arc::new(rayon::ThreadPoolBuilder::new().num_threads(workers).build()?));
        Ok(self)
    }

    pub fn config(&self) -> &RewardConfig {
        &self.cfg
    }

    /// Runs `response` through the sandbox. A response without code is a
    /// syntax error and never reaches the sandbox.
    pub fn execute(&self, id: &str, response: &str, reference: &ChartSpec) -> Result<ExecutionReport, ScoreError> {
        let code = extract_code(response, &self.cfg).unwrap_or_default();
        if code.trim().is_empty() {
            let mut report = ExecutionReport::failed(ExecStatus::SyntaxError, "no code block in response");
            report.id = Some(id.to_string());
            return Ok(report);
        }
        let sandbox = self.sandbox.as_ref().ok_or(ScoreError::NoExecutor)?;
        Ok(sandbox.run(&ExecRequest {
            id: id.to_string(),
            code,
            timeout: self.timeout,
            family_hint: Some(reference.family),
        })?)
    }

    pub fn score(&self, req: &ScoreRequest) -> Result<ScoreResponse, ScoreError> {
        if req.id.is_empty() {
            return Err(ScoreError::EmptyId);
        }
        let reference = match (&req.ref_spec, &req.ref_spec_path) {
            (Some(spec), None) => {
                let violations = validate(spec);
                if !violations.is_empty() {
                    return Err(ParseError::Invariant(violations).into());
                }
                spec.clone()
            }
            (None, Some(path)) => {
                let bytes = fs::read(path).map_err(|source| ScoreError::Io { path: path.clone(), source })?;
                parse_spec(&bytes)?
            }
            _ => return Err(ScoreError::AmbiguousReference),
        };
        let cfg = match &req.config {
            Some(overrides) => merge_config(&self.cfg, overrides)?,
            None => self.cfg.clone(),
        };
        let report = match &req.report {
            Some(r) => r.clone(),
            None => self.execute(&req.id, &req.response_text, &reference)?,
        };
        let breakdown = total_reward(&req.response_text, &report, &reference, report.runtime_spec.as_ref(), &cfg);
        Ok(ScoreResponse {
            id: req.id.clone(),
            status: report.status,
            diagnostics: breakdown.diagnostics.clone(),
            breakdown,
        })
    }
}

fn merge_config(base: &RewardConfig, overrides: &serde_json::Map<String, Value>) -> Result<RewardConfig, ScoreError> {
    let Value::Object(mut doc) = serde_json::to_value(base).expect("config serializes") else {
        unreachable!("config is an object")
    };
    for (k, v) in overrides {
        doc.insert(k.clone(), v.clone());
    }
    let cfg: RewardConfig =
        serde_json::from_value(Value::Object(doc)).map_err(|e| ScoreError::Config(e.to_string()))?;
    cfg.validate().map_err(|e| ScoreError::Config(e.to_string()))?;
    Ok(cfg)
}

enum Item {
    Request(Box<ScoreRequest>),
    Error(ErrorLine),
}

/// Reads batches from `input` until it ends, answering each on `output`.
/// Requests inside a batch are scored in parallel.
pub fn serve<R: BufRead, W: Write>(scorer: &Scorer, input: R, mut output: W) -> io::Result<()> {
    let mut batch: Vec<(usize, Item)> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let number = i + 1;
        if line.trim().is_empty() {
            flush_batch(scorer, &mut batch, None, &mut output)?;
            continue;
        }
        let value: Value = match serde_json::from_str(&line) {
            Ok(v) => v,
            Err(e) => {
                batch.push((number, Item::Error(error_line(number, None, format!("malformed line: {e}")))));
                continue;
            }
        };
        if value.get("group").is_some() {
            let group = serde_json::from_value::<GroupRequest>(value)
                .map_err(|e| error_line(number, None, format!("malformed group line: {e}")));
            flush_batch(scorer, &mut batch, Some((number, group)), &mut output)?;
            continue;
        }
        let item = match serde_json::from_value::<ScoreRequest>(value) {
            Ok(req) => Item::Request(Box::new(req)),
            Err(e) => Item::Error(error_line(number, None, format!("malformed request: {e}"))),
        };
        batch.push((number, item));
    }
    flush_batch(scorer, &mut batch, None, &mut output)
}

fn error_line(line: usize, id: Option<String>, error: String) -> ErrorLine {
    ErrorLine { error, line, id }
}

fn flush_batch<W: Write>(
    scorer: &Scorer,
    batch: &mut Vec<(usize, Item)>,
    group: Option<(usize, Result<GroupRequest, ErrorLine>)>,
    output: &mut W,
) -> io::Result<()> {
    let mut seen = HashSet::new();
    for (number, item) in batch.iter_mut() {
        if let Item::Request(req) = item {
            if !seen.insert(req.id.clone()) {
                let id = req.id.clone();
                *item = Item::Error(error_line(*number, Some(id.clone()), format!("duplicate id `{id}` in batch")));
            }
        }
    }
    let score_all = || -> Vec<Result<ScoreResponse, ErrorLine>> {
        batch
            .par_iter()
            .map(|(number, item)| match item {
                Item::Request(req) => {
                    scorer.score(req).map_err(|e| error_line(*number, Some(req.id.clone()), e.to_string()))
                }
                Item::Error(e) => Err(e.clone()),
            })
            .collect()
    };
    let results = match &scorer.pool {
        Some(pool) => pool.install(score_all),
        None => score_all(),
    };
    for r in &results {
        match r {
            Ok(resp) => writeln!(output, "{}", to_canonical_string(resp))?,
            Err(e) => writeln!(output, "{}", to_canonical_string(e))?,
        }
    }
    if let Some((number, group)) = group {
        let totals: HashMap<&str, f64> =
            results.iter().filter_map(|r| r.as_ref().ok()).map(|r| (r.id.as_str(), r.breakdown.total)).collect();
        let answer = group.and_then(|g| {
            let rewards = g
                .group
                .iter()
                .map(|id| {
                    totals
                        .get(id.as_str())
                        .copied()
                        .ok_or_else(|| error_line(number, None, format!("no scored request `{id}` in batch")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let group_rewards = RewardGroup::new(rewards).map_err(|e| error_line(number, None, e.to_string()))?;
            Ok(GroupResponse { advantages: group_advantages(&group_rewards), group: g.group })
        });
        match answer {
            Ok(a) => writeln!(output, "{}", to_canonical_string(&a))?,
            Err(e) => writeln!(output, "{}", to_canonical_string(&e))?,
        }
    }
    batch.clear();
    output.flush()
}
