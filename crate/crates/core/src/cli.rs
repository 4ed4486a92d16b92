//! `spec-align` command line.
//!
//! Exit codes: 0 success, 1 domain failure, 2 I/O failure, 3 sandbox failure.

use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::config::{Settings, SettingsError};
use crate::curation::{curate, load_pool, render_table, write_manifest, CurationError, PoolError};
use crate::exec::{parse_report, Sandbox, SandboxError, SANDBOX_ENV};
use crate::grpo::{group_advantages, RewardGroup};
use crate::reward::total_reward;
use crate::service::{serve, ScoreError, Scorer, DEFAULT_TIMEOUT};
use crate::spec::{parse_spec, to_canonical_string, ParseError};

#[derive(Debug, Parser)]
#[command(name = "spec-align", version, about = "Chart spec validation, reward scoring and corpus curation")]
pub struct Cli {
    /// Settings file (reward, tiers, families).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and check chart spec files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Score one response against a reference spec.
    Score {
        response: PathBuf,
        reference: PathBuf,
        /// Use this execution report instead of running the sandbox.
        #[arg(long, value_name = "REPORT")]
        no_exec: Option<PathBuf>,
        #[arg(long, env = SANDBOX_ENV)]
        sandbox: Option<PathBuf>,
        /// Seconds per candidate.
        #[arg(long, default_value_t = DEFAULT_TIMEOUT)]
        timeout: f64,
    },
    /// Score line-delimited requests from stdin or a TCP port.
    Serve {
        /// Address to listen on instead of stdin, e.g. 127.0.0.1:7000.
        #[arg(long)]
        listen: Option<String>,
        /// Scoring threads; 0 uses every logical core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, env = SANDBOX_ENV)]
        sandbox: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TIMEOUT)]
        timeout: f64,
    },
    /// Select a balanced corpus from a candidate pool.
    Curate {
        pool: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on the corpus size.
        #[arg(long)]
        budget: Option<usize>,
        /// Manifest destination.
        #[arg(long, default_value = "manifest.jsonl")]
        out: PathBuf,
    },
    /// Group-normalize rewards: one JSON array per input line.
    Advantage {
        /// Reads stdin when absent.
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Sandbox(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Domain(_) => 1,
            Self::Io(_) => 2,
            Self::Sandbox(_) => 3,
        }
    }
}

impl From<SettingsError> for CliError {
    fn from(e: SettingsError) -> Self {
        match e {
            SettingsError::Io { .. } => Self::Io(e.to_string()),
            _ => Self::Domain(e.to_string()),
        }
    }
}

impl From<ScoreError> for CliError {
    fn from(e: ScoreError) -> Self {
        match e {
            ScoreError::Io { .. } => Self::Io(e.to_string()),
            ScoreError::Sandbox(_) | ScoreError::NoExecutor => Self::Sandbox(e.to_string()),
            _ => Self::Domain(e.to_string()),
        }
    }
}

impl From<SandboxError> for CliError {
    fn from(e: SandboxError) -> Self {
        Self::Sandbox(e.to_string())
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| io_error(path, e))
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spec-align: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<(), CliError> {
    let settings = Settings::load_or_default(cli.config.as_deref())?;
    let res = match cli.command {
        Command::Validate { paths } => validate_files(&paths, out),
        Command::Score { response, reference, no_exec, sandbox, timeout } => {
            score(&settings, &response, &reference, no_exec.as_deref(), sandbox.as_deref(), timeout, out)
        }
        Command::Serve { listen, workers, sandbox, timeout } => {
            let scorer = Scorer::new(settings.reward.clone(), sandbox.map(Sandbox::new))
                .with_timeout(timeout)
                .with_workers(workers)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            serve_on(&scorer, listen.as_deref(), out)
        }
        Command::Curate { pool, seed, budget, out: manifest } => {
            curate_pool(&settings, &pool, seed, budget, &manifest, out)
        }
        Command::Advantage { input } => advantage(input.as_deref(), out),
    };
    out.flush().map_err(|e| CliError::Io(e.to_string()))?;
    res
}

fn validate_files<W: Write>(paths: &[PathBuf], out: &mut W) -> Result<(), CliError> {
    let w = |e: io::Error| CliError::Io(e.to_string());
    let (mut io_failures, mut invalid) = (0, 0);
    for path in paths {
        match fs::read(path) {
            Err(e) => {
                io_failures += 1;
                writeln!(out, "{}: error: {e}", path.display()).map_err(w)?;
            }
            Ok(bytes) => match parse_spec(&bytes) {
                Ok(_) => writeln!(out, "{}: ok", path.display()).map_err(w)?,
                Err(ParseError::Invariant(vs)) => {
                    invalid += 1;
                    writeln!(out, "{}: {} violation(s)", path.display(), vs.len()).map_err(w)?;
                    for v in vs {
                        writeln!(out, "  {v}").map_err(w)?;
                    }
                }
                Err(e) => {
                    invalid += 1;
                    writeln!(out, "{}: {e}", path.display()).map_err(w)?;
                }
            },
        }
    }
    if io_failures > 0 {
        Err(CliError::Io(format!("{io_failures} file(s) could not be read")))
    } else if invalid > 0 {
        Err(CliError::Domain(format!("{invalid} of {} file(s) invalid", paths.len())))
    } else {
        Ok(())
    }
}

fn score<W: Write>(
    settings: &Settings,
    response: &Path,
    reference: &Path,
    no_exec: Option<&Path>,
    sandbox: Option<&Path>,
    timeout: f64,
    out: &mut W,
) -> Result<(), CliError> {
    let response_text = String::from_utf8(read(response)?)
        .map_err(|_| CliError::Domain(format!("{}: not UTF-8", response.display())))?;
    let reference_spec =
        parse_spec(&read(reference)?).map_err(|e| CliError::Domain(format!("{}: {e}", reference.display())))?;
    let report = match no_exec {
        Some(path) => {
            let parsed =
                parse_report(&read(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
            for note in &parsed.notes {
                eprintln!("{}: {note}", path.display());
            }
            parsed.report
        }
        None => {
            let sandbox = Sandbox::locate(sandbox)?;
            Scorer::new(settings.reward.clone(), Some(sandbox)).with_timeout(timeout).execute(
                "score",
                &response_text,
                &reference_spec,
            )?
        }
    };
    let breakdown =
        total_reward(&response_text, &report, &reference_spec, report.runtime_spec.as_ref(), &settings.reward);
    writeln!(out, "{}", to_canonical_string(&breakdown)).map_err(|e| CliError::Io(e.to_string()))
}

fn serve_on<W: Write>(scorer: &Scorer, listen: Option<&str>, out: &mut W) -> Result<(), CliError> {
    let Some(addr) = listen else {
        let stdin = io::stdin();
        return serve(scorer, stdin.lock(), out).map_err(|e| CliError::Io(e.to_string()));
    };
    let listener = TcpListener::bind(addr).map_err(|e| CliError::Io(format!("{addr}: {e}")))?;
    eprintln!("listening on {}", listener.local_addr().map_err(|e| CliError::Io(e.to_string()))?);
    for stream in listener.incoming() {
        let stream = match stream {
            Ok(s) => s,
            Err(e) => {
                eprintln!("accept failed: {e}");
                continue;
            }
        };
        let reader = match stream.try_clone() {
            Ok(s) => BufReader::new(s),
            Err(e) => {
                eprintln!("connection failed: {e}");
                continue;
            }
        };
        if let Err(e) = serve(scorer, reader, BufWriter::new(stream)) {
            eprintln!("connection closed: {e}");
        }
    }
    Ok(())
}

fn curate_pool<W: Write>(
    settings: &Settings,
    pool: &Path,
    seed: u64,
    budget: Option<usize>,
    manifest_path: &Path,
    out: &mut W,
) -> Result<(), CliError> {
    let loaded = load_pool(pool, &settings.family_map()).map_err(|e| match e {
        PoolError::Io { .. } => CliError::Io(e.to_string()),
        _ => CliError::Domain(e.to_string()),
    })?;
    for r in &loaded.rejected {
        eprintln!(
            "{}:{}: rejected{}: {}",
            pool.display(),
            r.line,
            r.id.as_ref().map(|i| format!(" {i}")).unwrap_or_default(),
            r.reason
        );
    }
    let manifest = curate(&loaded.entries, &settings.tiers, seed, budget).map_err(|e| match e {
        CurationError::EmptyPool => CliError::Domain("no valid candidates in pool".into()),
        e => CliError::Domain(e.to_string()),
    })?;
    let file = fs::File::create(manifest_path).map_err(|e| io_error(manifest_path, e))?;
    write_manifest(&manifest, BufWriter::new(file)).map_err(|e| io_error(manifest_path, e))?;
    write!(out, "{}", render_table(&manifest, &settings.tiers)).map_err(|e| CliError::Io(e.to_string()))
}

fn advantage<W: Write>(input: Option<&Path>, out: &mut W) -> Result<(), CliError> {
    let reader: Box<dyn BufRead> = match input {
        Some(p) => Box::new(BufReader::new(fs::File::open(p).map_err(|e| io_error(p, e))?)),
        None => Box::new(BufReader::new(io::stdin())),
    };
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CliError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rewards: Vec<f64> =
            serde_json::from_str(&line).map_err(|e| CliError::Domain(format!("line {}: {e}", i + 1)))?;
        let group = RewardGroup::new(rewards).map_err(|e| CliError::Domain(format!("line {}: {e}", i + 1)))?;
        writeln!(out, "{}", to_canonical_string(&group_advantages(&group))).map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}
