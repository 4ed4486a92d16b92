//! Line-delimited pool and manifest files.
//!
//! A pool has one JSON record per line. A manifest has the same records
//! preceded by a header line carrying the seed and counts.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spec::{parse_spec, to_canonical_string, CanonicalFamily, ChartSpec, FamilyMap};

use super::{bucket_key, CorpusEntry, CorpusManifest, StructuralSignature, Tier};

#[derive(Debug, Error)]
pub enum PoolError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("manifest line {line}: {message}")]
    BadManifest { line: usize, message: String },
}

/// One pool or manifest line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolRecord {
    pub id: String,
    pub image_path: String,
    pub code_path: String,
    /// Resolved against the pool file's directory when relative.
    pub spec_path: String,
    /// Canonical family name or any raw label known to the family map.
    pub family: String,
    /// Optional in a pool; when present it must match the computed tag.
    #[serde(default)]
    pub signature: Option<StructuralSignature>,
}

/// A pool line that did not make it into the candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub line: usize,
    pub id: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolLoad {
    pub entries: Vec<CorpusEntry>,
    pub rejected: Vec<Rejection>,
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> PoolError + '_ {
    move |source| PoolError::Io { path: path.to_path_buf(), source }
}

/// Reads a pool file, keeping only spec-valid, consistently tagged samples.
///
/// Each distinct spec file is parsed once; parsing runs in parallel.
pub fn load_pool(path: &Path, families: &FamilyMap) -> Result<PoolLoad, PoolError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut records = Vec::new();
    let mut rejected = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<PoolRecord>(&line) {
            Ok(rec) => records.push((i + 1, rec)),
            Err(e) => rejected.push(Rejection { line: i + 1, id: None, reason: format!("malformed record: {e}") }),
        }
    }

    let resolve = |p: &str| {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };
    let unique: BTreeSet<PathBuf> = records.iter().map(|(_, r)| resolve(&r.spec_path)).collect();
    let specs: HashMap<PathBuf, Result<ChartSpec, String>> = unique
        .into_par_iter()
        .map(|p| {
            let parsed = fs::read(&p)
                .map_err(|e| format!("cannot read spec {}: {e}", p.display()))
                .and_then(|bytes| parse_spec(&bytes).map_err(|e| format!("spec not valid: {e}")));
            (p, parsed)
        })
        .collect();

    let mut entries = Vec::with_capacity(records.len());
    for (line, rec) in records {
        let reject = |reason: String| Rejection { line, id: Some(rec.id.clone()), reason };
        let spec = match &specs[&resolve(&rec.spec_path)] {
            Ok(s) => s.clone(),
            Err(e) => {
                rejected.push(reject(e.clone()));
                continue;
            }
        };
        let family = rec.family.parse::<CanonicalFamily>().or_else(|_| families.resolve(&rec.family));
        match family {
            Ok(f) if f == spec.family => {}
            Ok(f) => {
                rejected.push(reject(format!("record family {f} but spec family {}", spec.family)));
                continue;
            }
            Err(e) => {
                rejected.push(reject(e.to_string()));
                continue;
            }
        }
        let entry = match CorpusEntry::new(&rec.id, &rec.image_path, &rec.code_path, &rec.spec_path, spec) {
            Ok(e) => e,
            Err(e) => {
                rejected.push(reject(e.to_string()));
                continue;
            }
        };
        if let Some(tagged) = rec.signature {
            if tagged != entry.signature() {
                rejected.push(reject(format!("record signature {tagged} but spec signature {}", entry.signature())));
                continue;
            }
        }
        entries.push(entry);
    }
    rejected.sort_by_key(|r| r.line);
    Ok(PoolLoad { entries, rejected })
}

/// First line of a manifest file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestHeader {
    pub seed: u64,
    pub total: usize,
    pub budget: Option<usize>,
    /// Keyed `family:coord/data/composition`.
    pub signature_counts: BTreeMap<String, usize>,
    pub family_counts: BTreeMap<String, usize>,
    pub pool_counts: BTreeMap<String, usize>,
    /// Keyed by tier number.
    pub trimmed: BTreeMap<String, usize>,
}

impl ManifestHeader {
    pub fn of(m: &CorpusManifest) -> Self {
        let fam = |c: &BTreeMap<CanonicalFamily, usize>| c.iter().map(|(f, n)| (f.to_string(), *n)).collect();
        Self {
            seed: m.seed,
            total: m.total(),
            budget: m.budget,
            signature_counts: m.bucket_counts.iter().map(|(b, n)| (bucket_key(*b), *n)).collect(),
            family_counts: fam(&m.family_counts),
            pool_counts: fam(&m.pool_counts),
            trimmed: m.trimmed.iter().map(|(t, n): (&Tier, &usize)| (t.number().to_string(), *n)).collect(),
        }
    }
}

/// Writes the manifest as canonical JSON lines: header, then one record per
/// entry in manifest order.
pub fn write_manifest<W: Write>(m: &CorpusManifest, mut out: W) -> io::Result<()> {
    writeln!(out, "{}", to_canonical_string(&ManifestHeader::of(m)))?;
    for e in &m.entries {
        writeln!(out, "{}", to_canonical_string(&e.record()))?;
    }
    out.flush()
}

/// Reads a manifest back as its header and records.
pub fn read_manifest<R: BufRead>(input: R) -> Result<(ManifestHeader, Vec<PoolRecord>), PoolError> {
    let bad = |line: usize, message: String| PoolError::BadManifest { line, message };
    let mut lines = input.lines();
    let header_line =
        lines.next().ok_or_else(|| bad(1, "empty manifest".into()))?.map_err(|e| bad(1, e.to_string()))?;
    let header: ManifestHeader = serde_json::from_str(&header_line).map_err(|e| bad(1, e.to_string()))?;
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| bad(i + 2, e.to_string()))?;
        records.push(serde_json::from_str(&line).map_err(|e| bad(i + 2, e.to_string()))?);
    }
    if records.len() != header.total {
        return Err(bad(1, format!("header total {} but {} records", header.total, records.len())));
    }
    Ok((header, records))
}
