use std::fmt;

use thiserror::Error;

use super::color::canonical_color;
use super::{validate, ChartSpec, Violation, SPEC_VERSION};

/// File suffix for single-spec documents.
pub const SPEC_FILE_SUFFIX: &str = ".chartspec.json";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    /// Malformed document, missing or ill-typed field, or unknown field.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    /// Document is well-typed but breaks one or more invariants.
    #[error("{}", InvariantList(.0))]
    Invariant(Vec<Violation>),
}

struct InvariantList<'a>(&'a [Violation]);

impl fmt::Display for InvariantList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} invariant violation(s)", self.0.len())?;
        for v in self.0 {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

/// Parses and validates a canonical spec document.
///
/// Color strings are canonicalized on the way in, so a document using named
/// colors re-serializes with hex values.
pub fn parse_spec(bytes: &[u8]) -> Result<ChartSpec, ParseError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let mut spec: ChartSpec = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        ParseError::Schema { path: if path == "." { String::new() } else { path }, message: e.into_inner().to_string() }
    })?;
    de.end().map_err(|e| ParseError::Schema { path: String::new(), message: e.to_string() })?;
    if spec.version != SPEC_VERSION {
        return Err(ParseError::Schema {
            path: "version".into(),
            message: format!("unsupported version {}, expected {SPEC_VERSION}", spec.version),
        });
    }
    canonicalize_colors(&mut spec);
    let violations = validate(&spec);
    if violations.is_empty() {
        Ok(spec)
    } else {
        Err(ParseError::Invariant(violations))
    }
}

pub fn parse_spec_str(text: &str) -> Result<ChartSpec, ParseError> {
    parse_spec(text.as_bytes())
}

fn canonicalize_colors(spec: &mut ChartSpec) {
    if let Some(aux) = spec.code.auxiliary.as_mut() {
        for c in aux.colors.iter_mut() {
            if let Some(hex) = canonical_color(c) {
                *c = hex;
            }
        }
    }
}

/// Canonical text form: compact JSON, keys sorted, shortest round-trip floats.
pub fn to_canonical_string<T: serde::Serialize>(value: &T) -> String {
    // serde_json's Map is ordered by key unless `preserve_order` is enabled
    let v = serde_json::to_value(value).expect("spec types always serialize");
    serde_json::to_string(&v).expect("a Value always serializes")
}
