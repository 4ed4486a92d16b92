//! The chart specification: a semantic half describing intent (topology,
//! coordinates, domains, series, data) and a code half holding numeric
//! primitives captured while the plotting script runs.
//!
//! Specs are plain data. [`parse_spec`] and [`to_canonical_string`] convert
//! to and from the canonical document form; [`validate`] checks every
//! structural invariant and reports all violations at once.

mod codec;
pub mod color;
mod family;
mod validate;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use codec::{parse_spec, parse_spec_str, to_canonical_string, ParseError, SPEC_FILE_SUFFIX};
pub use family::{canonical_family, CanonicalFamily, FamilyMap, UnknownLabel};
pub use validate::{validate, Violation};

/// The only schema version this crate reads and writes.
pub const SPEC_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub version: u32,
    pub family: CanonicalFamily,
    pub semantic: SemanticSpec,
    pub code: CodeSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemanticSpec {
    pub topology: Topology,
    pub panels: Vec<PanelSpec>,
}

/// Global chart structure: family, grid layout and number of occupied panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Topology {
    pub chart_type: CanonicalFamily,
    /// `(rows, cols)`.
    pub layout: (u32, u32),
    pub panel_count: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoordSystem {
    #[serde(rename = "cartesian")]
    Cartesian,
    #[serde(rename = "polar")]
    Polar,
    #[serde(rename = "3d")]
    ThreeD,
}

impl CoordSystem {
    pub const ALL: [CoordSystem; 3] = [Self::Cartesian, Self::Polar, Self::ThreeD];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Cartesian => "cartesian",
            Self::Polar => "polar",
            Self::ThreeD => "3d",
        }
    }
}

/// An axis domain. Categorical labels keep their order but compare as sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Domain {
    Numeric { min: f64, max: f64 },
    Categorical { values: Vec<String> },
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Domain::Numeric { min: a, max: b }, Domain::Numeric { min: c, max: d }) => a == c && b == d,
            (Domain::Categorical { values: a }, Domain::Categorical { values: b }) => {
                a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
            }
            _ => false,
        }
    }
}

/// How a panel's data is expressed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DataRepr {
    /// One numeric array per series. When `x` is given the panel shares a
    /// single x vector and every series must match its length.
    Explicit {
        #[serde(default)]
        x: Option<Vec<f64>>,
        values: Vec<Vec<f64>>,
    },
    Function {
        expr: String,
    },
    Matrix {
        grid: Vec<Vec<f64>>,
    },
    None,
}

impl DataRepr {
    pub fn kind_name(&self) -> &'static str {
        match self {
            DataRepr::Explicit { .. } => "explicit",
            DataRepr::Function { .. } => "function",
            DataRepr::Matrix { .. } => "matrix",
            DataRepr::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSpec {
    pub coord: CoordSystem,
    #[serde(default)]
    pub x_domain: Option<Domain>,
    #[serde(default)]
    pub y_domain: Option<Domain>,
    pub series: Vec<String>,
    pub data: DataRepr,
}

/// Runtime-captured numeric primitives. Sections that a family does not
/// produce are `None` and serialize as explicit `null`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    #[serde(default)]
    pub statistical: Option<Vec<CategoryStats>>,
    #[serde(default)]
    pub relational: Option<Relational>,
    #[serde(default)]
    pub vector: Option<VectorField>,
    #[serde(default)]
    pub contour_levels: Option<Vec<f64>>,
    #[serde(default)]
    pub auxiliary: Option<Auxiliary>,
}

/// Five-number summary `[min, q1, median, q3, max]` for one category.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryStats {
    pub label: String,
    pub stats: [f64; 5],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Relational {
    Treemap { leaves: Vec<Leaf> },
    Graph { nodes: Vec<String>, edges: Vec<(String, String)> },
}

/// Treemap leaf, serialized as `[label, ratio]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "(String, f64)", into = "(String, f64)")]
pub struct Leaf {
    pub label: String,
    pub ratio: f64,
}

impl From<(String, f64)> for Leaf {
    fn from((label, ratio): (String, f64)) -> Self {
        Self { label, ratio }
    }
}

impl From<Leaf> for (String, f64) {
    fn from(l: Leaf) -> Self {
        (l.label, l.ratio)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorField {
    pub anchors: Vec<[f64; 2]>,
    pub components: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Auxiliary {
    pub texts: Vec<TextAnnotation>,
    pub colors: Vec<String>,
}

/// Text with its position in axes-fraction coordinates, serialized as
/// `[text, x, y]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "(String, f64, f64)", into = "(String, f64, f64)")]
pub struct TextAnnotation {
    pub text: String,
    pub x: f64,
    pub y: f64,
}

impl From<(String, f64, f64)> for TextAnnotation {
    fn from((text, x, y): (String, f64, f64)) -> Self {
        Self { text, x, y }
    }
}

impl From<TextAnnotation> for (String, f64, f64) {
    fn from(t: TextAnnotation) -> Self {
        (t.text, t.x, t.y)
    }
}
