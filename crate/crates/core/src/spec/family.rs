//! Chart-family taxonomy and the source-label mapping table.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the 20 canonical chart families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalFamily {
    #[serde(rename = "mix")]
    Mix,
    #[serde(rename = "3d")]
    ThreeD,
    #[serde(rename = "multi_axes")]
    MultiAxes,
    #[serde(rename = "radar")]
    Radar,
    #[serde(rename = "rose")]
    Rose,
    #[serde(rename = "contour")]
    Contour,
    #[serde(rename = "quiver")]
    Quiver,
    #[serde(rename = "boxplot")]
    Boxplot,
    #[serde(rename = "pie")]
    Pie,
    #[serde(rename = "heatmap")]
    Heatmap,
    #[serde(rename = "error")]
    Error,
    #[serde(rename = "ring")]
    Ring,
    #[serde(rename = "violin")]
    Violin,
    #[serde(rename = "treemap")]
    Treemap,
    #[serde(rename = "bar")]
    Bar,
    #[serde(rename = "line")]
    Line,
    #[serde(rename = "scatter")]
    Scatter,
    #[serde(rename = "graph")]
    Graph,
    #[serde(rename = "histogram")]
    Histogram,
    #[serde(rename = "density")]
    Density,
}

impl CanonicalFamily {
    /// All families, grouped by tier (highest complexity first).
    pub const ALL: [CanonicalFamily; 20] = [
        Self::Mix,
        Self::ThreeD,
        Self::MultiAxes,
        Self::Radar,
        Self::Rose,
        Self::Contour,
        Self::Quiver,
        Self::Boxplot,
        Self::Pie,
        Self::Heatmap,
        Self::Error,
        Self::Ring,
        Self::Violin,
        Self::Treemap,
        Self::Bar,
        Self::Line,
        Self::Scatter,
        Self::Graph,
        Self::Histogram,
        Self::Density,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Mix => "mix",
            Self::ThreeD => "3d",
            Self::MultiAxes => "multi_axes",
            Self::Radar => "radar",
            Self::Rose => "rose",
            Self::Contour => "contour",
            Self::Quiver => "quiver",
            Self::Boxplot => "boxplot",
            Self::Pie => "pie",
            Self::Heatmap => "heatmap",
            Self::Error => "error",
            Self::Ring => "ring",
            Self::Violin => "violin",
            Self::Treemap => "treemap",
            Self::Bar => "bar",
            Self::Line => "line",
            Self::Scatter => "scatter",
            Self::Graph => "graph",
            Self::Histogram => "histogram",
            Self::Density => "density",
        }
    }

    /// Raw source labels that collapse into this family in the default table.
    pub fn source_labels(self) -> &'static [&'static str] {
        match self {
            Self::Mix => &["combination", "inset"],
            Self::ThreeD => &["3d"],
            Self::MultiAxes => &["multi_axes"],
            Self::Radar => &["radar"],
            Self::Rose => &["rose"],
            Self::Contour => &["contour"],
            Self::Quiver => &["quiver"],
            Self::Boxplot => &["boxplot"],
            Self::Pie => &["pie"],
            Self::Heatmap => &["heatmap"],
            Self::Error => &["error bar"],
            Self::Ring => &["ring"],
            Self::Violin => &["violin"],
            Self::Treemap => &["treemap"],
            Self::Bar => &["bar", "bar_num"],
            Self::Line => &["line", "area"],
            Self::Scatter => &["scatter", "bubble"],
            Self::Graph => &["graph"],
            Self::Histogram => &["histogram"],
            Self::Density => &["density"],
        }
    }
}

impl fmt::Display for CanonicalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CanonicalFamily {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.iter().copied().find(|f| f.as_str() == s).ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown chart label `{0}`")]
pub struct UnknownLabel(pub String);

/// Lookup table from raw source labels to canonical families.
///
/// The default table covers every label in the taxonomy; entries can be
/// added or overridden from a JSON object of `{"label": "family"}` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMap {
    table: BTreeMap<String, CanonicalFamily>,
}

impl Default for FamilyMap {
    fn default() -> Self {
        let table = CanonicalFamily::ALL
            .iter()
            .flat_map(|&fam| fam.source_labels().iter().map(move |l| (l.to_string(), fam)))
            .collect();
        Self { table }
    }
}

impl FamilyMap {
    /// Maps a raw label. Lookup ignores ASCII case and surrounding whitespace.
    pub fn resolve(&self, raw_label: &str) -> Result<CanonicalFamily, UnknownLabel> {
        let key = raw_label.trim().to_ascii_lowercase();
        self.table.get(&key).copied().ok_or_else(|| UnknownLabel(raw_label.to_string()))
    }

    pub fn insert(&mut self, raw_label: &str, family: CanonicalFamily) {
        self.table.insert(raw_label.trim().to_ascii_lowercase(), family);
    }

    /// Applies `{"label": "family"}` overrides on top of this table.
    pub fn with_overrides(mut self, overrides: &BTreeMap<String, CanonicalFamily>) -> Self {
        for (label, fam) in overrides {
            self.insert(label, *fam);
        }
        self
    }

    pub fn labels(&self) -> impl Iterator<Item = (&str, CanonicalFamily)> {
        self.table.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Maps a raw source label through the default table.
pub fn canonical_family(raw_label: &str) -> Result<CanonicalFamily, UnknownLabel> {
    FamilyMap::default().resolve(raw_label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn merged_variants() {
        assert_eq!(canonical_family("area").unwrap(), CanonicalFamily::Line);
        assert_eq!(canonical_family("bubble").unwrap(), CanonicalFamily::Scatter);
        assert_eq!(canonical_family("combination").unwrap(), CanonicalFamily::Mix);
        assert_eq!(canonical_family("inset").unwrap(), CanonicalFamily::Mix);
        assert_eq!(canonical_family("error bar").unwrap(), CanonicalFamily::Error);
        assert_eq!(canonical_family("bar_num").unwrap(), CanonicalFamily::Bar);
    }

    #[test]
    fn unknown_label() {
        assert_eq!(canonical_family("sankey"), Err(UnknownLabel("sankey".into())));
    }

    #[test]
    fn default_table_is_surjective() {
        let map = FamilyMap::default();
        let hit: BTreeSet<_> = map.labels().map(|(_, f)| f).collect();
        assert_eq!(hit.len(), 20);
        assert_eq!(map.len(), 24);
    }

    #[test]
    fn names_round_trip() {
        for fam in CanonicalFamily::ALL {
            assert_eq!(fam.as_str().parse::<CanonicalFamily>().unwrap(), fam);
            let json = serde_json::to_string(&fam).unwrap();
            assert_eq!(json, format!("\"{}\"", fam.as_str()));
        }
    }

    #[test]
    fn overrides_apply() {
        let mut over = BTreeMap::new();
        over.insert("Stacked Area".to_string(), CanonicalFamily::Line);
        over.insert("inset".to_string(), CanonicalFamily::MultiAxes);
        let map = FamilyMap::default().with_overrides(&over);
        assert_eq!(map.resolve("stacked area").unwrap(), CanonicalFamily::Line);
        assert_eq!(map.resolve("inset").unwrap(), CanonicalFamily::MultiAxes);
    }
}
