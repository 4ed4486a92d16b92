use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::color::is_canonical_color;
use super::{ChartSpec, CodeSpec, DataRepr, Domain, PanelSpec, Relational, Topology, SPEC_VERSION};

/// Ratio sums must land within this distance of 1.
const RATIO_SUM_TOL: f64 = 1e-6;

/// A broken invariant, located by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub path: String,
    pub invariant: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.path, self.invariant, self.detail)
    }
}

#[derive(Default)]
struct Collector(Vec<Violation>);

impl Collector {
    fn push(&mut self, path: impl Into<String>, invariant: &'static str, detail: impl Into<String>) {
        self.0.push(Violation { path: path.into(), invariant, detail: detail.into() });
    }
}

/// Checks every invariant of `spec`. The result is empty iff the spec is
/// valid, and is sorted by field path then invariant name.
pub fn validate(spec: &ChartSpec) -> Vec<Violation> {
    let mut out = Collector::default();
    if spec.version != SPEC_VERSION {
        out.push("version", "version_supported", format!("version {}", spec.version));
    }
    let topo = &spec.semantic.topology;
    if spec.family != topo.chart_type {
        out.push(
            "family",
            "family_matches_chart_type",
            format!("family {} but chart_type {}", spec.family, topo.chart_type),
        );
    }
    check_topology(topo, &mut out);
    if spec.semantic.panels.len() != topo.panel_count as usize {
        out.push(
            "semantic.panels",
            "panels_match_panel_count",
            format!("{} panel(s) for panel_count {}", spec.semantic.panels.len(), topo.panel_count),
        );
    }
    for (i, panel) in spec.semantic.panels.iter().enumerate() {
        check_panel(&format!("semantic.panels[{i}]"), panel, &mut out);
    }
    check_code(&spec.code, &mut out);
    let mut v = out.0;
    v.sort();
    v
}

fn check_topology(topo: &Topology, out: &mut Collector) {
    let (rows, cols) = topo.layout;
    let path = "semantic.topology";
    if rows == 0 || cols == 0 {
        out.push(format!("{path}.layout"), "layout_positive", format!("layout ({rows}, {cols})"));
    }
    if topo.panel_count == 0 {
        out.push(format!("{path}.panel_count"), "panel_count_positive", "panel_count 0");
    } else if u64::from(topo.panel_count) > u64::from(rows) * u64::from(cols) {
        out.push(
            format!("{path}.panel_count"),
            "panel_count_fits_layout",
            format!("{} panels in a {rows}x{cols} grid", topo.panel_count),
        );
    }
}

fn check_panel(path: &str, panel: &PanelSpec, out: &mut Collector) {
    for (axis, dom) in [("x_domain", &panel.x_domain), ("y_domain", &panel.y_domain)] {
        if let Some(d) = dom {
            check_domain(&format!("{path}.{axis}"), d, out);
        }
    }
    if let Some(dup) = first_duplicate(&panel.series) {
        out.push(format!("{path}.series"), "series_unique", format!("duplicate label `{dup}`"));
    }
    check_data(&format!("{path}.data"), &panel.data, out);
}

fn check_domain(path: &str, dom: &Domain, out: &mut Collector) {
    match dom {
        Domain::Numeric { min, max } => {
            if !min.is_finite() || !max.is_finite() {
                out.push(path, "domain_finite", format!("[{min}, {max}]"));
            } else if min > max {
                out.push(path, "domain_ordered", format!("min {min} > max {max}"));
            }
        }
        Domain::Categorical { values } => {
            if values.is_empty() {
                out.push(path, "domain_labels_nonempty", "no categorical labels");
            }
            if let Some(dup) = first_duplicate(values) {
                out.push(path, "domain_labels_unique", format!("duplicate label `{dup}`"));
            }
        }
    }
}

fn check_data(path: &str, data: &DataRepr, out: &mut Collector) {
    match data {
        DataRepr::Explicit { x, values } => {
            if values.is_empty() || values.iter().any(Vec::is_empty) {
                out.push(path, "data_nonempty", "explicit data needs non-empty series arrays");
            }
            let all_finite = values.iter().flatten().chain(x.iter().flatten()).all(|v| v.is_finite());
            if !all_finite {
                out.push(path, "data_finite", "non-finite value");
            }
            if let Some(x) = x {
                if let Some((i, s)) = values.iter().enumerate().find(|(_, s)| s.len() != x.len()) {
                    out.push(
                        path,
                        "data_lengths_match",
                        format!("series {i} has {} values for {} x positions", s.len(), x.len()),
                    );
                }
            }
        }
        DataRepr::Function { expr } => {
            if expr.trim().is_empty() {
                out.push(path, "expr_nonempty", "empty expression");
            }
        }
        DataRepr::Matrix { grid } => {
            if grid.is_empty() || grid[0].is_empty() {
                out.push(path, "matrix_nonempty", "empty grid");
            } else if grid.iter().any(|row| row.len() != grid[0].len()) {
                out.push(path, "matrix_rectangular", "ragged rows");
            }
            if !grid.iter().flatten().all(|v| v.is_finite()) {
                out.push(path, "data_finite", "non-finite value");
            }
        }
        DataRepr::None => {}
    }
}

fn check_code(code: &CodeSpec, out: &mut Collector) {
    if let Some(stats) = &code.statistical {
        let labels: Vec<&String> = stats.iter().map(|s| &s.label).collect();
        if let Some(dup) = first_duplicate(&labels) {
            out.push("code.statistical", "statistical_labels_unique", format!("duplicate label `{dup}`"));
        }
        for (i, s) in stats.iter().enumerate() {
            let path = format!("code.statistical[{i}].stats");
            if !s.stats.iter().all(|v| v.is_finite()) {
                out.push(path, "stats_finite", "non-finite statistic");
            } else if s.stats.windows(2).any(|w| w[0] > w[1]) {
                out.push(path, "quartiles_monotone", format!("quartiles not monotone: {:?}", s.stats));
            }
        }
    }
    match &code.relational {
        Some(Relational::Treemap { leaves }) => {
            for (i, leaf) in leaves.iter().enumerate() {
                if !(0.0..=1.0).contains(&leaf.ratio) {
                    out.push(
                        format!("code.relational.leaves[{i}]"),
                        "ratio_in_unit_interval",
                        format!("ratio {}", leaf.ratio),
                    );
                }
            }
            let sum: f64 = leaves.iter().map(|l| l.ratio).sum();
            if sum.is_nan() || (sum - 1.0).abs() > RATIO_SUM_TOL {
                out.push("code.relational.leaves", "treemap_ratios_sum", format!("ratios sum {sum} != 1"));
            }
        }
        Some(Relational::Graph { nodes, edges }) => {
            if let Some(dup) = first_duplicate(nodes) {
                out.push("code.relational.nodes", "graph_nodes_unique", format!("duplicate node `{dup}`"));
            }
            let known: BTreeSet<&String> = nodes.iter().collect();
            for (i, (a, b)) in edges.iter().enumerate() {
                if !known.contains(a) || !known.contains(b) {
                    out.push(
                        format!("code.relational.edges[{i}]"),
                        "edge_endpoints_known",
                        format!("edge ({a}, {b}) references an unknown node"),
                    );
                }
            }
        }
        None => {}
    }
    if let Some(field) = &code.vector {
        if field.anchors.len() != field.components.len() {
            out.push(
                "code.vector",
                "vector_lengths_match",
                format!("{} anchors, {} components", field.anchors.len(), field.components.len()),
            );
        }
        if !field.anchors.iter().chain(&field.components).flatten().all(|v| v.is_finite()) {
            out.push("code.vector", "vector_finite", "non-finite coordinate");
        }
    }
    if let Some(levels) = &code.contour_levels {
        if !levels.iter().all(|v| v.is_finite()) {
            out.push("code.contour_levels", "levels_finite", "non-finite level");
        } else if levels.windows(2).any(|w| w[0] > w[1]) {
            out.push("code.contour_levels", "levels_sorted", "levels not sorted ascending");
        }
    }
    if let Some(aux) = &code.auxiliary {
        for (i, t) in aux.texts.iter().enumerate() {
            let inside = (0.0..=1.0).contains(&t.x) && (0.0..=1.0).contains(&t.y);
            if !inside {
                out.push(
                    format!("code.auxiliary.texts[{i}]"),
                    "position_in_unit_square",
                    format!("`{}` at ({}, {})", t.text, t.x, t.y),
                );
            }
        }
        for (i, c) in aux.colors.iter().enumerate() {
            if !is_canonical_color(c) {
                out.push(format!("code.auxiliary.colors[{i}]"), "color_canonical", format!("`{c}`"));
            }
        }
    }
}

fn first_duplicate<T: AsRef<str>>(items: &[T]) -> Option<&str> {
    let mut seen = BTreeSet::new();
    items.iter().map(AsRef::as_ref).find(|s| !seen.insert(*s))
}
