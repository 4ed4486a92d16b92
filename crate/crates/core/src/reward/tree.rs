use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{ExecStatus, ExecutionReport};
use crate::metrics::{
    auxiliary_scores, level_set_similarity, norm_edit_similarity, numeric_alignment, range_iou, relational_f1,
    set_jaccard, stat_l2_score, vector_cosine_score, Interval, RelationalItems,
};
use crate::spec::{validate, ChartSpec, DataRepr, Domain, PanelSpec, Relational, Topology, Violation};

use super::format::format_reward;
use super::{FamilyComponents, RewardConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewardError {
    #[error("{which} spec is invalid: {} violation(s)", violations.len())]
    InvalidSpec { which: &'static str, violations: Vec<Violation> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticBreakdown {
    pub gate_passed: bool,
    /// Gate bonus actually granted.
    pub gate: f64,
    pub coord: Option<f64>,
    pub domain: Option<f64>,
    pub series: Option<f64>,
    pub data: Option<f64>,
    pub subtotal: f64,
}

impl SemanticBreakdown {
    fn closed() -> Self {
        Self { gate_passed: false, gate: 0.0, coord: None, domain: None, series: None, data: None, subtotal: 0.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CodeBreakdown {
    pub statistical: Option<f64>,
    pub relational: Option<f64>,
    /// Quiver direction agreement, or contour level-set similarity.
    pub vector: Option<f64>,
    pub auxiliary: Option<f64>,
    pub subtotal: f64,
    /// Toggled components whose code section was absent; each scored 0.
    pub missing: Vec<String>,
}

/// Every reward component plus the composite total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub format: f64,
    pub execution: f64,
    pub semantic: SemanticBreakdown,
    pub code: CodeBreakdown,
    pub total: f64,
    pub diagnostics: Vec<String>,
}

/// `exec_success` for a clean run, `exec_failure` for anything else.
pub fn execution_reward(report: &ExecutionReport, cfg: &RewardConfig) -> f64 {
    if report.status == ExecStatus::Ok {
        cfg.exec_success
    } else {
        cfg.exec_failure
    }
}

/// Exact match on chart type, `(rows, cols)` layout and panel count.
pub fn topology_gate(reference: &Topology, gen: &Topology) -> bool {
    reference.chart_type == gen.chart_type && reference.layout == gen.layout && reference.panel_count == gen.panel_count
}

fn check_valid(spec: &ChartSpec, which: &'static str) -> Result<(), RewardError> {
    let violations = validate(spec);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(RewardError::InvalidSpec { which, violations })
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

fn domain_score(reference: &Domain, gen: Option<&Domain>) -> f64 {
    match (reference, gen) {
        (Domain::Numeric { min: a, max: b }, Some(Domain::Numeric { min: c, max: d })) => {
            match (Interval::new(*a, *b), Interval::new(*c, *d)) {
                (Ok(r), Ok(g)) => range_iou(r, g),
                _ => 0.0,
            }
        }
        (Domain::Categorical { values: r }, Some(Domain::Categorical { values: g })) => set_jaccard(r, g),
        _ => 0.0,
    }
}

fn data_score(reference: &DataRepr, gen: &DataRepr) -> f64 {
    match (reference, gen) {
        (DataRepr::Function { expr: r }, DataRepr::Function { expr: g }) => norm_edit_similarity(r, g),
        (DataRepr::Explicit { values: r, .. }, DataRepr::Explicit { values: g, .. }) => {
            let per_series: Vec<f64> = r
                .iter()
                .enumerate()
                .map(|(k, series)| {
                    let other = g.get(k).map(Vec::as_slice).unwrap_or(&[]);
                    numeric_alignment(series, other).unwrap_or(0.0)
                })
                .collect();
            mean(&per_series).unwrap_or(0.0)
        }
        (DataRepr::Matrix { grid: r }, DataRepr::Matrix { grid: g }) => {
            let flat = |m: &[Vec<f64>]| m.iter().flatten().copied().collect::<Vec<f64>>();
            numeric_alignment(&flat(r), &flat(g)).unwrap_or(0.0)
        }
        _ => 0.0,
    }
}

/// Instantiated semantic component scores for one panel pair.
struct PanelScores {
    coord: f64,
    domain: Option<f64>,
    series: f64,
    data: Option<f64>,
}

impl PanelScores {
    fn sum(&self) -> f64 {
        self.coord + self.domain.unwrap_or(0.0) + self.series + self.data.unwrap_or(0.0)
    }
}

fn score_panel(reference: &PanelSpec, gen: &PanelSpec, toggles: FamilyComponents) -> PanelScores {
    let axes: Vec<f64> = [(&reference.x_domain, &gen.x_domain), (&reference.y_domain, &gen.y_domain)]
        .into_iter()
        .filter_map(|(r, g)| r.as_ref().map(|r| domain_score(r, g.as_ref())))
        .collect();
    let data = (toggles.data && reference.data != DataRepr::None).then(|| data_score(&reference.data, &gen.data));
    PanelScores {
        coord: if reference.coord == gen.coord { 1.0 } else { 0.0 },
        domain: mean(&axes),
        series: set_jaccard(&reference.series, &gen.series),
        data,
    }
}

/// Topology-gated semantic reward.
///
/// A failed gate yields a zero subtotal with no components. Otherwise the
/// subtotal is the gate bonus plus the mean over panels (aligned by index) of
/// each panel's summed component scores.
pub fn semantic_reward(
    reference: &ChartSpec,
    gen: &ChartSpec,
    cfg: &RewardConfig,
) -> Result<SemanticBreakdown, RewardError> {
    check_valid(reference, "reference")?;
    check_valid(gen, "generated")?;
    if !topology_gate(&reference.semantic.topology, &gen.semantic.topology) {
        return Ok(SemanticBreakdown::closed());
    }
    let toggles = cfg.components_for(reference.family);
    let panels: Vec<PanelScores> =
        reference.semantic.panels.iter().zip(&gen.semantic.panels).map(|(r, g)| score_panel(r, g, toggles)).collect();
    let per_panel: Vec<f64> = panels.iter().map(PanelScores::sum).collect();
    let collect = |f: fn(&PanelScores) -> Option<f64>| mean(&panels.iter().filter_map(f).collect::<Vec<_>>());
    Ok(SemanticBreakdown {
        gate_passed: true,
        gate: cfg.gate_bonus,
        coord: collect(|p| Some(p.coord)),
        domain: collect(|p| p.domain),
        series: collect(|p| Some(p.series)),
        data: collect(|p| p.data),
        subtotal: cfg.gate_bonus + mean(&per_panel).unwrap_or(0.0),
    })
}

/// Family-dispatched code-level reward. The caller is responsible for only
/// invoking this after the topology gate has passed.
///
/// A toggled component whose section is null in either spec scores 0 and is
/// listed in `missing`. Auxiliary is instantiated only when the reference
/// carries an auxiliary section.
pub fn code_reward(reference: &ChartSpec, gen: &ChartSpec, cfg: &RewardConfig) -> CodeBreakdown {
    let toggles = cfg.components_for(reference.family);
    let (r, g) = (&reference.code, &gen.code);
    let mut out = CodeBreakdown::default();

    if toggles.statistical {
        out.statistical = Some(match (&r.statistical, &g.statistical) {
            (Some(rs), Some(gs)) => stat_l2_score(rs, gs),
            _ => {
                out.missing.push("statistical".into());
                0.0
            }
        });
    }
    if toggles.relational {
        out.relational = Some(match (&r.relational, &g.relational) {
            (Some(rr), Some(gr)) => relational_f1(relational_items(rr), relational_items(gr), cfg.treemap_tol),
            _ => {
                out.missing.push("relational".into());
                0.0
            }
        });
    }
    if toggles.vector {
        out.vector = Some(match (&r.vector, &g.vector) {
            (Some(rv), Some(gv)) => vector_cosine_score(rv, gv),
            _ => {
                out.missing.push("vector".into());
                0.0
            }
        });
    } else if toggles.contour {
        out.vector = Some(match (&r.contour_levels, &g.contour_levels) {
            (Some(rl), Some(gl)) => level_set_similarity(rl, gl),
            _ => {
                out.missing.push("contour_levels".into());
                0.0
            }
        });
    }
    if toggles.auxiliary {
        if let Some(ra) = &r.auxiliary {
            out.auxiliary = Some(match &g.auxiliary {
                Some(ga) => auxiliary_scores(ra, ga).aggregate(),
                None => {
                    out.missing.push("auxiliary".into());
                    0.0
                }
            });
        }
    }
    out.subtotal = [out.statistical, out.relational, out.vector, out.auxiliary].into_iter().flatten().sum();
    out
}

fn relational_items(rel: &Relational) -> RelationalItems<'_> {
    match rel {
        Relational::Treemap { leaves } => RelationalItems::Leaves(leaves),
        Relational::Graph { edges, .. } => RelationalItems::Edges(edges),
    }
}

/// The full staircase: format and execution always count; semantic and code
/// phases run only after a clean execution that produced a spec, and the code
/// phase only behind a passed topology gate.
///
/// `total = format + execution + semantic.subtotal + beta * code.subtotal`.
pub fn total_reward(
    response: &str,
    report: &ExecutionReport,
    reference: &ChartSpec,
    gen: Option<&ChartSpec>,
    cfg: &RewardConfig,
) -> RewardBreakdown {
    let format = format_reward(response, cfg);
    let execution = execution_reward(report, cfg);
    let mut diagnostics = Vec::new();
    let mut semantic = SemanticBreakdown::closed();
    let mut code = CodeBreakdown::default();

    if report.status != ExecStatus::Ok {
        diagnostics.push(format!("execution status {}", report.status.as_str()));
    } else if let Some(gen) = gen {
        match semantic_reward(reference, gen, cfg) {
            Ok(sem) if sem.gate_passed => {
                semantic = sem;
                code = code_reward(reference, gen, cfg);
                for m in &code.missing {
                    diagnostics.push(format!("missing code section: {m}"));
                }
            }
            Ok(_) => diagnostics.push("topology gate failed".into()),
            Err(RewardError::InvalidSpec { which, violations }) => {
                diagnostics.push(format!("{which} spec invalid"));
                diagnostics.extend(violations.iter().map(|v| v.to_string()));
            }
        }
    } else {
        diagnostics.push("no runtime spec".into());
    }

    let total = format + execution + semantic.subtotal + cfg.beta * code.subtotal;
    RewardBreakdown { format, execution, semantic, code, total, diagnostics }
}

/// Highest total a candidate can earn against `reference`: what a perfect
/// copy of it scores.
pub fn max_total(reference: &ChartSpec, cfg: &RewardConfig) -> f64 {
    let toggles = cfg.components_for(reference.family);
    let per_panel: Vec<f64> = reference
        .semantic
        .panels
        .iter()
        .map(|p| {
            let domain = (p.x_domain.is_some() || p.y_domain.is_some()) as u8;
            let data = (toggles.data && p.data != DataRepr::None) as u8;
            f64::from(2 + domain + data)
        })
        .collect();
    let code = &reference.code;
    let code_count = [
        toggles.statistical && code.statistical.is_some(),
        toggles.relational && code.relational.is_some(),
        toggles.vector && code.vector.is_some(),
        !toggles.vector && toggles.contour && code.contour_levels.is_some(),
        toggles.auxiliary && code.auxiliary.is_some(),
    ]
    .into_iter()
    .filter(|&b| b)
    .count();
    cfg.exec_success + cfg.gate_bonus + mean(&per_panel).unwrap_or(0.0) + cfg.beta * code_count as f64
}
