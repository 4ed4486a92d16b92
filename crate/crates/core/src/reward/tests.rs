use super::*;
use crate::exec::{ExecStatus, ExecutionReport};
use crate::spec::*;

const GOOD: &str = "<think>plan the figure</think><answer>```python\nplt.plot(x)\n```</answer>";

fn panel(data: DataRepr) -> PanelSpec {
    PanelSpec {
        coord: CoordSystem::Cartesian,
        x_domain: Some(Domain::Numeric { min: 0.0, max: 10.0 }),
        y_domain: Some(Domain::Categorical { values: vec!["A".into(), "B".into()] }),
        series: vec!["Exponential Focus".into(), "Random Noise".into()],
        data,
    }
}

fn spec(family: CanonicalFamily, panels: Vec<PanelSpec>, code: CodeSpec) -> ChartSpec {
    let n = panels.len() as u32;
    ChartSpec {
        version: 1,
        family,
        semantic: SemanticSpec { topology: Topology { chart_type: family, layout: (1, n), panel_count: n }, panels },
        code,
    }
}

fn aux() -> CodeSpec {
    CodeSpec {
        auxiliary: Some(Auxiliary {
            texts: vec![TextAnnotation { text: "peak".into(), x: 0.5, y: 0.9 }],
            colors: vec!["#1f77b4".into()],
        }),
        ..CodeSpec::default()
    }
}

fn line() -> ChartSpec {
    spec(CanonicalFamily::Line, vec![panel(DataRepr::Function { expr: "exp(-x)".into() })], aux())
}

fn boxplot() -> ChartSpec {
    let mut code = aux();
    code.statistical = Some(vec![CategoryStats { label: "A".into(), stats: [0.0, 1.0, 2.0, 3.0, 4.0] }]);
    spec(CanonicalFamily::Boxplot, vec![panel(DataRepr::None)], code)
}

fn treemap(leaves: &[(&str, f64)]) -> ChartSpec {
    let code = CodeSpec {
        relational: Some(Relational::Treemap {
            leaves: leaves.iter().map(|(l, r)| Leaf { label: l.to_string(), ratio: *r }).collect(),
        }),
        ..CodeSpec::default()
    };
    spec(CanonicalFamily::Treemap, vec![panel(DataRepr::None)], code)
}

fn ok(s: &ChartSpec) -> ExecutionReport {
    ExecutionReport::ok(s.clone())
}

fn cfg() -> RewardConfig {
    RewardConfig::default()
}

#[test]
fn execution_reward_values() {
    let c = cfg();
    assert_eq!(execution_reward(&ok(&line()), &c), 0.5);
    assert_eq!(execution_reward(&ExecutionReport::new(ExecStatus::SyntaxError), &c), -1.0);
    assert_eq!(execution_reward(&ExecutionReport::new(ExecStatus::RuntimeError), &c), -1.0);
    assert_eq!(execution_reward(&ExecutionReport::new(ExecStatus::Timeout), &c), -1.0);
}

#[test]
fn gate_cases() {
    let t = Topology { chart_type: CanonicalFamily::Line, layout: (1, 2), panel_count: 2 };
    assert!(topology_gate(&t, &t));
    assert!(!topology_gate(&t, &Topology { chart_type: CanonicalFamily::Bar, ..t }));
    assert!(!topology_gate(&t, &Topology { layout: (2, 1), ..t }));
    assert!(!topology_gate(&t, &Topology { panel_count: 1, ..t }));
}

#[test]
fn semantic_identity_line() {
    let s = line();
    let sem = semantic_reward(&s, &s, &cfg()).unwrap();
    assert!(sem.gate_passed);
    assert_eq!((sem.coord, sem.domain, sem.series, sem.data), (Some(1.0), Some(1.0), Some(1.0), Some(1.0)));
    assert_eq!(sem.subtotal, 7.0);
}

#[test]
fn semantic_gate_failure() {
    let pie = spec(CanonicalFamily::Pie, vec![panel(DataRepr::None)], CodeSpec::default());
    let ring = spec(CanonicalFamily::Ring, vec![panel(DataRepr::None)], CodeSpec::default());
    let sem = semantic_reward(&pie, &ring, &cfg()).unwrap();
    assert!(!sem.gate_passed);
    assert_eq!(sem.subtotal, 0.0);
    assert_eq!((sem.coord, sem.domain, sem.series, sem.data), (None, None, None, None));
}

#[test]
fn boxplot_leaves_data_null() {
    let s = boxplot();
    let sem = semantic_reward(&s, &s, &cfg()).unwrap();
    assert_eq!(sem.data, None);
    assert_eq!(sem.subtotal, 6.0);
    let code = code_reward(&s, &s, &cfg());
    assert_eq!(code.statistical, Some(1.0));
    assert_eq!(code.subtotal, 2.0);
}

#[test]
fn semantic_rejects_invalid_specs() {
    let mut bad = line();
    bad.semantic.topology.panel_count = 2;
    assert!(matches!(semantic_reward(&line(), &bad, &cfg()), Err(RewardError::InvalidSpec { which: "generated", .. })));
}

#[test]
fn partial_semantic_scores() {
    let r = line();
    let mut g = line();
    g.semantic.panels[0].coord = CoordSystem::Polar;
    g.semantic.panels[0].x_domain = Some(Domain::Numeric { min: 5.0, max: 15.0 });
    g.semantic.panels[0].y_domain = None;
    g.semantic.panels[0].series = vec!["Random Noise".into()];
    g.semantic.panels[0].data = DataRepr::Explicit { x: None, values: vec![vec![1.0]] };
    let sem = semantic_reward(&r, &g, &cfg()).unwrap();
    assert_eq!(sem.coord, Some(0.0));
    // x: 5/15, y: missing in gen -> 0
    assert!((sem.domain.unwrap() - (5.0 / 15.0) / 2.0).abs() < 1e-12);
    assert_eq!(sem.series, Some(0.5));
    assert_eq!(sem.data, Some(0.0));
    assert!((sem.subtotal - (3.0 + 5.0 / 30.0 + 0.5)).abs() < 1e-12);
}

#[test]
fn panels_average_not_sum() {
    let p = |expr: &str| panel(DataRepr::Function { expr: expr.into() });
    let r = spec(CanonicalFamily::Line, vec![p("abc"), p("xyz")], CodeSpec::default());
    let g = spec(CanonicalFamily::Line, vec![p("abc"), p("xyw")], CodeSpec::default());
    let sem = semantic_reward(&r, &g, &cfg()).unwrap();
    let data2 = 1.0 - 1.0 / 3.0;
    assert!((sem.data.unwrap() - (1.0 + data2) / 2.0).abs() < 1e-12);
    assert!((sem.subtotal - (3.0 + (4.0 + 3.0 + data2) / 2.0)).abs() < 1e-12);
}

#[test]
fn explicit_and_matrix_data() {
    let e = |v: Vec<Vec<f64>>| panel(DataRepr::Explicit { x: None, values: v });
    let r = spec(CanonicalFamily::Bar, vec![e(vec![vec![0.0, 2.0], vec![1.0, 1.0]])], CodeSpec::default());
    let g = spec(CanonicalFamily::Bar, vec![e(vec![vec![1.0, 1.0]])], CodeSpec::default());
    // series 0: 0.5, series 1 missing in gen: 0
    assert_eq!(semantic_reward(&r, &g, &cfg()).unwrap().data, Some(0.25));

    let m = |grid: Vec<Vec<f64>>| panel(DataRepr::Matrix { grid });
    let r = spec(CanonicalFamily::Heatmap, vec![m(vec![vec![0.0, 2.0]])], CodeSpec::default());
    let g = spec(CanonicalFamily::Heatmap, vec![m(vec![vec![1.0, 1.0]])], CodeSpec::default());
    assert_eq!(semantic_reward(&r, &g, &cfg()).unwrap().data, Some(0.5));
}

#[test]
fn treemap_recall_half() {
    let r = treemap(&[("X", 0.25), ("Y", 0.75)]);
    // code_reward trusts its caller; this gen is not spec-valid on its own
    let g = treemap(&[("X", 0.25)]);
    let code = code_reward(&r, &g, &cfg());
    assert!((code.relational.unwrap() - 2.0 / 3.0).abs() < 1e-12);

    let shifted = treemap(&[("X", 1.0)]);
    assert_eq!(code_reward(&r, &shifted, &cfg()).relational, Some(0.0));
}

#[test]
fn quiver_reversed_vectors() {
    let field = VectorField { anchors: vec![[0.0, 0.0], [1.0, 1.0]], components: vec![[1.0, 0.0], [0.0, -2.0]] };
    let code = |f: VectorField| CodeSpec { vector: Some(f), ..CodeSpec::default() };
    let r = spec(CanonicalFamily::Quiver, vec![panel(DataRepr::None)], code(field.clone()));
    let rev = VectorField { components: field.components.iter().map(|c| [-c[0], -c[1]]).collect(), ..field };
    let g = spec(CanonicalFamily::Quiver, vec![panel(DataRepr::None)], code(rev));
    assert_eq!(code_reward(&r, &g, &cfg()).vector, Some(0.0));
    assert_eq!(code_reward(&r, &r, &cfg()).vector, Some(1.0));
}

#[test]
fn contour_fills_vector_slot() {
    let code = |l: Vec<f64>| CodeSpec { contour_levels: Some(l), ..CodeSpec::default() };
    let r = spec(CanonicalFamily::Contour, vec![panel(DataRepr::None)], code(vec![0.0, 1.0, 2.0]));
    let g = spec(CanonicalFamily::Contour, vec![panel(DataRepr::None)], code(vec![0.0, 1.0]));
    let c = code_reward(&r, &g, &cfg());
    assert!((c.vector.unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn missing_code_section_scores_zero() {
    let r = boxplot();
    let mut g = boxplot();
    g.code.statistical = None;
    g.code.auxiliary = None;
    let c = code_reward(&r, &g, &cfg());
    assert_eq!((c.statistical, c.auxiliary, c.subtotal), (Some(0.0), Some(0.0), 0.0));
    assert_eq!(c.missing, vec!["statistical".to_string(), "auxiliary".to_string()]);
    let b = total_reward(GOOD, &ok(&g), &r, Some(&g), &cfg());
    assert!(b.diagnostics.iter().any(|d| d.contains("statistical")));
}

#[test]
fn worked_totals() {
    let c = cfg();
    let s = line();
    let failed = ExecutionReport::new(ExecStatus::RuntimeError);
    assert_eq!(total_reward(GOOD, &failed, &s, Some(&s), &c).total, -1.0);

    let bar = spec(CanonicalFamily::Bar, vec![panel(DataRepr::None)], CodeSpec::default());
    let b = total_reward("```code```", &ok(&bar), &s, Some(&bar), &c);
    assert_eq!(b.total, -1.5);
    assert!(!b.semantic.gate_passed);

    let b = total_reward(GOOD, &ok(&s), &s, Some(&s), &c);
    assert_eq!(b.code.auxiliary, Some(1.0));
    assert_eq!(b.total, 8.0);
    assert_eq!(b.total, max_total(&s, &c));
}

#[test]
fn absent_gen_spec_is_penalty_only() {
    let s = line();
    let b = total_reward(GOOD, &ExecutionReport::new(ExecStatus::Ok), &s, None, &cfg());
    assert_eq!(b.total, 0.5);
    assert_eq!(b.semantic.subtotal, 0.0);
    assert_eq!(b.code.subtotal, 0.0);
    assert_eq!(b.diagnostics, vec!["no runtime spec".to_string()]);
}

#[test]
fn beta_weights_code() {
    let s = boxplot();
    let c = RewardConfig { beta: 2.0, ..cfg() };
    let b = total_reward(GOOD, &ok(&s), &s, Some(&s), &c);
    assert_eq!(b.total, 0.5 + 6.0 + 2.0 * 2.0);
}
