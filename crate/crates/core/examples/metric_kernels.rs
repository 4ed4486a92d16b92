// The similarity kernels behind the fine-grained reward components.
//
// ```text
// cargo run --example metric_kernels
// ```

use std::error::Error;

use spec_align::metrics::{
    auxiliary_scores, level_set_similarity, norm_edit_similarity, numeric_alignment, range_iou, relational_f1,
    set_jaccard, stat_l2_score, vector_cosine_score, Interval, RelationalItems,
};
use spec_align::spec::{Auxiliary, CategoryStats, Leaf, TextAnnotation, VectorField};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let iou = range_iou(Interval::new(0.0, 10.0)?, Interval::new(5.0, 15.0)?);
    println!("range_iou [0,10] vs [5,15]     = {iou:.4}");
    assert!((iou - 1.0 / 3.0).abs() < 1e-12);

    println!("set_jaccard                    = {:.4}", set_jaccard(&["a", "b", "c"], &["b", "c", "d"]));
    println!("norm_edit_similarity           = {:.4}", norm_edit_similarity("np.sin(x)", "np.sin( 2*x )"));
    println!("numeric_alignment              = {:.4}", numeric_alignment(&[1.0, 4.0, 9.0, 16.0], &[1.0, 9.0, 16.0])?);

    let stats = |label: &str, s: [f64; 5]| CategoryStats { label: label.into(), stats: s };
    let l2 = stat_l2_score(&[stats("a", [1.0, 2.0, 3.0, 4.0, 5.0])], &[stats("a", [1.0, 2.0, 3.5, 4.0, 5.0])]);
    println!("stat_l2_score                  = {l2:.4}");

    let leaves =
        |v: &[(&str, f64)]| v.iter().map(|(l, r)| Leaf { label: l.to_string(), ratio: *r }).collect::<Vec<_>>();
    let reference = leaves(&[("X", 0.25), ("Y", 0.75)]);
    let gen = leaves(&[("X", 0.25)]);
    let f1 = relational_f1(RelationalItems::Leaves(&reference), RelationalItems::Leaves(&gen), 0.02);
    println!("relational_f1 treemap          = {f1:.4}");
    assert!((f1 - 2.0 / 3.0).abs() < 1e-12);

    println!("level_set_similarity           = {:.4}", level_set_similarity(&[0.1, 0.5, 0.9], &[0.1, 0.5]));

    let field = VectorField { anchors: vec![[0.0, 0.0], [1.0, 1.0]], components: vec![[1.0, 0.0], [0.0, 1.0]] };
    let reversed = VectorField { components: vec![[-1.0, 0.0], [0.0, -1.0]], ..field.clone() };
    println!("vector_cosine_score reversed   = {:.4}", vector_cosine_score(&field, &reversed));

    let aux = |text: &str, x: f64| Auxiliary {
        texts: vec![TextAnnotation { text: text.into(), x, y: 0.9 }],
        colors: vec!["#1f77b4".into()],
    };
    let scores = auxiliary_scores(&aux("peak", 0.8), &aux("Peak!", 0.75));
    println!("auxiliary {scores:?} -> {:.4}", scores.aggregate());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
