//! Similarity kernels. Every kernel returns a score in `[0, 1]` and returns
//! exactly `1.0` when both sides are identical.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::spec::color::canonical_color;
use crate::spec::{Auxiliary, CategoryStats, Leaf, VectorField};

/// Anchors closer than this (after normalization) are the same anchor.
pub const ANCHOR_MATCH_TOL: f64 = 1e-6;
/// Relative tolerance for matching contour levels.
pub const LEVEL_MATCH_REL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("interval bounds must be finite with lo <= hi")]
    InvalidInterval,
    #[error("reference vector is empty")]
    EmptyReference,
}

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, MetricError> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(MetricError::InvalidInterval)
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0.0
    }
}

/// Intersection over union of two intervals.
///
/// Zero-length intervals score 1 against themselves and 0 against anything
/// else.
pub fn range_iou(a: Interval, b: Interval) -> f64 {
    let inter = (a.hi.min(b.hi) - a.lo.max(b.lo)).max(0.0);
    let union = a.len() + b.len() - inter;
    if union <= 0.0 {
        return if a == b { 1.0 } else { 0.0 };
    }
    (inter / union).clamp(0.0, 1.0)
}

/// Jaccard index of two label sets; two empty sets agree perfectly.
pub fn set_jaccard<S: AsRef<str>>(a: &[S], b: &[S]) -> f64 {
    let a: BTreeSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let b: BTreeSet<&str> = b.iter().map(AsRef::as_ref).collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

fn normalize_text(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).flat_map(char::to_lowercase).collect()
}

/// `1 - levenshtein / max_len` over whitespace-stripped, lowercased strings.
pub fn norm_edit_similarity(s: &str, t: &str) -> f64 {
    let (s, t) = (normalize_text(s), normalize_text(t));
    let longest = s.chars().count().max(t.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - strsim::levenshtein(&s, &t) as f64 / longest as f64
}

/// Resamples `values` to `n` points by linear interpolation over the index.
fn resample(values: &[f64], n: usize) -> Vec<f64> {
    if values.len() == n {
        return values.to_vec();
    }
    if n == 1 || values.len() == 1 {
        return vec![values[0]; n];
    }
    let scale = (values.len() - 1) as f64 / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let pos = i as f64 * scale;
            let lo = (pos.floor() as usize).min(values.len() - 1);
            let hi = (lo + 1).min(values.len() - 1);
            let frac = pos - lo as f64;
            values[lo] + (values[hi] - values[lo]) * frac
        })
        .collect()
}

fn population_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
}

/// Scores numeric samples as `1 / (1 + MSE / var_ref)`.
///
/// `gen` is resampled to the reference length first. A constant reference
/// falls back to `1 / (1 + MSE)`; an empty `gen` scores 0.
pub fn numeric_alignment(reference: &[f64], gen: &[f64]) -> Result<f64, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    if gen.is_empty() {
        return Ok(0.0);
    }
    let gen = resample(gen, reference.len());
    let mse = reference.iter().zip(&gen).map(|(r, g)| (r - g).powi(2)).sum::<f64>() / reference.len() as f64;
    let var = population_variance(reference);
    let scaled = if var > 0.0 { mse / var } else { mse };
    Ok(1.0 / (1.0 + scaled))
}

fn l2_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// L2 distance between per-category five-number summaries, mapped to
/// `1 / (1 + d / ||ref||)`.
///
/// Categories are matched by label. A reference category missing from `gen`
/// contributes its own norm; extra generated categories are ignored.
pub fn stat_l2_score(reference: &[CategoryStats], gen: &[CategoryStats]) -> f64 {
    let gen_by_label: BTreeMap<&str, &[f64; 5]> = gen.iter().map(|c| (c.label.as_str(), &c.stats)).collect();
    let mut dist_sq = 0.0;
    let mut ref_norm_sq = 0.0;
    for cat in reference {
        let own = l2_sq(&cat.stats, &[0.0; 5]);
        ref_norm_sq += own;
        dist_sq += match gen_by_label.get(cat.label.as_str()) {
            Some(g) => l2_sq(&cat.stats, &g[..]),
            None => own,
        };
    }
    let d = dist_sq.sqrt();
    let norm = ref_norm_sq.sqrt();
    if norm > 0.0 {
        1.0 / (1.0 + d / norm)
    } else {
        1.0 / (1.0 + d)
    }
}

fn f1(matched: usize, n_ref: usize, n_gen: usize) -> f64 {
    match (n_ref, n_gen) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => 0.0,
        _ if matched == 0 => 0.0,
        _ => {
            let p = matched as f64 / n_gen as f64;
            let r = matched as f64 / n_ref as f64;
            2.0 * p * r / (p + r)
        }
    }
}

/// Items compared by [`relational_f1`].
#[derive(Debug, Clone, Copy)]
pub enum RelationalItems<'a> {
    Leaves(&'a [Leaf]),
    Edges(&'a [(String, String)]),
}

/// F1 between reference and generated relations.
///
/// Leaves match greedily by label, then nearest ratio within `tol`. Edges are
/// unordered pairs matched exactly; `tol` does not apply to them. Mixing
/// leaves with edges scores 0.
pub fn relational_f1(reference: RelationalItems<'_>, gen: RelationalItems<'_>, tol: f64) -> f64 {
    match (reference, gen) {
        (RelationalItems::Leaves(r), RelationalItems::Leaves(g)) => f1(match_leaves(r, g, tol), r.len(), g.len()),
        (RelationalItems::Edges(r), RelationalItems::Edges(g)) => {
            let canon = |edges: &[(String, String)]| -> BTreeSet<(String, String)> {
                edges
                    .iter()
                    .map(|(a, b)| if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) })
                    .collect()
            };
            let (r, g) = (canon(r), canon(g));
            f1(r.intersection(&g).count(), r.len(), g.len())
        }
        _ => 0.0,
    }
}

fn match_leaves(reference: &[Leaf], gen: &[Leaf], tol: f64) -> usize {
    let mut used = vec![false; gen.len()];
    let mut matched = 0;
    for leaf in reference {
        let best = gen
            .iter()
            .enumerate()
            .filter(|(j, g)| !used[*j] && g.label == leaf.label)
            .map(|(j, g)| (j, (g.ratio - leaf.ratio).abs()))
            .filter(|(_, diff)| *diff <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((j, _)) = best {
            used[j] = true;
            matched += 1;
        }
    }
    matched
}

/// Jaccard similarity of contour level sets; levels match within a relative
/// tolerance of [`LEVEL_MATCH_REL_TOL`].
pub fn level_set_similarity(reference: &[f64], gen: &[f64]) -> f64 {
    let mut used = vec![false; gen.len()];
    let mut matched = 0usize;
    for &level in reference {
        let hit = gen.iter().enumerate().find(|(j, &g)| {
            !used[*j] && (g == level || (g - level).abs() <= LEVEL_MATCH_REL_TOL * g.abs().max(level.abs()))
        });
        if let Some((j, _)) = hit {
            used[j] = true;
            matched += 1;
        }
    }
    let union = reference.len() + gen.len() - matched;
    if union == 0 {
        1.0
    } else {
        matched as f64 / union as f64
    }
}

fn cosine_score(a: [f64; 2], b: [f64; 2]) -> f64 {
    let na = a[0] * a[0] + a[1] * a[1];
    let nb = b[0] * b[0] + b[1] * b[1];
    match (na == 0.0, nb == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        _ => {
            // sqrt(x * x) == x exactly, so identical vectors give cos = 1
            let cos = (a[0] * b[0] + a[1] * b[1]) / (na * nb).sqrt();
            (1.0 + cos.clamp(-1.0, 1.0)) / 2.0
        }
    }
}

/// Direction agreement of two vector fields, averaged over reference anchors.
///
/// Anchors are normalized by the reference bounding box and matched to the
/// nearest unused generated anchor within [`ANCHOR_MATCH_TOL`]; unmatched
/// reference anchors score 0.
pub fn vector_cosine_score(reference: &VectorField, gen: &VectorField) -> f64 {
    let n = reference.anchors.len().min(reference.components.len());
    if n == 0 {
        return if gen.anchors.is_empty() { 1.0 } else { 0.0 };
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for a in &reference.anchors[..n] {
        for k in 0..2 {
            lo[k] = lo[k].min(a[k]);
            hi[k] = hi[k].max(a[k]);
        }
    }
    let span = [0, 1].map(|k| if hi[k] > lo[k] { hi[k] - lo[k] } else { 1.0 });
    let norm = |p: &[f64; 2]| [(p[0] - lo[0]) / span[0], (p[1] - lo[1]) / span[1]];

    let m = gen.anchors.len().min(gen.components.len());
    let gen_pts: Vec<[f64; 2]> = gen.anchors[..m].iter().map(norm).collect();
    let mut used = vec![false; m];
    let mut total = 0.0;
    for i in 0..n {
        let p = norm(&reference.anchors[i]);
        let nearest = gen_pts
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, (p[0] - q[0]).hypot(p[1] - q[1])))
            .filter(|(_, d)| *d <= ANCHOR_MATCH_TOL)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((j, _)) = nearest {
            used[j] = true;
            total += cosine_score(reference.components[i], gen.components[j]);
        }
    }
    total / n as f64
}

/// Auxiliary sub-scores. A sub-score is `None` when the reference has
/// nothing of that kind to compare.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxiliaryScores {
    pub text: Option<f64>,
    pub position: Option<f64>,
    pub color: Option<f64>,
}

impl AuxiliaryScores {
    /// Mean of the instantiated sub-scores; 1 when none are instantiated.
    pub fn aggregate(&self) -> f64 {
        let present: Vec<f64> = [self.text, self.position, self.color].into_iter().flatten().collect();
        if present.is_empty() {
            1.0
        } else {
            present.iter().sum::<f64>() / present.len() as f64
        }
    }
}

/// Text, position and color agreement of annotation layers.
///
/// Texts pair up greedily by highest edit similarity. Text similarity is
/// averaged over reference texts (unmatched ones count 0); positions are
/// scored `max(0, 1 - d / sqrt 2)` averaged over matched pairs. Colors are
/// compared as a multiset Jaccard after canonicalization.
pub fn auxiliary_scores(reference: &Auxiliary, gen: &Auxiliary) -> AuxiliaryScores {
    let (text, position) = if reference.texts.is_empty() {
        (None, None)
    } else {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (i, r) in reference.texts.iter().enumerate() {
            for (j, g) in gen.texts.iter().enumerate() {
                pairs.push((norm_edit_similarity(&r.text, &g.text), i, j));
            }
        }
        // highest similarity first, ties by (ref, gen) index
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut ref_used = vec![false; reference.texts.len()];
        let mut gen_used = vec![false; gen.texts.len()];
        let mut sim_sum = 0.0;
        let mut pos_sum = 0.0;
        let mut matched = 0usize;
        for (sim, i, j) in pairs {
            if ref_used[i] || gen_used[j] {
                continue;
            }
            ref_used[i] = true;
            gen_used[j] = true;
            matched += 1;
            sim_sum += sim;
            let (r, g) = (&reference.texts[i], &gen.texts[j]);
            let d = (r.x - g.x).hypot(r.y - g.y);
            pos_sum += (1.0 - d / std::f64::consts::SQRT_2).max(0.0);
        }
        let text = sim_sum / reference.texts.len() as f64;
        let position = if matched == 0 { 0.0 } else { pos_sum / matched as f64 };
        (Some(text), Some(position))
    };
    let color =
        if reference.colors.is_empty() { None } else { Some(color_multiset_jaccard(&reference.colors, &gen.colors)) };
    AuxiliaryScores { text, position, color }
}

fn color_multiset_jaccard(a: &[String], b: &[String]) -> f64 {
    let count = |colors: &[String]| {
        let mut m: BTreeMap<String, usize> = BTreeMap::new();
        for c in colors {
            let key = canonical_color(c).unwrap_or_else(|| c.trim().to_ascii_lowercase());
            *m.entry(key).or_default() += 1;
        }
        m
    };
    let (ca, cb) = (count(a), count(b));
    let keys: BTreeSet<&String> = ca.keys().chain(cb.keys()).collect();
    let (mut inter, mut union) = (0usize, 0usize);
    for k in keys {
        let (x, y) = (ca.get(k).copied().unwrap_or(0), cb.get(k).copied().unwrap_or(0));
        inter += x.min(y);
        union += x.max(y);
    }
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}
