//! Synthetic candidate pools with a prescribed bucket layout.
//!
//! A [`SyntheticPlan`] lists, per family, the signatures present and how many
//! spec-valid candidates the pool holds. Materializing it produces one
//! template spec per bucket and one pool record per candidate.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::spec::{
    to_canonical_string, Auxiliary, CanonicalFamily, CategoryStats, ChartSpec, CodeSpec, CoordSystem, DataRepr, Domain,
    Leaf, PanelSpec, Relational, SemanticSpec, Topology, VectorField, SPEC_VERSION,
};

use super::{Composition, CorpusEntry, DataMode, PoolRecord, StructuralSignature};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanRow {
    pub family: CanonicalFamily,
    /// Candidates available across all of this family's signatures.
    pub pool: usize,
    pub signatures: Vec<StructuralSignature>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticPlan {
    pub families: Vec<PlanRow>,
}

impl SyntheticPlan {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// `(family, signature, available)` per bucket. A family's pool is split
    /// evenly, earlier signatures taking the remainder.
    pub fn buckets(&self) -> Vec<(CanonicalFamily, StructuralSignature, usize)> {
        let mut out = Vec::new();
        for row in &self.families {
            let n = row.signatures.len();
            for (i, sig) in row.signatures.iter().enumerate() {
                let share = row.pool / n + usize::from(i < row.pool % n);
                out.push((row.family, *sig, share));
            }
        }
        out
    }

    fn records(&self) -> impl Iterator<Item = (PoolRecord, ChartSpec)> + '_ {
        self.buckets().into_iter().flat_map(|(family, sig, n)| {
            let spec = template_spec(family, sig);
            let spec_path = spec_file_name(family, sig);
            (0..n).map(move |i| {
                let id = format!("{family}-{}-{i:05}", sig.to_string().replace('/', "-"));
                let rec = PoolRecord {
                    image_path: format!("images/{id}.png"),
                    code_path: format!("code/{id}.py"),
                    spec_path: spec_path.clone(),
                    family: family.as_str().to_string(),
                    signature: Some(sig),
                    id,
                };
                (rec, spec.clone())
            })
        })
    }

    /// Builds the pool in memory.
    pub fn entries(&self) -> Vec<CorpusEntry> {
        self.records()
            .map(|(r, spec)| {
                CorpusEntry::new(r.id, r.image_path, r.code_path, r.spec_path, spec).expect("template specs are valid")
            })
            .collect()
    }

    /// Writes `specs/*.chartspec.json` and `pool.jsonl` under `dir` and
    /// returns the pool file path.
    pub fn write_pool(&self, dir: &Path) -> io::Result<PathBuf> {
        fs::create_dir_all(dir.join("specs"))?;
        for (family, sig, _) in self.buckets() {
            fs::write(dir.join(spec_file_name(family, sig)), to_canonical_string(&template_spec(family, sig)))?;
        }
        let pool_path = dir.join("pool.jsonl");
        let mut out = BufWriter::new(fs::File::create(&pool_path)?);
        for (rec, _) in self.records() {
            writeln!(out, "{}", to_canonical_string(&rec))?;
        }
        out.flush()?;
        Ok(pool_path)
    }
}

fn spec_file_name(family: CanonicalFamily, sig: StructuralSignature) -> String {
    format!("specs/{family}__{}.chartspec.json", sig.to_string().replace('/', "_"))
}

/// A minimal valid spec of `family` whose signature is `sig`.
pub fn template_spec(family: CanonicalFamily, sig: StructuralSignature) -> ChartSpec {
    let panel_count = if sig.composition == Composition::Subplots { 2 } else { 1 };
    let series: Vec<String> =
        if sig.composition == Composition::MultiSeries { vec!["s0".into(), "s1".into()] } else { vec!["s0".into()] };
    let data = match sig.data_mode {
        DataMode::Explicit => DataRepr::Explicit {
            x: Some(vec![0.0, 1.0, 2.0]),
            values: series.iter().enumerate().map(|(k, _)| vec![1.0 + k as f64, 2.0, 3.0 - k as f64]).collect(),
        },
        DataMode::Function => DataRepr::Function { expr: "np.sin(x)".into() },
        DataMode::Matrix => DataRepr::Matrix { grid: vec![vec![1.0, 2.0], vec![3.0, 4.0]] },
    };
    let panel = PanelSpec {
        coord: sig.coord_space,
        x_domain: (sig.coord_space != CoordSystem::Polar).then_some(Domain::Numeric { min: 0.0, max: 2.0 }),
        y_domain: None,
        series,
        data,
    };
    ChartSpec {
        version: SPEC_VERSION,
        family,
        semantic: SemanticSpec {
            topology: Topology { chart_type: family, layout: (1, panel_count), panel_count },
            panels: vec![panel; panel_count as usize],
        },
        code: template_code(family),
    }
}

fn template_code(family: CanonicalFamily) -> CodeSpec {
    use CanonicalFamily::*;
    let mut code = CodeSpec {
        auxiliary: Some(Auxiliary { texts: vec![], colors: vec!["#1f77b4".into()] }),
        ..CodeSpec::default()
    };
    match family {
        Boxplot | Violin => {
            code.statistical = Some(vec![CategoryStats { label: "s0".into(), stats: [1.0, 2.0, 3.0, 4.0, 5.0] }]);
        }
        Treemap => {
            code.relational = Some(Relational::Treemap {
                leaves: vec![Leaf { label: "a".into(), ratio: 0.6 }, Leaf { label: "b".into(), ratio: 0.4 }],
            });
        }
        Graph => {
            code.relational =
                Some(Relational::Graph { nodes: vec!["a".into(), "b".into()], edges: vec![("a".into(), "b".into())] });
        }
        Quiver => {
            code.vector = Some(VectorField { anchors: vec![[0.0, 0.0]], components: vec![[1.0, 0.0]] });
        }
        Contour => code.contour_levels = Some(vec![0.0, 0.5, 1.0]),
        _ => {}
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curation::signature_of;
    use crate::spec::validate;

    #[test]
    fn templates_are_valid_and_tagged() {
        for fam in CanonicalFamily::ALL {
            for c in CoordSystem::ALL {
                for d in DataMode::ALL {
                    for m in Composition::ALL {
                        let sig = StructuralSignature::new(c, d, m);
                        let spec = template_spec(fam, sig);
                        assert!(validate(&spec).is_empty(), "{fam} {sig}");
                        assert_eq!(signature_of(&spec).unwrap(), sig);
                    }
                }
            }
        }
    }

    #[test]
    fn availability_split() {
        let plan = SyntheticPlan {
            families: vec![PlanRow {
                family: CanonicalFamily::Contour,
                pool: 247,
                signatures: vec![
                    "cartesian/matrix/single".parse().unwrap(),
                    "cartesian/function/single".parse().unwrap(),
                ],
            }],
        };
        let b = plan.buckets();
        assert_eq!((b[0].2, b[1].2), (124, 123));
        assert_eq!(plan.entries().len(), 247);
    }
}
