use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::spec::{validate, ChartSpec, CoordSystem, DataRepr};

use super::CurationError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DataMode {
    Explicit,
    Function,
    Matrix,
}

impl DataMode {
    pub const ALL: [DataMode; 3] = [Self::Explicit, Self::Function, Self::Matrix];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Explicit => "explicit",
            Self::Function => "function",
            Self::Matrix => "matrix",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Composition {
    Single,
    MultiSeries,
    Subplots,
}

impl Composition {
    pub const ALL: [Composition; 3] = [Self::Single, Self::MultiSeries, Self::Subplots];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Single => "single",
            Self::MultiSeries => "multi_series",
            Self::Subplots => "subplots",
        }
    }
}

/// Coordinate space, data mode and composition of a chart. Written as
/// `cartesian/explicit/single`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct StructuralSignature {
    pub coord_space: CoordSystem,
    pub data_mode: DataMode,
    pub composition: Composition,
}

impl StructuralSignature {
    pub fn new(coord_space: CoordSystem, data_mode: DataMode, composition: Composition) -> Self {
        Self { coord_space, data_mode, composition }
    }
}

impl fmt::Display for StructuralSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.coord_space.as_str(), self.data_mode.as_str(), self.composition.as_str())
    }
}

impl FromStr for StructuralSignature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('/').collect();
        let [coord, data, comp] = parts[..] else {
            return Err(format!("signature `{s}` is not coord/data/composition"));
        };
        let coord_space = CoordSystem::ALL
            .into_iter()
            .find(|c| c.as_str() == coord)
            .ok_or_else(|| format!("unknown coordinate space `{coord}`"))?;
        let data_mode = DataMode::ALL
            .into_iter()
            .find(|d| d.as_str() == data)
            .ok_or_else(|| format!("unknown data mode `{data}`"))?;
        let composition = Composition::ALL
            .into_iter()
            .find(|c| c.as_str() == comp)
            .ok_or_else(|| format!("unknown composition `{comp}`"))?;
        Ok(Self { coord_space, data_mode, composition })
    }
}

impl TryFrom<String> for StructuralSignature {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<StructuralSignature> for String {
    fn from(s: StructuralSignature) -> Self {
        s.to_string()
    }
}

fn coord_rank(c: CoordSystem) -> u8 {
    match c {
        CoordSystem::Cartesian => 0,
        CoordSystem::Polar => 1,
        CoordSystem::ThreeD => 2,
    }
}

/// Tags a valid spec with its structural signature.
///
/// Mixed panels resolve by precedence: 3d over polar over cartesian, and
/// matrix over function over explicit. Panels without data do not vote; a
/// spec with no data at all counts as explicit.
pub fn signature_of(spec: &ChartSpec) -> Result<StructuralSignature, CurationError> {
    let violations = validate(spec);
    if !violations.is_empty() {
        return Err(CurationError::InvalidSpec(violations));
    }
    let panels = &spec.semantic.panels;
    let coord_space = panels.iter().map(|p| p.coord).max_by_key(|c| coord_rank(*c)).unwrap_or(CoordSystem::Cartesian);
    let data_mode = panels
        .iter()
        .filter_map(|p| match p.data {
            DataRepr::Explicit { .. } => Some(DataMode::Explicit),
            DataRepr::Function { .. } => Some(DataMode::Function),
            DataRepr::Matrix { .. } => Some(DataMode::Matrix),
            DataRepr::None => None,
        })
        .max()
        .unwrap_or(DataMode::Explicit);
    let composition = if spec.semantic.topology.panel_count > 1 {
        Composition::Subplots
    } else if panels.iter().any(|p| p.series.len() >= 2) {
        Composition::MultiSeries
    } else {
        Composition::Single
    };
    Ok(StructuralSignature { coord_space, data_mode, composition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::*;

    fn one_panel(family: CanonicalFamily, coord: CoordSystem, data: DataRepr, series: &[&str]) -> ChartSpec {
        ChartSpec {
            version: 1,
            family,
            semantic: SemanticSpec {
                topology: Topology { chart_type: family, layout: (1, 1), panel_count: 1 },
                panels: vec![PanelSpec {
                    coord,
                    x_domain: None,
                    y_domain: None,
                    series: series.iter().map(|s| s.to_string()).collect(),
                    data,
                }],
            },
            code: CodeSpec::default(),
        }
    }

    #[test]
    fn density_function_single() {
        let s = one_panel(
            CanonicalFamily::Density,
            CoordSystem::Cartesian,
            DataRepr::Function { expr: "np.exp(-(x-0)**2/2)".into() },
            &["pdf"],
        );
        assert_eq!(
            signature_of(&s).unwrap(),
            StructuralSignature::new(CoordSystem::Cartesian, DataMode::Function, Composition::Single)
        );
    }

    #[test]
    fn heatmap_matrix() {
        let s = one_panel(
            CanonicalFamily::Heatmap,
            CoordSystem::Cartesian,
            DataRepr::Matrix { grid: vec![vec![1.0, 2.0], vec![3.0, 4.0]] },
            &[],
        );
        assert_eq!(signature_of(&s).unwrap().data_mode, DataMode::Matrix);
    }

    #[test]
    fn multi_panel_precedence() {
        let mut s = one_panel(
            CanonicalFamily::Mix,
            CoordSystem::Cartesian,
            DataRepr::Explicit { x: None, values: vec![vec![1.0]] },
            &["a", "b"],
        );
        let mut second = s.semantic.panels[0].clone();
        second.coord = CoordSystem::Polar;
        second.data = DataRepr::Function { expr: "sin(x)".into() };
        s.semantic.panels.push(second);
        s.semantic.topology.layout = (2, 1);
        s.semantic.topology.panel_count = 2;
        let sig = signature_of(&s).unwrap();
        assert_eq!(sig.to_string(), "polar/function/subplots");
    }

    #[test]
    fn multi_series_and_none_data() {
        let s = one_panel(CanonicalFamily::Graph, CoordSystem::Cartesian, DataRepr::None, &["a", "b"]);
        assert_eq!(signature_of(&s).unwrap().to_string(), "cartesian/explicit/multi_series");
    }

    #[test]
    fn invalid_spec_is_rejected() {
        let mut s = one_panel(CanonicalFamily::Bar, CoordSystem::Cartesian, DataRepr::None, &["a"]);
        s.semantic.topology.panel_count = 2;
        assert!(matches!(signature_of(&s), Err(CurationError::InvalidSpec(_))));
    }

    #[test]
    fn text_form_round_trips() {
        for c in CoordSystem::ALL {
            for d in DataMode::ALL {
                for m in Composition::ALL {
                    let sig = StructuralSignature::new(c, d, m);
                    assert_eq!(sig.to_string().parse::<StructuralSignature>().unwrap(), sig);
                }
            }
        }
        assert!("cartesian/explicit".parse::<StructuralSignature>().is_err());
        assert!("flat/explicit/single".parse::<StructuralSignature>().is_err());
    }
}
