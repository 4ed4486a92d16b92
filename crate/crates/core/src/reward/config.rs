use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::spec::CanonicalFamily;

use super::format::DEFAULT_CODE_FENCE;

/// Which fine-grained components a family instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyComponents {
    /// Semantic data/function alignment.
    pub data: bool,
    pub statistical: bool,
    pub relational: bool,
    pub vector: bool,
    /// Contour level sets; reported in the vector slot.
    pub contour: bool,
    pub auxiliary: bool,
}

impl FamilyComponents {
    /// Default component set for a family.
    pub fn default_for(family: CanonicalFamily) -> Self {
        use CanonicalFamily::*;
        let base = Self { auxiliary: true, ..Self::default() };
        match family {
            Boxplot | Violin => Self { statistical: true, ..base },
            Treemap | Graph => Self { relational: true, ..base },
            Quiver => Self { vector: true, ..base },
            Contour => Self { contour: true, ..base },
            _ => Self { data: true, ..base },
        }
    }

    fn code_numeric(&self) -> bool {
        self.statistical || self.relational || self.vector || self.contour
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("beta must be finite and >= 0, got {0}")]
    NegativeBeta(f64),
    #[error("`{0}` must be finite")]
    NonFinite(&'static str),
    #[error("no component toggles for family {0}")]
    MissingFamily(CanonicalFamily),
    #[error("family {0} enables data alongside a code-level numeric component")]
    DataAndCodeOverlap(CanonicalFamily),
    #[error("family {0} enables both vector and contour, which share one slot")]
    VectorAndContour(CanonicalFamily),
    #[error("invalid code fence pattern: {0}")]
    BadPattern(String),
}

/// Reward weights, penalties and per-family component toggles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RewardConfig {
    /// Weight of the code-level subtotal.
    pub beta: f64,
    pub gate_bonus: f64,
    pub format_penalty: f64,
    pub exec_success: f64,
    pub exec_failure: f64,
    /// Absolute tolerance on treemap leaf ratios.
    pub treemap_tol: f64,
    pub think_open: String,
    pub think_close: String,
    /// Regex that the answer region must match at least once.
    pub code_fence: String,
    #[serde(deserialize_with = "merge_components")]
    pub components: BTreeMap<CanonicalFamily, FamilyComponents>,
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self {
            beta: 0.5,
            gate_bonus: 3.0,
            format_penalty: -2.0,
            exec_success: 0.5,
            exec_failure: -1.0,
            treemap_tol: 0.02,
            think_open: "<think>".into(),
            think_close: "</think>".into(),
            code_fence: DEFAULT_CODE_FENCE.into(),
            components: default_components(),
        }
    }
}

fn default_components() -> BTreeMap<CanonicalFamily, FamilyComponents> {
    CanonicalFamily::ALL.iter().map(|&f| (f, FamilyComponents::default_for(f))).collect()
}

/// Families named in a config replace their defaults; the rest keep them.
fn merge_components<'de, D>(de: D) -> Result<BTreeMap<CanonicalFamily, FamilyComponents>, D::Error>
where
    D: Deserializer<'de>,
{
    let overrides = BTreeMap::<CanonicalFamily, FamilyComponents>::deserialize(de)?;
    let mut all = default_components();
    all.extend(overrides);
    Ok(all)
}

impl RewardConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(ConfigError::NegativeBeta(self.beta));
        }
        for (name, v) in [
            ("gate_bonus", self.gate_bonus),
            ("format_penalty", self.format_penalty),
            ("exec_success", self.exec_success),
            ("exec_failure", self.exec_failure),
            ("treemap_tol", self.treemap_tol),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::NonFinite(name));
            }
        }
        for fam in CanonicalFamily::ALL {
            let c = self.components.get(&fam).ok_or(ConfigError::MissingFamily(fam))?;
            if c.data && c.code_numeric() {
                return Err(ConfigError::DataAndCodeOverlap(fam));
            }
            if c.vector && c.contour {
                return Err(ConfigError::VectorAndContour(fam));
            }
        }
        regex::Regex::new(&self.code_fence).map_err(|e| ConfigError::BadPattern(e.to_string()))?;
        Ok(())
    }

    pub fn components_for(&self, family: CanonicalFamily) -> FamilyComponents {
        self.components.get(&family).copied().unwrap_or_else(|| FamilyComponents::default_for(family))
    }
}
