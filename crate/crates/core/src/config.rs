//! Settings file: reward weights, tier quotas and extra family labels in one
//! JSON document. Every section is optional.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curation::TierQuotas;
use crate::reward::{ConfigError, RewardConfig};
use crate::spec::{CanonicalFamily, FamilyMap};

#[derive(Debug, Error)]
pub enum SettingsError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("config at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Invalid(#[from] ConfigError),
    #[error("tier quotas must be positive")]
    ZeroQuota,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub reward: RewardConfig,
    pub tiers: TierQuotas,
    /// Raw label to family, added on top of the built-in mapping.
    pub families: BTreeMap<String, CanonicalFamily>,
}

impl Settings {
    pub fn from_slice(bytes: &[u8]) -> Result<Self, SettingsError> {
        let de = &mut serde_json::Deserializer::from_slice(bytes);
        let settings: Self = serde_path_to_error::deserialize(de)
            .map_err(|e| SettingsError::Schema { path: e.path().to_string(), message: e.inner().to_string() })?;
        settings.check()?;
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self, SettingsError> {
        let bytes = fs::read(path).map_err(|source| SettingsError::Io { path: path.to_path_buf(), source })?;
        Self::from_slice(&bytes)
    }

    /// Defaults when `path` is `None`.
    pub fn load_or_default(path: Option<&Path>) -> Result<Self, SettingsError> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    pub fn check(&self) -> Result<(), SettingsError> {
        self.reward.validate()?;
        if self.tiers.tier1 == 0 || self.tiers.tier2 == 0 || self.tiers.tier3 == 0 {
            return Err(SettingsError::ZeroQuota);
        }
        Ok(())
    }

    pub fn family_map(&self) -> FamilyMap {
        FamilyMap::default().with_overrides(&self.families)
    }
}
