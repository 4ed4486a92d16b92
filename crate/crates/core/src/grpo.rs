//! Group-relative advantages: each reward's z-score within its group.

use thiserror::Error;

pub const DEFAULT_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("a reward group needs at least one reward")]
    Empty,
    #[error("reward {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
}

/// Scalar rewards of the completions sampled for one prompt.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardGroup {
    rewards: Vec<f64>,
    epsilon: f64,
}

impl RewardGroup {
    pub fn new(rewards: Vec<f64>) -> Result<Self, GroupError> {
        Self::with_epsilon(rewards, DEFAULT_EPSILON)
    }

    /// `epsilon` is the std below which a group counts as uniform.
    pub fn with_epsilon(rewards: Vec<f64>, epsilon: f64) -> Result<Self, GroupError> {
        if rewards.is_empty() {
            return Err(GroupError::Empty);
        }
        if let Some((index, &value)) = rewards.iter().enumerate().find(|(_, r)| !r.is_finite()) {
            return Err(GroupError::NonFinite { index, value });
        }
        Ok(Self { rewards, epsilon })
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.rewards.iter().sum::<f64>() / self.rewards.len() as f64
    }

    /// Population standard deviation.
    pub fn std(&self) -> f64 {
        let mean = self.mean();
        let var = self.rewards.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / self.rewards.len() as f64;
        var.sqrt()
    }
}

/// `(r_i - mean) / std` with population std; all zeros when `std < epsilon`.
pub fn group_advantages(group: &RewardGroup) -> Vec<f64> {
    let mean = group.mean();
    let std = group.std();
    if std < group.epsilon {
        return vec![0.0; group.len()];
    }
    group.rewards.iter().map(|r| (r - mean) / std).collect()
}
