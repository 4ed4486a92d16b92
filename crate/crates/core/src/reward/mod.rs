//! Staircase-gated reward for chart-to-code candidates.
//!
//! Phase 1 checks integrity (response format, execution). Phase 2 gates on
//! topology and then scores semantic attributes per panel. Phase 3 scores
//! code-level numeric primitives for the families that carry them.

mod config;
mod format;
mod tree;

pub use config::{ConfigError, FamilyComponents, RewardConfig};
pub use format::{answer_region, extract_code, format_reward, DEFAULT_CODE_FENCE};
pub use tree::{
    code_reward, execution_reward, max_total, semantic_reward, topology_gate, total_reward, CodeBreakdown,
    RewardBreakdown, RewardError, SemanticBreakdown,
};

#[cfg(test)]
mod tests;
