pub mod cli;
pub mod config;
pub mod curation;
pub mod exec;
pub mod grpo;
pub mod metrics;
pub mod reward;
pub mod service;
pub mod spec;
