//! Think-then-answer structure check.

use std::borrow::Cow;
use std::sync::OnceLock;

use regex::Regex;

use super::RewardConfig;

/// A fenced block: three backticks, anything, three backticks.
pub const DEFAULT_CODE_FENCE: &str = r"(?s)```(.*?)```";

fn fence_regex(pattern: &str) -> Option<Cow<'static, Regex>> {
    static DEFAULT: OnceLock<Regex> = OnceLock::new();
    if pattern == DEFAULT_CODE_FENCE {
        return Some(Cow::Borrowed(
            DEFAULT.get_or_init(|| Regex::new(DEFAULT_CODE_FENCE).expect("default fence compiles")),
        ));
    }
    Regex::new(pattern).ok().map(Cow::Owned)
}

/// The answer region, i.e. everything after the single closing think tag.
///
/// `None` unless the response opens with exactly one think block (only
/// whitespace may precede it).
pub fn answer_region<'a>(response: &'a str, cfg: &RewardConfig) -> Option<&'a str> {
    let (open, close) = (cfg.think_open.as_str(), cfg.think_close.as_str());
    if open.is_empty() || close.is_empty() {
        return None;
    }
    if response.matches(open).count() != 1 || response.matches(close).count() != 1 {
        return None;
    }
    let start = response.find(open)?;
    if !response[..start].trim().is_empty() {
        return None;
    }
    let end = response.find(close)?;
    if end < start + open.len() {
        return None;
    }
    Some(&response[end + close.len()..])
}

/// Returns 0 for a well-formed response and the format penalty otherwise.
///
/// Well-formed means exactly one think block followed by a non-empty answer
/// that contains at least one fenced code block.
pub fn format_reward(response: &str, cfg: &RewardConfig) -> f64 {
    let Some(answer) = answer_region(response, cfg) else {
        return cfg.format_penalty;
    };
    let Some(fence) = fence_regex(&cfg.code_fence) else {
        return cfg.format_penalty;
    };
    if !answer.trim().is_empty() && fence.is_match(answer) {
        0.0
    } else {
        cfg.format_penalty
    }
}

/// Pulls the first fenced code block out of a response, dropping a leading
/// language tag such as `python`. Falls back to the whole response when no
/// think block is present.
pub fn extract_code(response: &str, cfg: &RewardConfig) -> Option<String> {
    let region = answer_region(response, cfg).unwrap_or(response);
    let fence = fence_regex(&cfg.code_fence)?;
    let caps = fence.captures(region)?;
    let body = caps.get(1).or_else(|| caps.get(0))?.as_str();
    let body = match body.split_once('\n') {
        Some((first, rest))
            if !first.trim().is_empty()
                && first.trim().chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') =>
        {
            rest
        }
        _ => body,
    };
    Some(body.trim_matches('\n').to_string())
}
