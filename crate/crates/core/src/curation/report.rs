use std::fmt::Write;

use crate::spec::CanonicalFamily;

use super::{CorpusManifest, Tier, TierQuotas};

/// Per-family distribution table, grouped by tier.
pub fn render_table(m: &CorpusManifest, quotas: &TierQuotas) -> String {
    let mut out = String::new();
    let row = |out: &mut String, cols: [&str; 6]| {
        let _ = writeln!(
            out,
            "{:<12} {:<24} {:>9} {:>8} {:>7} {:>7}",
            cols[0], cols[1], cols[2], cols[3], cols[4], cols[5]
        );
    };
    row(&mut out, ["Family", "Source Mapping", "Sig. Num", "Pool", "Count", "Ratio"]);
    for tier in Tier::ALL {
        let _ = writeln!(out, "Tier {}: {} (rho = {})", tier.number(), tier.label(), quotas.rho(tier));
        for fam in CanonicalFamily::ALL.iter().filter(|f| quotas.config_for(**f).tier == tier) {
            let mapping = format!("{{{}}}", fam.source_labels().join(", "));
            row(
                &mut out,
                [
                    fam.as_str(),
                    &mapping,
                    &m.signature_count(*fam).to_string(),
                    &m.pool_counts.get(fam).copied().unwrap_or(0).to_string(),
                    &m.family_counts.get(fam).copied().unwrap_or(0).to_string(),
                    &format!("{:.1}%", 100.0 * m.ratio(*fam)),
                ],
            );
        }
    }
    let pool_total: usize = m.pool_counts.values().sum();
    row(
        &mut out,
        [
            "Total",
            "",
            &m.bucket_counts.len().to_string(),
            &pool_total.to_string(),
            &m.total().to_string(),
            if m.total() > 0 { "100%" } else { "0%" },
        ],
    );
    for (tier, n) in &m.trimmed {
        let _ = writeln!(out, "trimmed {n} entries from tier {} to meet the budget", tier.number());
    }
    if let Some(budget) = m.budget {
        if m.total() > budget {
            let _ = writeln!(out, "budget {budget} not reached: tier 1 alone holds more");
        }
    }
    out
}
