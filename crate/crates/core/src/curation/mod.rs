//! Structurally balanced corpus curation.
//!
//! Spec-valid samples are tagged with a [`StructuralSignature`], bucketed by
//! `(family, signature)`, and each bucket is sampled down to its tier quota.
//! Harder families get larger quotas. An optional budget trims the easiest
//! tiers first.

mod pool;
mod report;
mod signature;
pub mod synthetic;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spec::{CanonicalFamily, ChartSpec, Violation};

pub use pool::{load_pool, read_manifest, write_manifest, ManifestHeader, PoolError, PoolLoad, PoolRecord, Rejection};
pub use report::render_table;
pub use signature::{signature_of, Composition, DataMode, StructuralSignature};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurationError {
    #[error("spec is invalid: {} violation(s)", .0.len())]
    InvalidSpec(Vec<Violation>),
    #[error("the candidate pool is empty")]
    EmptyPool,
    #[error("duplicate entry id `{0}`")]
    DuplicateId(String),
}

/// Structural difficulty class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Tier {
    One,
    Two,
    Three,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::One, Tier::Two, Tier::Three];

    pub fn number(self) -> u8 {
        match self {
            Tier::One => 1,
            Tier::Two => 2,
            Tier::Three => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Tier::One => "High Complexity",
            Tier::Two => "Standard Scientific",
            Tier::Three => "Basic Primitives",
        }
    }
}

impl From<Tier> for u8 {
    fn from(t: Tier) -> u8 {
        t.number()
    }
}

impl TryFrom<u8> for Tier {
    type Error = String;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        match n {
            1 => Ok(Tier::One),
            2 => Ok(Tier::Two),
            3 => Ok(Tier::Three),
            _ => Err(format!("tier must be 1, 2 or 3, got {n}")),
        }
    }
}

/// A tier and its per-signature target count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierConfig {
    pub tier: Tier,
    pub rho: u32,
}

/// Per-signature quotas for the three tiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TierQuotas {
    pub tier1: u32,
    pub tier2: u32,
    pub tier3: u32,
}

impl Default for TierQuotas {
    fn default() -> Self {
        Self { tier1: 90, tier2: 72, tier3: 54 }
    }
}

impl TierQuotas {
    pub fn rho(&self, tier: Tier) -> u32 {
        match tier {
            Tier::One => self.tier1,
            Tier::Two => self.tier2,
            Tier::Three => self.tier3,
        }
    }

    pub fn config_for(&self, family: CanonicalFamily) -> TierConfig {
        let tier = family_tier(family);
        TierConfig { tier, rho: self.rho(tier) }
    }
}

fn family_tier(family: CanonicalFamily) -> Tier {
    use CanonicalFamily::*;
    match family {
        Mix | ThreeD | MultiAxes | Radar | Rose | Contour | Quiver => Tier::One,
        Boxplot | Pie | Heatmap | Error | Ring | Violin | Treemap => Tier::Two,
        Bar | Line | Scatter | Graph | Histogram | Density => Tier::Three,
    }
}

/// Tier and default quota of a family.
pub fn tier_of(family: CanonicalFamily) -> TierConfig {
    TierQuotas::default().config_for(family)
}

/// One spec-valid `(image, code, spec)` sample. Construction validates the
/// spec and tags it, so an entry is always spec-valid.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    id: String,
    image_path: PathBuf,
    code_path: PathBuf,
    spec_path: PathBuf,
    spec: ChartSpec,
    signature: StructuralSignature,
}

impl CorpusEntry {
    pub fn new(
        id: impl Into<String>,
        image_path: impl Into<PathBuf>,
        code_path: impl Into<PathBuf>,
        spec_path: impl Into<PathBuf>,
        spec: ChartSpec,
    ) -> Result<Self, CurationError> {
        let signature = signature_of(&spec)?;
        Ok(Self {
            id: id.into(),
            image_path: image_path.into(),
            code_path: code_path.into(),
            spec_path: spec_path.into(),
            spec,
            signature,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn image_path(&self) -> &Path {
        &self.image_path
    }

    pub fn code_path(&self) -> &Path {
        &self.code_path
    }

    pub fn spec_path(&self) -> &Path {
        &self.spec_path
    }

    pub fn spec(&self) -> &ChartSpec {
        &self.spec
    }

    pub fn family(&self) -> CanonicalFamily {
        self.spec.family
    }

    pub fn signature(&self) -> StructuralSignature {
        self.signature
    }

    pub fn record(&self) -> PoolRecord {
        PoolRecord {
            id: self.id.clone(),
            image_path: self.image_path.to_string_lossy().into_owned(),
            code_path: self.code_path.to_string_lossy().into_owned(),
            spec_path: self.spec_path.to_string_lossy().into_owned(),
            family: self.family().as_str().to_string(),
            signature: Some(self.signature),
        }
    }
}

/// `(family, signature)` sampling unit.
pub type Bucket = (CanonicalFamily, StructuralSignature);

pub fn bucket_key((family, sig): Bucket) -> String {
    format!("{family}:{sig}")
}

/// The curated corpus and its bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub entries: Vec<CorpusEntry>,
    pub bucket_counts: BTreeMap<Bucket, usize>,
    pub family_counts: BTreeMap<CanonicalFamily, usize>,
    /// Spec-valid candidates per family before sampling.
    pub pool_counts: BTreeMap<CanonicalFamily, usize>,
    pub seed: u64,
    pub budget: Option<usize>,
    pub trimmed: BTreeMap<Tier, usize>,
}

impl CorpusManifest {
    pub fn total(&self) -> usize {
        self.entries.len()
    }

    pub fn signature_count(&self, family: CanonicalFamily) -> usize {
        self.bucket_counts.keys().filter(|(f, _)| *f == family).count()
    }

    pub fn ratio(&self, family: CanonicalFamily) -> f64 {
        let n = self.family_counts.get(&family).copied().unwrap_or(0);
        if self.total() == 0 {
            0.0
        } else {
            n as f64 / self.total() as f64
        }
    }
}

/// Per-bucket RNG seed: the run seed mixed with an FNV-1a hash of the bucket
/// key, so a bucket's draw does not depend on which other buckets exist.
fn bucket_seed(seed: u64, bucket: Bucket) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bucket_key(bucket).bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    seed ^ h
}

/// Samples a balanced corpus.
///
/// Each bucket keeps `min(rho, size)` entries, drawn uniformly without
/// replacement after sorting by id. With a budget, excess entries come off
/// tier 3 first, then tier 2, proportionally to bucket size; tier 1 is never
/// trimmed.
pub fn curate(
    pool: &[CorpusEntry],
    quotas: &TierQuotas,
    seed: u64,
    budget: Option<usize>,
) -> Result<CorpusManifest, CurationError> {
    if pool.is_empty() {
        return Err(CurationError::EmptyPool);
    }
    let mut seen = BTreeSet::new();
    for e in pool {
        if !seen.insert(e.id.as_str()) {
            return Err(CurationError::DuplicateId(e.id.clone()));
        }
    }

    let mut buckets: BTreeMap<Bucket, Vec<&CorpusEntry>> = BTreeMap::new();
    let mut pool_counts = BTreeMap::new();
    for e in pool {
        buckets.entry((e.family(), e.signature)).or_default().push(e);
        *pool_counts.entry(e.family()).or_default() += 1;
    }

    // selection order matters: trimming drops from the back
    let mut selected: BTreeMap<Bucket, Vec<&CorpusEntry>> = BTreeMap::new();
    for (&bucket, members) in buckets.iter_mut() {
        members.sort_by(|a, b| a.id.cmp(&b.id));
        let rho = quotas.config_for(bucket.0).rho as usize;
        let take = rho.min(members.len());
        let mut rng = ChaCha8Rng::seed_from_u64(bucket_seed(seed, bucket));
        let picks = rand::seq::index::sample(&mut rng, members.len(), take);
        selected.insert(bucket, picks.into_iter().map(|i| members[i]).collect());
    }

    let mut trimmed = BTreeMap::new();
    if let Some(budget) = budget {
        let mut excess = selected.values().map(Vec::len).sum::<usize>().saturating_sub(budget);
        for tier in [Tier::Three, Tier::Two] {
            if excess == 0 {
                break;
            }
            let keys: Vec<Bucket> = selected.keys().copied().filter(|b| family_tier(b.0) == tier).collect();
            let sizes: Vec<usize> = keys.iter().map(|k| selected[k].len()).collect();
            let cuts = proportional_cuts(&sizes, excess);
            let removed: usize = cuts.iter().sum();
            for (k, cut) in keys.iter().zip(cuts) {
                let v = selected.get_mut(k).expect("bucket exists");
                v.truncate(v.len() - cut);
            }
            if removed > 0 {
                trimmed.insert(tier, removed);
            }
            excess -= removed;
        }
    }

    let mut entries = Vec::new();
    let mut bucket_counts = BTreeMap::new();
    let mut family_counts = BTreeMap::new();
    for (bucket, mut picks) in selected {
        if picks.is_empty() {
            continue;
        }
        picks.sort_by(|a, b| a.id.cmp(&b.id));
        bucket_counts.insert(bucket, picks.len());
        *family_counts.entry(bucket.0).or_default() += picks.len();
        entries.extend(picks.into_iter().cloned());
    }

    Ok(CorpusManifest { entries, bucket_counts, family_counts, pool_counts, seed, budget, trimmed })
}

/// Splits `want` removals across buckets in proportion to their sizes
/// (largest remainder, earlier buckets win ties). Never removes more than a
/// bucket holds, nor more than `want` in total.
fn proportional_cuts(sizes: &[usize], want: usize) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    if total == 0 {
        return vec![0; sizes.len()];
    }
    let want = want.min(total);
    let mut cuts: Vec<usize> = sizes.iter().map(|&s| s * want / total).collect();
    let mut rest = want - cuts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    // remainder of s * want / total, compared exactly in integers
    order.sort_by(|&a, &b| ((sizes[b] * want) % total).cmp(&((sizes[a] * want) % total)).then(a.cmp(&b)));
    for i in order {
        if rest == 0 {
            break;
        }
        if cuts[i] < sizes[i] {
            cuts[i] += 1;
            rest -= 1;
        }
    }
    cuts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curation::synthetic::template_spec;
    use crate::spec::CoordSystem;

    fn sig(s: &str) -> StructuralSignature {
        s.parse().unwrap()
    }

    fn entries(family: CanonicalFamily, signature: &str, n: usize) -> Vec<CorpusEntry> {
        let spec = template_spec(family, sig(signature));
        (0..n)
            .map(|i| {
                let id = format!("{family}-{signature}-{i:04}");
                CorpusEntry::new(id.clone(), format!("{id}.png"), format!("{id}.py"), "s.json", spec.clone()).unwrap()
            })
            .collect()
    }

    #[test]
    fn tiers_match_table() {
        use CanonicalFamily::*;
        assert_eq!(tier_of(Mix), TierConfig { tier: Tier::One, rho: 90 });
        assert_eq!(tier_of(Violin), TierConfig { tier: Tier::Two, rho: 72 });
        assert_eq!(tier_of(Density), TierConfig { tier: Tier::Three, rho: 54 });
        let counts = CanonicalFamily::ALL.iter().fold([0; 3], |mut acc, f| {
            acc[tier_of(*f).tier.number() as usize - 1] += 1;
            acc
        });
        assert_eq!(counts, [7, 7, 6]);
    }

    #[test]
    fn small_bucket_taken_whole() {
        let pool = entries(CanonicalFamily::Line, "cartesian/explicit/single", 40);
        let m = curate(&pool, &TierQuotas::default(), 1, None).unwrap();
        assert_eq!(m.total(), 40);
    }

    #[test]
    fn quota_binds_and_is_deterministic() {
        let mut pool = entries(CanonicalFamily::Mix, "cartesian/explicit/subplots", 200);
        pool.extend(entries(CanonicalFamily::Mix, "polar/explicit/subplots", 95));
        let a = curate(&pool, &TierQuotas::default(), 7, None).unwrap();
        assert_eq!(a.total(), 180);
        assert_eq!(a.signature_count(CanonicalFamily::Mix), 2);
        assert_eq!(a, curate(&pool, &TierQuotas::default(), 7, None).unwrap());
        let mut reversed = pool.clone();
        reversed.reverse();
        assert_eq!(a.entries, curate(&reversed, &TierQuotas::default(), 7, None).unwrap().entries);
        let other = curate(&pool, &TierQuotas::default(), 8, None).unwrap();
        assert_ne!(a.entries, other.entries);
    }

    #[test]
    fn empty_and_duplicate() {
        assert_eq!(curate(&[], &TierQuotas::default(), 0, None), Err(CurationError::EmptyPool));
        let mut pool = entries(CanonicalFamily::Bar, "cartesian/explicit/single", 2);
        pool.push(pool[0].clone());
        assert!(matches!(curate(&pool, &TierQuotas::default(), 0, None), Err(CurationError::DuplicateId(_))));
    }

    #[test]
    fn budget_spares_tier_one() {
        let mut pool = entries(CanonicalFamily::Radar, "polar/explicit/single", 100);
        pool.extend(entries(CanonicalFamily::Pie, "polar/explicit/single", 100));
        pool.extend(entries(CanonicalFamily::Bar, "cartesian/explicit/single", 100));
        // 90 + 72 + 54 = 216
        let m = curate(&pool, &TierQuotas::default(), 3, Some(150)).unwrap();
        assert_eq!(m.total(), 150);
        assert_eq!(m.family_counts[&CanonicalFamily::Radar], 90);
        assert_eq!(m.family_counts[&CanonicalFamily::Pie], 60);
        assert!(!m.family_counts.contains_key(&CanonicalFamily::Bar));
        assert_eq!(m.trimmed[&Tier::Three], 54);
        assert_eq!(m.trimmed[&Tier::Two], 12);

        let m = curate(&pool, &TierQuotas::default(), 3, Some(10)).unwrap();
        assert_eq!(m.total(), 90);
    }

    #[test]
    fn proportional_cut_rounding() {
        assert_eq!(proportional_cuts(&[10, 10, 10], 4), vec![2, 1, 1]);
        assert_eq!(proportional_cuts(&[30, 10], 8), vec![6, 2]);
        assert_eq!(proportional_cuts(&[3, 1], 100), vec![3, 1]);
        assert_eq!(proportional_cuts(&[], 5), Vec::<usize>::new());
        for (sizes, want) in [(vec![7, 5, 3, 1], 9), (vec![378, 324, 216, 54, 54, 54], 988)] {
            let cuts = proportional_cuts(&sizes, want);
            assert_eq!(cuts.iter().sum::<usize>(), want);
            assert!(cuts.iter().zip(&sizes).all(|(c, s)| c <= s));
        }
    }

    #[test]
    fn bucket_seed_depends_on_key() {
        let a = (
            CanonicalFamily::Bar,
            StructuralSignature::new(CoordSystem::Cartesian, DataMode::Explicit, Composition::Single),
        );
        let b = (
            CanonicalFamily::Bar,
            StructuralSignature::new(CoordSystem::Polar, DataMode::Explicit, Composition::Single),
        );
        assert_ne!(bucket_seed(1, a), bucket_seed(1, b));
    }
}
