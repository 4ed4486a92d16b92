// Build a synthetic candidate pool, curate it and print the distribution table.
//
// ```text
// cargo run --example curate_corpus -- [out-dir]
// ```

use std::error::Error;
use std::fs;
use std::path::Path;

use spec_align::curation::synthetic::SyntheticPlan;
use spec_align::curation::{curate, load_pool, render_table, CorpusManifest, TierQuotas};
use spec_align::spec::FamilyMap;

const PLAN: &str = include_str!("../tests/fixtures/balanced_pool_plan.json");

pub fn run(dir: &Path, seed: u64, budget: Option<usize>) -> Result<CorpusManifest, Box<dyn Error>> {
    let plan = SyntheticPlan::from_json(PLAN)?;
    let pool_path = plan.write_pool(dir)?;
    let pool = load_pool(&pool_path, &FamilyMap::default())?;
    assert!(pool.rejected.is_empty());
    Ok(curate(&pool.entries, &TierQuotas::default(), seed, budget)?)
}

fn report(dir: &Path) -> Result<(), Box<dyn Error>> {
    let manifest = run(dir, 0, None)?;
    print!("{}", render_table(&manifest, &TierQuotas::default()));
    assert_eq!(manifest.total(), 3996);
    let trimmed = run(dir, 0, Some(3008))?;
    println!("\nwith a budget of 3008:");
    print!("{}", render_table(&trimmed, &TierQuotas::default()));
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    report(dir.path())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    match std::env::args().nth(1) {
        Some(dir) => {
            fs::create_dir_all(&dir)?;
            report(Path::new(&dir))
        }
        None => run_example(),
    }
}
