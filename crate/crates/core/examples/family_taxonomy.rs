// Map raw dataset labels onto the 20 canonical families and their tiers.
//
// ```text
// cargo run --example family_taxonomy -- "Error Bar" bubble sunburst
// ```

use std::collections::BTreeMap;
use std::error::Error;

use spec_align::curation::tier_of;
use spec_align::spec::{CanonicalFamily, FamilyMap};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for fam in CanonicalFamily::ALL {
        let tier = tier_of(fam);
        println!("{:<11} tier {} rho {:>2}  {:?}", fam, tier.tier.number(), tier.rho, fam.source_labels());
    }

    let mut extra = BTreeMap::new();
    extra.insert("sunburst".to_string(), CanonicalFamily::Ring);
    let map = FamilyMap::default().with_overrides(&extra);
    assert_eq!(map.resolve(" Error Bar ")?, CanonicalFamily::Error);
    assert_eq!(map.resolve("Sunburst")?, CanonicalFamily::Ring);
    assert!(map.resolve("waterfall").is_err());
    println!("{} labels known", map.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let labels: Vec<String> = std::env::args().skip(1).collect();
    if labels.is_empty() {
        return run_example();
    }
    let map = FamilyMap::default();
    for label in labels {
        match map.resolve(&label) {
            Ok(f) => println!("{label} -> {f}"),
            Err(e) => println!("{label}: {e}"),
        }
    }
    Ok(())
}
