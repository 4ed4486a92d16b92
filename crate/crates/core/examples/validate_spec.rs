// Parse a chart spec, print its canonical form, then break an invariant.
//
// ```text
// cargo run --example validate_spec
// ```

use std::error::Error;

use spec_align::spec::{parse_spec_str, to_canonical_string, ParseError};

const RING: &str = r##"{
  "version": 1,
  "family": "ring",
  "semantic": {
    "topology": {"chart_type": "ring", "layout": [1, 1], "panel_count": 1},
    "panels": [{
      "coord": "polar",
      "series": ["A", "B", "C", "D", "E"],
      "data": {"kind": "explicit", "values": [[0.25, 0.2, 0.15, 0.3, 0.1]]}
    }]
  },
  "code": {"auxiliary": {"texts": [["total", 0.5, 0.5]], "colors": ["red", "tab:orange", "#2CA02C"]}}
}"##;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = parse_spec_str(RING)?;
    // colors come back as lowercase hex
    println!("{}", to_canonical_string(&spec));

    let broken = RING.replace(r#""panel_count": 1"#, r#""panel_count": 2"#);
    match parse_spec_str(&broken) {
        Err(ParseError::Invariant(violations)) => {
            for v in &violations {
                println!("violation: {v}");
            }
            assert!(violations.iter().any(|v| v.invariant == "panels_match_panel_count"));
        }
        other => return Err(format!("expected an invariant error, got {other:?}").into()),
    }

    let typo = RING.replace("\"series\"", "\"serie\"");
    if let Err(e) = parse_spec_str(&typo) {
        println!("schema: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
