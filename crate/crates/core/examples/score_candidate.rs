// Walk one candidate up the reward staircase: format, execution, topology
// gate, semantic and code phases.
//
// ```text
// cargo run --example score_candidate
// ```

use std::error::Error;

use spec_align::exec::{ExecStatus, ExecutionReport};
use spec_align::reward::{max_total, total_reward, RewardConfig};
use spec_align::spec::{parse_spec_str, to_canonical_string, DataRepr};

const REFERENCE: &str = include_str!("../tests/fixtures/identity/line.chartspec.json");
const RESPONSE: &str = include_str!("../tests/fixtures/identity/response.txt");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = RewardConfig::default();
    let reference = parse_spec_str(REFERENCE)?;

    let crashed = ExecutionReport::failed(ExecStatus::RuntimeError, "NameError: name 'x' is not defined");
    let b = total_reward(RESPONSE, &crashed, &reference, None, &cfg);
    println!("crashed      total {:>5}  {:?}", b.total, b.diagnostics);

    let mut wrong_layout = reference.clone();
    wrong_layout.semantic.topology.layout = (1, 2);
    wrong_layout.semantic.topology.panel_count = 2;
    wrong_layout.semantic.panels.push(wrong_layout.semantic.panels[0].clone());
    let b = total_reward(RESPONSE, &ExecutionReport::ok(wrong_layout.clone()), &reference, Some(&wrong_layout), &cfg);
    println!("wrong layout total {:>5}  {:?}", b.total, b.diagnostics);

    let mut noisy = reference.clone();
    if let DataRepr::Explicit { values, .. } = &mut noisy.semantic.panels[0].data {
        values[0][3] = 12.0;
    }
    let b = total_reward(RESPONSE, &ExecutionReport::ok(noisy.clone()), &reference, Some(&noisy), &cfg);
    println!("noisy data   total {:>5.3}  data {:?}", b.total, b.semantic.data);

    let b = total_reward(RESPONSE, &ExecutionReport::ok(reference.clone()), &reference, Some(&reference), &cfg);
    println!("exact copy   total {:>5}  (max {})", b.total, max_total(&reference, &cfg));
    assert_eq!(b.total, max_total(&reference, &cfg));
    println!("{}", to_canonical_string(&b));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
