// Drive the line-delimited reward server in process: two requests, a
// malformed line, then a group line asking for advantages.
//
// ```text
// cargo run --example reward_server
// ```
//
// The same protocol runs over stdin with `spec-align serve`, or over TCP with
// `spec-align serve --listen 127.0.0.1:7000`.

use std::error::Error;

use spec_align::exec::{ExecStatus, ExecutionReport};
use spec_align::reward::RewardConfig;
use spec_align::service::{serve, ScoreRequest, Scorer};
use spec_align::spec::{parse_spec_str, to_canonical_string};

const REFERENCE: &str = include_str!("../tests/fixtures/identity/bar.chartspec.json");
const RESPONSE: &str = include_str!("../tests/fixtures/identity/response.txt");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let reference = parse_spec_str(REFERENCE)?;
    let request = |id: &str, report: ExecutionReport| ScoreRequest {
        id: id.into(),
        response_text: RESPONSE.into(),
        ref_spec: Some(reference.clone()),
        ref_spec_path: None,
        config: None,
        report: Some(report),
    };
    let input = [
        to_canonical_string(&request("good", ExecutionReport::ok(reference.clone()))),
        to_canonical_string(&request("crash", ExecutionReport::failed(ExecStatus::Timeout, ""))),
        "{not json".to_string(),
        r#"{"group":["good","crash"]}"#.to_string(),
    ]
    .join("\n");

    let scorer = Scorer::new(RewardConfig::default(), None).with_workers(2)?;
    let mut out = Vec::new();
    serve(&scorer, input.as_bytes(), &mut out)?;
    let out = String::from_utf8(out)?;
    for line in out.lines() {
        println!("{}", &line[..line.len().min(160)]);
    }
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().last().unwrap().contains(r#""advantages":[1.0,-1.0]"#));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
