// Group-relative advantages for a set of sampled responses.
//
// ```text
// cargo run --example group_advantages -- 0 2 8 -1
// ```

use std::error::Error;

use spec_align::grpo::{group_advantages, RewardGroup};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for rewards in [vec![1.0, 1.0, 1.0, 1.0], vec![0.0, 2.0], vec![1.0, 2.0, 3.0], vec![-1.0, -1.5, 8.0, 7.5]] {
        let group = RewardGroup::new(rewards.clone())?;
        let adv = group_advantages(&group);
        println!("{rewards:?} mean {:.3} std {:.3} -> {adv:.4?}", group.mean(), group.std());
    }
    assert_eq!(group_advantages(&RewardGroup::new(vec![0.0, 2.0])?), vec![-1.0, 1.0]);
    assert!(RewardGroup::new(vec![]).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let rewards: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    if rewards.is_empty() {
        return run_example();
    }
    println!("{:?}", group_advantages(&RewardGroup::new(rewards)?));
    Ok(())
}
