//! Paired ARM vs LRU runs over several seeds.
//!
//! Usage: cargo run --release --example compare_policies -- [nodes] [duration] [seeds]

use corrcache::experiment::{Scenario, SimConfig};
use corrcache::Policy;

fn main() -> corrcache::Result<()> {
    let arg = |i: usize| std::env::args().nth(i);
    let config = SimConfig {
        nodes: arg(1).map_or(10, |s| s.parse().expect("nodes")),
        duration: arg(2).map_or(5000.0, |s| s.parse().expect("duration")),
        ..Default::default()
    };
    let seeds: u64 = arg(3).map_or(10, |s| s.parse().expect("seeds"));

    println!("{} nodes, {} s, {seeds} seeds", config.nodes, config.duration);
    println!("{:>4}  {:>9}  {:>9}  {:>9}", "seed", "arm", "lru", "diff");
    let (mut sum_arm, mut sum_lru, mut wins) = (0.0, 0.0, 0);
    for seed in 1..=seeds {
        let scenario = Scenario::build(&config, seed)?;
        let arm = scenario.run(&config, Policy::Arm)?.final_hit_ratio();
        let lru = scenario.run(&config, Policy::Lru)?.final_hit_ratio();
        println!("{seed:>4}  {arm:>9.6}  {lru:>9.6}  {:>+9.6}", arm - lru);
        sum_arm += arm;
        sum_lru += lru;
        wins += usize::from(arm > lru);
    }
    let n = seeds as f64;
    println!("mean  {:>9.6}  {:>9.6}   arm wins {wins}/{seeds}", sum_arm / n, sum_lru / n);
    Ok(())
}
