//! How the mining threshold decides whether ARM differs from LRU at all.
//!
//! With sessions keeping each candidate at rate eta, a given pair co-occurs in
//! only a small fraction of one node's sessions, so high thresholds leave the
//! related index empty and ARM falls back to plain LRU.

use corrcache::experiment::{Scenario, SimConfig};
use corrcache::Policy;

fn main() -> corrcache::Result<()> {
    let seeds = 5;
    println!("10 nodes, 5000 s, {seeds} seeds");
    println!("{:>8}  {:>9}  {:>9}  {:>8}  {:>14}", "support", "arm", "lru", "wins", "indexed/node");
    for support in [0.8, 0.5, 0.3, 0.2, 0.1] {
        let config = SimConfig {
            min_support: support,
            ..Default::default()
        };
        let (mut arm_sum, mut lru_sum, mut wins, mut related) = (0.0, 0.0, 0, 0);
        for seed in 1..=seeds {
            let scenario = Scenario::build(&config, seed)?;
            let mut world = scenario.world(&config, Policy::Arm);
            let arm = world.run(&scenario.workload, config.duration)?.final_hit_ratio();
            related += world.nodes().iter().map(|n| n.related.iter().count()).sum::<usize>();
            let lru = scenario.run(&config, Policy::Lru)?.final_hit_ratio();
            arm_sum += arm;
            lru_sum += lru;
            wins += usize::from(arm > lru);
        }
        let n = seeds as f64;
        println!(
            "{support:>8}  {:>9.6}  {:>9.6}  {:>5}/{seeds}  {:>14.1}",
            arm_sum / n,
            lru_sum / n,
            wins,
            related as f64 / (n * config.nodes as f64)
        );
    }
    Ok(())
}
