//! Generate a correlated workload and report its shape. Pass a path to also
//! dump the request schedule as CSV.

use corrcache::seed;
use corrcache::workload::{candidate_requests, gen_correlation_matrix, gen_session, Workload, WorkloadConfig};
use corrcache::ItemId;

fn main() -> corrcache::Result<()> {
    let config = WorkloadConfig {
        rng_seed: 42,
        ..Default::default()
    };
    let matrix = gen_correlation_matrix(config.n, &mut seed::rng(42, seed::stream::MATRIX, 0))?;
    println!("{}x{} matrix, density {:.3}", config.n, config.n, matrix.density());

    let d = ItemId(7);
    let cdr = candidate_requests(&matrix, d);
    let mut rng = seed::rng(42, seed::stream::SESSIONS, 0);
    let sizes: Vec<usize> = (0..1000)
        .map(|_| gen_session(&matrix, d, config.eta, &mut rng, 0.0).items.len())
        .collect();
    let mean = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
    println!(
        "item {d}: {} candidates, mean session size {mean:.1} (expected {:.1})",
        cdr.len(),
        cdr.len() as f64 * config.eta
    );

    let workload = Workload::generate(&config, 10, 500.0)?;
    println!(
        "10 nodes, 500 s: {} sessions, {} requests",
        workload.sessions.len(),
        workload.request_count()
    );
    if let Some(path) = std::env::args().nth(1) {
        workload.write_schedule_csv(path.as_ref())?;
        println!("schedule written to {path}");
    }
    Ok(())
}
