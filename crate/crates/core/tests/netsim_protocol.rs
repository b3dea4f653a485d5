use std::collections::HashSet;

use corrcache::experiment::{Scenario, SimConfig};
use corrcache::netsim::{assign_origins, build_topology, TraceKind};
use corrcache::{seed, Policy};

#[test]
fn adjacency_matches_pairwise_distances() {
    for s in 0..20 {
        for range in [0.0, 80.0, 150.0, 250.0, 400.0, 707.2] {
            let t = build_topology(10, (500.0, 500.0), range, &mut seed::rng(s, 0, 0));
            let p = t.positions();
            for i in 0..10 {
                let want: Vec<usize> = (0..10)
                    .filter(|&j| j != i && ((p[i].0 - p[j].0).powi(2) + (p[i].1 - p[j].1).powi(2)).sqrt() <= range)
                    .collect();
                assert_eq!(t.neighbors(i), want.as_slice(), "seed {s} range {range} node {i}");
            }
        }
    }
}

#[test]
fn origins_spread_evenly() {
    // Binomial(1000, 0.1): mean 100, sd ~9.5, so [60, 140] is beyond four sigma.
    let origins = assign_origins(1000, 10, &mut seed::rng(5, 0, 0));
    let mut counts = [0usize; 10];
    for o in origins {
        counts[o] += 1;
    }
    assert!(counts.iter().all(|&c| (60..=140).contains(&c)), "{counts:?}");
}

fn small_config() -> SimConfig {
    SimConfig {
        nodes: 15,
        radio_range: 160.0,
        duration: 60.0,
        catalog: 40,
        mining_period: 20.0,
        ..Default::default()
    }
}

#[test]
fn floods_respect_seen_set_and_ttl() {
    for ttl in [1, 2, 3, 8] {
        let config = SimConfig { ttl, ..small_config() };
        let scenario = Scenario::build(&config, 4).unwrap();
        let mut world = scenario.world(&config, Policy::Arm);
        world.enable_trace();
        let metrics = world.run(&scenario.workload, config.duration).unwrap();

        let mut seen = HashSet::new();
        for e in world.trace().iter().filter(|e| e.kind == TraceKind::Receive) {
            assert!(seen.insert((e.node, e.msg_id)), "{e:?} processed twice");
            assert!(e.hops >= 1 && e.hops <= ttl, "{e:?} beyond ttl {ttl}");
        }
        let local = world
            .trace()
            .iter()
            .filter(|e| matches!(e.kind, TraceKind::Hit | TraceKind::Miss))
            .count();
        assert_eq!(metrics.hits() + metrics.misses(), metrics.requests());
        assert_eq!(local, metrics.requests());
        assert_eq!(metrics.requests(), scenario.workload.request_count());
    }
}

#[test]
fn replies_only_reach_real_requesters() {
    let config = small_config();
    let scenario = Scenario::build(&config, 9).unwrap();
    let mut world = scenario.world(&config, Policy::Lru);
    world.enable_trace();
    let metrics = world.run(&scenario.workload, config.duration).unwrap();
    let delivered = world.trace().iter().filter(|e| e.kind == TraceKind::Deliver).count();
    assert_eq!(delivered as u64, metrics.replies_delivered);
    for o in &metrics.outcomes {
        if let Some(latency) = o.first_reply_latency {
            assert!(!o.hit, "local hits never wait for replies");
            assert!(latency >= 2.0 * config.per_hop_latency - 1e-12);
        }
    }
    assert!(metrics.replies_delivered > 0);
}

#[test]
fn identical_seed_identical_trace() {
    let config = small_config();
    let run = || {
        let scenario = Scenario::build(&config, 21).unwrap();
        let mut world = scenario.world(&config, Policy::Arm);
        world.enable_trace();
        let metrics = world.run(&scenario.workload, config.duration).unwrap();
        (metrics, world.trace().to_vec())
    };
    let (m1, t1) = run();
    let (m2, t2) = run();
    assert_eq!(m1, m2);
    assert_eq!(t1, t2);
}

#[test]
fn tracing_does_not_change_results() {
    let config = small_config();
    let scenario = Scenario::build(&config, 2).unwrap();
    let plain = scenario.run(&config, Policy::Arm).unwrap();
    let mut world = scenario.world(&config, Policy::Arm);
    world.enable_trace();
    assert_eq!(world.run(&scenario.workload, config.duration).unwrap(), plain);
}

#[test]
fn mining_ticks_only_under_arm() {
    let config = small_config();
    let scenario = Scenario::build(&config, 2).unwrap();
    for (policy, want) in [(Policy::Arm, 3 * config.nodes), (Policy::Lru, 0)] {
        let mut world = scenario.world(&config, policy);
        world.enable_trace();
        world.run(&scenario.workload, config.duration).unwrap();
        let mines = world.trace().iter().filter(|e| e.kind == TraceKind::Mine).count();
        assert_eq!(mines, want, "{policy}");
    }
}

#[test]
fn paired_runs_share_request_stream() {
    let config = small_config();
    let scenario = Scenario::build(&config, 8).unwrap();
    let arm = scenario.run(&config, Policy::Arm).unwrap();
    let lru = scenario.run(&config, Policy::Lru).unwrap();
    let key = |m: &corrcache::MetricsSet| {
        m.outcomes
            .iter()
            .map(|o| (o.index, o.time.to_bits(), o.node, o.item))
            .collect::<Vec<_>>()
    };
    assert_eq!(key(&arm), key(&lru));
}
