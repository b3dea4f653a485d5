//! Drive the flooding protocol by hand on a four-node chain and print the
//! event trace: the query floods out, the origin answers, and every hop on
//! the way back caches the item.

use corrcache::netsim::{NetConfig, SimWorld, Topology};
use corrcache::ItemId;

fn main() {
    // 0 - 1 - 2 - 3, 100 m apart with a 150 m radio.
    let positions = (0..4).map(|i| (i as f64 * 100.0, 0.0)).collect();
    let topology = Topology::from_positions(positions, (400.0, 10.0), 150.0);
    // Item 0 originates at node 3.
    let mut world = SimWorld::new(topology, vec![3], NetConfig::default(), 1);
    world.enable_trace();

    world.issue_query(0, ItemId(0), 0.0);
    world.step_until(1.0);
    world.issue_query(1, ItemId(0), 2.0);

    println!("{:>6}  {:>4}  {:<9} {:>6}  {:>4}  hops", "time", "node", "event", "msg", "item");
    for e in world.trace() {
        println!(
            "{:>6.2}  {:>4}  {:<9} {:>6}  {:>4}  {}",
            e.time,
            e.node,
            e.kind.as_str(),
            e.msg_id.map_or("-".into(), |m| m.to_string()),
            e.item.map_or("-".into(), |i| i.to_string()),
            e.hops
        );
    }
    let m = world.metrics();
    println!(
        "{} requests, {} hits, {} transmissions, first reply after {:.2} s",
        m.requests(),
        m.hits(),
        m.messages_sent,
        m.outcomes[0].first_reply_latency.unwrap_or(f64::NAN)
    );
}
