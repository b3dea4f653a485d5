//! The same request stream under ARM and LRU: ARM refuses to evict items
//! mined as related to the one being inserted.

use corrcache::{Cache, ItemId, Policy, RelatedIndex};

fn main() {
    // 1 and 4 tend to be requested together.
    let index = RelatedIndex::from_groups([[ItemId(1), ItemId(4)]]);
    let requests = [1, 2, 3, 4, 1, 5, 4];

    for policy in [Policy::Lru, Policy::Arm] {
        let mut cache = Cache::new(3);
        let mut hits = 0;
        println!("{policy}:");
        for (t, &r) in requests.iter().enumerate() {
            let item = ItemId(r);
            let hit = cache.lookup(item, t as f64);
            hits += usize::from(hit);
            let evicted = if hit {
                None
            } else {
                cache.store(item, &index, t as f64, policy).and_then(|e| e.evicted)
            };
            let contents: Vec<String> = cache.items().map(|i| i.to_string()).collect();
            println!(
                "  t={t} req {item:<2} {:<4} evict {:<2} cache [{}]",
                if hit { "hit" } else { "miss" },
                evicted.map_or("-".into(), |e| e.to_string()),
                contents.join(" ")
            );
        }
        println!("  {hits}/{} hits", requests.len());
    }
}
