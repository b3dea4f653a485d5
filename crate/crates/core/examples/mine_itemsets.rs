//! Mine frequent itemsets from a handful of request sessions and show the
//! related-item index the cache policy consults.

use corrcache::mining::{build_related_index, mine_frequent};
use corrcache::{ItemId, Transaction};

fn main() -> corrcache::Result<()> {
    let sessions: [&[u32]; 6] = [&[1, 2, 3], &[1, 2], &[1, 2, 4], &[2, 3], &[1, 2, 3, 5], &[4]];
    let txs: Vec<Transaction> = sessions
        .iter()
        .enumerate()
        .map(|(i, s)| Transaction::new(s.iter().copied().map(ItemId), i as f64))
        .collect();

    for support in [0.5, 0.3] {
        let table = mine_frequent(&txs, support)?;
        println!("min_support {support} (count >= {}):", table.min_count());
        for (set, count) in table.iter() {
            let names: Vec<String> = set.iter().map(ToString::to_string).collect();
            println!("  {{{}}}  {count}", names.join(", "));
        }
        println!("  related:");
        for (item, related) in build_related_index(&table).iter() {
            let names: Vec<String> = related.iter().map(ToString::to_string).collect();
            println!("    {item} -> {}", names.join(" "));
        }
    }
    Ok(())
}
