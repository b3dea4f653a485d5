mod support;

use std::collections::BTreeSet;

use corrcache::mining::{build_related_index, mine_frequent, mine_frequent_bounded};
use corrcache::{ItemId, Transaction, TransactionLog};
use proptest::prelude::*;

fn transactions(max_items: u32, max_tx: usize) -> impl Strategy<Value = Vec<Transaction>> {
    prop::collection::vec(
        prop::collection::btree_set(0..max_items, 1..=max_items as usize),
        0..=max_tx,
    )
    .prop_map(|sets| {
        sets.into_iter()
            .map(|s| Transaction::new(s.into_iter().map(ItemId), 0.0))
            .collect()
    })
}

fn support_level() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.2), Just(0.5), Just(0.8), Just(1.0), 0.05f64..=1.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_brute_force(txs in transactions(10, 40), support in support_level()) {
        let table = mine_frequent(&txs, support).unwrap();
        let got: Vec<_> = table.iter().map(|(s, c)| (s.to_vec(), c)).collect();
        let want: Vec<_> = support::brute_force_frequent(&txs, support).into_iter().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn downward_closed(txs in transactions(6, 30), support in support_level()) {
        let table = mine_frequent(&txs, support).unwrap();
        let threshold = table.min_count();
        for (set, count) in table.iter() {
            prop_assert!(count >= threshold);
            let n = set.len();
            for mask in 1u32..(1 << n) {
                let sub: Vec<ItemId> = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| set[b]).collect();
                let sub_count = table.support(&sub);
                prop_assert!(sub_count.is_some_and(|c| c >= count), "{:?} missing or below {:?}", sub, set);
            }
        }
    }

    #[test]
    fn order_of_transactions_is_irrelevant(txs in transactions(8, 25), support in support_level(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = txs.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(mine_frequent(&txs, support).unwrap(), mine_frequent(&shuffled, support).unwrap());
    }

    #[test]
    fn related_index_symmetric_and_irreflexive(txs in transactions(10, 30), support in support_level()) {
        let index = build_related_index(&mine_frequent(&txs, support).unwrap());
        for (k, related) in index.iter() {
            prop_assert!(!related.contains(&k));
            for &i in related {
                prop_assert!(index.is_related(i, k));
            }
        }
    }

    #[test]
    fn pair_bounded_mining_gives_same_index(txs in transactions(10, 30), support in support_level()) {
        let full = build_related_index(&mine_frequent(&txs, support).unwrap());
        let pairs = build_related_index(&mine_frequent_bounded(&txs, support, Some(2)).unwrap());
        prop_assert_eq!(full, pairs);
    }

    #[test]
    fn log_keeps_last_capacity_transactions(capacity in 1usize..8, extra in 0usize..12) {
        let mut log = TransactionLog::new(capacity, 0.5);
        let total = capacity + extra;
        for i in 0..total {
            // Sessions one second apart, each a single distinct item.
            log.log_request(ItemId(i as u32), i as f64);
        }
        log.flush_session(total as f64);
        prop_assert!(log.len() <= capacity);
        let stored: Vec<BTreeSet<ItemId>> = log.transactions().iter().map(|t| t.items.clone()).collect();
        let want: Vec<BTreeSet<ItemId>> = (total - capacity..total).map(|i| BTreeSet::from([ItemId(i as u32)])).collect();
        prop_assert_eq!(stored, want);
    }
}

#[test]
fn brute_force_agrees_on_worked_example() {
    let tx = |v: &[u32]| Transaction::new(v.iter().copied().map(ItemId), 0.0);
    let txs = [tx(&[1, 2, 3]), tx(&[1, 2]), tx(&[1, 3]), tx(&[1])];
    let want = support::brute_force_frequent(&txs, 0.5);
    let as_vec = |v: &[u32]| v.iter().copied().map(ItemId).collect::<Vec<_>>();
    assert_eq!(want.len(), 5);
    assert_eq!(want[&as_vec(&[1])], 4);
    assert_eq!(want[&as_vec(&[1, 2])], 2);
    assert_eq!(want[&as_vec(&[1, 3])], 2);
    assert!(!want.contains_key(&as_vec(&[2, 3])));
}
