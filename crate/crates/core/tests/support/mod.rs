//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use corrcache::{ItemId, Transaction};

/// Every nonempty itemset over the items seen, with its support count, kept
/// when the count reaches `ceil(min_support * total)` (at least 1).
pub fn brute_force_frequent(transactions: &[Transaction], min_support: f64) -> BTreeMap<Vec<ItemId>, u32> {
    let mut out = BTreeMap::new();
    let total = transactions.len();
    if total == 0 {
        return out;
    }
    let threshold = ((min_support * total as f64 - 1e-9).ceil() as u32).max(1);
    let universe: Vec<ItemId> = transactions
        .iter()
        .flat_map(|t| t.items.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(universe.len() <= 16, "brute force limited to 16 items");
    let masks: Vec<u32> = transactions
        .iter()
        .map(|t| {
            universe
                .iter()
                .enumerate()
                .filter(|(_, i)| t.items.contains(i))
                .fold(0u32, |m, (b, _)| m | (1 << b))
        })
        .collect();
    for subset in 1u32..(1 << universe.len()) {
        let count = masks.iter().filter(|&&m| m & subset == subset).count() as u32;
        if count >= threshold {
            let set = (0..universe.len())
                .filter(|b| subset & (1 << b) != 0)
                .map(|b| universe[b])
                .collect();
            out.insert(set, count);
        }
    }
    out
}

/// One step of a reference cache: recompute the residual set and scan for the
/// oldest touch every time.
#[derive(Clone, Debug, Default)]
pub struct NaiveCache {
    pub capacity: usize,
    pub slots: Vec<(ItemId, f64)>,
}

impl NaiveCache {
    pub fn new(capacity: usize) -> Self {
        NaiveCache {
            capacity,
            slots: Vec::new(),
        }
    }

    /// Returns `(hit, evicted)`.
    pub fn access(&mut self, item: ItemId, related: &BTreeSet<ItemId>, now: f64, use_related: bool) -> (bool, Option<ItemId>) {
        if let Some(s) = self.slots.iter_mut().find(|s| s.0 == item) {
            s.1 = now;
            return (true, None);
        }
        if self.slots.len() < self.capacity {
            self.slots.push((item, now));
            return (false, None);
        }
        let residual: Vec<usize> = (0..self.slots.len())
            .filter(|&i| !use_related || !related.contains(&self.slots[i].0))
            .collect();
        let pool: Vec<usize> = if residual.is_empty() {
            (0..self.slots.len()).collect()
        } else {
            residual
        };
        let mut victim = pool[0];
        for &i in &pool {
            if self.slots[i].1 < self.slots[victim].1 {
                victim = i;
            }
        }
        let evicted = self.slots[victim].0;
        self.slots[victim] = (item, now);
        (false, Some(evicted))
    }
}
