use std::collections::{BTreeMap, BTreeSet};

use crate::mining::FrequentItemSetTable;
use crate::ItemId;

static NO_ITEMS: BTreeSet<ItemId> = BTreeSet::new();

/// For each item `k`, the items that co-occur with it in some frequent itemset.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelatedIndex {
    related: BTreeMap<ItemId, BTreeSet<ItemId>>,
}

impl RelatedIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index in which every member of each group is related to every other member.
    pub fn from_groups<G, I>(groups: G) -> Self
    where
        G: IntoIterator<Item = I>,
        I: IntoIterator<Item = ItemId>,
    {
        let mut index = RelatedIndex::new();
        for group in groups {
            let members: Vec<ItemId> = group.into_iter().collect();
            index.add_group(&members);
        }
        index
    }

    fn add_group(&mut self, members: &[ItemId]) {
        if members.len() < 2 {
            return;
        }
        for &k in members {
            let entry = self.related.entry(k).or_default();
            entry.extend(members.iter().copied().filter(|&m| m != k));
        }
    }

    /// Related items of `item`; empty if none.
    pub fn get(&self, item: ItemId) -> &BTreeSet<ItemId> {
        self.related.get(&item).unwrap_or(&NO_ITEMS)
    }

    pub fn is_related(&self, item: ItemId, other: ItemId) -> bool {
        self.get(item).contains(&other)
    }

    /// True when no item has any related item.
    pub fn is_empty(&self) -> bool {
        self.related.values().all(BTreeSet::is_empty)
    }

    /// Keys with a nonempty related set.
    pub fn iter(&self) -> impl Iterator<Item = (ItemId, &BTreeSet<ItemId>)> + '_ {
        self.related.iter().map(|(&k, v)| (k, v))
    }
}

/// `related[k]` = union of every frequent itemset containing `k`, minus `k`.
pub fn build_related_index(table: &FrequentItemSetTable) -> RelatedIndex {
    let mut index = RelatedIndex::new();
    for (itemset, _) in table.iter() {
        index.add_group(itemset);
    }
    index
}
