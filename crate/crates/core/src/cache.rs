//! Fixed-capacity item cache with two replacement policies.
//!
//! [`Policy::Lru`] evicts the least recently touched item. [`Policy::Arm`]
//! first removes every cached item related to the incoming one (the residual
//! set) and evicts the least recently touched survivor, falling back to plain
//! LRU when nothing survives. Both policies fill free slots before evicting.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::mining::RelatedIndex;
use crate::{Error, ItemId, SimTime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    /// Residual-set LRU driven by mined correlations.
    Arm,
    Lru,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Arm => "arm",
            Policy::Lru => "lru",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arm" => Ok(Policy::Arm),
            "lru" => Ok(Policy::Lru),
            other => Err(Error::Config(format!("unknown policy {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CacheSlot {
    pub item: ItemId,
    pub last_touch: SimTime,
}

/// Where a placed item landed and what it displaced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvictionRecord {
    pub evicted: Option<ItemId>,
    pub slot_index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cache {
    capacity: usize,
    slots: Vec<CacheSlot>,
}

impl Cache {
    /// Panics if `capacity` is zero.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "cache capacity must be positive");
        Cache {
            capacity,
            slots: Vec::with_capacity(capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() == self.capacity
    }

    pub fn slots(&self) -> &[CacheSlot] {
        &self.slots
    }

    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.slots.iter().map(|s| s.item)
    }

    pub fn position(&self, item: ItemId) -> Option<usize> {
        self.slots.iter().position(|s| s.item == item)
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.position(item).is_some()
    }

    /// Returns whether `item` is cached; a hit refreshes its touch time.
    pub fn lookup(&mut self, item: ItemId, now: SimTime) -> bool {
        match self.position(item) {
            Some(i) => {
                self.slots[i].last_touch = now;
                true
            }
            None => false,
        }
    }

    /// Cached items not in `related`.
    pub fn residual_set(&self, related: &BTreeSet<ItemId>) -> BTreeSet<ItemId> {
        self.items().filter(|i| !related.contains(i)).collect()
    }

    /// Slot of the least recently touched candidate; ties go to the lower index.
    ///
    /// Panics if `candidates` is empty or names an item that is not cached.
    pub fn lru_victim(&self, candidates: &BTreeSet<ItemId>) -> usize {
        assert!(!candidates.is_empty(), "lru_victim needs at least one candidate");
        assert!(
            candidates.iter().all(|&c| self.contains(c)),
            "lru_victim candidates must all be cached"
        );
        oldest(self.slots.iter().enumerate().filter(|(_, s)| candidates.contains(&s.item)))
            .expect("candidate set is nonempty")
    }

    /// Place an item that is not yet cached.
    pub fn place_item(
        &mut self,
        item: ItemId,
        index: &RelatedIndex,
        now: SimTime,
        policy: Policy,
    ) -> EvictionRecord {
        debug_assert!(!self.contains(item), "place_item on an already cached item");
        let slot = CacheSlot {
            item,
            last_touch: now,
        };
        if !self.is_full() {
            self.slots.push(slot);
            return EvictionRecord {
                evicted: None,
                slot_index: self.slots.len() - 1,
            };
        }

        let victim = match policy {
            Policy::Lru => None,
            Policy::Arm => {
                let related = index.get(item);
                oldest(
                    self.slots
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| !related.contains(&s.item)),
                )
            }
        }
        .or_else(|| oldest(self.slots.iter().enumerate()))
        .expect("full cache has slots");

        let evicted = std::mem::replace(&mut self.slots[victim], slot).item;
        EvictionRecord {
            evicted: Some(evicted),
            slot_index: victim,
        }
    }

    /// Touch `item` if cached, otherwise place it. Returns the placement record
    /// when a placement happened.
    pub fn store(
        &mut self,
        item: ItemId,
        index: &RelatedIndex,
        now: SimTime,
        policy: Policy,
    ) -> Option<EvictionRecord> {
        if self.lookup(item, now) {
            None
        } else {
            Some(self.place_item(item, index, now, policy))
        }
    }
}

fn oldest<'a>(slots: impl Iterator<Item = (usize, &'a CacheSlot)>) -> Option<usize> {
    let mut best: Option<(usize, SimTime)> = None;
    for (i, s) in slots {
        match best {
            Some((_, t)) if s.last_touch >= t => {}
            _ => best = Some((i, s.last_touch)),
        }
    }
    best.map(|(i, _)| i)
}
