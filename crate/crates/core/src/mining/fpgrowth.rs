//! FP-Growth frequent itemset mining.
//!
//! Items are ranked by descending support (ties by ascending id), every
//! transaction is inserted into a prefix tree in rank order, and frequent
//! itemsets are grown suffix-first from conditional pattern bases gathered
//! through the header links. Conditional trees keep the global rank order.

use std::collections::{BTreeMap, HashMap};

use crate::mining::Transaction;
use crate::{Error, ItemId, Result};

/// Every itemset meeting the support threshold, with exact support counts.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequentItemSetTable {
    min_support: f64,
    total_transactions: usize,
    itemsets: BTreeMap<Vec<ItemId>, u32>,
}

impl FrequentItemSetTable {
    pub fn empty(min_support: f64) -> Self {
        FrequentItemSetTable {
            min_support,
            total_transactions: 0,
            itemsets: BTreeMap::new(),
        }
    }

    pub fn min_support(&self) -> f64 {
        self.min_support
    }

    pub fn total_transactions(&self) -> usize {
        self.total_transactions
    }

    /// Absolute support count an itemset needs to be stored.
    pub fn min_count(&self) -> u32 {
        min_count(self.min_support, self.total_transactions)
    }

    pub fn len(&self) -> usize {
        self.itemsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }

    /// Itemsets in lexicographic order; each itemset is sorted ascending.
    pub fn iter(&self) -> impl Iterator<Item = (&[ItemId], u32)> + '_ {
        self.itemsets.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Support count of `items` (any order), or `None` if not frequent.
    pub fn support(&self, items: &[ItemId]) -> Option<u32> {
        let mut key = items.to_vec();
        key.sort_unstable();
        key.dedup();
        self.itemsets.get(&key).copied()
    }

    pub fn max_itemset_len(&self) -> usize {
        self.itemsets.keys().map(Vec::len).max().unwrap_or(0)
    }
}

/// `ceil(min_support * total)`, at least 1. The epsilon absorbs products
/// such as `0.7 * 10 = 7.000000000000001`.
pub(crate) fn min_count(min_support: f64, total: usize) -> u32 {
    let raw = (min_support * total as f64 - 1e-9).ceil();
    (raw.max(1.0)) as u32
}

pub fn mine_frequent<'a, I>(transactions: I, min_support: f64) -> Result<FrequentItemSetTable>
where
    I: IntoIterator<Item = &'a Transaction>,
{
    mine_frequent_bounded(transactions, min_support, None)
}

/// [`mine_frequent`] restricted to itemsets of at most `max_len` items.
///
/// With few transactions nearly every subset of a long transaction is
/// frequent, so the unbounded table can be exponential in transaction length.
/// Everything derived from pairs (such as the related index) only needs
/// `max_len = Some(2)`.
pub fn mine_frequent_bounded<'a, I>(
    transactions: I,
    min_support: f64,
    max_len: Option<usize>,
) -> Result<FrequentItemSetTable>
where
    I: IntoIterator<Item = &'a Transaction>,
{
    if !(min_support > 0.0 && min_support <= 1.0) {
        return Err(Error::Config(format!(
            "min_support must be in (0, 1], got {min_support}"
        )));
    }
    let transactions: Vec<&Transaction> = transactions.into_iter().collect();
    let total = transactions.len();
    let mut table = FrequentItemSetTable::empty(min_support);
    table.total_transactions = total;
    if total == 0 {
        return Ok(table);
    }
    let threshold = min_count(min_support, total);

    let mut freq: HashMap<ItemId, u32> = HashMap::new();
    for tx in &transactions {
        for &item in &tx.items {
            *freq.entry(item).or_insert(0) += 1;
        }
    }
    let mut order: Vec<(ItemId, u32)> = freq.into_iter().filter(|&(_, c)| c >= threshold).collect();
    if order.is_empty() {
        return Ok(table);
    }
    order.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let rank: HashMap<ItemId, u32> = order
        .iter()
        .enumerate()
        .map(|(r, &(item, _))| (item, r as u32))
        .collect();
    let items: Vec<ItemId> = order.iter().map(|&(item, _)| item).collect();

    let mut tree = FpTree::new(items.len());
    let mut path = Vec::new();
    for tx in &transactions {
        path.clear();
        path.extend(tx.items.iter().filter_map(|i| rank.get(i).copied()));
        path.sort_unstable();
        if !path.is_empty() {
            tree.insert(&path, 1);
        }
    }

    let max_len = max_len.unwrap_or(usize::MAX);
    if max_len == 0 {
        return Ok(table);
    }
    let mut suffix = Vec::new();
    grow(&tree, threshold, max_len, &mut suffix, &mut |ranks, count| {
        let mut set: Vec<ItemId> = ranks.iter().map(|&r| items[r as usize]).collect();
        set.sort_unstable();
        table.itemsets.insert(set, count);
    });
    Ok(table)
}

const NIL: usize = usize::MAX;

struct FpNode {
    rank: u32,
    count: u32,
    parent: usize,
    children: Vec<usize>,
    link: usize,
}

struct FpTree {
    nodes: Vec<FpNode>,
    /// Per rank: first node in the header chain.
    heads: Vec<usize>,
    /// Per rank: summed count over the header chain.
    totals: Vec<u32>,
}

impl FpTree {
    fn new(ranks: usize) -> Self {
        FpTree {
            nodes: vec![FpNode {
                rank: u32::MAX,
                count: 0,
                parent: NIL,
                children: Vec::new(),
                link: NIL,
            }],
            heads: vec![NIL; ranks],
            totals: vec![0; ranks],
        }
    }

    /// `path` must be strictly ascending in rank.
    fn insert(&mut self, path: &[u32], count: u32) {
        let mut cur = 0;
        for &rank in path {
            let existing = self.nodes[cur]
                .children
                .iter()
                .copied()
                .find(|&c| self.nodes[c].rank == rank);
            cur = match existing {
                Some(child) => {
                    self.nodes[child].count += count;
                    child
                }
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(FpNode {
                        rank,
                        count,
                        parent: cur,
                        children: Vec::new(),
                        link: self.heads[rank as usize],
                    });
                    self.heads[rank as usize] = id;
                    self.nodes[cur].children.push(id);
                    id
                }
            };
            self.totals[rank as usize] += count;
        }
    }

    /// Prefix paths (root side first) of every node carrying `rank`.
    fn pattern_base(&self, rank: usize) -> Vec<(Vec<u32>, u32)> {
        let mut base = Vec::new();
        let mut node = self.heads[rank];
        while node != NIL {
            let mut path = Vec::new();
            let mut p = self.nodes[node].parent;
            while p != 0 {
                path.push(self.nodes[p].rank);
                p = self.nodes[p].parent;
            }
            if !path.is_empty() {
                path.reverse();
                base.push((path, self.nodes[node].count));
            }
            node = self.nodes[node].link;
        }
        base
    }
}

fn grow(
    tree: &FpTree,
    threshold: u32,
    max_len: usize,
    suffix: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[u32], u32),
) {
    for rank in (0..tree.heads.len()).rev() {
        let support = tree.totals[rank];
        if support < threshold {
            continue;
        }
        suffix.push(rank as u32);
        emit(suffix, support);
        if suffix.len() == max_len {
            suffix.pop();
            continue;
        }

        let base = tree.pattern_base(rank);
        let mut counts = vec![0u32; rank];
        for (path, count) in &base {
            for &r in path {
                counts[r as usize] += count;
            }
        }
        if counts.iter().any(|&c| c >= threshold) {
            let mut conditional = FpTree::new(rank);
            let mut filtered = Vec::new();
            for (path, count) in &base {
                filtered.clear();
                filtered.extend(path.iter().copied().filter(|&r| counts[r as usize] >= threshold));
                if !filtered.is_empty() {
                    conditional.insert(&filtered, *count);
                }
            }
            grow(&conditional, threshold, max_len, suffix, emit);
        }
        suffix.pop();
    }
}
