//! Transaction logging and frequent-itemset mining.
//!
//! A node appends each request to its [`TransactionLog`]; requests separated
//! by no more than `gamma` seconds belong to the same session. Periodically the
//! node closes its open session, mines the stored transactions with FP-Growth
//! and rebuilds its [`RelatedIndex`].

mod fpgrowth;
mod log;
mod related;

pub use fpgrowth::{mine_frequent, mine_frequent_bounded, FrequentItemSetTable};
pub use log::{Transaction, TransactionLog};
pub use related::{build_related_index, RelatedIndex};

use crate::{Result, SimTime};

/// Close the open session, mine the log and derive a fresh related index.
///
/// Mining stops at pairs: by downward closure, the union of frequent itemsets
/// containing `k` equals the union of frequent pairs containing `k`.
pub fn refresh_index(log: &mut TransactionLog, min_support: f64, now: SimTime) -> Result<RelatedIndex> {
    log.flush_session(now);
    let table = mine_frequent_bounded(log.transactions(), min_support, Some(2))?;
    Ok(build_related_index(&table))
}
