//! Correlation-aware cache replacement for ad-hoc networks.
//!
//! Nodes log the items they request into short transactions, mine those logs
//! with FP-Growth, and use the mined co-occurrence sets to protect correlated
//! items when choosing an eviction victim. The crate contains every piece
//! needed to evaluate that policy against plain LRU:
//!
//! - [`mining`]: circular transaction log, FP-Growth, related-item index
//! - [`cache`]: fixed-capacity cache with the residual-set and LRU policies
//! - [`workload`]: correlated request generator driven by a binary matrix
//! - [`netsim`]: discrete-event flooding query/reply protocol on a static topology
//! - [`metrics`]: per-request outcomes, cumulative hit ratio, CSV output
//! - [`experiment`]: configuration, paired policy runs and summaries
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod cache;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod mining;
pub mod netsim;
pub mod seed;
pub mod workload;

use std::fmt;

pub use cache::{Cache, CacheSlot, EvictionRecord, Policy};
pub use error::{Error, Result};
pub use experiment::SimConfig;
pub use metrics::{MetricsSet, RequestOutcome};
pub use mining::{FrequentItemSetTable, RelatedIndex, Transaction, TransactionLog};
pub use netsim::{SimWorld, Topology};
pub use workload::{CorrelationMatrix, RequestSession, WorkloadConfig};

/// Index of a data item in the catalog `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for ItemId {
    fn from(id: u32) -> Self {
        ItemId(id)
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Simulated node identifier, dense in `[0, node_count)`.
pub type NodeId = usize;

/// Simulated time in seconds.
pub type SimTime = f64;
