use std::collections::{BTreeSet, VecDeque};

use crate::{ItemId, SimTime};

/// Items requested together in one session.
#[derive(Clone, Debug, PartialEq)]
pub struct Transaction {
    pub items: BTreeSet<ItemId>,
    pub closed_at: SimTime,
}

impl Transaction {
    /// Panics if `items` is empty.
    pub fn new(items: impl IntoIterator<Item = ItemId>, closed_at: SimTime) -> Self {
        let items: BTreeSet<ItemId> = items.into_iter().collect();
        assert!(!items.is_empty(), "transaction must contain at least one item");
        Transaction { items, closed_at }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Clone, Debug)]
struct OpenSession {
    items: BTreeSet<ItemId>,
    last_request: SimTime,
}

/// Bounded circular history of closed sessions plus the session in progress.
#[derive(Clone, Debug)]
pub struct TransactionLog {
    capacity: usize,
    gamma: SimTime,
    entries: VecDeque<Transaction>,
    open: Option<OpenSession>,
}

impl TransactionLog {
    /// Panics if `capacity` is zero or `gamma` is negative.
    pub fn new(capacity: usize, gamma: SimTime) -> Self {
        assert!(capacity > 0, "log capacity must be positive");
        assert!(gamma >= 0.0, "session gap must be nonnegative");
        TransactionLog {
            capacity,
            gamma,
            entries: VecDeque::with_capacity(capacity),
            open: None,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn gamma(&self) -> SimTime {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored transactions, oldest first.
    pub fn transactions(&self) -> &VecDeque<Transaction> {
        &self.entries
    }

    /// Items of the session in progress, if any.
    pub fn open_session(&self) -> Option<&BTreeSet<ItemId>> {
        self.open.as_ref().map(|s| &s.items)
    }

    pub fn log_request(&mut self, item: ItemId, now: SimTime) {
        match &mut self.open {
            Some(session) if now - session.last_request <= self.gamma => {
                debug_assert!(now >= session.last_request, "simulated time went backwards");
                session.items.insert(item);
                session.last_request = now;
            }
            _ => {
                self.flush_session(now);
                self.open = Some(OpenSession {
                    items: BTreeSet::from([item]),
                    last_request: now,
                });
            }
        }
    }

    /// Close the open session into a stored transaction. No-op without one.
    pub fn flush_session(&mut self, now: SimTime) {
        if let Some(session) = self.open.take() {
            self.push(Transaction {
                items: session.items,
                closed_at: now,
            });
        }
    }

    fn push(&mut self, tx: Transaction) {
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(tx);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> BTreeSet<ItemId> {
        v.iter().copied().map(ItemId).collect()
    }

    #[test]
    fn first_request_opens_session() {
        let mut log = TransactionLog::new(4, 0.5);
        log.log_request(ItemId(3), 1.0);
        assert_eq!(log.open_session(), Some(&ids(&[3])));
        assert_eq!(log.len(), 0);
    }

    #[test]
    fn gap_within_gamma_extends_session() {
        let mut log = TransactionLog::new(4, 0.5);
        log.log_request(ItemId(3), 1.0);
        log.log_request(ItemId(7), 1.2);
        assert_eq!(log.open_session(), Some(&ids(&[3, 7])));
        assert_eq!(log.len(), 0);
    }

    #[test]
    fn gap_beyond_gamma_closes_session() {
        let mut log = TransactionLog::new(4, 0.5);
        log.log_request(ItemId(3), 1.0);
        log.log_request(ItemId(7), 1.2);
        log.log_request(ItemId(2), 5.0);
        assert_eq!(log.len(), 1);
        assert_eq!(log.transactions()[0].items, ids(&[3, 7]));
        assert_eq!(log.open_session(), Some(&ids(&[2])));
    }

    #[test]
    fn gap_equal_to_gamma_stays_open() {
        let mut log = TransactionLog::new(4, 0.5);
        log.log_request(ItemId(1), 1.0);
        log.log_request(ItemId(2), 1.5);
        assert_eq!(log.len(), 0);
    }

    #[test]
    fn flush_without_session_is_noop() {
        let mut log = TransactionLog::new(4, 0.5);
        log.flush_session(3.0);
        assert!(log.is_empty());
        assert!(log.open_session().is_none());
    }

    #[test]
    fn flush_stores_open_session() {
        let mut log = TransactionLog::new(4, 0.5);
        log.log_request(ItemId(5), 1.0);
        log.flush_session(2.0);
        assert_eq!(log.len(), 1);
        assert_eq!(log.transactions()[0].items, ids(&[5]));
        assert_eq!(log.transactions()[0].closed_at, 2.0);
        assert!(log.open_session().is_none());
    }

    #[test]
    fn full_log_overwrites_oldest() {
        let mut log = TransactionLog::new(4, 0.5);
        for i in 0..4u32 {
            log.log_request(ItemId(10 + i), f64::from(i) * 10.0);
            log.flush_session(f64::from(i) * 10.0);
        }
        assert_eq!(log.len(), 4);
        log.log_request(ItemId(1), 100.0);
        log.log_request(ItemId(2), 100.0);
        log.flush_session(100.0);
        assert_eq!(log.len(), 4);
        assert_eq!(log.transactions()[0].items, ids(&[11]));
        assert_eq!(log.transactions().back().unwrap().items, ids(&[1, 2]));
    }

    #[test]
    fn duplicate_requests_collapse() {
        let mut log = TransactionLog::new(2, 0.5);
        log.log_request(ItemId(4), 0.0);
        log.log_request(ItemId(4), 0.0);
        log.flush_session(0.0);
        assert_eq!(log.transactions()[0].len(), 1);
    }
}
