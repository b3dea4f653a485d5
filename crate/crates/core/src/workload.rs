//! Correlated request generator.
//!
//! A binary matrix `M` marks which items are correlated. A session seeded at
//! item `d` draws its candidates from column `d` (every `i` with `M(i, d) = 1`,
//! plus `d` itself) and keeps each candidate independently with probability
//! `eta`. Sessions arrive at each node as a Poisson process.
//!
//! Draw order is fixed: matrix entries row-major, session candidates in
//! ascending id order, schedule arrivals as (gap, seed item) pairs per node.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::Rng;

use crate::seed::{self, stream};
use crate::{Error, ItemId, NodeId, Result, SimTime};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl CorrelationMatrix {
    pub fn zeros(n: usize) -> Self {
        CorrelationMatrix {
            n,
            cells: vec![false; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.cells[i * self.n + j] = value;
    }

    /// Fraction of entries equal to 1.
    pub fn density(&self) -> f64 {
        if self.cells.is_empty() {
            return 0.0;
        }
        self.cells.iter().filter(|&&c| c).count() as f64 / self.cells.len() as f64
    }
}

pub fn gen_correlation_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CorrelationMatrix> {
    if n < 1 {
        return Err(Error::Config("catalog size must be at least 1".into()));
    }
    let cells = (0..n * n).map(|_| seed::unit(rng) >= 0.5).collect();
    Ok(CorrelationMatrix { n, cells })
}

/// `{d} ∪ {i : M(i, d) = 1}`.
pub fn candidate_requests(matrix: &CorrelationMatrix, d: ItemId) -> BTreeSet<ItemId> {
    let col = d.index();
    assert!(col < matrix.n(), "item {d} outside catalog of {}", matrix.n());
    (0..matrix.n())
        .filter(|&i| i == col || matrix.get(i, col))
        .map(|i| ItemId(i as u32))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RequestSession {
    pub seed_item: ItemId,
    /// Requested items; all issued at `issue_time` in ascending order.
    pub items: BTreeSet<ItemId>,
    pub issue_time: SimTime,
}

pub fn gen_session<R: Rng + ?Sized>(
    matrix: &CorrelationMatrix,
    d: ItemId,
    eta: f64,
    rng: &mut R,
    now: SimTime,
) -> RequestSession {
    let mut items: BTreeSet<ItemId> = candidate_requests(matrix, d)
        .into_iter()
        .filter(|_| seed::unit(rng) < eta)
        .collect();
    if items.is_empty() {
        items.insert(d);
    }
    RequestSession {
        seed_item: d,
        items,
        issue_time: now,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkloadConfig {
    /// Catalog size.
    pub n: usize,
    pub eta: f64,
    /// Mean sessions per node per second.
    pub session_rate: f64,
    pub rng_seed: u64,
}

impl Default for WorkloadConfig {
    fn default() -> Self {
        WorkloadConfig {
            n: 100,
            eta: 0.8,
            session_rate: 0.1,
            rng_seed: 0,
        }
    }
}

impl WorkloadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Config("catalog size must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::Config(format!("eta must be in [0, 1], got {}", self.eta)));
        }
        if !(self.session_rate > 0.0 && self.session_rate.is_finite()) {
            return Err(Error::Config(format!(
                "session rate must be positive, got {}",
                self.session_rate
            )));
        }
        Ok(())
    }
}

/// A session start: which node, which seed item, when.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduledSession {
    pub time: SimTime,
    pub node: NodeId,
    pub seed_item: ItemId,
}

/// Poisson session arrivals for every node, each node on its own child stream.
pub fn schedule_sessions(config: &WorkloadConfig, node_count: usize, duration: SimTime) -> Vec<ScheduledSession> {
    schedule_sessions_with(config.n, config.session_rate, node_count, duration, |node| {
        seed::rng(config.rng_seed, stream::SCHEDULE, node as u64)
    })
}

/// [`schedule_sessions`] with caller-supplied per-node generators.
pub fn schedule_sessions_with<R, F>(
    n: usize,
    rate: f64,
    node_count: usize,
    duration: SimTime,
    mut rng_for: F,
) -> Vec<ScheduledSession>
where
    R: Rng,
    F: FnMut(NodeId) -> R,
{
    let mut out = Vec::new();
    if duration.is_nan() || duration <= 0.0 {
        return out;
    }
    for node in 0..node_count {
        let mut rng = rng_for(node);
        let mut t = 0.0;
        loop {
            t += -seed::unit(&mut rng).ln() / rate;
            if t >= duration {
                break;
            }
            let seed_item = ItemId(rng.gen_range(0..n) as u32);
            out.push(ScheduledSession { time: t, node, seed_item });
        }
    }
    out.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.node.cmp(&b.node)));
    out
}

/// A session assigned to the node that issues it.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannedSession {
    pub node: NodeId,
    pub session: RequestSession,
}

/// Everything a run needs from the workload side, generated up front so that
/// paired runs of different policies see the same request stream.
#[derive(Clone, Debug)]
pub struct Workload {
    pub matrix: CorrelationMatrix,
    pub sessions: Vec<PlannedSession>,
}

impl Workload {
    pub fn generate(config: &WorkloadConfig, node_count: usize, duration: SimTime) -> Result<Self> {
        config.validate()?;
        let matrix = gen_correlation_matrix(config.n, &mut seed::rng(config.rng_seed, stream::MATRIX, 0))?;
        let mut node_rngs: Vec<_> = (0..node_count)
            .map(|node| seed::rng(config.rng_seed, stream::SESSIONS, node as u64))
            .collect();
        let sessions = schedule_sessions(config, node_count, duration)
            .into_iter()
            .map(|s| PlannedSession {
                node: s.node,
                session: gen_session(&matrix, s.seed_item, config.eta, &mut node_rngs[s.node], s.time),
            })
            .collect();
        Ok(Workload { matrix, sessions })
    }

    pub fn request_count(&self) -> usize {
        self.sessions.iter().map(|s| s.session.items.len()).sum()
    }

    /// One row per item request: `time,node,item`.
    pub fn write_schedule_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let mut write = || -> std::io::Result<()> {
            writeln!(w, "time,node,item")?;
            for planned in &self.sessions {
                for item in &planned.session.items {
                    writeln!(w, "{:.6},{},{}", planned.session.issue_time, planned.node, item)?;
                }
            }
            w.flush()
        };
        write().map_err(|e| Error::io(path, e))
    }
}
