//! Per-request outcomes and the hit-ratio CSV.
//!
//! CSV layout (ASCII, `\n` line endings, no quoting):
//!
//! ```text
//! index,time,node,item,hit,cum_hit_ratio,policy,seed
//! 1,3.217781,4,17,0,0.000000,arm,42
//! ```

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::cache::Policy;
use crate::{Error, ItemId, NodeId, Result, SimTime};

pub const CSV_HEADER: &str = "index,time,node,item,hit,cum_hit_ratio,policy,seed";

#[derive(Clone, Debug, PartialEq)]
pub struct RequestOutcome {
    /// 1-based, in emission order.
    pub index: u64,
    pub time: SimTime,
    pub node: NodeId,
    pub item: ItemId,
    pub hit: bool,
    pub first_reply_latency: Option<SimTime>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsSet {
    pub outcomes: Vec<RequestOutcome>,
    /// Point-to-point transmissions (one per neighbor per send).
    pub messages_sent: u64,
    /// Replies that reached their requester for the first time.
    pub replies_delivered: u64,
    pub policy: Policy,
    pub seed: u64,
}

impl MetricsSet {
    pub fn new(policy: Policy, seed: u64) -> Self {
        MetricsSet {
            outcomes: Vec::new(),
            messages_sent: 0,
            replies_delivered: 0,
            policy,
            seed,
        }
    }

    /// Append an outcome and return its 1-based index.
    pub fn record_request(&mut self, node: NodeId, item: ItemId, hit: bool, time: SimTime) -> u64 {
        let index = self.outcomes.len() as u64 + 1;
        self.outcomes.push(RequestOutcome {
            index,
            time,
            node,
            item,
            hit,
            first_reply_latency: None,
        });
        index
    }

    /// Record the first reply for request `index`; later calls are ignored.
    /// Returns whether this was the first reply.
    pub fn record_reply(&mut self, index: u64, latency: SimTime) -> bool {
        let outcome = &mut self.outcomes[(index - 1) as usize];
        if outcome.first_reply_latency.is_some() {
            return false;
        }
        outcome.first_reply_latency = Some(latency);
        self.replies_delivered += 1;
        true
    }

    pub fn requests(&self) -> usize {
        self.outcomes.len()
    }

    pub fn hits(&self) -> usize {
        self.outcomes.iter().filter(|o| o.hit).count()
    }

    pub fn misses(&self) -> usize {
        self.requests() - self.hits()
    }

    /// Element `k` is the hit fraction over the first `k + 1` requests.
    pub fn cumulative_hit_ratio(&self) -> Vec<f64> {
        cumulative_ratio(self.outcomes.iter().map(|o| o.hit))
    }

    /// Overall hit ratio, 0 when nothing was requested.
    pub fn final_hit_ratio(&self) -> f64 {
        if self.outcomes.is_empty() {
            0.0
        } else {
            self.hits() as f64 / self.requests() as f64
        }
    }

    pub fn mean_first_reply_latency(&self) -> Option<f64> {
        let latencies: Vec<f64> = self.outcomes.iter().filter_map(|o| o.first_reply_latency).collect();
        if latencies.is_empty() {
            None
        } else {
            Some(latencies.iter().sum::<f64>() / latencies.len() as f64)
        }
    }

    pub fn write_csv_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        let mut hits = 0u64;
        for o in &self.outcomes {
            hits += u64::from(o.hit);
            writeln!(
                w,
                "{},{:.6},{},{},{},{:.6},{},{}",
                o.index,
                o.time,
                o.node,
                o.item,
                u8::from(o.hit),
                hits as f64 / o.index as f64,
                self.policy,
                self.seed
            )?;
        }
        w.flush()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv_to(BufWriter::new(file)).map_err(|e| Error::io(path, e))
    }
}

pub fn cumulative_ratio(hits: impl IntoIterator<Item = bool>) -> Vec<f64> {
    let mut count = 0u64;
    hits.into_iter()
        .enumerate()
        .map(|(k, hit)| {
            count += u64::from(hit);
            count as f64 / (k + 1) as f64
        })
        .collect()
}

/// One parsed row of a metrics CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub index: u64,
    pub time: f64,
    pub node: NodeId,
    pub item: ItemId,
    pub hit: bool,
    pub cum_hit_ratio: f64,
    pub policy: Policy,
    pub seed: u64,
}

/// Parse a metrics CSV, naming the file and line on any defect.
pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(path, &text)
}

pub fn parse_csv(path: &Path, text: &str) -> Result<Vec<CsvRow>> {
    let bad = |line: usize, message: String| Error::Malformed {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => return Err(bad(1, format!("unexpected header {header:?}"))),
        None => return Err(bad(1, "missing header".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(bad(lineno, format!("expected 8 fields, found {}", fields.len())));
        }
        fn num<T: std::str::FromStr>(s: &str, name: &str) -> std::result::Result<T, String> {
            s.parse().map_err(|_| format!("invalid {name} {s:?}"))
        }
        let row = (|| -> std::result::Result<CsvRow, String> {
            Ok(CsvRow {
                index: num(fields[0], "index")?,
                time: num(fields[1], "time")?,
                node: num(fields[2], "node")?,
                item: ItemId(num(fields[3], "item")?),
                hit: match fields[4] {
                    "0" => false,
                    "1" => true,
                    other => return Err(format!("invalid hit {other:?}")),
                },
                cum_hit_ratio: num(fields[5], "cum_hit_ratio")?,
                policy: fields[6].parse().map_err(|_| format!("invalid policy {:?}", fields[6]))?,
                seed: num(fields[7], "seed")?,
            })
        })()
        .map_err(|m| bad(lineno, m))?;
        rows.push(row);
    }
    Ok(rows)
}
