use std::collections::{HashMap, VecDeque};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::cache::{Cache, Policy};
use crate::metrics::MetricsSet;
use crate::mining::{self, RelatedIndex, TransactionLog};
use crate::netsim::{Message, MessageKind, MsgId, Topology};
use crate::workload::Workload;
use crate::{Error, ItemId, NodeId, Result, SimTime};

/// Protocol and per-node parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct NetConfig {
    pub policy: Policy,
    pub cache_capacity: usize,
    pub initial_ttl: u32,
    pub per_hop_latency: SimTime,
    pub log_capacity: usize,
    pub gamma: SimTime,
    pub min_support: f64,
    pub mining_period: SimTime,
}

impl Default for NetConfig {
    fn default() -> Self {
        NetConfig {
            policy: Policy::Arm,
            cache_capacity: 10,
            initial_ttl: 8,
            per_hop_latency: 0.01,
            log_capacity: 50,
            gamma: 0.5,
            min_support: 0.8,
            mining_period: 100.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NodeState {
    pub id: NodeId,
    pub cache: Cache,
    pub log: TransactionLog,
    pub related: RelatedIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceKind {
    /// Local request served from cache or origin copy.
    Hit,
    /// Local request that started a query flood.
    Miss,
    /// First arrival of a message at a node.
    Receive,
    /// Repeat arrival, dropped by the seen set.
    Duplicate,
    /// Query answered; a reply flood starts here.
    Answer,
    Forward,
    /// Not forwarded because its TTL ran out.
    Expire,
    /// Reply reached its requester.
    Deliver,
    Mine,
}

impl TraceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceKind::Hit => "hit",
            TraceKind::Miss => "miss",
            TraceKind::Receive => "receive",
            TraceKind::Duplicate => "duplicate",
            TraceKind::Answer => "answer",
            TraceKind::Forward => "forward",
            TraceKind::Expire => "expire",
            TraceKind::Deliver => "deliver",
            TraceKind::Mine => "mine",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEvent {
    pub time: SimTime,
    pub node: NodeId,
    pub kind: TraceKind,
    pub msg_id: Option<MsgId>,
    pub item: Option<ItemId>,
    /// Hops travelled by the message on arrival; 0 for local events.
    pub hops: u32,
}

struct Delivery {
    time: SimTime,
    to: NodeId,
    from: NodeId,
    msg: Message,
}

/// One bit per (message, node).
struct SeenTable {
    words_per_msg: usize,
    bits: Vec<u64>,
}

impl SeenTable {
    fn new(node_count: usize) -> Self {
        SeenTable {
            words_per_msg: node_count.div_ceil(64),
            bits: Vec::new(),
        }
    }

    /// Mark `(msg, node)`; returns false if it was already marked.
    fn insert(&mut self, msg: MsgId, node: NodeId) -> bool {
        let word = msg as usize * self.words_per_msg + node / 64;
        if word >= self.bits.len() {
            self.bits.resize((msg as usize + 1) * self.words_per_msg, 0);
        }
        let mask = 1u64 << (node % 64);
        let fresh = self.bits[word] & mask == 0;
        self.bits[word] |= mask;
        fresh
    }

    fn contains(&self, msg: MsgId, node: NodeId) -> bool {
        let word = msg as usize * self.words_per_msg + node / 64;
        self.bits.get(word).is_some_and(|w| w & (1u64 << (node % 64)) != 0)
    }
}

struct Pending {
    node: NodeId,
    index: u64,
    issued: SimTime,
}

/// One simulation: topology, node state, event queue and metrics.
pub struct SimWorld {
    config: NetConfig,
    topology: Topology,
    origin_of: Vec<NodeId>,
    nodes: Vec<NodeState>,
    seen: SeenTable,
    /// Pairs with a delivery already queued (or the creating node).
    claimed: SeenTable,
    suppressed: u64,
    /// Every hop has the same latency, so deliveries are queued in
    /// nondecreasing time order and a FIFO keeps them sorted.
    deliveries: VecDeque<Delivery>,
    /// Mining ticks, sorted by time then node.
    ticks: VecDeque<(SimTime, NodeId)>,
    next_msg: MsgId,
    clock: SimTime,
    pending: HashMap<MsgId, Pending>,
    metrics: MetricsSet,
    trace: Option<Vec<TraceEvent>>,
}

impl SimWorld {
    /// `origin_of[i]` is the node holding item `i` authoritatively.
    pub fn new(topology: Topology, origin_of: Vec<NodeId>, config: NetConfig, seed: u64) -> Self {
        assert!(
            origin_of.iter().all(|&n| n < topology.node_count()),
            "origin outside topology"
        );
        let nodes = (0..topology.node_count())
            .map(|id| NodeState {
                id,
                cache: Cache::new(config.cache_capacity),
                log: TransactionLog::new(config.log_capacity, config.gamma),
                related: RelatedIndex::new(),
            })
            .collect();
        SimWorld {
            seen: SeenTable::new(topology.node_count()),
            claimed: SeenTable::new(topology.node_count()),
            suppressed: 0,
            metrics: MetricsSet::new(config.policy, seed),
            config,
            topology,
            origin_of,
            nodes,
            deliveries: VecDeque::new(),
            ticks: VecDeque::new(),
            next_msg: 0,
            clock: 0.0,
            pending: HashMap::new(),
            trace: None,
        }
    }

    /// Record every protocol event from now on.
    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn trace(&self) -> &[TraceEvent] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn config(&self) -> &NetConfig {
        &self.config
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn node_mut(&mut self, id: NodeId) -> &mut NodeState {
        &mut self.nodes[id]
    }

    pub fn metrics(&self) -> &MetricsSet {
        &self.metrics
    }

    pub fn clock(&self) -> SimTime {
        self.clock
    }

    pub fn is_origin(&self, node: NodeId, item: ItemId) -> bool {
        self.origin_of.get(item.index()) == Some(&node)
    }

    /// Whether `node` has processed message `msg`.
    pub fn has_seen(&self, node: NodeId, msg: MsgId) -> bool {
        self.seen.contains(msg, node)
    }

    /// Transmissions that were resolved as duplicates when sent.
    pub fn suppressed_duplicates(&self) -> u64 {
        self.suppressed
    }

    /// Number of events still queued.
    pub fn queued(&self) -> usize {
        self.deliveries.len() + self.ticks.len()
    }

    fn fresh_id(&mut self) -> MsgId {
        let id = self.next_msg;
        self.next_msg += 1;
        id
    }

    fn note(&mut self, node: NodeId, kind: TraceKind, msg: Option<&Message>, item: Option<ItemId>) {
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEvent {
                time: self.clock,
                node,
                kind,
                msg_id: msg.map(|m| m.msg_id),
                item: msg.map(|m| m.item).or(item),
                hops: msg.map_or(0, |m| m.hops),
            });
        }
    }

    /// Send `msg` to every neighbor of `node` except `except`.
    ///
    /// Every hop takes the same latency, so the first copy queued for a node
    /// is also the first one it processes; any later copy would be dropped
    /// by the seen set on arrival. Such copies are counted as sent and in
    /// [`SimWorld::suppressed_duplicates`] but neither queued nor traced.
    fn broadcast(&mut self, node: NodeId, except: Option<NodeId>, msg: Message, now: SimTime) {
        let time = now + self.config.per_hop_latency;
        let msg = Message {
            hops: msg.hops + 1,
            ..msg
        };
        let SimWorld {
            topology,
            claimed,
            deliveries,
            metrics,
            suppressed,
            ..
        } = self;
        for &to in topology.neighbors(node) {
            if Some(to) == except {
                continue;
            }
            metrics.messages_sent += 1;
            if !claimed.insert(msg.msg_id, to) {
                *suppressed += 1;
                continue;
            }
            deliveries.push_back(Delivery {
                time,
                to,
                from: node,
                msg,
            });
        }
    }

    /// A local request at `node`: log it, try cache and origin copy, flood a
    /// query on a miss.
    pub fn issue_query(&mut self, node: NodeId, item: ItemId, now: SimTime) {
        self.clock = now;
        self.nodes[node].log.log_request(item, now);
        let hit = self.is_origin(node, item) || self.nodes[node].cache.lookup(item, now);
        let index = self.metrics.record_request(node, item, hit, now);
        if hit {
            self.note(node, TraceKind::Hit, None, Some(item));
            return;
        }
        let msg = Message::query(self.fresh_id(), node, item, self.config.initial_ttl);
        self.seen.insert(msg.msg_id, node);
        self.claimed.insert(msg.msg_id, node);
        self.note(node, TraceKind::Miss, Some(&msg), None);
        if self.topology.neighbors(node).is_empty() {
            return;
        }
        self.pending.insert(
            msg.msg_id,
            Pending {
                node,
                index,
                issued: now,
            },
        );
        self.broadcast(node, None, msg, now);
    }

    /// Process `msg` arriving at `node` from neighbor `from`.
    pub fn handle_message(&mut self, node: NodeId, from: NodeId, msg: Message, now: SimTime) {
        self.clock = now;
        self.claimed.insert(msg.msg_id, node);
        if !self.seen.insert(msg.msg_id, node) {
            self.note(node, TraceKind::Duplicate, Some(&msg), None);
            return;
        }
        self.note(node, TraceKind::Receive, Some(&msg), None);
        match msg.kind {
            MessageKind::QueryRequest => {
                let item = msg.item;
                let held = self.is_origin(node, item) || self.nodes[node].cache.lookup(item, now);
                if held {
                    let reply = Message::reply_to(&msg, self.fresh_id(), node, self.config.initial_ttl);
                    self.seen.insert(reply.msg_id, node);
                    self.claimed.insert(reply.msg_id, node);
                    self.note(node, TraceKind::Answer, Some(&reply), None);
                    self.broadcast(node, None, reply, now);
                } else if msg.ttl > 1 {
                    self.note(node, TraceKind::Forward, Some(&msg), None);
                    self.broadcast(node, Some(from), msg.forwarded(), now);
                } else {
                    self.note(node, TraceKind::Expire, Some(&msg), None);
                }
            }
            MessageKind::QueryReply => {
                let item = msg.item;
                if !self.is_origin(node, item) {
                    let policy = self.config.policy;
                    let state = &mut self.nodes[node];
                    state.cache.store(item, &state.related, now, policy);
                }
                if msg.destination == Some(node) {
                    self.deliver_reply(node, &msg, now);
                } else if msg.ttl > 1 {
                    self.note(node, TraceKind::Forward, Some(&msg), None);
                    self.broadcast(node, Some(from), msg.forwarded(), now);
                } else {
                    self.note(node, TraceKind::Expire, Some(&msg), None);
                }
            }
        }
    }

    fn deliver_reply(&mut self, node: NodeId, msg: &Message, now: SimTime) {
        let Some(query) = msg.in_reply_to else { return };
        match self.pending.get(&query) {
            Some(p) if p.node == node => {
                let p = self.pending.remove(&query).expect("present");
                self.metrics.record_reply(p.index, now - p.issued);
                self.note(node, TraceKind::Deliver, Some(msg), None);
            }
            _ => {}
        }
    }

    /// Close the open session, mine the log and swap in the new index.
    pub fn mine(&mut self, node: NodeId, now: SimTime) -> Result<()> {
        self.clock = now;
        let min_support = self.config.min_support;
        let state = &mut self.nodes[node];
        state.related = mining::refresh_index(&mut state.log, min_support, now)?;
        self.note(node, TraceKind::Mine, None, None);
        Ok(())
    }

    /// Time of the next queued tick or delivery; ticks win ties.
    fn next_internal(&self) -> Option<(SimTime, bool)> {
        match (self.ticks.front(), self.deliveries.front()) {
            (Some(&(t, _)), Some(d)) => Some(if t <= d.time { (t, true) } else { (d.time, false) }),
            (Some(&(t, _)), None) => Some((t, true)),
            (None, Some(d)) => Some((d.time, false)),
            (None, None) => None,
        }
    }

    fn dispatch_internal(&mut self, is_tick: bool) -> Result<()> {
        if is_tick {
            let (time, node) = self.ticks.pop_front().expect("tick queued");
            self.mine(node, time)
        } else {
            let Delivery { time, to, from, msg } = self.deliveries.pop_front().expect("delivery queued");
            self.handle_message(to, from, msg, time);
            Ok(())
        }
    }

    /// Run `workload` until the clock passes `duration` and return the metrics.
    ///
    /// At equal times sessions run first, then mining ticks, then deliveries,
    /// which is the order a single queue would give if sessions and ticks were
    /// all enqueued before the run starts.
    pub fn run(&mut self, workload: &Workload, duration: SimTime) -> Result<MetricsSet> {
        // LRU never reads the related index, so its runs skip mining.
        if self.config.policy == Policy::Arm && self.config.mining_period > 0.0 {
            let mut k = 1u64;
            loop {
                let t = k as f64 * self.config.mining_period;
                if t > duration {
                    break;
                }
                self.ticks.extend((0..self.nodes.len()).map(|node| (t, node)));
                k += 1;
            }
        }

        let mut sessions = workload.sessions.iter().peekable();
        loop {
            let next_session = sessions.peek().map(|s| s.session.issue_time);
            let next = self.next_internal();
            let (time, take_session) = match (next_session, next) {
                (Some(s), Some((e, _))) if s <= e => (s, true),
                (_, Some((e, _))) => (e, false),
                (Some(s), None) => (s, true),
                (None, None) => break,
            };
            if time > duration {
                break;
            }
            if take_session {
                let planned = sessions.next().expect("peeked");
                for &item in &planned.session.items {
                    self.issue_query(planned.node, item, time);
                }
            } else {
                let is_tick = next.expect("nonempty").1;
                self.dispatch_internal(is_tick)?;
            }
        }
        self.deliveries.clear();
        self.ticks.clear();
        let fresh = MetricsSet::new(self.config.policy, self.metrics.seed);
        Ok(std::mem::replace(&mut self.metrics, fresh))
    }

    /// Deliver queued events up to `until` without touching the workload.
    /// Useful for driving the protocol by hand.
    pub fn step_until(&mut self, until: SimTime) {
        while let Some((time, is_tick)) = self.next_internal() {
            if time > until {
                break;
            }
            self.dispatch_internal(is_tick).expect("configured support is valid");
        }
    }

    /// Dump the trace as `time,node,event,msg_id,item`.
    pub fn write_trace_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let mut write = || -> std::io::Result<()> {
            writeln!(w, "time,node,event,msg_id,item")?;
            for e in self.trace() {
                let msg = e.msg_id.map(|m| m.to_string()).unwrap_or_default();
                let item = e.item.map(|i| i.to_string()).unwrap_or_default();
                writeln!(w, "{:.6},{},{},{},{}", e.time, e.node, e.kind.as_str(), msg, item)?;
            }
            w.flush()
        };
        write().map_err(|e| Error::io(path, e))
    }
}
