//! Discrete-event simulation of the flooding query/reply protocol.
//!
//! Nodes sit on a static unit-disk topology. A node that misses in its cache
//! floods a query; any node holding the item (in cache or as its origin)
//! floods a reply back, and every node the reply crosses caches the item
//! before passing it on. TTL and a per-node seen set bound every flood.

mod message;
mod topology;
mod world;

pub use message::{Message, MessageKind, MsgId};
pub use topology::{assign_origins, build_topology, Topology};
pub use world::{NetConfig, NodeState, SimWorld, TraceEvent, TraceKind};
