use crate::{ItemId, NodeId};

pub type MsgId = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MessageKind {
    QueryRequest,
    QueryReply,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Message {
    pub kind: MessageKind,
    pub msg_id: MsgId,
    /// Node that created the message: the requester for a query, the
    /// answering node for a reply.
    pub origin: NodeId,
    /// Requester a reply is meant for; `None` on queries.
    pub destination: Option<NodeId>,
    pub item: ItemId,
    /// Remaining hop budget; a message arriving with `ttl == 1` is not forwarded.
    pub ttl: u32,
    /// Transmissions since creation, counted on arrival.
    pub hops: u32,
    /// The query a reply answers.
    pub in_reply_to: Option<MsgId>,
}

impl Message {
    pub fn query(msg_id: MsgId, origin: NodeId, item: ItemId, ttl: u32) -> Self {
        Message {
            kind: MessageKind::QueryRequest,
            msg_id,
            origin,
            destination: None,
            item,
            ttl,
            hops: 0,
            in_reply_to: None,
        }
    }

    /// Reply from `responder` to `query`.
    pub fn reply_to(query: &Message, msg_id: MsgId, responder: NodeId, ttl: u32) -> Self {
        Message {
            kind: MessageKind::QueryReply,
            msg_id,
            origin: responder,
            destination: Some(query.origin),
            item: query.item,
            ttl,
            hops: 0,
            in_reply_to: Some(query.msg_id),
        }
    }

    /// Copy for the next hop with the TTL decremented.
    pub fn forwarded(&self) -> Self {
        Message {
            ttl: self.ttl - 1,
            ..*self
        }
    }
}
