use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::domain::{Money, RfqId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProposalKind {
    Bundle,
    Accept,
    Counter,
    Escalate,
}

/// One human-reviewable action proposed by a bot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE", rename_all_fields = "camelCase")]
pub enum BotProposal {
    Bundle {
        member_rfq_ids: Vec<RfqId>,
        group_key: String,
        combined_quantity: Decimal,
    },
    Accept {
        member_rfq_ids: Vec<RfqId>,
        offer_price: Money,
        reference_price: Money,
    },
    Counter {
        member_rfq_ids: Vec<RfqId>,
        offer_price: Money,
        reference_price: Money,
        counter_price: Money,
    },
    Escalate {
        member_rfq_ids: Vec<RfqId>,
        reason: String,
    },
}

impl BotProposal {
    pub fn kind(&self) -> ProposalKind {
        match self {
            BotProposal::Bundle { .. } => ProposalKind::Bundle,
            BotProposal::Accept { .. } => ProposalKind::Accept,
            BotProposal::Counter { .. } => ProposalKind::Counter,
            BotProposal::Escalate { .. } => ProposalKind::Escalate,
        }
    }

    pub fn members(&self) -> &[RfqId] {
        match self {
            BotProposal::Bundle { member_rfq_ids, .. }
            | BotProposal::Accept { member_rfq_ids, .. }
            | BotProposal::Counter { member_rfq_ids, .. }
            | BotProposal::Escalate { member_rfq_ids, .. } => member_rfq_ids,
        }
    }
}
