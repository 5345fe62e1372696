//! Procurement transaction records.

use chrono::{DateTime, NaiveDate, Utc};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::{AuctionId, ContractId, MaterialId, Money, PurchaseOrderId, RfqId, SupplierId, UserId};
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RfqStatus {
    Draft,
    Open,
    Approved,
    Rejected,
    Ordered,
}

impl RfqStatus {
    pub const ALL: [RfqStatus; 5] = [
        RfqStatus::Draft,
        RfqStatus::Open,
        RfqStatus::Approved,
        RfqStatus::Rejected,
        RfqStatus::Ordered,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RfqStatus::Draft => "DRAFT",
            RfqStatus::Open => "OPEN",
            RfqStatus::Approved => "APPROVED",
            RfqStatus::Rejected => "REJECTED",
            RfqStatus::Ordered => "ORDERED",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        RfqStatus::ALL
            .into_iter()
            .find(|s| s.as_str().eq_ignore_ascii_case(text.trim()))
    }
}

/// RfQ lifecycle: DRAFT→OPEN, OPEN→APPROVED, OPEN→REJECTED, APPROVED→ORDERED.
pub fn validate_transition(from: RfqStatus, to: RfqStatus) -> bool {
    use RfqStatus::*;
    matches!(
        (from, to),
        (Draft, Open) | (Open, Approved) | (Open, Rejected) | (Approved, Ordered)
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Rfq {
    pub id: RfqId,
    pub owner_user_id: UserId,
    pub department: String,
    #[serde(default)]
    pub supplier_id: Option<SupplierId>,
    pub material_id: MaterialId,
    pub quantity: Decimal,
    /// Target unit price.
    pub target_price: Money,
    pub status: RfqStatus,
    pub created_at: DateTime<Utc>,
    pub due_at: DateTime<Utc>,
    /// Statuses the RfQ passed through before `status`, oldest first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub status_history: Vec<RfqStatus>,
    /// Set when a bundle replaced this RfQ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superseded_by: Option<RfqId>,
}

impl Rfq {
    pub fn validate(&self) -> Result<()> {
        if self.quantity <= Decimal::ZERO {
            return Err(DpwError::validation("quantity must be > 0"));
        }
        if self.due_at < self.created_at {
            return Err(DpwError::validation("dueAt must be >= createdAt"));
        }
        let mut trail = self.status_history.clone();
        trail.push(self.status);
        if let Some(pair) = trail.windows(2).find(|w| !validate_transition(w[0], w[1])) {
            return Err(DpwError::validation(format!(
                "invalid status transition {} -> {}",
                pair[0].as_str(),
                pair[1].as_str()
            )));
        }
        Ok(())
    }

    /// Moves the RfQ to `to`, recording the previous status.
    pub fn transition(&mut self, to: RfqStatus) -> Result<()> {
        if !validate_transition(self.status, to) {
            return Err(DpwError::Conflict(format!(
                "rfq {} cannot move from {} to {}",
                self.id,
                self.status.as_str(),
                to.as_str()
            )));
        }
        self.status_history.push(self.status);
        self.status = to;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SupplierBid {
    pub supplier_id: SupplierId,
    pub price: Money,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AuctionStatus {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Auction {
    pub id: AuctionId,
    pub owner_user_id: UserId,
    #[serde(default)]
    pub material_id: Option<MaterialId>,
    #[serde(default)]
    pub supplier_bids: Vec<SupplierBid>,
    pub status: AuctionStatus,
    #[serde(default)]
    pub created_at: Option<DateTime<Utc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PurchaseOrder {
    pub id: PurchaseOrderId,
    pub supplier_id: SupplierId,
    pub material_id: MaterialId,
    pub volume_eur: Money,
    pub quantity: Decimal,
    pub order_date: NaiveDate,
    pub department: String,
    pub owner_user_id: UserId,
}

impl PurchaseOrder {
    pub fn validate(&self) -> Result<()> {
        if self.quantity <= Decimal::ZERO {
            return Err(DpwError::validation("quantity must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Contract {
    pub id: ContractId,
    pub supplier_id: SupplierId,
    pub owner_user_id: UserId,
    pub valid_from: NaiveDate,
    pub valid_to: NaiveDate,
}

impl Contract {
    pub fn validate(&self) -> Result<()> {
        if self.valid_to < self.valid_from {
            return Err(DpwError::validation("validTo must be >= validFrom"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;
    use rust_decimal_macros::dec;
    use RfqStatus::*;

    #[test]
    fn transition_table() {
        assert!(validate_transition(Draft, Open));
        assert!(!validate_transition(Open, Draft));
        assert!(!validate_transition(Approved, Approved));
        let allowed: Vec<_> = RfqStatus::ALL
            .iter()
            .flat_map(|&a| RfqStatus::ALL.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| validate_transition(a, b))
            .collect();
        assert_eq!(
            allowed,
            vec![(Draft, Open), (Open, Approved), (Open, Rejected), (Approved, Ordered)]
        );
    }

    fn rfq(status: RfqStatus, history: Vec<RfqStatus>) -> Rfq {
        let created = Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap();
        Rfq {
            id: "r1".into(),
            owner_user_id: "u1".into(),
            department: "Purchasing".into(),
            supplier_id: None,
            material_id: "m1".into(),
            quantity: dec!(5),
            target_price: Money::from_eur(3),
            status,
            created_at: created,
            due_at: created,
            status_history: history,
            superseded_by: None,
        }
    }

    #[test]
    fn history_replay_is_checked() {
        rfq(Ordered, vec![Draft, Open, Approved]).validate().unwrap();
        assert!(rfq(Ordered, vec![Draft, Open]).validate().is_err());
    }

    #[test]
    fn transition_appends_history() {
        let mut r = rfq(Open, vec![Draft]);
        r.transition(Approved).unwrap();
        assert_eq!(r.status_history, vec![Draft, Open]);
        assert!(r.transition(Open).is_err());
    }

    #[test]
    fn quantity_and_dates_checked() {
        let mut r = rfq(Open, vec![]);
        r.quantity = dec!(-5);
        assert_eq!(r.validate().unwrap_err().to_string(), "quantity must be > 0");
        let mut r = rfq(Open, vec![]);
        r.due_at = r.created_at - chrono::Duration::days(1);
        assert!(r.validate().is_err());
    }

    #[test]
    fn status_parse_is_case_insensitive() {
        assert_eq!(RfqStatus::parse("open"), Some(Open));
        assert_eq!(RfqStatus::parse("closed"), None);
    }
}
