use rust_decimal::{Decimal, RoundingStrategy};

use super::{BotProposal, NegotiationPolicy};
use crate::domain::{Money, MoneyUnit, Rfq, RfqStatus};
use crate::error::{DpwError, Result};

/// Decides on a supplier's unit-price offer for an OPEN RfQ.
///
/// Volumes (quantity × offer) above the policy ceiling always escalate to a
/// human. Below it, offers within `reference × (1 + acceptTolerance)` are
/// accepted and everything else is countered at
/// `reference × (1 + counterMargin)`.
pub fn negotiate_low_risk(
    rfq: &Rfq,
    offer_price: Money,
    reference_price: Money,
    policy: &NegotiationPolicy,
) -> Result<BotProposal> {
    if reference_price == Money::ZERO {
        return Err(DpwError::validation("reference price must be > 0"));
    }
    if rfq.status != RfqStatus::Open {
        return Err(DpwError::validation(format!(
            "rfq {} is {}, negotiation needs OPEN",
            rfq.id,
            rfq.status.as_str()
        )));
    }
    let members = vec![rfq.id.clone()];
    let volume_cents = rfq.quantity * offer_price.as_decimal_cents();
    if volume_cents > policy.max_volume.as_decimal_cents() {
        return Ok(BotProposal::Escalate {
            member_rfq_ids: members,
            reason: format!(
                "volume {} EUR exceeds low-risk ceiling {} EUR",
                (volume_cents / Decimal::from(100)).normalize(),
                policy.max_volume
            ),
        });
    }
    let reference = reference_price.as_decimal_cents();
    if offer_price.as_decimal_cents() <= reference * (Decimal::ONE + policy.accept_tolerance) {
        return Ok(BotProposal::Accept {
            member_rfq_ids: members,
            offer_price,
            reference_price,
        });
    }
    let counter = (reference * (Decimal::ONE + policy.counter_margin))
        .round_dp_with_strategy(0, RoundingStrategy::MidpointAwayFromZero);
    Ok(BotProposal::Counter {
        member_rfq_ids: members,
        offer_price,
        reference_price,
        counter_price: Money::from_decimal(counter, MoneyUnit::Cents)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{TimeZone, Utc};
    use rust_decimal_macros::dec;

    fn rfq(qty: Decimal) -> Rfq {
        let t = Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap();
        Rfq {
            id: "r1".into(),
            owner_user_id: "u1".into(),
            department: "A".into(),
            supplier_id: Some("s1".into()),
            material_id: "m1".into(),
            quantity: qty,
            target_price: Money::from_eur(100),
            status: RfqStatus::Open,
            created_at: t,
            due_at: t,
            status_history: vec![],
            superseded_by: None,
        }
    }

    fn policy() -> NegotiationPolicy {
        NegotiationPolicy::new(Money::from_eur(10_000), dec!(0.02), dec!(0.01)).unwrap()
    }

    #[test]
    fn offer_at_tolerance_boundary_accepted() {
        // 49 × 102 EUR = 4 998 EUR, below the 10k ceiling; offer is exactly +2%
        let p = negotiate_low_risk(&rfq(dec!(49)), Money::from_eur(102), Money::from_eur(100), &policy()).unwrap();
        assert!(matches!(p, BotProposal::Accept { .. }));
    }

    #[test]
    fn over_ceiling_escalates_regardless_of_price() {
        let p = negotiate_low_risk(&rfq(dec!(500)), Money::from_eur(100), Money::from_eur(100), &policy()).unwrap();
        assert!(matches!(p, BotProposal::Escalate { .. }));
        // 50 000 × 1 EUR = 50k EUR, far below the reference price
        let p = negotiate_low_risk(&rfq(dec!(50000)), Money::from_eur(1), Money::from_eur(100), &policy()).unwrap();
        assert!(matches!(p, BotProposal::Escalate { .. }));
    }

    #[test]
    fn far_offer_countered_at_margin() {
        let p = negotiate_low_risk(&rfq(dec!(10)), Money::from_eur(120), Money::from_eur(100), &policy()).unwrap();
        match p {
            BotProposal::Counter { counter_price, .. } => assert_eq!(counter_price, Money::from_eur(101)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_reference_rejected() {
        assert!(negotiate_low_risk(&rfq(dec!(1)), Money::from_eur(1), Money::ZERO, &policy()).is_err());
    }

    #[test]
    fn ceiling_is_inclusive() {
        // exactly at the ceiling still counts as low risk
        let p = negotiate_low_risk(&rfq(dec!(100)), Money::from_eur(100), Money::from_eur(100), &policy()).unwrap();
        assert!(matches!(p, BotProposal::Accept { .. }));
    }
}
