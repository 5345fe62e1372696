use std::collections::BTreeSet;

use chrono::{DateTime, Duration, Utc};
use rust_decimal::{Decimal, RoundingStrategy};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{bundle_rfqs, negotiate_low_risk, BotProposal, BundlePolicy, GroupBy};
use crate::config::BotPolicies;
use crate::domain::{Money, MoneyUnit, Rfq, RfqId, RfqStatus, RunId, UserId};
use crate::error::{DpwError, Result};
use crate::store::StoreData;

pub const BUNDLER: &str = "bundler";
pub const NEGOTIATOR: &str = "negotiator";
pub const BOT_IDS: [&str; 2] = [BUNDLER, NEGOTIATOR];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RunStatus {
    Proposed,
    Approved,
    Rejected,
    Applied,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BotRun {
    pub run_id: RunId,
    pub bot_id: String,
    pub triggered_by: UserId,
    pub started_at: DateTime<Utc>,
    #[serde(default)]
    pub params: Value,
    pub proposals: Vec<BotProposal>,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decided_by: Option<UserId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decided_at: Option<DateTime<Utc>>,
    /// RfQs created when the run was applied.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub created_rfq_ids: Vec<RfqId>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct BundlerParams {
    group_by: Option<GroupBy>,
    window_days: Option<i64>,
    min_bundle_size: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct NegotiatorParams {
    rfq_id: RfqId,
    /// Offered unit price in EUR.
    offer_price: Decimal,
}

fn parse_params<T: serde::de::DeserializeOwned>(bot: &str, params: &Value) -> Result<T> {
    let params = if params.is_null() { Value::Object(Default::default()) } else { params.clone() };
    serde_json::from_value(params).map_err(|e| DpwError::validation(format!("invalid {bot} params: {e}")))
}

/// Latest purchase-order unit price for the RfQ's material, else the RfQ's
/// own target price.
pub fn reference_price(data: &StoreData, rfq: &Rfq) -> Money {
    data.purchase_orders
        .values()
        .filter(|po| po.material_id == rfq.material_id && po.quantity > Decimal::ZERO)
        .max_by(|a, b| a.order_date.cmp(&b.order_date).then_with(|| a.id.cmp(&b.id)))
        .and_then(|po| {
            let unit = (po.volume_eur.as_decimal_cents() / po.quantity)
                .round_dp_with_strategy(0, RoundingStrategy::MidpointAwayFromZero);
            Money::from_decimal(unit, MoneyUnit::Cents).ok()
        })
        .filter(|m| *m > Money::ZERO)
        .unwrap_or(rfq.target_price)
}

fn next_run_id(data: &StoreData) -> RunId {
    let mut n = data.bot_runs.len() + 1;
    loop {
        let id = RunId::from(format!("run-{n:04}"));
        if !data.bot_runs.contains_key(&id) {
            return id;
        }
        n += 1;
    }
}

/// Runs a registered bot against a snapshot and returns its PROPOSED run.
/// Nothing is written; the caller decides whether to persist the run.
pub fn execute_bot(
    data: &StoreData,
    bot_id: &str,
    params: &Value,
    policies: &BotPolicies,
    triggered_by: &UserId,
    now: DateTime<Utc>,
) -> Result<BotRun> {
    data.user(triggered_by)?;
    let proposals = match bot_id {
        BUNDLER => {
            let p: BundlerParams = parse_params(bot_id, params)?;
            let base = policies.bundle_policy()?;
            let policy = BundlePolicy::new(
                p.group_by.unwrap_or(base.group_by),
                p.window_days.map(Duration::days).unwrap_or(base.window),
                p.min_bundle_size.unwrap_or(base.min_bundle_size),
            )?;
            let open = data.rfqs.values().filter(|r| r.status == RfqStatus::Open);
            bundle_rfqs(open, &policy, now, |m| data.group_of(m))
        }
        NEGOTIATOR => {
            let p: NegotiatorParams = parse_params(bot_id, params)?;
            let rfq = data.rfq(&p.rfq_id)?;
            let offer = Money::from_decimal(p.offer_price, MoneyUnit::Eur)?;
            vec![negotiate_low_risk(rfq, offer, reference_price(data, rfq), &policies.negotiation_policy()?)?]
        }
        other => return Err(DpwError::not_found("bot", other)),
    };
    Ok(BotRun {
        run_id: next_run_id(data),
        bot_id: bot_id.to_string(),
        triggered_by: triggered_by.clone(),
        started_at: now,
        params: params.clone(),
        proposals,
        status: RunStatus::Proposed,
        decided_by: None,
        decided_at: None,
        created_rfq_ids: Vec::new(),
    })
}

fn open_member<'a>(data: &'a StoreData, id: &RfqId) -> Result<&'a Rfq> {
    let rfq = data
        .rfqs
        .get(id)
        .ok_or_else(|| DpwError::Conflict(format!("rfq {id} no longer exists")))?;
    if rfq.status != RfqStatus::Open {
        return Err(DpwError::Conflict(format!(
            "rfq {id} is {} (expected OPEN)",
            rfq.status.as_str()
        )));
    }
    Ok(rfq)
}

fn apply_bundle(
    data: &mut StoreData,
    run: &BotRun,
    index: usize,
    members: &[RfqId],
    now: DateTime<Utc>,
) -> Result<Vec<RfqId>> {
    let rfqs: Vec<Rfq> = members
        .iter()
        .map(|id| open_member(data, id).cloned())
        .collect::<Result<_>>()?;
    let materials: Vec<_> = rfqs
        .iter()
        .map(|r| r.material_id.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut created = Vec::new();
    for (k, material) in materials.iter().enumerate() {
        let part: Vec<&Rfq> = rfqs.iter().filter(|r| &r.material_id == material).collect();
        let id = if materials.len() == 1 {
            RfqId::from(format!("{}-b{}", run.run_id, index + 1))
        } else {
            RfqId::from(format!("{}-b{}-{}", run.run_id, index + 1, k + 1))
        };
        if data.rfqs.contains_key(&id) {
            return Err(DpwError::Conflict(format!("rfq {id} already exists")));
        }
        let departments: BTreeSet<&str> = part.iter().map(|r| r.department.as_str()).collect();
        let suppliers: BTreeSet<_> = part.iter().map(|r| r.supplier_id.clone()).collect();
        let earliest_due = part.iter().map(|r| r.due_at).min().unwrap_or(now);
        let merged = Rfq {
            id: id.clone(),
            owner_user_id: run.triggered_by.clone(),
            department: departments.into_iter().collect::<Vec<_>>().join("+"),
            supplier_id: if suppliers.len() == 1 { suppliers.into_iter().next().flatten() } else { None },
            material_id: material.clone(),
            quantity: part.iter().map(|r| r.quantity).sum(),
            target_price: part.iter().map(|r| r.target_price).min().unwrap_or_default(),
            status: RfqStatus::Open,
            created_at: now,
            due_at: earliest_due.max(now),
            status_history: vec![RfqStatus::Draft],
            superseded_by: None,
        };
        merged.validate()?;
        for member in &part {
            let m = data.rfqs.get_mut(&member.id).expect("member checked above");
            m.transition(RfqStatus::Rejected)?;
            m.superseded_by = Some(id.clone());
        }
        data.rfqs.insert(id.clone(), merged);
        created.push(id);
    }
    Ok(created)
}

fn apply_proposals(data: &mut StoreData, run: &BotRun, now: DateTime<Utc>) -> Result<Vec<RfqId>> {
    let mut created = Vec::new();
    for (i, proposal) in run.proposals.iter().enumerate() {
        match proposal {
            BotProposal::Bundle { member_rfq_ids, .. } => {
                created.extend(apply_bundle(data, run, i, member_rfq_ids, now)?);
            }
            BotProposal::Accept { member_rfq_ids, offer_price, .. } => {
                for id in member_rfq_ids {
                    open_member(data, id)?;
                    let rfq = data.rfqs.get_mut(id).expect("checked");
                    rfq.target_price = *offer_price;
                    rfq.transition(RfqStatus::Approved)?;
                }
            }
            BotProposal::Counter { member_rfq_ids, counter_price, .. } => {
                for id in member_rfq_ids {
                    open_member(data, id)?;
                    data.rfqs.get_mut(id).expect("checked").target_price = *counter_price;
                }
            }
            BotProposal::Escalate { .. } => {}
        }
    }
    Ok(created)
}

/// Approves and applies a PROPOSED run in one step. Approving an APPLIED
/// run is a no-op that returns it unchanged. Any stale member aborts the
/// whole application with a conflict; run inside [`crate::store::Store::write`]
/// so that nothing is committed in that case.
pub fn approve_run(data: &mut StoreData, run_id: &RunId, approver: &UserId, now: DateTime<Utc>) -> Result<BotRun> {
    data.user(approver)?;
    let run = data
        .bot_runs
        .get(run_id)
        .cloned()
        .ok_or_else(|| DpwError::not_found("bot run", run_id.as_str()))?;
    match run.status {
        RunStatus::Applied => return Ok(run),
        RunStatus::Rejected => {
            return Err(DpwError::Conflict(format!("run {run_id} was rejected")));
        }
        RunStatus::Proposed | RunStatus::Approved => {}
    }
    let created = apply_proposals(data, &run, now)?;
    let mut done = run;
    done.status = RunStatus::Applied;
    done.decided_by = Some(approver.clone());
    done.decided_at = Some(now);
    done.created_rfq_ids = created;
    data.bot_runs.insert(run_id.clone(), done.clone());
    Ok(done)
}

/// Rejects a PROPOSED run without touching any RfQ. Idempotent.
pub fn reject_run(data: &mut StoreData, run_id: &RunId, user: &UserId, now: DateTime<Utc>) -> Result<BotRun> {
    data.user(user)?;
    let run = data
        .bot_runs
        .get_mut(run_id)
        .ok_or_else(|| DpwError::not_found("bot run", run_id.as_str()))?;
    match run.status {
        RunStatus::Rejected => {}
        RunStatus::Proposed => {
            run.status = RunStatus::Rejected;
            run.decided_by = Some(user.clone());
            run.decided_at = Some(now);
        }
        RunStatus::Approved | RunStatus::Applied => {
            return Err(DpwError::Conflict(format!("run {run_id} was already applied")));
        }
    }
    Ok(run.clone())
}
