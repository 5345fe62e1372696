use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use rust_decimal::Decimal;

use super::{BotProposal, BundlePolicy, GroupBy};
use crate::domain::{MaterialGroupId, MaterialId, Rfq, RfqStatus};

/// Groups recent OPEN RfQs by material (or material group) and proposes one
/// bundle per group that spans at least two departments and reaches the
/// minimum size. RfQs created outside `[now - window, now]` are ignored.
pub fn bundle_rfqs<'a>(
    open_rfqs: impl IntoIterator<Item = &'a Rfq>,
    policy: &BundlePolicy,
    now: DateTime<Utc>,
    group_of: impl Fn(&MaterialId) -> Option<MaterialGroupId>,
) -> Vec<BotProposal> {
    let earliest = now - policy.window;
    let mut groups: BTreeMap<String, Vec<&Rfq>> = BTreeMap::new();
    for rfq in open_rfqs {
        if rfq.status != RfqStatus::Open || rfq.created_at < earliest || rfq.created_at > now {
            continue;
        }
        let key = match policy.group_by {
            GroupBy::Material => Some(rfq.material_id.to_string()),
            GroupBy::MaterialGroup => group_of(&rfq.material_id).map(|g| g.to_string()),
        };
        if let Some(key) = key {
            groups.entry(key).or_default().push(rfq);
        }
    }

    groups
        .into_iter()
        .filter_map(|(key, mut members)| {
            members.sort_by(|a, b| a.created_at.cmp(&b.created_at).then_with(|| a.id.cmp(&b.id)));
            members.dedup_by(|a, b| a.id == b.id);
            let departments: BTreeSet<&str> = members.iter().map(|r| r.department.as_str()).collect();
            if members.len() < policy.min_bundle_size || departments.len() < 2 {
                return None;
            }
            Some(BotProposal::Bundle {
                combined_quantity: members.iter().map(|r| r.quantity).sum::<Decimal>(),
                member_rfq_ids: members.iter().map(|r| r.id.clone()).collect(),
                group_key: key,
            })
        })
        .collect()
}
