use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{MaterialGroupId, Money, SupplierId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ShareResult {
    pub material_group_ids: Vec<MaterialGroupId>,
    /// Fraction of the groups' volume per supplier; empty when there is no volume.
    pub shares: BTreeMap<SupplierId, f64>,
}

/// Each supplier's fraction of the summed volume.
pub fn shares_from_volumes(
    material_group_ids: Vec<MaterialGroupId>,
    volumes: &BTreeMap<SupplierId, Money>,
) -> ShareResult {
    let total: u64 = volumes.values().map(|m| m.cents()).sum();
    let shares = if total == 0 {
        BTreeMap::new()
    } else {
        volumes
            .iter()
            .map(|(s, v)| (s.clone(), v.cents() as f64 / total as f64))
            .collect()
    };
    ShareResult {
        material_group_ids,
        shares,
    }
}
