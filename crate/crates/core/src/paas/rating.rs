use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{Supplier, SupplierId};
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RatingResult {
    pub supplier_id: SupplierId,
    pub score: f64,
    /// weight × characteristic value, per rated characteristic.
    pub contributions: BTreeMap<String, f64>,
    pub weight_sum: f64,
}

/// Weighted mean `Σ w·v / Σ w` over characteristics that carry a positive
/// weight and are present on the supplier.
pub fn supplier_rating(supplier: &Supplier, weights: &BTreeMap<String, f64>) -> Result<RatingResult> {
    if let Some((name, w)) = weights.iter().find(|(_, w)| !w.is_finite() || **w < 0.0) {
        return Err(DpwError::validation(format!(
            "rating weight for '{name}' must be >= 0, got {w}"
        )));
    }
    let mut contributions = BTreeMap::new();
    let mut weight_sum = 0.0;
    for (name, w) in weights.iter().filter(|(_, w)| **w > 0.0) {
        if let Some(v) = supplier.characteristics.get(name) {
            contributions.insert(name.clone(), w * v);
            weight_sum += w;
        }
    }
    if contributions.is_empty() {
        return Err(DpwError::RatingUndefined(format!(
            "supplier {} shares no positively weighted characteristic",
            supplier.id
        )));
    }
    let score = contributions.values().sum::<f64>() / weight_sum;
    Ok(RatingResult {
        supplier_id: supplier.id.clone(),
        score: score.clamp(0.0, 100.0),
        contributions,
        weight_sum,
    })
}

/// Equal weight on every characteristic the supplier has.
pub fn equal_weights(supplier: &Supplier) -> BTreeMap<String, f64> {
    supplier.characteristics.keys().map(|k| (k.clone(), 1.0)).collect()
}
