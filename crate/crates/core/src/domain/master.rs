//! Master data: suppliers, materials and material groups.

use std::collections::BTreeMap;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::{MaterialGroupId, MaterialId, Money, SupplierId};
use crate::error::{DpwError, Result};

/// A supplier's dependency on a sub-supplier for one material.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SubSupplierLink {
    pub supplier_id: SupplierId,
    pub material_id: MaterialId,
    /// Units of the sub-supplier's material consumed per unit of the parent's product.
    pub quantity_per_unit: Decimal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Supplier {
    pub id: SupplierId,
    pub name: String,
    pub sector_code: String,
    /// Annual revenue.
    pub total_revenue: Money,
    /// Corporate carbon footprint in tCO2e per year, when the supplier reports one.
    #[serde(default)]
    pub reported_ccf: Option<Decimal>,
    /// Product carbon footprints in tCO2e per unit, keyed by material.
    #[serde(default)]
    pub reported_pcf_by_material: BTreeMap<MaterialId, Decimal>,
    /// Rating characteristics, each scored in [0, 100].
    #[serde(default)]
    pub characteristics: BTreeMap<String, f64>,
    #[serde(default)]
    pub sub_suppliers: Vec<SubSupplierLink>,
}

impl Supplier {
    /// Checks the record-local invariants. Cycles across suppliers are
    /// checked by [`crate::domain::detect_cycle`].
    pub fn validate(&self) -> Result<()> {
        if self.id.as_str().is_empty() {
            return Err(DpwError::validation("supplier id must not be empty"));
        }
        if let Some(ccf) = self.reported_ccf {
            if ccf.is_sign_negative() && !ccf.is_zero() {
                return Err(DpwError::validation(format!(
                    "reportedCcf must be >= 0, got {ccf}"
                )));
            }
        }
        for (material, pcf) in &self.reported_pcf_by_material {
            if pcf.is_sign_negative() && !pcf.is_zero() {
                return Err(DpwError::validation(format!(
                    "reported PCF for material {material} must be >= 0, got {pcf}"
                )));
            }
        }
        for (name, score) in &self.characteristics {
            if !score.is_finite() || !(0.0..=100.0).contains(score) {
                return Err(DpwError::validation(format!(
                    "characteristic '{name}' must be in [0,100], got {score}"
                )));
            }
        }
        for link in &self.sub_suppliers {
            if link.quantity_per_unit <= Decimal::ZERO {
                return Err(DpwError::validation(format!(
                    "quantityPerUnit must be > 0 for sub-supplier {}",
                    link.supplier_id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MaterialGroup {
    pub id: MaterialGroupId,
    pub name: String,
    #[serde(default)]
    pub parent_id: Option<MaterialGroupId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Material {
    pub id: MaterialId,
    pub material_group_id: MaterialGroupId,
    pub name: String,
    pub unit: String,
    /// Database product footprint in tCO2e per unit.
    #[serde(default)]
    pub database_pcf: Option<Decimal>,
    pub sector_code: String,
}

impl Material {
    pub fn validate(&self) -> Result<()> {
        if let Some(pcf) = self.database_pcf {
            if pcf.is_sign_negative() && !pcf.is_zero() {
                return Err(DpwError::validation(format!(
                    "databasePcf must be >= 0, got {pcf}"
                )));
            }
        }
        Ok(())
    }
}
