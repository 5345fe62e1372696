//! Staged sustainability score of a supplier, material or RfQ.

use std::collections::BTreeMap;

use chrono::{DateTime, Datelike, Utc};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::stages::{
    select_stage, stage1_monetary_ccf, stage2_sector_ccf, stage3_product_pcf, stage4_reported_pcf,
    Stage,
};
use super::{factor_key, EmissionFactor, FactorScope};
use crate::domain::{Material, MaterialId, Money, RfqId, Supplier, SupplierId};
use crate::error::{DpwError, Result};
use crate::store::StoreData;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum ScoreSubject {
    Supplier(SupplierId),
    Material(MaterialId),
    Rfq(RfqId),
}

impl std::fmt::Display for ScoreSubject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScoreSubject::Supplier(id) => write!(f, "supplier:{id}"),
            ScoreSubject::Material(id) => write!(f, "material:{id}"),
            ScoreSubject::Rfq(id) => write!(f, "rfq:{id}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Footprint {
    /// Corporate carbon footprint (stages 1–2).
    Ccf,
    /// Product carbon footprint (stages 3–4).
    Pcf,
}

/// Candidate tCO2e values of one emission component, one slot per stage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageCandidates([Option<Decimal>; 4]);

impl StageCandidates {
    pub fn with(mut self, stage: Stage, value: Decimal) -> Self {
        self.set(stage, value);
        self
    }

    pub fn set(&mut self, stage: Stage, value: Decimal) {
        self.0[usize::from(stage.number() - 1)] = Some(value);
    }

    pub fn get(&self, stage: Stage) -> Option<Decimal> {
        self.0[usize::from(stage.number() - 1)]
    }

    pub fn available(&self) -> impl Iterator<Item = Stage> + '_ {
        Stage::ALL.into_iter().filter(|s| self.get(*s).is_some())
    }

    /// The candidate of the highest available stage.
    pub fn best(&self) -> Option<(Stage, Decimal)> {
        select_stage(self.available()).and_then(|s| self.get(s).map(|v| (s, v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInput {
    pub label: String,
    pub candidates: StageCandidates,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BreakdownEntry {
    pub component_label: String,
    pub stage_used: Option<Stage>,
    pub contribution: Decimal,
    /// Supplier path from the scored root; empty for the subject's own components.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<SupplierId>,
    /// No stage could be computed for this component.
    #[serde(default)]
    pub gap: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SustainabilityScore {
    pub subject: ScoreSubject,
    pub stage: Stage,
    pub footprint: Footprint,
    #[serde(rename = "valueTCO2e")]
    pub value_tco2e: Decimal,
    pub breakdown: Vec<BreakdownEntry>,
    pub computed_at: DateTime<Utc>,
}

/// Picks the highest available stage per component and sums the results.
/// Components with no stage at all are kept as gap entries; if every
/// component is a gap the subject has no emission data.
pub fn compute_score(
    subject: ScoreSubject,
    components: &[ComponentInput],
    computed_at: DateTime<Utc>,
) -> Result<SustainabilityScore> {
    let breakdown: Vec<BreakdownEntry> = components
        .iter()
        .map(|c| match c.candidates.best() {
            Some((stage, value)) => BreakdownEntry {
                component_label: c.label.clone(),
                stage_used: Some(stage),
                contribution: value,
                path: Vec::new(),
                gap: false,
            },
            None => BreakdownEntry {
                component_label: c.label.clone(),
                stage_used: None,
                contribution: Decimal::ZERO,
                path: Vec::new(),
                gap: true,
            },
        })
        .collect();
    let stage = select_stage(breakdown.iter().filter_map(|e| e.stage_used))
        .ok_or_else(|| DpwError::NoEmissionData(subject.to_string()))?;
    let value_tco2e = breakdown.iter().map(|e| e.contribution).sum();
    Ok(SustainabilityScore {
        subject,
        stage,
        footprint: if stage.is_product_footprint() {
            Footprint::Pcf
        } else {
            Footprint::Ccf
        },
        value_tco2e,
        breakdown,
        computed_at,
    })
}

/// Purchases of one material from one supplier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurchaseLine {
    pub supplier_id: Option<SupplierId>,
    pub material_id: MaterialId,
    pub spend: Money,
    pub quantity: Decimal,
}

/// Evaluates every stage that the store has data for on one purchase line.
pub fn line_candidates(data: &StoreData, line: &PurchaseLine) -> StageCandidates {
    let supplier: Option<&Supplier> = line.supplier_id.as_ref().and_then(|id| data.suppliers.get(id));
    let material: Option<&Material> = data.materials.get(&line.material_id);
    let mut c = StageCandidates::default();

    if let Some(s) = supplier {
        if let Some(ccf) = s.reported_ccf {
            if let Ok(v) = stage1_monetary_ccf(line.spend, s.total_revenue, ccf) {
                c.set(Stage::MonetaryCcf, v);
            }
        }
    }

    let sector_factor = supplier
        .and_then(|s| data.emission_factors.get(&factor_key(FactorScope::Sector, &s.sector_code)))
        .or_else(|| {
            material.and_then(|m| {
                data.emission_factors
                    .get(&factor_key(FactorScope::Sector, &m.sector_code))
            })
        });
    if let Some(f) = sector_factor {
        if let Ok(v) = stage2_sector_ccf(line.spend, f) {
            c.set(Stage::SectorCcf, v);
        }
    }

    let product_factor = data
        .emission_factors
        .get(&factor_key(FactorScope::Product, line.material_id.as_str()))
        .cloned()
        .or_else(|| {
            material.and_then(|m| {
                m.database_pcf.map(|pcf| {
                    EmissionFactor::product(m.id.as_str(), pcf, "material master")
                })
            })
        });
    if let Some(f) = product_factor {
        if let Ok(v) = stage3_product_pcf(line.material_id.as_str(), line.quantity, &f) {
            c.set(Stage::DatabasePcf, v);
        }
    }

    if let Some(s) = supplier {
        if let Some(v) = stage4_reported_pcf(
            line.quantity,
            s.reported_pcf_by_material.get(&line.material_id).copied(),
        ) {
            c.set(Stage::ReportedPcf, v);
        }
    }
    c
}

/// Purchase lines behind a subject. Suppliers and materials aggregate
/// purchase orders (optionally restricted to one calendar year) per
/// supplier/material pair; an RfQ is a single line priced at its target price.
pub fn purchase_lines(data: &StoreData, subject: &ScoreSubject, year: Option<i32>) -> Result<Vec<PurchaseLine>> {
    let in_year = |d: chrono::NaiveDate| year.is_none_or(|y| d.year() == y);
    let mut grouped: BTreeMap<(SupplierId, MaterialId), (Money, Decimal)> = BTreeMap::new();
    match subject {
        ScoreSubject::Supplier(id) => {
            if !data.suppliers.contains_key(id) {
                return Err(DpwError::not_found("supplier", id.as_str()));
            }
            for po in data.purchase_orders.values() {
                if &po.supplier_id == id && in_year(po.order_date) {
                    let e = grouped
                        .entry((po.supplier_id.clone(), po.material_id.clone()))
                        .or_default();
                    e.0 += po.volume_eur;
                    e.1 += po.quantity;
                }
            }
        }
        ScoreSubject::Material(id) => {
            if !data.materials.contains_key(id) {
                return Err(DpwError::not_found("material", id.as_str()));
            }
            for po in data.purchase_orders.values() {
                if &po.material_id == id && in_year(po.order_date) {
                    let e = grouped
                        .entry((po.supplier_id.clone(), po.material_id.clone()))
                        .or_default();
                    e.0 += po.volume_eur;
                    e.1 += po.quantity;
                }
            }
        }
        ScoreSubject::Rfq(id) => {
            let rfq = data
                .rfqs
                .get(id)
                .ok_or_else(|| DpwError::not_found("rfq", id.as_str()))?;
            let spend = Money::from_decimal(
                rfq.target_price.as_eur() * rfq.quantity,
                crate::domain::MoneyUnit::Eur,
            )?;
            return Ok(vec![PurchaseLine {
                supplier_id: rfq.supplier_id.clone(),
                material_id: rfq.material_id.clone(),
                spend,
                quantity: rfq.quantity,
            }]);
        }
    }
    Ok(grouped
        .into_iter()
        .map(|((supplier_id, material_id), (spend, quantity))| PurchaseLine {
            supplier_id: Some(supplier_id),
            material_id,
            spend,
            quantity,
        })
        .collect())
}

/// Gathers the subject's purchase lines from the store and scores them.
pub fn score_subject(
    data: &StoreData,
    subject: ScoreSubject,
    year: Option<i32>,
    computed_at: DateTime<Utc>,
) -> Result<SustainabilityScore> {
    let components: Vec<ComponentInput> = purchase_lines(data, &subject, year)?
        .iter()
        .map(|line| ComponentInput {
            label: match &line.supplier_id {
                Some(s) => format!("{s}/{}", line.material_id),
                None => line.material_id.to_string(),
            },
            candidates: line_candidates(data, line),
        })
        .collect();
    compute_score(subject, &components, computed_at)
}
