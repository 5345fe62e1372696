use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::normalize::{parse_target, Target};
use crate::config::Config;
use crate::domain::SourceId;
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SourceKind {
    PurchaseOrdersCsv,
    RfqsJsonl,
    SuppliersJson,
    EmissionFactorsCsv,
    NewsJson,
    ContractsCsv,
    AuctionsJson,
}

impl SourceKind {
    pub const ALL: [SourceKind; 7] = [
        SourceKind::SuppliersJson,
        SourceKind::EmissionFactorsCsv,
        SourceKind::PurchaseOrdersCsv,
        SourceKind::RfqsJsonl,
        SourceKind::ContractsCsv,
        SourceKind::AuctionsJson,
        SourceKind::NewsJson,
    ];

    /// Position in a full import: master data and factors before the
    /// transactions that reference them.
    pub fn import_order(self) -> usize {
        SourceKind::ALL.iter().position(|k| *k == self).unwrap_or(usize::MAX)
    }

    /// Domain fields every record of this kind must carry.
    pub fn required_fields(self) -> &'static [&'static str] {
        match self {
            SourceKind::PurchaseOrdersCsv => &[
                "id",
                "supplierId",
                "materialId",
                "volumeEur",
                "quantity",
                "orderDate",
                "department",
                "ownerUserId",
            ],
            SourceKind::RfqsJsonl => &[
                "id",
                "ownerUserId",
                "department",
                "materialId",
                "quantity",
                "targetPrice",
                "status",
                "createdAt",
                "dueAt",
            ],
            SourceKind::SuppliersJson => &["id", "name", "sectorCode", "totalRevenue"],
            SourceKind::EmissionFactorsCsv => &["scope", "key", "value", "unit", "sourceName"],
            SourceKind::NewsJson => &["id", "sourceId", "title", "body", "publishedAt"],
            SourceKind::ContractsCsv => &["id", "supplierId", "ownerUserId", "validFrom", "validTo"],
            SourceKind::AuctionsJson => &["id", "ownerUserId", "status"],
        }
    }

    /// Fields that hold money and accept a unit annotation.
    pub fn money_fields(self) -> &'static [&'static str] {
        match self {
            SourceKind::PurchaseOrdersCsv => &["volumeEur"],
            SourceKind::RfqsJsonl => &["targetPrice"],
            SourceKind::SuppliersJson => &["totalRevenue"],
            _ => &[],
        }
    }

    pub fn optional_fields(self) -> &'static [&'static str] {
        match self {
            SourceKind::RfqsJsonl => &["supplierId", "statusHistory"],
            SourceKind::SuppliersJson => &[
                "reportedCcf",
                "reportedPcfByMaterial",
                "characteristics",
                "subSuppliers",
            ],
            SourceKind::NewsJson => &["topics"],
            SourceKind::AuctionsJson => &["supplierBids", "materialId", "createdAt"],
            _ => &[],
        }
    }

    pub fn known_field(self, field: &str) -> bool {
        self.required_fields().contains(&field) || self.optional_fields().contains(&field)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceConfig {
    pub source_id: SourceId,
    pub kind: SourceKind,
    /// File path (relative to the config file) or URL.
    pub location: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<String>,
    /// Source column → domain field, optionally annotated with a unit as
    /// in `volumeEur(kEUR)`. Unmapped columns are converted from
    /// snake_case to camelCase.
    #[serde(default)]
    pub field_mapping: BTreeMap<String, String>,
}

impl SourceConfig {
    pub fn new(source_id: impl Into<SourceId>, kind: SourceKind, location: impl Into<String>) -> Self {
        SourceConfig {
            source_id: source_id.into(),
            kind,
            location: location.into(),
            schedule: None,
            field_mapping: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.source_id.as_str().is_empty() {
            return Err(DpwError::validation("sourceId must not be empty"));
        }
        if self.location.trim().is_empty() {
            return Err(DpwError::validation(format!("source {}: location must not be empty", self.source_id)));
        }
        for (column, target) in &self.field_mapping {
            let Target { field, unit } = parse_target(target)
                .map_err(|e| DpwError::validation(format!("source {} column {column}: {e}", self.source_id)))?;
            if !self.kind.known_field(&field) {
                return Err(DpwError::validation(format!(
                    "source {}: column {column} maps to unknown field {field}",
                    self.source_id
                )));
            }
            if unit.is_some() && !self.kind.money_fields().contains(&field.as_str()) {
                return Err(DpwError::validation(format!(
                    "source {}: unit annotation on non-money field {field}",
                    self.source_id
                )));
            }
        }
        Ok(())
    }

    pub fn is_remote(&self) -> bool {
        let l = self.location.trim_start().to_ascii_lowercase();
        l.starts_with("http://") || l.starts_with("https://")
    }
}

/// The connector boundary: turns a source location into raw bytes. Only
/// file locations are wired up; a network fetcher would slot in here.
pub fn fetch_payload(config: &Config, source: &SourceConfig) -> Result<Vec<u8>> {
    if source.is_remote() {
        return Err(DpwError::Io(format!(
            "source {}: network connectors not configured ({})",
            source.source_id, source.location
        )));
    }
    let path = config.resolve(std::path::Path::new(&source.location));
    std::fs::read(&path).map_err(|e| DpwError::Io(format!("cannot read {}: {e}", path.display())))
}
