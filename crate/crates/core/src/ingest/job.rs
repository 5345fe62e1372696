use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::normalize::{normalize_record, Entity, RawRecord};
use super::{SourceConfig, SourceKind};
use crate::config::Config;
use crate::domain::{detect_cycle, validate_transition, SourceId, Supplier, SupplierId};
use crate::error::{DpwError, Result};
use crate::store::{Store, StoreData};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SkippedRecord {
    pub record_locator: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ImportReport {
    pub source_id: SourceId,
    pub kind: SourceKind,
    pub started: DateTime<Utc>,
    pub finished: DateTime<Utc>,
    pub inserted: usize,
    pub updated: usize,
    pub unchanged: usize,
    pub skipped: usize,
    pub skipped_reasons: Vec<SkippedRecord>,
}

impl ImportReport {
    pub fn total(&self) -> usize {
        self.inserted + self.updated + self.unchanged + self.skipped
    }

    fn skip(&mut self, locator: &str, reason: impl Into<String>) {
        self.skipped += 1;
        self.skipped_reasons.push(SkippedRecord {
            record_locator: locator.to_string(),
            reason: reason.into(),
        });
    }
}

/// Splits a payload into located raw records. Any syntax error rejects the
/// whole payload.
pub fn parse_payload(kind: SourceKind, payload: &[u8]) -> Result<Vec<(String, RawRecord)>> {
    let text = std::str::from_utf8(payload).map_err(|e| DpwError::Parse(format!("payload is not UTF-8: {e}")))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    match kind {
        SourceKind::PurchaseOrdersCsv | SourceKind::EmissionFactorsCsv | SourceKind::ContractsCsv => {
            let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
            let headers: Vec<String> = reader
                .headers()
                .map_err(|e| DpwError::Parse(format!("csv header: {e}")))?
                .iter()
                .map(|h| h.trim().to_string())
                .collect();
            if headers.iter().all(String::is_empty) {
                return Err(DpwError::Parse("csv header row is missing".into()));
            }
            let mut out = Vec::new();
            for (i, rec) in reader.records().enumerate() {
                let rec = rec.map_err(|e| DpwError::Parse(format!("csv row {}: {e}", i + 1)))?;
                let raw: RawRecord = headers
                    .iter()
                    .cloned()
                    .zip(rec.iter().map(|v| Value::String(v.to_string())))
                    .collect();
                out.push((format!("row {}", i + 1), raw));
            }
            Ok(out)
        }
        SourceKind::RfqsJsonl => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, line)| {
                serde_json::from_str::<RawRecord>(line)
                    .map(|raw| (format!("line {}", i + 1), raw))
                    .map_err(|e| DpwError::Parse(format!("jsonl line {}: {e}", i + 1)))
            })
            .collect(),
        SourceKind::SuppliersJson | SourceKind::NewsJson | SourceKind::AuctionsJson => {
            let items: Vec<RawRecord> =
                serde_json::from_str(text).map_err(|e| DpwError::Parse(format!("json: {e}")))?;
            Ok(items
                .into_iter()
                .enumerate()
                .map(|(i, raw)| (format!("[{i}]"), raw))
                .collect())
        }
    }
}

fn locate(locator: &str, raw: &RawRecord) -> String {
    match raw.get("id") {
        Some(Value::String(id)) if !id.is_empty() => format!("{locator} (id {id})"),
        Some(Value::Number(id)) => format!("{locator} (id {id})"),
        _ => locator.to_string(),
    }
}

enum Outcome {
    Inserted,
    Updated,
    Unchanged,
}

struct Upserter<'a> {
    config: &'a Config,
    source: &'a SourceId,
}

impl Upserter<'_> {
    /// Inserts or replaces `value`, respecting the source priority: a record
    /// last written by a higher-priority source is never overwritten.
    fn upsert<K: Ord + Clone + std::fmt::Display, V: PartialEq>(
        &self,
        map: &mut BTreeMap<K, V>,
        provenance: &mut BTreeMap<String, SourceId>,
        kind: &str,
        key: K,
        value: V,
    ) -> std::result::Result<Outcome, String> {
        let pkey = format!("{kind}:{key}");
        match map.get(&key) {
            Some(old) if *old == value => Ok(Outcome::Unchanged),
            existing => {
                if existing.is_some() {
                    if let Some(owner) = provenance.get(&pkey) {
                        if owner != self.source
                            && self.config.source_rank(owner) < self.config.source_rank(self.source)
                        {
                            return Err(format!("owned by higher-priority source {owner}"));
                        }
                    }
                }
                let inserted = existing.is_none();
                map.insert(key, value);
                provenance.insert(pkey, self.source.clone());
                Ok(if inserted { Outcome::Inserted } else { Outcome::Updated })
            }
        }
    }
}

fn check_refs(data: &StoreData, entity: &Entity) -> std::result::Result<(), String> {
    let supplier = |id: &SupplierId| {
        if data.suppliers.contains_key(id) { Ok(()) } else { Err(format!("unknown supplier {id}")) }
    };
    let material = |id: &crate::domain::MaterialId| {
        if data.materials.contains_key(id) { Ok(()) } else { Err(format!("unknown material {id}")) }
    };
    match entity {
        Entity::PurchaseOrder(po) => {
            supplier(&po.supplier_id)?;
            material(&po.material_id)
        }
        Entity::Rfq(r) => {
            if let Some(s) = &r.supplier_id {
                supplier(s)?;
            }
            material(&r.material_id)
        }
        Entity::Contract(c) => supplier(&c.supplier_id),
        Entity::Auction(a) => {
            if let Some(m) = &a.material_id {
                material(m)?;
            }
            a.supplier_bids.iter().try_for_each(|b| supplier(&b.supplier_id))
        }
        Entity::Supplier(_) | Entity::EmissionFactor(_) | Entity::News(_) => Ok(()),
    }
}

/// Removes batch suppliers that would leave a dangling sub-supplier link or
/// close a cycle, reporting each with a reason.
fn admit_suppliers(
    data: &StoreData,
    batch: Vec<(String, Supplier)>,
    report: &mut ImportReport,
) -> Vec<(String, Supplier)> {
    let mut batch = batch;
    loop {
        let mut universe: BTreeMap<SupplierId, &Supplier> = data.suppliers.iter().map(|(k, v)| (k.clone(), v)).collect();
        for (_, s) in &batch {
            universe.insert(s.id.clone(), s);
        }
        let dangling = batch.iter().enumerate().find_map(|(i, (_, s))| {
            s.sub_suppliers
                .iter()
                .find(|l| !universe.contains_key(&l.supplier_id))
                .map(|l| (i, l.supplier_id.clone()))
        });
        if let Some((i, missing)) = dangling {
            let (loc, _) = batch.remove(i);
            report.skip(&loc, format!("unknown sub-supplier {missing}"));
            continue;
        }
        match detect_cycle(universe.values().copied()) {
            Ok(Some(path)) => {
                let on_cycle: BTreeSet<&SupplierId> = path.iter().collect();
                let text = path.iter().map(|p| p.as_str()).collect::<Vec<_>>().join(" -> ");
                let (drop, keep): (Vec<_>, Vec<_>) =
                    batch.into_iter().partition(|(_, s)| on_cycle.contains(&s.id));
                for (loc, _) in &drop {
                    report.skip(loc, format!("sub-supplier cycle: {text}"));
                }
                batch = keep;
                if drop.is_empty() {
                    return batch;
                }
            }
            _ => return batch,
        }
    }
}

/// Normalizes and upserts one payload into `data`. Per-record problems are
/// reported and skipped; a payload that cannot be parsed fails as a whole
/// before anything is touched.
pub fn import_into(
    data: &mut StoreData,
    config: &Config,
    source: &SourceConfig,
    payload: &[u8],
    report: &mut ImportReport,
) -> Result<()> {
    let records = parse_payload(source.kind, payload)?;
    let up = Upserter {
        config,
        source: &source.source_id,
    };

    let mut entities = Vec::with_capacity(records.len());
    for (locator, raw) in &records {
        match normalize_record(raw, &source.field_mapping, source.kind, &config.gwp_table) {
            // a mapped id column only becomes visible after normalization
            Ok(e) => entities.push((format!("{locator} (id {})", e.natural_id()), e)),
            Err(e) => report.skip(&locate(locator, raw), e.to_string()),
        }
    }

    if source.kind == SourceKind::SuppliersJson {
        let batch = entities
            .into_iter()
            .filter_map(|(loc, e)| match e {
                Entity::Supplier(s) => Some((loc, s)),
                _ => None,
            })
            .collect();
        entities = admit_suppliers(data, batch, report)
            .into_iter()
            .map(|(loc, s)| (loc, Entity::Supplier(s)))
            .collect();
    }

    for (loc, entity) in entities {
        if let Err(reason) = check_refs(data, &entity) {
            report.skip(&loc, reason);
            continue;
        }
        let prov = &mut data.provenance;
        let outcome = match entity {
            Entity::PurchaseOrder(e) => up.upsert(&mut data.purchase_orders, prov, "purchaseOrder", e.id.clone(), e),
            Entity::Supplier(e) => up.upsert(&mut data.suppliers, prov, "supplier", e.id.clone(), e),
            Entity::EmissionFactor(e) => up.upsert(&mut data.emission_factors, prov, "emissionFactor", e.natural_key(), e),
            Entity::News(e) => up.upsert(&mut data.news, prov, "news", e.id.clone(), e),
            Entity::Contract(e) => up.upsert(&mut data.contracts, prov, "contract", e.id.clone(), e),
            Entity::Auction(e) => up.upsert(&mut data.auctions, prov, "auction", e.id.clone(), e),
            Entity::Rfq(mut e) => {
                if let Some(old) = data.rfqs.get(&e.id) {
                    // the store owns the lifecycle bookkeeping
                    e.status_history = old.status_history.clone();
                    e.superseded_by = old.superseded_by.clone();
                    if old.status != e.status {
                        if !validate_transition(old.status, e.status) {
                            report.skip(
                                &loc,
                                format!("invalid status transition {} -> {}", old.status.as_str(), e.status.as_str()),
                            );
                            continue;
                        }
                        e.status_history.push(old.status);
                    }
                }
                up.upsert(&mut data.rfqs, prov, "rfq", e.id.clone(), e)
            }
        };
        match outcome {
            Ok(Outcome::Inserted) => report.inserted += 1,
            Ok(Outcome::Updated) => report.updated += 1,
            Ok(Outcome::Unchanged) => report.unchanged += 1,
            Err(reason) => report.skip(&loc, reason),
        }
    }
    Ok(())
}

/// Runs one import job as a single store transaction and records the
/// report in the import history.
pub fn run_import_job(
    store: &Store,
    config: &Config,
    source: &SourceConfig,
    payload: &[u8],
    clock: impl Fn() -> DateTime<Utc>,
) -> Result<ImportReport> {
    let started = clock();
    let mut report = ImportReport {
        source_id: source.source_id.clone(),
        kind: source.kind,
        started,
        finished: started,
        inserted: 0,
        updated: 0,
        unchanged: 0,
        skipped: 0,
        skipped_reasons: Vec::new(),
    };
    report = store.write(|data| {
        let mut r = report.clone();
        import_into(data, config, source, payload, &mut r)?;
        Ok(r)
    })?;
    report.finished = clock();
    store.record_import(report.clone())?;
    Ok(report)
}
