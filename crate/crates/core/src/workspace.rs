//! Store-backed operations shared by the HTTP API and the admin CLI.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use chrono::{DateTime, Datelike, Utc};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::domain::{
    Material, MaterialGroup, MaterialGroupId, Money, ProcessInstance, RfqId, Supplier, SupplierId,
    Task, User,
};
use crate::error::{DpwError, Result};
use crate::ingest::{fetch_payload, run_import_job, ImportReport, SourceConfig};
use crate::paas::{
    equal_weights, shares_from_volumes, supplier_rating, DateRange, RatingResult, ShareResult,
};
use crate::pis::{cluster_news_with, NewsCluster, Stopwords};
use crate::sss::{
    aggregate_chain, detect_risks, rank_alternatives, score_subject, with_chain, Alternative,
    ChainAggregate, ScoreObservation, ScoreSubject, SupplyGraph, SustainabilityAlert,
    SustainabilityScore,
};
use crate::store::{Link, Store, StoreData};

/// Configuration plus the store it points at.
#[derive(Debug)]
pub struct Workspace {
    pub config: Config,
    pub store: Store,
}

/// Master data that no silo delivers: users, the material catalogue,
/// processes, tasks and links.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct MasterData {
    pub users: Vec<User>,
    pub material_groups: Vec<MaterialGroup>,
    pub materials: Vec<Material>,
    pub processes: Vec<ProcessInstance>,
    pub tasks: Vec<Task>,
    pub links: Vec<Link>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeedReport {
    pub users: usize,
    pub material_groups: usize,
    pub materials: usize,
    pub processes: usize,
    pub tasks: usize,
    pub links: usize,
}

pub const MASTER_FILE: &str = "master.json";

/// Validates master data and writes it into `data`, replacing records
/// with the same id.
pub fn apply_master(data: &mut StoreData, master: MasterData) -> Result<SeedReport> {
    let report = SeedReport {
        users: master.users.len(),
        material_groups: master.material_groups.len(),
        materials: master.materials.len(),
        processes: master.processes.len(),
        tasks: master.tasks.len(),
        links: master.links.len(),
    };
    for g in master.material_groups {
        data.material_groups.insert(g.id.clone(), g);
    }
    // parent links must resolve and be acyclic
    for g in data.material_groups.values() {
        let mut seen = BTreeSet::from([&g.id]);
        let mut cur = g.parent_id.as_ref();
        while let Some(p) = cur {
            let parent = data
                .material_groups
                .get(p)
                .ok_or_else(|| DpwError::validation(format!("material group {} has unknown parent {p}", g.id)))?;
            if !seen.insert(&parent.id) {
                return Err(DpwError::validation(format!("material group cycle through {p}")));
            }
            cur = parent.parent_id.as_ref();
        }
    }
    for m in master.materials {
        m.validate()?;
        if !data.material_groups.contains_key(&m.material_group_id) {
            return Err(DpwError::validation(format!(
                "material {} references unknown group {}",
                m.id, m.material_group_id
            )));
        }
        data.materials.insert(m.id.clone(), m);
    }
    for mut u in master.users {
        if let Some(old) = data.users.get(&u.id) {
            // keep what the user did in the workspace
            u.favorites = old.favorites.clone();
            u.reading_history = old.reading_history.clone();
            u.layout = old.layout.clone();
        }
        data.users.insert(u.id.clone(), u);
    }
    for p in master.processes {
        p.validate()?;
        data.processes.insert(p.id.clone(), p);
    }
    for t in master.tasks {
        data.user(&t.assignee_user_id)?;
        data.tasks.insert(t.id.clone(), t);
    }
    for l in master.links {
        data.links.insert(l.id.clone(), l);
    }
    Ok(report)
}

impl Workspace {
    pub fn open(config: Config) -> Result<Self> {
        let store = Store::open(config.store_file())?;
        Ok(Workspace { config, store })
    }

    pub fn in_memory(config: Config, data: StoreData) -> Self {
        Workspace {
            config,
            store: Store::in_memory(data),
        }
    }

    /// Loads `master.json` from a fixture directory.
    pub fn seed(&self, dir: &Path) -> Result<SeedReport> {
        let path = dir.join(MASTER_FILE);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| DpwError::Io(format!("cannot read {}: {e}", path.display())))?;
        let master: MasterData = serde_json::from_str(&text)
            .map_err(|e| DpwError::Parse(format!("{}: {e}", path.display())))?;
        self.store.write(|d| apply_master(d, master))
    }

    pub fn import_source(&self, source: &SourceConfig, now: impl Fn() -> DateTime<Utc>) -> Result<ImportReport> {
        let payload = fetch_payload(&self.config, source)?;
        run_import_job(&self.store, &self.config, source, &payload, now)
    }

    /// Sources in dependency order: suppliers and factors before the
    /// records that reference them, configuration order otherwise.
    pub fn import_order(&self) -> Vec<&SourceConfig> {
        let mut sources: Vec<(usize, &SourceConfig)> = self.config.sources.iter().enumerate().collect();
        sources.sort_by_key(|(i, s)| (s.kind.import_order(), *i));
        sources.into_iter().map(|(_, s)| s).collect()
    }

    pub fn clusters(&self, data: &StoreData) -> Result<Vec<NewsCluster>> {
        let owned;
        let stop = match &self.config.pis.stopwords_path {
            Some(p) => {
                let path = self.config.resolve(p);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| DpwError::Io(format!("cannot read {}: {e}", path.display())))?;
                owned = Stopwords::parse(&text);
                &owned
            }
            None => Stopwords::builtin(),
        };
        let items: Vec<_> = data.news.values().cloned().collect();
        cluster_news_with(&items, self.config.pis.sim_threshold, self.config.pis.summary_sentences, stop)
    }

    pub fn rating_weights(&self, supplier: &Supplier) -> BTreeMap<String, f64> {
        if self.config.paas.rating_weights.is_empty() {
            equal_weights(supplier)
        } else {
            self.config.paas.rating_weights.clone()
        }
    }
}

/// Calendar year of the most recent purchase order.
pub fn latest_order_year(data: &StoreData) -> Option<i32> {
    data.purchase_orders.values().map(|po| po.order_date.year()).max()
}

pub fn supply_graph(data: &StoreData) -> SupplyGraph {
    data.suppliers
        .values()
        .map(|s| (s.id.clone(), s.sub_suppliers.clone()))
        .collect()
}

/// A score optionally extended with its supply-chain aggregation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScoreReport {
    #[serde(flatten)]
    pub score: SustainabilityScore,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainAggregate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<i32>,
}

/// Each supplier's own score value for the period; suppliers without
/// emission data are absent and show up as chain gaps.
pub fn node_scores(data: &StoreData, year: Option<i32>, now: DateTime<Utc>) -> BTreeMap<SupplierId, Decimal> {
    data.suppliers
        .keys()
        .filter_map(|id| {
            score_subject(data, ScoreSubject::Supplier(id.clone()), year, now)
                .ok()
                .map(|s| (id.clone(), s.value_tco2e))
        })
        .collect()
}

pub fn supplier_score(
    data: &StoreData,
    id: &SupplierId,
    year: Option<i32>,
    chain: bool,
    now: DateTime<Utc>,
) -> Result<ScoreReport> {
    data.supplier(id)?;
    let score = score_subject(data, ScoreSubject::Supplier(id.clone()), year, now)?;
    if !chain {
        return Ok(ScoreReport {
            score,
            chain: None,
            period: year,
        });
    }
    let agg = aggregate_chain(id, &supply_graph(data), &node_scores(data, year, now))?;
    Ok(ScoreReport {
        score: with_chain(score, &agg),
        chain: Some(agg),
        period: year,
    })
}

pub fn rfq_score(data: &StoreData, id: &RfqId, now: DateTime<Utc>) -> Result<ScoreReport> {
    Ok(ScoreReport {
        score: score_subject(data, ScoreSubject::Rfq(id.clone()), None, now)?,
        chain: None,
        period: None,
    })
}

/// Supplier volumes within the groups (and their descendants) and range.
pub fn material_group_share(
    data: &StoreData,
    group_ids: &[MaterialGroupId],
    range: Option<DateRange>,
) -> Result<ShareResult> {
    let groups = data.group_closure(group_ids)?;
    let materials = data.materials_in(&groups);
    let mut volumes: BTreeMap<SupplierId, Money> = BTreeMap::new();
    for po in data.purchase_orders.values() {
        if materials.contains(&po.material_id) && range.is_none_or(|r| r.contains(po.order_date)) {
            *volumes.entry(po.supplier_id.clone()).or_default() += po.volume_eur;
        }
    }
    Ok(shares_from_volumes(group_ids.to_vec(), &volumes))
}

/// Score threshold and increase alerts per supplier (latest order year
/// against the year before) and single-source alerts per top-level
/// material group.
pub fn alerts(data: &StoreData, config: &Config, now: DateTime<Utc>) -> Result<Vec<SustainabilityAlert>> {
    let Some(year) = latest_order_year(data) else {
        return Ok(Vec::new());
    };
    let observations: Vec<ScoreObservation> = data
        .suppliers
        .keys()
        .filter_map(|id| {
            let subject = ScoreSubject::Supplier(id.clone());
            let latest = score_subject(data, subject.clone(), Some(year), now).ok()?;
            let previous = score_subject(data, subject.clone(), Some(year - 1), now).ok();
            Some(ScoreObservation {
                subject,
                latest: latest.value_tco2e,
                previous: previous.map(|p| p.value_tco2e),
            })
        })
        .collect();
    let range = DateRange::year(year)?;
    let shares = data
        .material_groups
        .values()
        .filter(|g| g.parent_id.is_none())
        .map(|g| material_group_share(data, std::slice::from_ref(&g.id), Some(range)))
        .collect::<Result<Vec<_>>>()?;
    Ok(detect_risks(&observations, &shares, &config.thresholds))
}

/// Greener suppliers for the groups the current supplier serves (or the
/// given group), scored over the same period.
pub fn alternatives(
    ws: &Workspace,
    data: &StoreData,
    current: &SupplierId,
    group: Option<&MaterialGroupId>,
    min_rating: f64,
    year: Option<i32>,
    now: DateTime<Utc>,
) -> Result<Vec<Alternative>> {
    data.supplier(current)?;
    let groups: BTreeSet<MaterialGroupId> = match group {
        Some(g) => data.group_closure([g])?,
        None => {
            let served: BTreeSet<MaterialGroupId> = data
                .purchase_orders
                .values()
                .filter(|po| &po.supplier_id == current)
                .filter_map(|po| data.group_of(&po.material_id))
                .collect();
            data.group_closure(served.iter())?
        }
    };
    let candidates = data
        .suppliers_of_groups(&groups)
        .into_iter()
        .filter_map(|id| {
            let score = score_subject(data, ScoreSubject::Supplier(id.clone()), year, now).ok()?;
            let supplier = data.suppliers.get(&id)?;
            let rating = supplier_rating(supplier, &ws.rating_weights(supplier)).ok().map(|r| r.score);
            Some(Alternative {
                supplier_id: id,
                value_tco2e: score.value_tco2e,
                rating,
            })
        })
        .collect();
    Ok(rank_alternatives(candidates, current, min_rating))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SupplierView {
    pub supplier: Supplier,
    pub rating: Option<RatingResult>,
    pub material_group_ids: Vec<MaterialGroupId>,
    pub purchase_volume_eur: Money,
}

pub fn supplier_view(ws: &Workspace, data: &StoreData, id: &SupplierId) -> Result<SupplierView> {
    let supplier = data.supplier(id)?.clone();
    let rating = supplier_rating(&supplier, &ws.rating_weights(&supplier)).ok();
    let orders: Vec<_> = data.purchase_orders.values().filter(|po| &po.supplier_id == id).collect();
    let material_group_ids = orders
        .iter()
        .filter_map(|po| data.group_of(&po.material_id))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(SupplierView {
        purchase_volume_eur: orders.iter().map(|po| po.volume_eur).sum(),
        supplier,
        rating,
        material_group_ids,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Co2Row {
    pub supplier_id: SupplierId,
    pub name: String,
    pub stage: Option<u8>,
    #[serde(rename = "valueTCO2e")]
    pub value_tco2e: Option<Decimal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Co2Report {
    pub period: i32,
    pub rows: Vec<Co2Row>,
    #[serde(rename = "totalTCO2e")]
    pub total_tco2e: Decimal,
}

/// Per-supplier scores for one calendar year. Suppliers without emission
/// data are listed with empty values and excluded from the total.
pub fn co2_report(data: &StoreData, year: i32, now: DateTime<Utc>) -> Co2Report {
    let rows: Vec<Co2Row> = data
        .suppliers
        .values()
        .map(|s| {
            let score = score_subject(data, ScoreSubject::Supplier(s.id.clone()), Some(year), now).ok();
            Co2Row {
                supplier_id: s.id.clone(),
                name: s.name.clone(),
                stage: score.as_ref().map(|x| x.stage.number()),
                value_tco2e: score.map(|x| x.value_tco2e),
            }
        })
        .collect();
    Co2Report {
        period: year,
        total_tco2e: rows.iter().filter_map(|r| r.value_tco2e).sum(),
        rows,
    }
}

impl Co2Report {
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.supplier_id.to_string(),
                    r.name.clone(),
                    r.stage.map(|s| s.to_string()).unwrap_or_default(),
                    r.value_tco2e.map(|v| v.normalize().to_string()).unwrap_or_default(),
                ]
            })
            .collect();
        crate::store::write_csv(&["supplierId", "name", "stage", "valueTCO2e"], &rows)
    }
}
