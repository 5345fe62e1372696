use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::bots::BotRun;
use crate::domain::{
    Auction, AuctionId, Contract, ContractId, Material, MaterialGroup, MaterialGroupId, MaterialId,
    NewsId, NewsItem, ProcessId, ProcessInstance, PurchaseOrder, PurchaseOrderId, Rfq, RfqId,
    RunId, SourceId, Supplier, SupplierId, Task, TaskId, User, UserId,
};
use crate::error::{DpwError, Result};
use crate::sss::EmissionFactor;

/// External link that users can bookmark.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Link {
    pub id: String,
    pub title: String,
    pub url: String,
}

/// A teammate flagged a news item for the rest of the team.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Suggestion {
    pub news_id: NewsId,
    pub user_id: UserId,
    pub at: DateTime<Utc>,
}

/// Everything the workspace persists. Maps are ordered so that the JSON
/// encoding, and therefore the store hash, is canonical.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct StoreData {
    pub suppliers: BTreeMap<SupplierId, Supplier>,
    pub material_groups: BTreeMap<MaterialGroupId, MaterialGroup>,
    pub materials: BTreeMap<MaterialId, Material>,
    pub rfqs: BTreeMap<RfqId, Rfq>,
    pub auctions: BTreeMap<AuctionId, Auction>,
    pub purchase_orders: BTreeMap<PurchaseOrderId, PurchaseOrder>,
    pub contracts: BTreeMap<ContractId, Contract>,
    pub users: BTreeMap<UserId, User>,
    pub processes: BTreeMap<ProcessId, ProcessInstance>,
    pub tasks: BTreeMap<TaskId, Task>,
    pub news: BTreeMap<NewsId, NewsItem>,
    /// Keyed by `scope:key`, see [`crate::sss::factor_key`].
    pub emission_factors: BTreeMap<String, EmissionFactor>,
    pub links: BTreeMap<String, Link>,
    pub suggestions: BTreeSet<Suggestion>,
    pub bot_runs: BTreeMap<RunId, BotRun>,
    /// `kind:id` of every imported record mapped to the source that wrote it.
    pub provenance: BTreeMap<String, SourceId>,
}

impl StoreData {
    pub fn user(&self, id: &UserId) -> Result<&User> {
        self.users.get(id).ok_or_else(|| DpwError::not_found("user", id.as_str()))
    }

    pub fn user_mut(&mut self, id: &UserId) -> Result<&mut User> {
        self.users
            .get_mut(id)
            .ok_or_else(|| DpwError::not_found("user", id.as_str()))
    }

    pub fn supplier(&self, id: &SupplierId) -> Result<&Supplier> {
        self.suppliers
            .get(id)
            .ok_or_else(|| DpwError::not_found("supplier", id.as_str()))
    }

    pub fn rfq(&self, id: &RfqId) -> Result<&Rfq> {
        self.rfqs.get(id).ok_or_else(|| DpwError::not_found("rfq", id.as_str()))
    }

    pub fn team_members(&self, user: &UserId) -> Result<BTreeSet<UserId>> {
        let team = &self.user(user)?.team_id;
        Ok(self
            .users
            .values()
            .filter(|u| &u.team_id == team)
            .map(|u| u.id.clone())
            .collect())
    }

    /// The given groups together with all of their descendants.
    pub fn group_closure<'a>(
        &self,
        roots: impl IntoIterator<Item = &'a MaterialGroupId>,
    ) -> Result<BTreeSet<MaterialGroupId>> {
        let mut out = BTreeSet::new();
        for root in roots {
            if !self.material_groups.contains_key(root) {
                return Err(DpwError::not_found("material group", root.as_str()));
            }
            out.insert(root.clone());
        }
        // parent links are acyclic, so iterating to a fixpoint terminates
        loop {
            let before = out.len();
            for g in self.material_groups.values() {
                if g.parent_id.as_ref().is_some_and(|p| out.contains(p)) {
                    out.insert(g.id.clone());
                }
            }
            if out.len() == before {
                return Ok(out);
            }
        }
    }

    pub fn group_of(&self, material: &MaterialId) -> Option<MaterialGroupId> {
        self.materials.get(material).map(|m| m.material_group_id.clone())
    }

    /// Materials whose group lies in `groups`.
    pub fn materials_in(&self, groups: &BTreeSet<MaterialGroupId>) -> BTreeSet<MaterialId> {
        self.materials
            .values()
            .filter(|m| groups.contains(&m.material_group_id))
            .map(|m| m.id.clone())
            .collect()
    }

    /// Suppliers that have delivered (purchase order) or been asked for
    /// (RfQ) a material in `groups`.
    pub fn suppliers_of_groups(&self, groups: &BTreeSet<MaterialGroupId>) -> BTreeSet<SupplierId> {
        let materials = self.materials_in(groups);
        let mut out: BTreeSet<SupplierId> = self
            .purchase_orders
            .values()
            .filter(|po| materials.contains(&po.material_id))
            .map(|po| po.supplier_id.clone())
            .collect();
        out.extend(
            self.rfqs
                .values()
                .filter(|r| materials.contains(&r.material_id))
                .filter_map(|r| r.supplier_id.clone()),
        );
        out.extend(
            self.suppliers
                .values()
                .filter(|s| s.reported_pcf_by_material.keys().any(|m| materials.contains(m)))
                .map(|s| s.id.clone()),
        );
        out
    }
}
