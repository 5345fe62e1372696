use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::export::{cell_text, Tabular};
use super::StoreData;
use crate::domain::{
    Auction, Contract, MaterialId, PurchaseOrder, Rfq, SupplierId, Task, UserId,
};
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Focus {
    User,
    Supplier,
    MaterialGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViewMode {
    UserView,
    TeamView,
    AliasView,
}

impl Focus {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_uppercase()))
            .map_err(|_| DpwError::validation(format!("unknown focus '{s}'")))
    }
}

impl ViewMode {
    pub fn parse(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        let full = if upper.ends_with("_VIEW") { upper } else { format!("{upper}_VIEW") };
        serde_json::from_value(serde_json::Value::String(full))
            .map_err(|_| DpwError::validation(format!("unknown view mode '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Scope {
    pub focus: Focus,
    pub focus_id: String,
    pub view_mode: ViewMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alias_user_id: Option<UserId>,
}

impl Scope {
    pub fn new(focus: Focus, focus_id: impl Into<String>, view_mode: ViewMode, alias: Option<UserId>) -> Result<Self> {
        let scope = Scope {
            focus,
            focus_id: focus_id.into(),
            view_mode,
            alias_user_id: alias,
        };
        scope.validate()?;
        Ok(scope)
    }

    pub fn user(user: &UserId) -> Self {
        Scope {
            focus: Focus::User,
            focus_id: user.to_string(),
            view_mode: ViewMode::UserView,
            alias_user_id: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.view_mode, &self.alias_user_id) {
            (ViewMode::AliasView, None) => Err(DpwError::validation("ALIAS_VIEW requires aliasUserId")),
            (ViewMode::AliasView, Some(_)) => Ok(()),
            (_, Some(_)) => Err(DpwError::validation("aliasUserId is only allowed with ALIAS_VIEW")),
            (_, None) => Ok(()),
        }
    }

    /// The user whose perspective the query takes: the alias in
    /// ALIAS_VIEW, the requester otherwise.
    pub fn effective_user<'a>(&'a self, requester: &'a UserId) -> &'a UserId {
        self.alias_user_id.as_ref().unwrap_or(requester)
    }
}

/// Resolved scope: the owner set and the focus predicate.
#[derive(Debug, Clone)]
pub struct ScopeFilter {
    owners: BTreeSet<UserId>,
    focus: FocusSet,
}

#[derive(Debug, Clone)]
enum FocusSet {
    Any,
    Supplier(SupplierId),
    Materials(BTreeSet<MaterialId>),
}

impl ScopeFilter {
    pub fn resolve(data: &StoreData, requester: &UserId, scope: &Scope) -> Result<Self> {
        scope.validate()?;
        data.user(requester)?;
        let user = scope.effective_user(requester);
        let owners = match scope.view_mode {
            ViewMode::TeamView => data.team_members(user)?,
            ViewMode::UserView | ViewMode::AliasView => {
                data.user(user)?;
                BTreeSet::from([user.clone()])
            }
        };
        let focus = match scope.focus {
            Focus::User => {
                data.user(&scope.focus_id.as_str().into())?;
                FocusSet::Any
            }
            Focus::Supplier => {
                let id = SupplierId::from(scope.focus_id.as_str());
                data.supplier(&id)?;
                FocusSet::Supplier(id)
            }
            Focus::MaterialGroup => {
                let groups = data.group_closure([&scope.focus_id.as_str().into()])?;
                FocusSet::Materials(data.materials_in(&groups))
            }
        };
        Ok(ScopeFilter { owners, focus })
    }

    pub fn owners(&self) -> &BTreeSet<UserId> {
        &self.owners
    }

    pub fn admits<T: ScopedRecord>(&self, record: &T) -> bool {
        if !record.owner().is_some_and(|o| self.owners.contains(o)) {
            return false;
        }
        match &self.focus {
            FocusSet::Any => true,
            FocusSet::Supplier(s) => record.suppliers().contains(&s),
            FocusSet::Materials(ms) => record.material().is_some_and(|m| ms.contains(m)),
        }
    }
}

/// An entity kind that can be listed through [`query_scoped`].
pub trait ScopedRecord: Tabular + Clone {
    const KIND: &'static str;
    fn all(data: &StoreData) -> Vec<&Self>;
    fn id_str(&self) -> &str;
    fn owner(&self) -> Option<&UserId>;
    fn suppliers(&self) -> Vec<&SupplierId>;
    fn material(&self) -> Option<&MaterialId>;
    /// Sort key; ISO timestamps and dates order lexicographically.
    fn created_key(&self) -> String;
    fn search_text(&self) -> Vec<&str>;
}

/// `field=value` clauses joined by `;`, all of which must hold.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FilterExpr(Vec<(String, String)>);

impl FilterExpr {
    pub fn parse(text: &str, fields: &[&str]) -> Result<Self> {
        let mut clauses = Vec::new();
        for clause in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (field, value) = clause
                .split_once('=')
                .ok_or_else(|| DpwError::validation(format!("malformed filter clause '{clause}'")))?;
            let field = field.trim();
            if field.is_empty() {
                return Err(DpwError::validation(format!("malformed filter clause '{clause}'")));
            }
            if !fields.contains(&field) {
                return Err(DpwError::validation_with(
                    format!("unknown filter field '{field}'"),
                    fields.iter().map(|f| f.to_string()).collect(),
                ));
            }
            clauses.push((field.to_string(), value.trim().to_string()));
        }
        Ok(FilterExpr(clauses))
    }

    pub fn matches(&self, row: &serde_json::Value) -> bool {
        self.0.iter().all(|(field, value)| {
            cell_text(row.get(field).unwrap_or(&serde_json::Value::Null)) == *value
        })
    }
}

/// Lists records of kind `T` visible under `scope`, ordered by creation
/// time then id.
pub fn query_scoped<T: ScopedRecord>(
    data: &StoreData,
    requester: &UserId,
    scope: &Scope,
    filter: Option<&str>,
    search: Option<&str>,
) -> Result<Vec<T>> {
    let resolved = ScopeFilter::resolve(data, requester, scope)?;
    let filter = filter.map(|f| FilterExpr::parse(f, T::COLUMNS)).transpose()?;
    let needle = search.map(str::to_lowercase).filter(|s| !s.is_empty());
    let mut rows: Vec<&T> = T::all(data)
        .into_iter()
        .filter(|r| resolved.admits(*r))
        .filter(|r| {
            needle.as_ref().is_none_or(|n| {
                r.search_text().iter().any(|t| t.to_lowercase().contains(n.as_str()))
            })
        })
        .filter(|r| {
            filter.as_ref().is_none_or(|f| {
                serde_json::to_value(r).map(|v| f.matches(&v)).unwrap_or(false)
            })
        })
        .collect();
    rows.sort_by(|a, b| {
        a.created_key()
            .cmp(&b.created_key())
            .then_with(|| a.id_str().cmp(b.id_str()))
    });
    Ok(rows.into_iter().cloned().collect())
}

fn rfc3339(t: &chrono::DateTime<chrono::Utc>) -> String {
    t.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

impl ScopedRecord for Rfq {
    const KIND: &'static str = "rfqs";
    fn all(data: &StoreData) -> Vec<&Self> {
        data.rfqs.values().collect()
    }
    fn id_str(&self) -> &str {
        self.id.as_str()
    }
    fn owner(&self) -> Option<&UserId> {
        Some(&self.owner_user_id)
    }
    fn suppliers(&self) -> Vec<&SupplierId> {
        self.supplier_id.iter().collect()
    }
    fn material(&self) -> Option<&MaterialId> {
        Some(&self.material_id)
    }
    fn created_key(&self) -> String {
        rfc3339(&self.created_at)
    }
    fn search_text(&self) -> Vec<&str> {
        vec![self.id.as_str(), self.department.as_str(), self.material_id.as_str()]
    }
}

impl ScopedRecord for Auction {
    const KIND: &'static str = "auctions";
    fn all(data: &StoreData) -> Vec<&Self> {
        data.auctions.values().collect()
    }
    fn id_str(&self) -> &str {
        self.id.as_str()
    }
    fn owner(&self) -> Option<&UserId> {
        Some(&self.owner_user_id)
    }
    fn suppliers(&self) -> Vec<&SupplierId> {
        self.supplier_bids.iter().map(|b| &b.supplier_id).collect()
    }
    fn material(&self) -> Option<&MaterialId> {
        self.material_id.as_ref()
    }
    fn created_key(&self) -> String {
        self.created_at.as_ref().map(rfc3339).unwrap_or_default()
    }
    fn search_text(&self) -> Vec<&str> {
        let mut t = vec![self.id.as_str()];
        t.extend(self.material_id.as_ref().map(|m| m.as_str()));
        t
    }
}

impl ScopedRecord for PurchaseOrder {
    const KIND: &'static str = "purchaseOrders";
    fn all(data: &StoreData) -> Vec<&Self> {
        data.purchase_orders.values().collect()
    }
    fn id_str(&self) -> &str {
        self.id.as_str()
    }
    fn owner(&self) -> Option<&UserId> {
        Some(&self.owner_user_id)
    }
    fn suppliers(&self) -> Vec<&SupplierId> {
        vec![&self.supplier_id]
    }
    fn material(&self) -> Option<&MaterialId> {
        Some(&self.material_id)
    }
    fn created_key(&self) -> String {
        self.order_date.to_string()
    }
    fn search_text(&self) -> Vec<&str> {
        vec![self.id.as_str(), self.department.as_str(), self.material_id.as_str()]
    }
}

impl ScopedRecord for Contract {
    const KIND: &'static str = "contracts";
    fn all(data: &StoreData) -> Vec<&Self> {
        data.contracts.values().collect()
    }
    fn id_str(&self) -> &str {
        self.id.as_str()
    }
    fn owner(&self) -> Option<&UserId> {
        Some(&self.owner_user_id)
    }
    fn suppliers(&self) -> Vec<&SupplierId> {
        vec![&self.supplier_id]
    }
    fn material(&self) -> Option<&MaterialId> {
        None
    }
    fn created_key(&self) -> String {
        self.valid_from.to_string()
    }
    fn search_text(&self) -> Vec<&str> {
        vec![self.id.as_str(), self.supplier_id.as_str()]
    }
}

impl ScopedRecord for Task {
    const KIND: &'static str = "tasks";
    fn all(data: &StoreData) -> Vec<&Self> {
        data.tasks.values().collect()
    }
    fn id_str(&self) -> &str {
        self.id.as_str()
    }
    fn owner(&self) -> Option<&UserId> {
        Some(&self.assignee_user_id)
    }
    fn suppliers(&self) -> Vec<&SupplierId> {
        Vec::new()
    }
    fn material(&self) -> Option<&MaterialId> {
        None
    }
    fn created_key(&self) -> String {
        String::new()
    }
    fn search_text(&self) -> Vec<&str> {
        vec![self.title.as_str()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Money, RfqStatus, User};
    use chrono::{TimeZone, Utc};
    use rust_decimal::Decimal;

    fn rfq(id: &str, owner: &str, supplier: &str, day: u32) -> Rfq {
        let t = Utc.with_ymd_and_hms(2024, 3, day, 0, 0, 0).unwrap();
        Rfq {
            id: id.into(),
            owner_user_id: owner.into(),
            department: "Assembly".into(),
            supplier_id: Some(supplier.into()),
            material_id: "m1".into(),
            quantity: Decimal::ONE,
            target_price: Money::from_eur(1),
            status: RfqStatus::Open,
            created_at: t,
            due_at: t,
            status_history: vec![],
            superseded_by: None,
        }
    }

    fn fixture() -> StoreData {
        let mut d = StoreData::default();
        for (u, t) in [("u1", "t1"), ("u2", "t1"), ("u3", "t2")] {
            d.users.insert(u.into(), User::new(u, u, t));
        }
        d.suppliers.insert(
            "s1".into(),
            serde_json::from_value(serde_json::json!({"id":"s1","name":"S1","sectorCode":"x","totalRevenue":1})).unwrap(),
        );
        for r in [rfq("r1", "u1", "s1", 3), rfq("r2", "u1", "s2", 1), rfq("r3", "u2", "s1", 2), rfq("r4", "u3", "s1", 4)] {
            d.rfqs.insert(r.id.clone(), r);
        }
        d
    }

    fn ids(rows: &[Rfq]) -> Vec<&str> {
        rows.iter().map(|r| r.id.as_str()).collect()
    }

    #[test]
    fn view_modes() {
        let d = fixture();
        let u1: UserId = "u1".into();
        let user = query_scoped::<Rfq>(&d, &u1, &Scope::user(&u1), None, None).unwrap();
        assert_eq!(ids(&user), ["r2", "r1"]);
        let team = Scope::new(Focus::User, "u1", ViewMode::TeamView, None).unwrap();
        assert_eq!(query_scoped::<Rfq>(&d, &u1, &team, None, None).unwrap().len(), 3);
        let alias = Scope::new(Focus::User, "u1", ViewMode::AliasView, Some("u3".into())).unwrap();
        let as_u3 = query_scoped::<Rfq>(&d, &u1, &alias, None, None).unwrap();
        let u3: UserId = "u3".into();
        assert_eq!(as_u3, query_scoped::<Rfq>(&d, &u3, &Scope::user(&u3), None, None).unwrap());
        assert_eq!(ids(&as_u3), ["r4"]);
    }

    #[test]
    fn supplier_focus_and_filters() {
        let d = fixture();
        let u1: UserId = "u1".into();
        let s = Scope::new(Focus::Supplier, "s1", ViewMode::TeamView, None).unwrap();
        assert_eq!(ids(&query_scoped::<Rfq>(&d, &u1, &s, None, None).unwrap()), ["r3", "r1"]);
        let filtered = query_scoped::<Rfq>(&d, &u1, &s, Some("ownerUserId=u2"), None).unwrap();
        assert_eq!(ids(&filtered), ["r3"]);
        assert!(query_scoped::<Rfq>(&d, &u1, &s, Some("nonsense"), None).is_err());
        assert!(query_scoped::<Rfq>(&d, &u1, &s, Some("colour=red"), None).is_err());
        let searched = query_scoped::<Rfq>(&d, &u1, &s, None, Some("R3")).unwrap();
        assert_eq!(ids(&searched), ["r3"]);
        let bad = Scope::new(Focus::Supplier, "s9", ViewMode::UserView, None).unwrap();
        assert!(matches!(
            query_scoped::<Rfq>(&d, &u1, &bad, None, None),
            Err(DpwError::NotFound { .. })
        ));
    }

    #[test]
    fn alias_consistency_guard() {
        assert!(Scope::new(Focus::User, "u1", ViewMode::AliasView, None).is_err());
        assert!(Scope::new(Focus::User, "u1", ViewMode::UserView, Some("u2".into())).is_err());
        assert_eq!(ViewMode::parse("team").unwrap(), ViewMode::TeamView);
        assert_eq!(Focus::parse("material_group").unwrap(), Focus::MaterialGroup);
    }
}
