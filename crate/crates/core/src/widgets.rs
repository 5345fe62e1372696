//! Widget registry and payloads for the dashboard.

use chrono::{DateTime, Datelike, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Config;
use crate::domain::{Auction, AuctionStatus, Contract, MaterialGroupId, PurchaseOrder, Rfq, RfqStatus, Task, UserId};
use crate::error::{DpwError, Result};
use crate::paas::{forecast_volume, volume_series, Bucketing, DateRange, ForecastMethod};
use crate::store::{cell_text, query_scoped, write_csv, Focus, Scope, StoreData};
use crate::workspace::{latest_order_year, material_group_share};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DefaultView {
    Table,
    Chart,
}

pub const WIDGETS: [(&str, DefaultView); 8] = [
    ("total_po_volume", DefaultView::Chart),
    ("supplier_auctions", DefaultView::Table),
    ("supplier_rfqs", DefaultView::Chart),
    ("open_rfqs", DefaultView::Table),
    ("contracts", DefaultView::Table),
    ("material_group_share", DefaultView::Chart),
    ("volume_forecast", DefaultView::Chart),
    ("tasks", DefaultView::Table),
];

pub fn default_view(widget_id: &str) -> Option<DefaultView> {
    WIDGETS.iter().find(|(id, _)| *id == widget_id).map(|(_, v)| *v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WidgetRequest {
    pub scope: Scope,
    pub filter: Option<String>,
    pub search: Option<String>,
    pub range: Option<DateRange>,
    pub bucketing: Bucketing,
    pub horizon: usize,
}

impl WidgetRequest {
    pub fn new(scope: Scope) -> Self {
        WidgetRequest {
            scope,
            filter: None,
            search: None,
            range: None,
            bucketing: Bucketing::Month,
            horizon: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WidgetMeta {
    pub scope: Scope,
    pub store_revision: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<DateRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bucketing: Option<Bucketing>,
}

/// Money values are integer euro cents, as everywhere in the API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WidgetPayload {
    pub widget_id: String,
    pub default_view: DefaultView,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub meta: WidgetMeta,
}

impl WidgetPayload {
    /// The same columns and rows as CSV.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell_text).collect()).collect();
        write_csv(&self.columns, &rows)
    }
}

fn table<T: Serialize>(records: &[T], columns: &[&str]) -> Result<Vec<Vec<Value>>> {
    records
        .iter()
        .map(|r| {
            let v = serde_json::to_value(r)?;
            Ok(columns.iter().map(|c| v.get(*c).cloned().unwrap_or(Value::Null)).collect())
        })
        .collect()
}

fn default_range(data: &StoreData, now: DateTime<Utc>) -> Result<DateRange> {
    DateRange::year(latest_order_year(data).unwrap_or_else(|| now.year()))
}

/// Builds one widget for `requester` under the request's scope.
pub fn render_widget(
    data: &StoreData,
    revision: u64,
    config: &Config,
    requester: &UserId,
    widget_id: &str,
    req: &WidgetRequest,
    now: DateTime<Utc>,
) -> Result<WidgetPayload> {
    let view = default_view(widget_id).ok_or_else(|| DpwError::not_found("widget", widget_id))?;
    let filter = req.filter.as_deref();
    let search = req.search.as_deref();
    let mut meta = WidgetMeta {
        scope: req.scope.clone(),
        store_revision: revision,
        range: None,
        bucketing: None,
    };
    let (columns, rows): (Vec<&str>, Vec<Vec<Value>>) = match widget_id {
        "total_po_volume" => {
            let range = req.range.map_or_else(|| default_range(data, now), Ok)?;
            let orders = query_scoped::<PurchaseOrder>(data, requester, &req.scope, filter, search)?;
            let series = volume_series(&orders, range, req.bucketing);
            meta.range = Some(range);
            meta.bucketing = Some(req.bucketing);
            let rows = series
                .points
                .iter()
                .map(|p| vec![json!(p.period_start), json!(p.volume_eur)])
                .collect();
            (vec!["periodStart", "volumeEur"], rows)
        }
        "supplier_auctions" => {
            let auctions: Vec<Auction> = query_scoped::<Auction>(data, requester, &req.scope, filter, search)?
                .into_iter()
                .filter(|a| a.status == AuctionStatus::Open)
                .collect();
            let rows = auctions
                .iter()
                .map(|a| {
                    vec![
                        json!(a.id),
                        json!(a.material_id),
                        json!(a.status),
                        json!(a.supplier_bids.len()),
                        json!(a.supplier_bids.iter().map(|b| b.price).min()),
                        json!(a.created_at),
                    ]
                })
                .collect();
            (vec!["id", "materialId", "status", "bidCount", "bestBid", "createdAt"], rows)
        }
        "supplier_rfqs" => {
            let rfqs = query_scoped::<Rfq>(data, requester, &req.scope, filter, search)?;
            let rows = RfqStatus::ALL
                .iter()
                .map(|s| vec![json!(s), json!(rfqs.iter().filter(|r| r.status == *s).count())])
                .collect();
            (vec!["status", "count"], rows)
        }
        "open_rfqs" => {
            let rfqs: Vec<Rfq> = query_scoped::<Rfq>(data, requester, &req.scope, filter, search)?
                .into_iter()
                .filter(|r| r.status == RfqStatus::Open)
                .collect();
            let cols = vec!["id", "department", "materialId", "supplierId", "quantity", "targetPrice", "dueAt"];
            let rows = table(&rfqs, &cols)?;
            (cols, rows)
        }
        "contracts" => {
            let contracts = query_scoped::<Contract>(data, requester, &req.scope, filter, search)?;
            let cols = vec!["id", "supplierId", "ownerUserId", "validFrom", "validTo"];
            let rows = table(&contracts, &cols)?;
            (cols, rows)
        }
        "tasks" => {
            let tasks = query_scoped::<Task>(data, requester, &req.scope, filter, search)?;
            let cols = vec!["id", "title", "state", "processRef"];
            let rows = table(&tasks, &cols)?;
            (cols, rows)
        }
        "material_group_share" => {
            if req.scope.focus != Focus::MaterialGroup {
                return Err(DpwError::validation("material_group_share needs a MATERIAL_GROUP focus"));
            }
            // resolves the scope (and the requester) like every other widget
            crate::store::ScopeFilter::resolve(data, requester, &req.scope)?;
            let range = req.range.map_or_else(|| default_range(data, now), Ok)?;
            meta.range = Some(range);
            let share = material_group_share(data, &[MaterialGroupId::from(req.scope.focus_id.as_str())], Some(range))?;
            let mut pairs: Vec<_> = share.shares.into_iter().collect();
            pairs.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            let rows = pairs.into_iter().map(|(s, f)| vec![json!(s), json!(f)]).collect();
            (vec!["supplierId", "share"], rows)
        }
        "volume_forecast" => {
            let range = req.range.map_or_else(|| default_range(data, now), Ok)?;
            let orders = query_scoped::<PurchaseOrder>(data, requester, &req.scope, filter, search)?;
            let series = volume_series(&orders, range, req.bucketing);
            let method = ForecastMethod::MovingAverage {
                window: config.paas.moving_average_window,
            };
            let forecast = forecast_volume(&series, req.horizon, method)?;
            meta.range = Some(range);
            meta.bucketing = Some(req.bucketing);
            let mut rows: Vec<Vec<Value>> = series
                .points
                .iter()
                .map(|p| vec![json!(p.period_start), json!(p.volume_eur.cents() as f64), json!("actual")])
                .collect();
            rows.extend(
                forecast
                    .iter()
                    .map(|f| vec![json!(f.period_start), json!(f.forecast_eur * 100.0), json!("forecast")]),
            );
            (vec!["periodStart", "volumeEur", "kind"], rows)
        }
        _ => unreachable!("registry and dispatch cover the same ids"),
    };
    Ok(WidgetPayload {
        widget_id: widget_id.to_string(),
        default_view: view,
        columns: columns.into_iter().map(String::from).collect(),
        rows,
        meta,
    })
}
