use std::collections::BTreeMap;

use axum::body::Bytes;
use axum::extract::{FromRequestParts, Path, Query, State};
use axum::http::header::{AUTHORIZATION, CONTENT_TYPE};
use axum::http::request::Parts;
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::NaiveDate;
use dpw_core::bots::{approve_run, execute_bot, reject_run, BotRun};
use dpw_core::domain::{SubjectRef, UserId, WidgetLayout};
use dpw_core::paas::{process_breakdown, supplier_rating, Bucketing, DateRange, ProcessBreakdown, ShareResult};
use dpw_core::pis::{rank_feed, record_read, suggest, FeedEntry, FeedSignals};
use dpw_core::sss::{Alternative, SustainabilityAlert};
use dpw_core::store::{get_layout, save_layout, set_favorite, Focus, Scope, Suggestion, ViewMode};
use dpw_core::widgets::{render_widget, WidgetPayload, WidgetRequest};
use dpw_core::workspace::{alerts, alternatives, material_group_share, supplier_score, supplier_view, ScoreReport, SupplierView};
use dpw_core::ingest::ImportReport;
use dpw_core::DpwError;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::auth::Session;
use crate::error::{ApiError, ApiResult};
use crate::AppState;

type Params = Query<BTreeMap<String, String>>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/auth/token", post(issue_token))
        .route("/api/feed", get(feed))
        .route("/api/feed/read", post(feed_read))
        .route("/api/feed/suggest", post(feed_suggest))
        .route("/api/widgets/{id}", get(widget))
        .route("/api/suppliers/{id}", get(supplier))
        .route("/api/suppliers/{id}/score", get(score))
        .route("/api/suppliers/{id}/alternatives", get(supplier_alternatives))
        .route("/api/materialgroups/{id}/share", get(group_share))
        .route("/api/bots/{id}/run", post(run_bot))
        .route("/api/bots/runs/{run_id}", get(bot_run))
        .route("/api/bots/runs/{run_id}/approve", post(approve))
        .route("/api/bots/runs/{run_id}/reject", post(reject))
        .route("/api/me/layout", get(layout).put(put_layout))
        .route("/api/me/favorites", post(favorites))
        .route("/api/export/{file}", get(export))
        .route("/api/processes/{id}", get(process))
        .route("/api/alerts", get(list_alerts))
        .route("/api/admin/imports", get(imports))
        .fallback(|| async { ApiError(DpwError::not_found("route", "")) })
        .with_state(state)
}

/// The verified session of the caller.
pub struct Authed(pub Session);

impl FromRequestParts<AppState> for Authed {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &AppState) -> Result<Self, Self::Rejection> {
        let header = parts
            .headers
            .get(AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .ok_or_else(|| DpwError::Unauthenticated("missing bearer token".into()))?;
        let token = header
            .strip_prefix("Bearer ")
            .ok_or_else(|| DpwError::Unauthenticated("authorization must be a bearer token".into()))?;
        Ok(Authed(state.auth.verify(token.trim())?))
    }
}

fn json_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError(DpwError::validation(format!("invalid request body: {e}"))))
}

fn param<T: std::str::FromStr>(q: &BTreeMap<String, String>, key: &str) -> ApiResult<Option<T>> {
    match q.get(key).map(|s| s.trim()).filter(|s| !s.is_empty()) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| ApiError(DpwError::validation(format!("invalid query parameter {key}='{v}'")))),
    }
}

fn flag(q: &BTreeMap<String, String>, key: &str) -> ApiResult<bool> {
    Ok(param::<bool>(q, key)?.unwrap_or(false))
}

/// `from`/`to` as a half-open date range, or a whole calendar `year`.
fn range(q: &BTreeMap<String, String>) -> ApiResult<Option<DateRange>> {
    let from: Option<NaiveDate> = param(q, "from")?;
    let to: Option<NaiveDate> = param(q, "to")?;
    let year: Option<i32> = param(q, "year")?;
    Ok(match (from, to, year) {
        (Some(f), Some(t), None) => Some(DateRange::new(f, t)?),
        (None, None, Some(y)) => Some(DateRange::year(y)?),
        (None, None, None) => None,
        _ => {
            return Err(ApiError(DpwError::validation(
                "give either both from and to, or year",
            )))
        }
    })
}

fn scope(q: &BTreeMap<String, String>, user: &UserId) -> ApiResult<Scope> {
    let focus = q.get("focus").map(|s| Focus::parse(s)).transpose()?.unwrap_or(Focus::User);
    let focus_id = match (q.get("focusId"), focus) {
        (Some(id), _) => id.clone(),
        (None, Focus::User) => user.to_string(),
        (None, _) => return Err(ApiError(DpwError::validation("focusId is required for this focus"))),
    };
    let mode = q.get("viewMode").map(|s| ViewMode::parse(s)).transpose()?.unwrap_or(ViewMode::UserView);
    let alias = q.get("aliasUserId").map(|s| UserId::from(s.as_str()));
    Ok(Scope::new(focus, focus_id, mode, alias)?)
}

fn widget_request(q: &BTreeMap<String, String>, user: &UserId) -> ApiResult<WidgetRequest> {
    let mut req = WidgetRequest::new(scope(q, user)?);
    req.filter = q.get("filter").cloned();
    req.search = q.get("search").cloned();
    req.range = range(q)?;
    if let Some(b) = q.get("bucketing") {
        req.bucketing =
            Bucketing::parse(b).ok_or_else(|| DpwError::validation(format!("unknown bucketing '{b}'")))?;
    }
    if let Some(h) = param(q, "horizon")? {
        req.horizon = h;
    }
    Ok(req)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct TokenRequest {
    user_id: UserId,
}

async fn issue_token(State(st): State<AppState>, body: Bytes) -> ApiResult<Json<Session>> {
    let req: TokenRequest = json_body(&body)?;
    let snap = st.ws.store.snapshot();
    if !snap.data.users.contains_key(&req.user_id) {
        return Err(ApiError(DpwError::Unauthenticated(format!("unknown user {}", req.user_id))));
    }
    Ok(Json(st.auth.issue(req.user_id)))
}

async fn feed(State(st): State<AppState>, Authed(s): Authed, Query(q): Params) -> ApiResult<Json<Vec<FeedEntry>>> {
    let snap = st.ws.store.snapshot();
    let clusters = st.ws.clusters(&snap.data)?;
    let user = snap.data.user(&s.user_id)?;
    let signals = FeedSignals::for_user(&snap.data, user, &clusters);
    let pis = &st.ws.config.pis;
    let ranked = rank_feed(&clusters, &signals, (st.clock)(), &pis.weights, pis.half_life_days)?;
    let offset: usize = param(&q, "offset")?.unwrap_or(0);
    let limit: usize = param(&q, "limit")?.unwrap_or(usize::MAX);
    Ok(Json(ranked.into_iter().skip(offset).take(limit).collect()))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct ClusterRequest {
    cluster_id: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ReadAck {
    cluster_id: String,
    news_id: dpw_core::domain::NewsId,
    read_at: chrono::DateTime<chrono::Utc>,
}

async fn feed_read(State(st): State<AppState>, Authed(s): Authed, body: Bytes) -> ApiResult<Json<ReadAck>> {
    let req: ClusterRequest = json_body(&body)?;
    let now = (st.clock)();
    let user = st.ws.store.write(|d| {
        let clusters = st.ws.clusters(d)?;
        record_read(d, &s.user_id, &req.cluster_id, &clusters, now)
    })?;
    let last = user.reading_history.last().expect("read was just recorded");
    Ok(Json(ReadAck {
        cluster_id: req.cluster_id,
        news_id: last.news_id.clone(),
        read_at: last.at,
    }))
}

async fn feed_suggest(State(st): State<AppState>, Authed(s): Authed, body: Bytes) -> ApiResult<Json<Suggestion>> {
    let req: ClusterRequest = json_body(&body)?;
    let now = (st.clock)();
    let sug = st.ws.store.write(|d| {
        let clusters = st.ws.clusters(d)?;
        suggest(d, &s.user_id, &req.cluster_id, &clusters, now)
    })?;
    Ok(Json(sug))
}

async fn widget(
    State(st): State<AppState>,
    Authed(s): Authed,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Json<WidgetPayload>> {
    let req = widget_request(&q, &s.user_id)?;
    let snap = st.ws.store.snapshot();
    let payload = render_widget(&snap.data, snap.revision, &st.ws.config, &s.user_id, &id, &req, (st.clock)())?;
    Ok(Json(payload))
}

async fn export(
    State(st): State<AppState>,
    Authed(s): Authed,
    Path(file): Path<String>,
    Query(q): Params,
) -> ApiResult<impl IntoResponse> {
    let id = file
        .strip_suffix(".csv")
        .ok_or_else(|| DpwError::not_found("export", file.as_str()))?;
    let req = widget_request(&q, &s.user_id)?;
    let snap = st.ws.store.snapshot();
    let payload = render_widget(&snap.data, snap.revision, &st.ws.config, &s.user_id, id, &req, (st.clock)())?;
    Ok(([(CONTENT_TYPE, "text/csv; charset=utf-8")], payload.to_csv()?))
}

/// `weights=quality:0.6,delivery:0.4` overrides the configured rating weights.
fn rating_weights(q: &BTreeMap<String, String>) -> ApiResult<Option<BTreeMap<String, f64>>> {
    let Some(raw) = q.get("weights") else { return Ok(None) };
    raw.split(',')
        .map(|pair| {
            let (name, w) = pair
                .split_once(':')
                .ok_or_else(|| DpwError::validation(format!("weight '{pair}' is not name:value")))?;
            let w: f64 = w
                .trim()
                .parse()
                .map_err(|_| DpwError::validation(format!("weight for '{name}' is not a number")))?;
            Ok((name.trim().to_string(), w))
        })
        .collect::<ApiResult<_>>()
        .map(Some)
}

async fn supplier(
    State(st): State<AppState>,
    Authed(_): Authed,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Json<SupplierView>> {
    let snap = st.ws.store.snapshot();
    let mut view = supplier_view(&st.ws, &snap.data, &id.as_str().into())?;
    if let Some(weights) = rating_weights(&q)? {
        view.rating = Some(supplier_rating(&view.supplier, &weights)?);
    }
    Ok(Json(view))
}

async fn score(
    State(st): State<AppState>,
    Authed(_): Authed,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Json<ScoreReport>> {
    let snap = st.ws.store.snapshot();
    let year: Option<i32> = param(&q, "year")?;
    let report = supplier_score(&snap.data, &id.as_str().into(), year, flag(&q, "chain")?, (st.clock)())?;
    Ok(Json(report))
}

async fn supplier_alternatives(
    State(st): State<AppState>,
    Authed(_): Authed,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Json<Vec<Alternative>>> {
    let snap = st.ws.store.snapshot();
    let group = q.get("materialGroupId").map(|g| g.as_str().into());
    let min_rating: f64 = param(&q, "minRating")?.unwrap_or(0.0);
    let year: Option<i32> = param(&q, "year")?;
    let alts = alternatives(&st.ws, &snap.data, &id.as_str().into(), group.as_ref(), min_rating, year, (st.clock)())?;
    Ok(Json(alts))
}

async fn group_share(
    State(st): State<AppState>,
    Authed(_): Authed,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Json<ShareResult>> {
    let snap = st.ws.store.snapshot();
    Ok(Json(material_group_share(&snap.data, &[id.as_str().into()], range(&q)?)?))
}

async fn run_bot(
    State(st): State<AppState>,
    Authed(s): Authed,
    Path(id): Path<String>,
    Query(q): Params,
    body: Bytes,
) -> ApiResult<Json<BotRun>> {
    let params: serde_json::Value = if body.is_empty() { serde_json::Value::Null } else { json_body(&body)? };
    let now = (st.clock)();
    let policies = &st.ws.config.bot_policies;
    if flag(&q, "dryRun")? {
        let snap = st.ws.store.snapshot();
        return Ok(Json(execute_bot(&snap.data, &id, &params, policies, &s.user_id, now)?));
    }
    let run = st.ws.store.write(|d| {
        let run = execute_bot(d, &id, &params, policies, &s.user_id, now)?;
        d.bot_runs.insert(run.run_id.clone(), run.clone());
        Ok(run)
    })?;
    Ok(Json(run))
}

async fn bot_run(State(st): State<AppState>, Authed(_): Authed, Path(run_id): Path<String>) -> ApiResult<Json<BotRun>> {
    let snap = st.ws.store.snapshot();
    let run = snap
        .data
        .bot_runs
        .get(run_id.as_str())
        .cloned()
        .ok_or_else(|| DpwError::not_found("bot run", run_id))?;
    Ok(Json(run))
}

async fn approve(State(st): State<AppState>, Authed(s): Authed, Path(run_id): Path<String>) -> ApiResult<Json<BotRun>> {
    let now = (st.clock)();
    Ok(Json(st.ws.store.write(|d| approve_run(d, &run_id.as_str().into(), &s.user_id, now))?))
}

async fn reject(State(st): State<AppState>, Authed(s): Authed, Path(run_id): Path<String>) -> ApiResult<Json<BotRun>> {
    let now = (st.clock)();
    Ok(Json(st.ws.store.write(|d| reject_run(d, &run_id.as_str().into(), &s.user_id, now))?))
}

async fn layout(State(st): State<AppState>, Authed(s): Authed) -> ApiResult<Json<WidgetLayout>> {
    let snap = st.ws.store.snapshot();
    Ok(Json(get_layout(&snap.data, &s.user_id, &st.ws.config.default_layout)?))
}

async fn put_layout(State(st): State<AppState>, Authed(s): Authed, body: Bytes) -> ApiResult<Json<WidgetLayout>> {
    let layout: WidgetLayout = json_body(&body)?;
    Ok(Json(st.ws.store.write(|d| save_layout(d, &s.user_id, layout))?))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct FavoriteRequest {
    subject: SubjectRef,
    #[serde(default = "yes")]
    favorite: bool,
}

fn yes() -> bool {
    true
}

async fn favorites(
    State(st): State<AppState>,
    Authed(s): Authed,
    body: Bytes,
) -> ApiResult<Json<std::collections::BTreeSet<SubjectRef>>> {
    let req: FavoriteRequest = json_body(&body)?;
    Ok(Json(st.ws.store.write(|d| set_favorite(d, &s.user_id, req.subject, req.favorite))?))
}

async fn process(State(st): State<AppState>, Authed(s): Authed, Path(id): Path<String>) -> ApiResult<Json<ProcessBreakdown>> {
    let snap = st.ws.store.snapshot();
    let instance = snap
        .data
        .processes
        .get(id.as_str())
        .ok_or_else(|| DpwError::not_found("process", id.as_str()))?;
    Ok(Json(process_breakdown(instance, &s.user_id)))
}

async fn list_alerts(State(st): State<AppState>, Authed(_): Authed) -> ApiResult<Json<Vec<SustainabilityAlert>>> {
    let snap = st.ws.store.snapshot();
    Ok(Json(alerts(&snap.data, &st.ws.config, (st.clock)())?))
}

async fn imports(State(st): State<AppState>, Authed(_): Authed) -> ApiResult<Json<Vec<ImportReport>>> {
    Ok(Json(st.ws.store.snapshot().import_history.clone()))
}
