//! Widget payloads rendered from the shipped fixtures.

mod common;

use common::{loaded, now};
use dpw_core::store::{Focus, Scope, ViewMode};
use dpw_core::widgets::{render_widget, DefaultView, WidgetPayload, WidgetRequest, WIDGETS};
use dpw_core::workspace::Workspace;
use dpw_core::DpwError;
use serde_json::json;

fn render(ws: &Workspace, user: &str, widget: &str, scope: Scope) -> dpw_core::Result<WidgetPayload> {
    let snap = ws.store.snapshot();
    render_widget(&snap.data, snap.revision, &ws.config, &user.into(), widget, &WidgetRequest::new(scope), now())
}

fn scope(focus: Focus, id: &str, mode: ViewMode) -> Scope {
    Scope::new(focus, id, mode, None).unwrap()
}

#[test]
fn monthly_po_volume_for_own_orders() {
    let (_dir, ws) = loaded();
    let p = render(&ws, "u1", "total_po_volume", scope(Focus::User, "u1", ViewMode::UserView)).unwrap();
    assert_eq!(p.default_view, DefaultView::Chart);
    assert_eq!(p.columns, ["periodStart", "volumeEur"]);
    assert_eq!(p.rows.len(), 12);
    let cents: Vec<u64> = p.rows.iter().map(|r| r[1].as_u64().unwrap()).collect();
    // po-1003 in January, po-1001 in February, po-1005 in March
    assert_eq!(&cents[..4], [15_000_000, 120_000_000, 9_000_000, 0]);
    assert_eq!(p.rows[0][0], json!("2024-01-01"));
}

#[test]
fn supplier_focus_in_team_view() {
    let (_dir, ws) = loaded();
    let p = render(&ws, "u1", "total_po_volume", scope(Focus::Supplier, "s2", ViewMode::TeamView)).unwrap();
    let total: u64 = p.rows.iter().map(|r| r[1].as_u64().unwrap()).sum();
    // po-1004 belongs to the other team
    assert_eq!(total, 15_000_000);
}

#[test]
fn open_auctions_table() {
    let (_dir, ws) = loaded();
    let p = render(&ws, "u1", "supplier_auctions", scope(Focus::User, "u1", ViewMode::UserView)).unwrap();
    assert_eq!(p.default_view, DefaultView::Table);
    assert_eq!(p.rows.len(), 1);
    assert_eq!(p.rows[0][0], json!("a-501"));
    assert_eq!(p.rows[0][3], json!(2));
    assert_eq!(p.rows[0][4], json!(5));
}

#[test]
fn every_widget_has_consistent_rows_and_csv_header() {
    let (_dir, ws) = loaded();
    for (id, view) in WIDGETS {
        let sc = if id == "material_group_share" {
            scope(Focus::MaterialGroup, "g-metal", ViewMode::TeamView)
        } else {
            scope(Focus::User, "u1", ViewMode::TeamView)
        };
        let p = render(&ws, "u1", id, sc).unwrap();
        assert_eq!(p.default_view, view, "{id}");
        assert!(p.rows.iter().all(|r| r.len() == p.columns.len()), "{id}");
        let csv = String::from_utf8(p.to_csv().unwrap()).unwrap();
        assert_eq!(csv.lines().next().unwrap(), p.columns.join(","), "{id}");
        assert_eq!(csv.lines().count(), p.rows.len() + 1, "{id}");
        let again = render(&ws, "u1", id, p.meta.scope.clone()).unwrap();
        assert_eq!(serde_json::to_vec(&p).unwrap(), serde_json::to_vec(&again).unwrap(), "{id}");
    }
}

#[test]
fn unknown_widget_and_bad_scope() {
    let (_dir, ws) = loaded();
    let err = render(&ws, "u1", "weather", scope(Focus::User, "u1", ViewMode::UserView)).unwrap_err();
    assert!(matches!(err, DpwError::NotFound { .. }), "{err:?}");
    let err = render(&ws, "u1", "material_group_share", scope(Focus::User, "u1", ViewMode::UserView)).unwrap_err();
    assert!(matches!(err, DpwError::Validation { .. }), "{err:?}");
    let err = render(&ws, "u1", "contracts", scope(Focus::Supplier, "s-missing", ViewMode::UserView)).unwrap_err();
    assert!(matches!(err, DpwError::NotFound { .. }), "{err:?}");
}

#[test]
fn metal_group_share_sums_to_one() {
    let (_dir, ws) = loaded();
    let p = render(&ws, "u1", "material_group_share", scope(Focus::MaterialGroup, "g-metal", ViewMode::UserView)).unwrap();
    let sum: f64 = p.rows.iter().map(|r| r[1].as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-9);
    assert_eq!(p.rows[0][0], json!("s1"));
}
