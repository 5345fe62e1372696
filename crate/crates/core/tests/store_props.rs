//! Store-level round trips and import idempotence on generated inputs.

mod common;

use chrono::{TimeZone, Utc};
use common::gen::{random_store, supplier};
use dpw_core::domain::{LayoutEntry, Material, MaterialGroup, PurchaseOrder, User, WidgetLayout};
use dpw_core::ingest::{run_import_job, SourceConfig, SourceKind};
use dpw_core::store::{cell_text, export_table, get_layout, save_layout, Store, StoreData, Tabular};
use dpw_core::Config;
use proptest::prelude::*;

fn clock() -> chrono::DateTime<Utc> {
    Utc.with_ymd_and_hms(2024, 7, 1, 0, 0, 0).unwrap()
}

fn base_store() -> StoreData {
    let mut d = StoreData::default();
    d.users.insert("u0".into(), User::new("u0", "User 0", "t0"));
    d.material_groups.insert(
        "g0".into(),
        MaterialGroup { id: "g0".into(), name: "Group".into(), parent_id: None },
    );
    for i in 0..3 {
        let s = supplier(&format!("s{i}"));
        d.suppliers.insert(s.id.clone(), s);
        let m = Material {
            id: format!("m{i}").into(),
            material_group_id: "g0".into(),
            name: format!("Material {i}"),
            unit: "piece".into(),
            database_pcf: None,
            sector_code: "C25".into(),
        };
        d.materials.insert(m.id.clone(), m);
    }
    d
}

#[derive(Debug, Clone)]
struct Row {
    supplier: usize,
    material: usize,
    cents: u64,
    qty: i32,
    day: u32,
}

impl Row {
    fn is_bad(&self) -> bool {
        self.supplier > 2 || self.qty <= 0
    }

    fn csv(&self, id: &str) -> String {
        format!(
            "{id},s{},m{},{}.{:02},{},2024-03-{:02},Assembly,u0\n",
            self.supplier,
            self.material,
            self.cents / 100,
            self.cents % 100,
            self.qty,
            self.day
        )
    }
}

fn row() -> impl Strategy<Value = Row> {
    (0usize..4, 0usize..3, 1u64..=1_000_000_000, -2i32..=5000, 1u32..=28).prop_map(
        |(supplier, material, cents, qty, day)| Row { supplier, material, cents, qty, day },
    )
}

const HEADER: &str = "id,supplier_id,material_id,volume_eur,quantity,order_date,department,owner_user_id\n";

fn payload<'a>(rows: impl IntoIterator<Item = (&'a String, &'a Row)>) -> Vec<u8> {
    let mut text = HEADER.to_string();
    for (id, r) in rows {
        text.push_str(&r.csv(id));
    }
    text.into_bytes()
}

fn source() -> SourceConfig {
    SourceConfig::new("erp", SourceKind::PurchaseOrdersCsv, "unused.csv")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reimport_is_a_no_op(rows in prop::collection::btree_map("po[0-9]{1,3}", row(), 0..25)) {
        let store = Store::in_memory(base_store());
        let cfg = Config::default();
        let bytes = payload(&rows);
        let first = run_import_job(&store, &cfg, &source(), &bytes, clock).unwrap();
        let hash = store.hash();
        let rev = store.revision();
        let second = run_import_job(&store, &cfg, &source(), &bytes, clock).unwrap();
        prop_assert_eq!(second.inserted + second.updated, 0);
        prop_assert_eq!(second.unchanged, first.inserted);
        prop_assert_eq!(second.skipped, first.skipped);
        prop_assert_eq!(store.hash(), hash);
        prop_assert_eq!(store.revision(), rev);
    }

    #[test]
    fn bad_rows_do_not_affect_good_rows(rows in prop::collection::btree_map("po[0-9]{1,3}", row(), 0..25)) {
        let cfg = Config::default();
        let mixed = Store::in_memory(base_store());
        let report = run_import_job(&mixed, &cfg, &source(), &payload(&rows), clock).unwrap();
        let clean = Store::in_memory(base_store());
        run_import_job(&clean, &cfg, &source(), &payload(rows.iter().filter(|(_, r)| !r.is_bad())), clock).unwrap();
        prop_assert_eq!(report.skipped, rows.values().filter(|r| r.is_bad()).count());
        prop_assert_eq!(report.skipped_reasons.len(), report.skipped);
        prop_assert_eq!(mixed.hash(), clean.hash());
    }

    #[test]
    fn malformed_payload_leaves_store_untouched(rows in prop::collection::btree_map("po[0-9]{1,3}", row(), 1..10)) {
        let store = Store::in_memory(base_store());
        let cfg = Config::default();
        run_import_job(&store, &cfg, &source(), &payload(&rows), clock).unwrap();
        let hash = store.hash();
        let mut broken = payload(&rows);
        broken.extend_from_slice(b"po-x,s0,\"unterminated\n");
        let broken = [&broken[..], b"\xff\xfe"].concat();
        prop_assert!(run_import_job(&store, &cfg, &source(), &broken, clock).is_err());
        prop_assert_eq!(store.hash(), hash);
    }

    #[test]
    fn saved_layout_reads_back(cells in prop::collection::btree_map("[a-z_]{3,12}", (1u32..=3, 1u32..=3), 0..8)) {
        let entries: Vec<LayoutEntry> = cells
            .iter()
            .enumerate()
            .map(|(i, (id, (w, h)))| LayoutEntry::new(id.clone(), (i as u32 % 4) * 3, (i as u32 / 4) * 3, *w, *h))
            .collect();
        let layout = WidgetLayout::new(entries);
        let mut data = base_store();
        save_layout(&mut data, &"u0".into(), layout.clone()).unwrap();
        let text = serde_json::to_string(&data).unwrap();
        let reloaded: StoreData = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(get_layout(&reloaded, &"u0".into(), &WidgetLayout::default()).unwrap(), layout);
    }

    #[test]
    fn overlapping_layout_rejected_without_change(x in 0u32..4, y in 0u32..4) {
        let layout = WidgetLayout::new(vec![
            LayoutEntry::new("a", x, y, 2, 2),
            LayoutEntry::new("b", x + 1, y + 1, 2, 2),
        ]);
        let store = Store::in_memory(base_store());
        let before = store.hash();
        prop_assert!(store.write(|d| save_layout(d, &"u0".into(), layout.clone())).is_err());
        prop_assert_eq!(store.hash(), before);
    }

    #[test]
    fn csv_export_round_trips(seed in any::<u64>()) {
        let data = random_store(seed);
        let rows: Vec<PurchaseOrder> = data.purchase_orders.values().cloned().collect();
        let bytes = export_table(&rows, PurchaseOrder::COLUMNS).unwrap();
        let mut reader = csv::Reader::from_reader(&bytes[..]);
        let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
        prop_assert_eq!(&header, &PurchaseOrder::COLUMNS.iter().map(|c| c.to_string()).collect::<Vec<_>>());
        let parsed: Vec<Vec<String>> = reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
        prop_assert_eq!(parsed.len(), rows.len());
        for (po, cells) in rows.iter().zip(&parsed) {
            let json = serde_json::to_value(po).unwrap();
            let want: Vec<String> = PurchaseOrder::COLUMNS.iter().map(|c| cell_text(&json[*c])).collect();
            prop_assert_eq!(cells, &want);
        }
    }
}

#[test]
fn export_rejects_unknown_columns() {
    let err = export_table::<PurchaseOrder>(&[], &["id", "colour", "size"]).unwrap_err();
    let text = format!("{err:?}");
    assert!(text.contains("colour") && text.contains("size"), "{text}");
}

#[test]
fn failed_transaction_keeps_revision() {
    let store = Store::in_memory(base_store());
    let rev = store.revision();
    let r: dpw_core::Result<()> = store.write(|d| {
        d.users.clear();
        Err(dpw_core::DpwError::validation("abort"))
    });
    assert!(r.is_err());
    assert_eq!(store.revision(), rev);
    assert_eq!(store.snapshot().data.users.len(), 1);
}
