//! Seeded random stores for property tests.

use chrono::{Duration, NaiveDate, TimeZone, Utc};
use dpw_core::domain::{
    Auction, AuctionStatus, Contract, Material, MaterialGroup, Money, PurchaseOrder, Rfq, RfqStatus,
    Supplier, SupplierBid, Task, TaskState, User,
};
use dpw_core::store::StoreData;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;

pub const DEPARTMENTS: [&str; 4] = ["Assembly", "Logistics", "Maintenance", "Packaging"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn supplier(id: &str) -> Supplier {
    Supplier {
        id: id.into(),
        name: format!("Supplier {id}"),
        sector_code: "C25".into(),
        total_revenue: Money::from_eur(10_000_000),
        reported_ccf: None,
        reported_pcf_by_material: Default::default(),
        characteristics: Default::default(),
        sub_suppliers: Vec::new(),
    }
}

/// Users in 1..=3 teams, a two-level group tree, and records of every
/// scoped kind with random owners, suppliers and materials.
pub fn random_store(seed: u64) -> StoreData {
    let mut r = rng(seed);
    let mut d = StoreData::default();

    let n_teams = r.gen_range(1..=3);
    for i in 0..r.gen_range(2..=6) {
        let u = User::new(format!("u{i}"), format!("User {i}"), format!("t{}", r.gen_range(0..n_teams)));
        d.users.insert(u.id.clone(), u);
    }
    let users: Vec<_> = d.users.keys().cloned().collect();

    for i in 0..r.gen_range(1..=5) {
        let s = supplier(&format!("s{i}"));
        d.suppliers.insert(s.id.clone(), s);
    }
    let suppliers: Vec<_> = d.suppliers.keys().cloned().collect();

    let roots = r.gen_range(1..=2);
    for i in 0..roots {
        let g = MaterialGroup {
            id: format!("g{i}").into(),
            name: format!("Group {i}"),
            parent_id: None,
        };
        d.material_groups.insert(g.id.clone(), g);
    }
    for i in roots..roots + r.gen_range(0..=3) {
        let g = MaterialGroup {
            id: format!("g{i}").into(),
            name: format!("Group {i}"),
            parent_id: Some(format!("g{}", r.gen_range(0..i)).into()),
        };
        d.material_groups.insert(g.id.clone(), g);
    }
    let groups: Vec<_> = d.material_groups.keys().cloned().collect();
    for i in 0..r.gen_range(1..=6) {
        let m = Material {
            id: format!("m{i}").into(),
            material_group_id: groups.choose(&mut r).unwrap().clone(),
            name: format!("Material {i}"),
            unit: "piece".into(),
            database_pcf: None,
            sector_code: "C25".into(),
        };
        d.materials.insert(m.id.clone(), m);
    }
    let materials: Vec<_> = d.materials.keys().cloned().collect();

    let base = Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap();
    let day0 = NaiveDate::from_ymd_opt(2023, 1, 1).unwrap();
    for i in 0..r.gen_range(0..=12) {
        let created = base + Duration::hours(r.gen_range(0..24 * 180));
        let rfq = Rfq {
            id: format!("r{i}").into(),
            owner_user_id: users.choose(&mut r).unwrap().clone(),
            department: DEPARTMENTS.choose(&mut r).unwrap().to_string(),
            supplier_id: r.gen_bool(0.5).then(|| suppliers.choose(&mut r).unwrap().clone()),
            material_id: materials.choose(&mut r).unwrap().clone(),
            quantity: Decimal::from(r.gen_range(1..=500)),
            target_price: Money::from_cents(r.gen_range(1..=10_000)),
            status: RfqStatus::Open,
            created_at: created,
            due_at: created + Duration::days(30),
            status_history: vec![RfqStatus::Draft],
            superseded_by: None,
        };
        d.rfqs.insert(rfq.id.clone(), rfq);
    }
    for i in 0..r.gen_range(0..=15) {
        let po = PurchaseOrder {
            id: format!("po{i}").into(),
            supplier_id: suppliers.choose(&mut r).unwrap().clone(),
            material_id: materials.choose(&mut r).unwrap().clone(),
            volume_eur: Money::from_cents(r.gen_range(1..=100_000_000)),
            quantity: Decimal::from(r.gen_range(1..=10_000)),
            order_date: day0 + Duration::days(r.gen_range(0..730)),
            department: DEPARTMENTS.choose(&mut r).unwrap().to_string(),
            owner_user_id: users.choose(&mut r).unwrap().clone(),
        };
        d.purchase_orders.insert(po.id.clone(), po);
    }
    for i in 0..r.gen_range(0..=5) {
        let from = day0 + Duration::days(r.gen_range(0..365));
        let c = Contract {
            id: format!("c{i}").into(),
            supplier_id: suppliers.choose(&mut r).unwrap().clone(),
            owner_user_id: users.choose(&mut r).unwrap().clone(),
            valid_from: from,
            valid_to: from + Duration::days(365),
        };
        d.contracts.insert(c.id.clone(), c);
    }
    for i in 0..r.gen_range(0..=5) {
        let bids = (0..r.gen_range(0..=3))
            .map(|_| SupplierBid {
                supplier_id: suppliers.choose(&mut r).unwrap().clone(),
                price: Money::from_cents(r.gen_range(1..=10_000)),
            })
            .collect();
        let a = Auction {
            id: format!("a{i}").into(),
            owner_user_id: users.choose(&mut r).unwrap().clone(),
            material_id: r.gen_bool(0.8).then(|| materials.choose(&mut r).unwrap().clone()),
            supplier_bids: bids,
            status: if r.gen_bool(0.5) { AuctionStatus::Open } else { AuctionStatus::Closed },
            created_at: Some(base + Duration::days(r.gen_range(0..180))),
        };
        d.auctions.insert(a.id.clone(), a);
    }
    for i in 0..r.gen_range(0..=5) {
        let t = Task {
            id: format!("t{i}").into(),
            assignee_user_id: users.choose(&mut r).unwrap().clone(),
            process_ref: None,
            title: format!("Task {i}"),
            state: if r.gen_bool(0.5) { TaskState::Open } else { TaskState::Done },
        };
        d.tasks.insert(t.id.clone(), t);
    }
    d
}
