mod common;

use common::{dpw, loaded, ok, scratch, store_hash};
use rust_decimal::Decimal;
use serde_json::Value;

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn import_all_prints_one_report_per_source() {
    let (dir, cfg) = scratch();
    ok(&cfg, &["seed", "--fixtures", dir.path().to_str().unwrap()]);
    let out = ok(&cfg, &["import", "--all"]);
    let reports: Vec<Value> = out.lines().map(json).collect();
    let counts: Vec<(&str, u64, u64)> = reports
        .iter()
        .map(|r| (r["sourceId"].as_str().unwrap(), r["inserted"].as_u64().unwrap(), r["skipped"].as_u64().unwrap()))
        .collect();
    assert_eq!(
        counts,
        [
            ("mdm-suppliers", 5, 0),
            ("factor-db", 4, 0),
            ("erp-po", 12, 0),
            ("legacy-po", 1, 2),
            ("srm-rfq", 8, 0),
            ("clm-contracts", 3, 0),
            ("eauction", 3, 0),
            ("newswire", 6, 0),
        ]
    );

    let hash = store_hash(&cfg);
    let again = ok(&cfg, &["import", "--all"]);
    assert!(again.lines().map(json).all(|r| r["inserted"] == 0 && r["updated"] == 0));
    assert_eq!(store_hash(&cfg), hash);
}

#[test]
fn import_single_source() {
    let (dir, cfg) = scratch();
    ok(&cfg, &["seed", "--fixtures", dir.path().to_str().unwrap()]);
    let out = ok(&cfg, &["import", "--source", "mdm-suppliers"]);
    assert_eq!(out.lines().count(), 1);
    assert_eq!(json(&out)["inserted"], 5);
    assert_eq!(dpw(&cfg, &["import", "--source", "nope"]).code, 1);
}

#[test]
fn stage_one_supplier_score() {
    let (_dir, cfg) = loaded();
    let s = json(&ok(&cfg, &["score", "--supplier", "s1"]));
    assert_eq!(s["stage"], 1);
    assert_eq!(s["valueTCO2e"].as_f64().unwrap(), 100.0);
    assert_eq!(s["period"], 2024);

    let chain = json(&ok(&cfg, &["score", "--supplier", "s2", "--chain", "--period", "2024"]));
    assert!((chain["valueTCO2e"].as_f64().unwrap() - 146.8).abs() < 1e-9);
    assert!(chain["chain"]["entries"].as_array().unwrap().len() > 1);

    let rfq = json(&ok(&cfg, &["score", "--rfq", "r-101"]));
    assert_eq!(rfq["subject"]["kind"], "rfq");
}

#[test]
fn dry_run_leaves_store_untouched() {
    let (_dir, cfg) = loaded();
    let before = store_hash(&cfg);
    let run = json(&ok(&cfg, &["bot", "run", "bundler", "--dry-run", "--user", "u1"]));
    assert_eq!(run["proposals"].as_array().unwrap().len(), 1);
    assert_eq!(run["proposals"][0]["combinedQuantity"].as_f64().unwrap(), 150.0);
    assert_eq!(store_hash(&cfg), before);

    let params = r#"{"rfqId":"r-108","offerPrice":3.25}"#;
    ok(&cfg, &["bot", "run", "negotiator", "--dry-run", "--user", "u2", "--params", params]);
    assert_eq!(store_hash(&cfg), before);
}

#[test]
fn bot_run_then_approve_then_reject_conflicts() {
    let (_dir, cfg) = loaded();
    let run = json(&ok(&cfg, &["bot", "run", "bundler", "--user", "u1"]));
    let id = run["runId"].as_str().unwrap();
    let applied = json(&ok(&cfg, &["bot", "approve", id, "--user", "u1"]));
    assert_eq!(applied["status"], "APPLIED");
    let hash = store_hash(&cfg);
    assert_eq!(json(&ok(&cfg, &["bot", "approve", id, "--user", "u1"])), applied);
    assert_eq!(store_hash(&cfg), hash);

    let rejected = dpw(&cfg, &["bot", "reject", id, "--user", "u1"]);
    assert_eq!(rejected.code, 1);
    assert!(rejected.stderr.contains("CONFLICT"), "{}", rejected.stderr);
}

#[test]
fn co2_report_total_is_sum_of_supplier_scores() {
    let (_dir, cfg) = loaded();
    for year in ["2023", "2024"] {
        let report = json(&ok(&cfg, &["report", "co2", "--period", year]));
        let mut sum = Decimal::ZERO;
        for row in report["rows"].as_array().unwrap() {
            let id = row["supplierId"].as_str().unwrap();
            let o = dpw(&cfg, &["score", "--supplier", id, "--period", year]);
            if o.code == 0 {
                let v = json(&o.stdout)["valueTCO2e"].to_string();
                sum += v.parse::<Decimal>().unwrap();
            } else {
                assert!(o.stderr.contains("NO_EMISSION_DATA"), "{}", o.stderr);
                assert!(row["valueTCO2e"].is_null());
            }
        }
        let total: Decimal = report["totalTCO2e"].to_string().parse().unwrap();
        assert_eq!(total, sum, "{year}");
    }

    let csv = ok(&cfg, &["report", "co2", "--period", "2024", "--format", "csv"]);
    assert_eq!(csv.lines().next().unwrap(), "supplierId,name,stage,valueTCO2e");
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn output_is_deterministic() {
    let (_a, cfg_a) = loaded();
    let (_b, cfg_b) = loaded();
    for args in [
        &["score", "--supplier", "s5", "--chain"][..],
        &["report", "co2", "--period", "2024", "--format", "csv"],
        &["bot", "run", "bundler", "--dry-run", "--user", "u1"],
    ] {
        assert_eq!(ok(&cfg_a, args), ok(&cfg_b, args), "{args:?}");
    }
    assert_eq!(store_hash(&cfg_a), store_hash(&cfg_b));
}

#[test]
fn exit_codes() {
    let (dir, cfg) = scratch();
    let unknown = dpw(&cfg, &["frobnicate"]);
    assert_eq!(unknown.code, 1);
    assert!(unknown.stderr.contains("Usage"), "{}", unknown.stderr);

    assert_eq!(dpw(&cfg, &["import"]).code, 1, "needs --source or --all");
    assert_eq!(dpw(&cfg, &["seed", "--fixtures", "/definitely/not/here"]).code, 2);
    assert_eq!(dpw(&dir.path().join("missing.json"), &["report", "co2", "--period", "2024"]).code, 2);

    ok(&cfg, &["seed", "--fixtures", dir.path().to_str().unwrap()]);
    ok(&cfg, &["import", "--all"]);
    assert_eq!(dpw(&cfg, &["score", "--supplier", "nobody"]).code, 1);
    assert_eq!(dpw(&cfg, &["bot", "run", "bundler", "--user", "u1", "--params", "{oops"]).code, 1);
    assert_eq!(dpw(&cfg, &["score", "--rfq", "r-101", "--chain"]).code, 1);

    let help = dpw(&cfg, &["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("import"));
}
