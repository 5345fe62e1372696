use std::collections::BTreeMap;
use std::str::FromStr;

use rust_decimal::Decimal;
use serde::de::DeserializeOwned;
use serde_json::{Map, Number, Value};

use super::SourceKind;
use crate::domain::{Auction, Contract, Money, MoneyUnit, NewsItem, PurchaseOrder, Rfq, Supplier};
use crate::error::{DpwError, Result};
use crate::sss::{to_co2e, EmissionFactor, FactorScope, FactorUnit, GwpTable};

/// One source record before normalization: column or key → value.
pub type RawRecord = BTreeMap<String, Value>;

/// A normalized, validated domain entity.
#[derive(Debug, Clone, PartialEq)]
pub enum Entity {
    PurchaseOrder(PurchaseOrder),
    Rfq(Rfq),
    Supplier(Supplier),
    EmissionFactor(EmissionFactor),
    News(NewsItem),
    Contract(Contract),
    Auction(Auction),
}

impl Entity {
    pub fn natural_id(&self) -> String {
        match self {
            Entity::PurchaseOrder(e) => e.id.to_string(),
            Entity::Rfq(e) => e.id.to_string(),
            Entity::Supplier(e) => e.id.to_string(),
            Entity::EmissionFactor(e) => e.natural_key(),
            Entity::News(e) => e.id.to_string(),
            Entity::Contract(e) => e.id.to_string(),
            Entity::Auction(e) => e.id.to_string(),
        }
    }
}

/// Mapping target: a domain field plus an optional money unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Target {
    pub field: String,
    pub unit: Option<MoneyUnit>,
}

/// Parses `field` or `field(UNIT)`.
pub fn parse_target(text: &str) -> std::result::Result<Target, String> {
    let text = text.trim();
    match text.split_once('(') {
        None => Ok(Target {
            field: text.to_string(),
            unit: None,
        }),
        Some((field, rest)) => {
            let unit = rest
                .strip_suffix(')')
                .ok_or_else(|| format!("malformed mapping target '{text}'"))?;
            let unit = MoneyUnit::parse(unit.trim())
                .ok_or_else(|| format!("unknown unit annotation '{}'", unit.trim()))?;
            Ok(Target {
                field: field.trim().to_string(),
                unit: Some(unit),
            })
        }
    }
}

pub fn snake_to_camel(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut upper = false;
    for c in s.chars() {
        if c == '_' {
            upper = !out.is_empty();
        } else if upper {
            out.extend(c.to_uppercase());
            upper = false;
        } else {
            out.push(c);
        }
    }
    out
}

/// Column names that differ from the domain field beyond casing.
fn default_alias(kind: SourceKind, column: &str) -> Option<&'static str> {
    match (kind, column) {
        (SourceKind::EmissionFactorsCsv, "factor_value" | "factorValue") => Some("value"),
        (SourceKind::EmissionFactorsCsv, "factor_unit" | "factorUnit") => Some("unit"),
        _ => None,
    }
}

fn is_blank(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::String(s) => s.trim().is_empty(),
        _ => false,
    }
}

fn decimal_of(v: &Value, field: &str) -> Result<Decimal> {
    let text = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) => n.to_string(),
        _ => return Err(DpwError::validation(format!("{field} must be a number"))),
    };
    Decimal::from_str(&text)
        .or_else(|_| Decimal::from_scientific(&text))
        .map_err(|_| DpwError::validation(format!("{field} is not a number: '{text}'")))
}

fn money_value(v: &Value, unit: MoneyUnit, field: &str) -> Result<Value> {
    let amount = decimal_of(v, field)?;
    if amount < Decimal::ZERO {
        return Err(DpwError::validation(format!("{field} must be >= 0")));
    }
    Ok(Value::Number(Number::from(Money::from_decimal(amount, unit)?.cents())))
}

/// Recursively converts object keys inside arrays (lists of records) to
/// camelCase. Objects that are maps keyed by ids are left alone.
fn camel_records(v: Value) -> Value {
    match v {
        Value::Array(items) => Value::Array(
            items
                .into_iter()
                .map(|item| match item {
                    Value::Object(m) => Value::Object(
                        m.into_iter()
                            .map(|(k, v)| (snake_to_camel(&k), camel_records(v)))
                            .collect(),
                    ),
                    other => camel_records(other),
                })
                .collect(),
        ),
        other => other,
    }
}

/// Either a plain tCO2e number or a gas → mass map converted via GWP.
fn co2e_value(v: &Value, gwp: &GwpTable, field: &str) -> Result<Value> {
    let amount = match v {
        Value::Object(gases) => {
            let mut amounts = BTreeMap::new();
            for (gas, mass) in gases {
                amounts.insert(gas.clone(), decimal_of(mass, field)?);
            }
            to_co2e(&amounts, gwp)?
        }
        other => decimal_of(other, field)?,
    };
    Ok(Value::String(amount.normalize().to_string()))
}

fn uppercase(obj: &mut Map<String, Value>, field: &str) {
    if let Some(Value::String(s)) = obj.get_mut(field) {
        *s = s.trim().to_ascii_uppercase();
    }
}

fn build<T: DeserializeOwned>(obj: Map<String, Value>) -> Result<T> {
    serde_json::from_value(Value::Object(obj)).map_err(|e| {
        let msg = e.to_string();
        // serde reports "missing field `x`"; keep the wording stable
        DpwError::validation(msg.replace('`', ""))
    })
}

/// Maps a raw record onto the canonical field names of `kind`, converts
/// annotated units and validates the resulting entity.
pub fn normalize_record(
    raw: &RawRecord,
    mapping: &BTreeMap<String, String>,
    kind: SourceKind,
    gwp: &GwpTable,
) -> Result<Entity> {
    let mut obj = Map::new();
    for (column, value) in raw {
        let target = match mapping.get(column) {
            Some(t) => parse_target(t).map_err(DpwError::validation)?,
            None => Target {
                field: default_alias(kind, column)
                    .map(str::to_string)
                    .unwrap_or_else(|| snake_to_camel(column)),
                unit: None,
            },
        };
        if !kind.known_field(&target.field) || is_blank(value) {
            continue;
        }
        let is_money = kind.money_fields().contains(&target.field.as_str());
        if target.unit.is_some() && !is_money {
            return Err(DpwError::validation(format!(
                "unit annotation not allowed on {}",
                target.field
            )));
        }
        let value = if is_money {
            money_value(value, target.unit.unwrap_or(MoneyUnit::Eur), &target.field)?
        } else {
            camel_records(value.clone())
        };
        if obj.insert(target.field.clone(), value).is_some() {
            return Err(DpwError::validation(format!("field {} mapped twice", target.field)));
        }
    }
    if let Some(missing) = kind.required_fields().iter().find(|f| !obj.contains_key(**f)) {
        return Err(DpwError::validation(format!("missing field {missing}")));
    }

    let entity = match kind {
        SourceKind::PurchaseOrdersCsv => {
            let e: PurchaseOrder = build(obj)?;
            e.validate()?;
            Entity::PurchaseOrder(e)
        }
        SourceKind::RfqsJsonl => {
            uppercase(&mut obj, "status");
            if let Some(Value::Array(hist)) = obj.get_mut("statusHistory") {
                for h in hist.iter_mut() {
                    if let Value::String(s) = h {
                        *s = s.trim().to_ascii_uppercase();
                    }
                }
            }
            let e: Rfq = build(obj)?;
            e.validate()?;
            Entity::Rfq(e)
        }
        SourceKind::SuppliersJson => {
            if let Some(v) = obj.get("reportedCcf").cloned() {
                obj.insert("reportedCcf".into(), co2e_value(&v, gwp, "reportedCcf")?);
            }
            if let Some(Value::Object(pcfs)) = obj.get("reportedPcfByMaterial").cloned() {
                let mut out = Map::new();
                for (material, v) in pcfs {
                    out.insert(material, co2e_value(&v, gwp, "reportedPcfByMaterial")?);
                }
                obj.insert("reportedPcfByMaterial".into(), Value::Object(out));
            }
            let e: Supplier = build(obj)?;
            e.validate()?;
            Entity::Supplier(e)
        }
        SourceKind::EmissionFactorsCsv => {
            let text = |obj: &Map<String, Value>, f: &str| match obj.get(f) {
                Some(Value::String(s)) => s.trim().to_string(),
                Some(other) => other.to_string(),
                None => String::new(),
            };
            let scope_text = text(&obj, "scope");
            let scope = FactorScope::parse(&scope_text)
                .ok_or_else(|| DpwError::validation(format!("unknown factor scope '{scope_text}'")))?;
            let unit_text = text(&obj, "unit");
            let unit = FactorUnit::parse(&unit_text)
                .ok_or_else(|| DpwError::validation(format!("unknown factor unit '{unit_text}'")))?;
            let value = decimal_of(obj.get("value").expect("required"), "value")?;
            let e = EmissionFactor {
                scope,
                key: text(&obj, "key"),
                value,
                unit,
                source_name: text(&obj, "sourceName"),
            };
            e.validate()?;
            Entity::EmissionFactor(e)
        }
        SourceKind::NewsJson => {
            if let Some(Value::String(s)) = obj.get("topics").cloned() {
                let topics: Vec<Value> = s
                    .split(';')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| Value::String(t.to_string()))
                    .collect();
                obj.insert("topics".into(), Value::Array(topics));
            }
            let e: NewsItem = build(obj)?;
            e.validate()?;
            Entity::News(e)
        }
        SourceKind::ContractsCsv => {
            let e: Contract = build(obj)?;
            e.validate()?;
            Entity::Contract(e)
        }
        SourceKind::AuctionsJson => {
            uppercase(&mut obj, "status");
            if let Some(Value::Array(bids)) = obj.get_mut("supplierBids") {
                for bid in bids.iter_mut() {
                    if let Some(price) = bid.get("price").cloned() {
                        bid["price"] = money_value(&price, MoneyUnit::Eur, "price")?;
                    }
                }
            }
            let e: Auction = build(obj)?;
            Entity::Auction(e)
        }
    };
    Ok(entity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn raw(pairs: &[(&str, &str)]) -> RawRecord {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
            .collect()
    }

    fn po_row() -> RawRecord {
        raw(&[
            ("id", "p1"),
            ("supplier_id", "s1"),
            ("material_id", "m1"),
            ("volume_eur", "1500"),
            ("quantity", "3"),
            ("order_date", "2024-02-01"),
            ("department", "Assembly"),
            ("owner_user_id", "u1"),
        ])
    }

    #[test]
    fn kilo_euro_annotation() {
        let mut r = po_row();
        r.remove("volume_eur");
        r.insert("vol_keur".into(), json!("1.5"));
        let mapping = BTreeMap::from([("vol_keur".to_string(), "volumeEur(kEUR)".to_string())]);
        let e = normalize_record(&r, &mapping, SourceKind::PurchaseOrdersCsv, &GwpTable::default()).unwrap();
        match e {
            Entity::PurchaseOrder(po) => assert_eq!(po.volume_eur.cents(), 150_000),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_mapping_on_canonical_record() {
        let canonical = json!({
            "id": "p1", "supplierId": "s1", "materialId": "m1", "volumeEur": "1500",
            "quantity": "3", "orderDate": "2024-02-01", "department": "Assembly", "ownerUserId": "u1"
        });
        let raw: RawRecord = serde_json::from_value(canonical).unwrap();
        let a = normalize_record(&raw, &BTreeMap::new(), SourceKind::PurchaseOrdersCsv, &GwpTable::default()).unwrap();
        let b = normalize_record(&po_row(), &BTreeMap::new(), SourceKind::PurchaseOrdersCsv, &GwpTable::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn record_errors() {
        let gwp = GwpTable::default();
        let mut r = po_row();
        r.remove("material_id");
        let err = normalize_record(&r, &BTreeMap::new(), SourceKind::PurchaseOrdersCsv, &gwp).unwrap_err();
        assert_eq!(err.to_string(), "missing field materialId");

        let mut r = po_row();
        r.insert("quantity".into(), json!("-5"));
        let err = normalize_record(&r, &BTreeMap::new(), SourceKind::PurchaseOrdersCsv, &gwp).unwrap_err();
        assert_eq!(err.to_string(), "quantity must be > 0");

        let mapping = BTreeMap::from([("volume_eur".to_string(), "volumeEur(yen)".to_string())]);
        let err = normalize_record(&po_row(), &mapping, SourceKind::PurchaseOrdersCsv, &gwp).unwrap_err();
        assert_eq!(err.to_string(), "unknown unit annotation 'yen'");
    }

    #[test]
    fn supplier_gas_map_uses_gwp() {
        let gwp = GwpTable::new(BTreeMap::from([("CH4".to_string(), Decimal::from(28))])).unwrap();
        let r: RawRecord = serde_json::from_value(json!({
            "id": "s1", "name": "S", "sector_code": "C24", "total_revenue": 100,
            "reported_ccf": {"CO2": 10, "CH4": 1},
            "sub_suppliers": [{"supplier_id": "s2", "material_id": "m1", "quantity_per_unit": 2}]
        }))
        .unwrap();
        match normalize_record(&r, &BTreeMap::new(), SourceKind::SuppliersJson, &gwp).unwrap() {
            Entity::Supplier(s) => {
                assert_eq!(s.reported_ccf, Some(Decimal::from(38)));
                assert_eq!(s.total_revenue, Money::from_eur(100));
                assert_eq!(s.sub_suppliers[0].supplier_id.as_str(), "s2");
            }
            other => panic!("{other:?}"),
        }
        let unknown: RawRecord = serde_json::from_value(json!({
            "id": "s1", "name": "S", "sector_code": "C24", "total_revenue": 100, "reported_ccf": {"SF6": 1}
        }))
        .unwrap();
        let err = normalize_record(&unknown, &BTreeMap::new(), SourceKind::SuppliersJson, &gwp).unwrap_err();
        assert!(err.to_string().contains("SF6"));
    }

    #[test]
    fn factor_rows() {
        let r = raw(&[
            ("scope", "product"),
            ("key", "m1"),
            ("factor_value", "0.004"),
            ("factor_unit", "tCO2e_per_unit"),
            ("source_name", "db"),
        ]);
        match normalize_record(&r, &BTreeMap::new(), SourceKind::EmissionFactorsCsv, &GwpTable::default()).unwrap() {
            Entity::EmissionFactor(f) => {
                assert_eq!(f.scope, FactorScope::Product);
                assert_eq!(f.value, Decimal::new(4, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn camel_case() {
        assert_eq!(snake_to_camel("owner_user_id"), "ownerUserId");
        assert_eq!(snake_to_camel("id"), "id");
        assert_eq!(snake_to_camel("alreadyCamel"), "alreadyCamel");
    }
}
