use serde::Serialize;
use serde_json::Value;

use crate::domain::{Auction, Contract, PurchaseOrder, Rfq, Task};
use crate::error::{DpwError, Result};

/// A serializable row type with a fixed set of exportable columns. Column
/// names are the record's JSON field names.
pub trait Tabular: Serialize {
    const COLUMNS: &'static [&'static str];
}

impl Tabular for Rfq {
    const COLUMNS: &'static [&'static str] = &[
        "id",
        "ownerUserId",
        "department",
        "supplierId",
        "materialId",
        "quantity",
        "targetPrice",
        "status",
        "createdAt",
        "dueAt",
        "supersededBy",
    ];
}

impl Tabular for Auction {
    const COLUMNS: &'static [&'static str] =
        &["id", "ownerUserId", "materialId", "status", "createdAt", "supplierBids"];
}

impl Tabular for PurchaseOrder {
    const COLUMNS: &'static [&'static str] = &[
        "id",
        "supplierId",
        "materialId",
        "volumeEur",
        "quantity",
        "orderDate",
        "department",
        "ownerUserId",
    ];
}

impl Tabular for Contract {
    const COLUMNS: &'static [&'static str] = &["id", "supplierId", "ownerUserId", "validFrom", "validTo"];
}

impl Tabular for Task {
    const COLUMNS: &'static [&'static str] = &["id", "assigneeUserId", "processRef", "title", "state"];
}

/// Text form of one JSON cell: strings verbatim, null as empty, everything
/// else as compact JSON.
pub fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// RFC-4180 CSV with a header row. Deterministic for identical input.
pub fn write_csv<S: AsRef<str>>(header: &[S], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(header.iter().map(AsRef::as_ref))?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner()
        .map_err(|e| DpwError::Io(format!("csv buffer: {e}")))
}

/// Exports the selected columns of `rows`, in column order.
pub fn export_table<T: Tabular>(rows: &[T], columns: &[&str]) -> Result<Vec<u8>> {
    let unknown: Vec<String> = columns
        .iter()
        .filter(|c| !T::COLUMNS.contains(c))
        .map(|c| c.to_string())
        .collect();
    if !unknown.is_empty() {
        return Err(DpwError::validation_with("unknown export column", unknown));
    }
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let v = serde_json::to_value(row)?;
        out.push(
            columns
                .iter()
                .map(|c| cell_text(v.get(*c).unwrap_or(&Value::Null)))
                .collect(),
        );
    }
    write_csv(columns, &out)
}
