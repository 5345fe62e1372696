use chrono::{Datelike, Months, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::domain::{Money, PurchaseOrder};
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Bucketing {
    Month,
    Quarter,
    Year,
}

impl Bucketing {
    pub fn parse(text: &str) -> Option<Self> {
        match text.to_ascii_uppercase().as_str() {
            "MONTH" => Some(Bucketing::Month),
            "QUARTER" => Some(Bucketing::Quarter),
            "YEAR" => Some(Bucketing::Year),
            _ => None,
        }
    }

    fn months(self) -> u32 {
        match self {
            Bucketing::Month => 1,
            Bucketing::Quarter => 3,
            Bucketing::Year => 12,
        }
    }

    /// First day of the calendar bucket containing `date`.
    pub fn bucket_start(self, date: NaiveDate) -> NaiveDate {
        let month0 = date.month0() / self.months() * self.months();
        NaiveDate::from_ymd_opt(date.year(), month0 + 1, 1).expect("valid bucket start")
    }

    pub fn next(self, start: NaiveDate) -> NaiveDate {
        start + Months::new(self.months())
    }
}

/// Half-open date interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if end <= start {
            return Err(DpwError::validation(format!(
                "date range must be non-empty, got [{start}, {end})"
            )));
        }
        Ok(DateRange { start, end })
    }

    pub fn year(year: i32) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(year, 1, 1)
            .ok_or_else(|| DpwError::validation(format!("invalid year {year}")))?;
        DateRange::new(start, start + Months::new(12))
    }

    pub fn contains(&self, d: NaiveDate) -> bool {
        self.start <= d && d < self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VolumePoint {
    pub period_start: NaiveDate,
    pub volume_eur: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VolumeSeries {
    pub bucketing: Bucketing,
    pub points: Vec<VolumePoint>,
}

impl VolumeSeries {
    pub fn total(&self) -> Money {
        self.points.iter().map(|p| p.volume_eur).sum()
    }
}

/// Buckets order volumes by calendar period; every bucket overlapping the
/// range is present, zero-filled when empty.
pub fn volume_series<'a>(
    orders: impl IntoIterator<Item = &'a PurchaseOrder>,
    range: DateRange,
    bucketing: Bucketing,
) -> VolumeSeries {
    let mut points = Vec::new();
    let mut start = bucketing.bucket_start(range.start);
    while start < range.end {
        points.push(VolumePoint {
            period_start: start,
            volume_eur: Money::ZERO,
        });
        start = bucketing.next(start);
    }
    for po in orders {
        if !range.contains(po.order_date) {
            continue;
        }
        let bucket = bucketing.bucket_start(po.order_date);
        let idx = points
            .binary_search_by_key(&bucket, |p| p.period_start)
            .expect("bucket covers every in-range date");
        points[idx].volume_eur += po.volume_eur;
    }
    VolumeSeries { bucketing, points }
}
