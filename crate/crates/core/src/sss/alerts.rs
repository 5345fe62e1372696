use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::ScoreSubject;
use crate::domain::{MaterialGroupId, SupplierId};
use crate::paas::ShareResult;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RiskThresholds {
    #[serde(rename = "scoreTCO2e")]
    pub score_tco2e: Decimal,
    pub increase_fraction: Decimal,
    pub dependency_fraction: f64,
}

impl Default for RiskThresholds {
    fn default() -> Self {
        RiskThresholds {
            score_tco2e: Decimal::from(1000),
            increase_fraction: Decimal::new(25, 2),
            dependency_fraction: 0.8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlertKind {
    ScoreThreshold,
    ScoreIncrease,
    SingleSourceDependency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Severity {
    Info,
    Warn,
    Critical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum AlertSubject {
    Score { subject: ScoreSubject },
    Dependency {
        material_group_ids: Vec<MaterialGroupId>,
        supplier_id: SupplierId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SustainabilityAlert {
    pub kind: AlertKind,
    pub subject: AlertSubject,
    pub severity: Severity,
    pub message: String,
}

/// Latest and previous-period score of one subject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreObservation {
    pub subject: ScoreSubject,
    pub latest: Decimal,
    pub previous: Option<Decimal>,
}

/// Threshold breaches escalate to CRITICAL at twice the threshold; a
/// dependency escalates to CRITICAL when a single supplier holds the
/// whole volume.
pub fn detect_risks(
    scores: &[ScoreObservation],
    shares: &[ShareResult],
    thresholds: &RiskThresholds,
) -> Vec<SustainabilityAlert> {
    let mut alerts = Vec::new();
    for obs in scores {
        if obs.latest > thresholds.score_tco2e {
            let severity = if obs.latest > thresholds.score_tco2e * Decimal::TWO {
                Severity::Critical
            } else {
                Severity::Warn
            };
            alerts.push(SustainabilityAlert {
                kind: AlertKind::ScoreThreshold,
                subject: AlertSubject::Score {
                    subject: obs.subject.clone(),
                },
                severity,
                message: format!(
                    "{}: score {} tCO2e exceeds threshold {} tCO2e",
                    obs.subject,
                    obs.latest.normalize(),
                    thresholds.score_tco2e.normalize()
                ),
            });
        }
        if let Some(prev) = obs.previous {
            let limit = prev * (Decimal::ONE + thresholds.increase_fraction);
            if obs.latest > limit {
                alerts.push(SustainabilityAlert {
                    kind: AlertKind::ScoreIncrease,
                    subject: AlertSubject::Score {
                        subject: obs.subject.clone(),
                    },
                    severity: Severity::Warn,
                    message: format!(
                        "{}: score rose from {} to {} tCO2e, above the allowed increase fraction {}",
                        obs.subject,
                        prev.normalize(),
                        obs.latest.normalize(),
                        thresholds.increase_fraction.normalize()
                    ),
                });
            }
        }
    }
    for share in shares {
        for (supplier, fraction) in &share.shares {
            if *fraction > thresholds.dependency_fraction {
                let severity = if *fraction >= 1.0 {
                    Severity::Critical
                } else {
                    Severity::Warn
                };
                let groups: Vec<&str> = share.material_group_ids.iter().map(|g| g.as_str()).collect();
                alerts.push(SustainabilityAlert {
                    kind: AlertKind::SingleSourceDependency,
                    subject: AlertSubject::Dependency {
                        material_group_ids: share.material_group_ids.clone(),
                        supplier_id: supplier.clone(),
                    },
                    severity,
                    message: format!(
                        "supplier {supplier} holds share {fraction:.4} of material groups [{}], above dependency fraction {}",
                        groups.join(","),
                        thresholds.dependency_fraction
                    ),
                });
            }
        }
    }
    alerts
}

/// A greener-supplier candidate with its score and rating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Alternative {
    pub supplier_id: SupplierId,
    #[serde(rename = "valueTCO2e")]
    pub value_tco2e: Decimal,
    pub rating: Option<f64>,
}

/// Drops the current supplier and anything rated below `min_rating`
/// (unrated suppliers only pass a non-positive minimum), then orders by
/// ascending tCO2e, rating descending, id.
pub fn rank_alternatives(
    candidates: Vec<Alternative>,
    current: &SupplierId,
    min_rating: f64,
) -> Vec<Alternative> {
    let mut out: Vec<Alternative> = candidates
        .into_iter()
        .filter(|c| &c.supplier_id != current)
        .filter(|c| match c.rating {
            Some(r) => r >= min_rating,
            None => min_rating <= 0.0,
        })
        .collect();
    out.sort_by(|a, b| {
        a.value_tco2e
            .cmp(&b.value_tco2e)
            .then_with(|| {
                let ra = a.rating.unwrap_or(f64::NEG_INFINITY);
                let rb = b.rating.unwrap_or(f64::NEG_INFINITY);
                rb.total_cmp(&ra)
            })
            .then_with(|| a.supplier_id.cmp(&b.supplier_id))
    });
    out
}
