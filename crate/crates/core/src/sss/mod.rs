//! Sustainable sourcing: staged CO2e scores, supply-chain aggregation,
//! risk alerts and greener-supplier suggestions.

mod alerts;
mod chain;
mod factors;
mod score;
mod stages;

pub use alerts::{
    detect_risks, rank_alternatives, AlertKind, AlertSubject, Alternative, RiskThresholds,
    ScoreObservation, Severity, SustainabilityAlert,
};
pub use chain::{aggregate_chain, with_chain, ChainAggregate, ChainEntry, SupplyGraph};
pub use factors::{factor_key, to_co2e, EmissionFactor, FactorScope, FactorUnit, GwpTable};
pub use score::{
    compute_score, line_candidates, purchase_lines, score_subject, BreakdownEntry,
    ComponentInput, Footprint, PurchaseLine, ScoreSubject, StageCandidates, SustainabilityScore,
};
pub use stages::{
    select_stage, stage1_monetary_ccf, stage2_sector_ccf, stage3_product_pcf,
    stage4_reported_pcf, Stage,
};
