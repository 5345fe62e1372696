//! `dpw.json` configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::bots::{BundlePolicy, GroupBy, NegotiationPolicy};
use crate::domain::{LayoutEntry, Money, MoneyUnit, SourceId, WidgetLayout};
use crate::error::{DpwError, Result};
use crate::ingest::SourceConfig;
use crate::pis::FeedWeights;
use crate::sss::{GwpTable, RiskThresholds};

pub const CONFIG_ENV: &str = "DPW_CONFIG";
pub const DEFAULT_CONFIG_PATH: &str = "dpw.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Config {
    #[serde(default = "default_store_path")]
    pub store_path: PathBuf,
    #[serde(default)]
    pub sources: Vec<SourceConfig>,
    #[serde(default)]
    pub source_priority: Vec<SourceId>,
    #[serde(default)]
    pub gwp_table: GwpTable,
    #[serde(default)]
    pub bot_policies: BotPolicies,
    #[serde(default)]
    pub thresholds: RiskThresholds,
    #[serde(default)]
    pub pis: PisConfig,
    #[serde(default)]
    pub paas: PaasConfig,
    #[serde(default)]
    pub server: ServerConfig,
    #[serde(default = "default_layout")]
    pub default_layout: WidgetLayout,
    /// Directory that relative paths resolve against; set by [`Config::load`].
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_store_path() -> PathBuf {
    PathBuf::from("store.json")
}

/// Open auctions next to total purchase order volume.
pub fn default_layout() -> WidgetLayout {
    WidgetLayout::new(vec![
        LayoutEntry::new("supplier_auctions", 0, 0, 6, 4),
        LayoutEntry::new("total_po_volume", 6, 0, 6, 4),
    ])
}

impl Default for Config {
    fn default() -> Self {
        Config {
            store_path: default_store_path(),
            sources: Vec::new(),
            source_priority: Vec::new(),
            gwp_table: GwpTable::default(),
            bot_policies: BotPolicies::default(),
            thresholds: RiskThresholds::default(),
            pis: PisConfig::default(),
            paas: PaasConfig::default(),
            server: ServerConfig::default(),
            default_layout: default_layout(),
            base_dir: PathBuf::from("."),
        }
    }
}

impl Config {
    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut config: Config = serde_json::from_str(text)
            .map_err(|e| DpwError::validation(format!("invalid configuration: {e}")))?;
        config.base_dir = base_dir.into();
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DpwError::Io(format!("cannot read {}: {e}", path.display())))?;
        let base = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or_else(|| Path::new("."));
        Config::from_json(&text, base)
    }

    /// `explicit` wins over `DPW_CONFIG`, which wins over `./dpw.json`.
    pub fn resolve_path(explicit: Option<&Path>) -> PathBuf {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CONFIG_PATH))
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn store_file(&self) -> PathBuf {
        self.resolve(&self.store_path)
    }

    pub fn source(&self, id: &str) -> Option<&SourceConfig> {
        self.sources.iter().find(|s| s.source_id.as_str() == id)
    }

    /// Lower rank wins; unlisted sources share the lowest priority.
    pub fn source_rank(&self, id: &SourceId) -> usize {
        self.source_priority
            .iter()
            .position(|s| s == id)
            .unwrap_or(self.source_priority.len())
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for s in &self.sources {
            if !seen.insert(s.source_id.as_str()) {
                return Err(DpwError::validation(format!(
                    "duplicate sourceId '{}'",
                    s.source_id
                )));
            }
            s.validate()?;
        }
        self.gwp_table.validate()?;
        self.bot_policies.bundle_policy()?;
        self.bot_policies.negotiation_policy()?;
        self.default_layout.validate()?;
        self.pis.weights.validate()?;
        if !(0.0..=1.0).contains(&self.pis.sim_threshold) {
            return Err(DpwError::validation("pis.simThreshold must be in [0,1]"));
        }
        if self.pis.half_life_days <= 0.0 {
            return Err(DpwError::validation("pis.halfLifeDays must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BundlerConfig {
    pub group_by: GroupBy,
    pub window_days: i64,
    pub min_bundle_size: usize,
}

impl Default for BundlerConfig {
    fn default() -> Self {
        BundlerConfig {
            group_by: GroupBy::Material,
            window_days: 30,
            min_bundle_size: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NegotiatorConfig {
    /// Low-risk ceiling in EUR.
    pub max_volume_eur: Decimal,
    pub accept_tolerance: Decimal,
    pub counter_margin: Decimal,
}

impl Default for NegotiatorConfig {
    fn default() -> Self {
        NegotiatorConfig {
            max_volume_eur: Decimal::from(1_000_000),
            accept_tolerance: Decimal::new(2, 2),
            counter_margin: Decimal::new(1, 2),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BotPolicies {
    #[serde(default)]
    pub bundler: BundlerConfig,
    #[serde(default)]
    pub negotiator: NegotiatorConfig,
}

impl BotPolicies {
    pub fn bundle_policy(&self) -> Result<BundlePolicy> {
        BundlePolicy::new(
            self.bundler.group_by,
            chrono::Duration::days(self.bundler.window_days),
            self.bundler.min_bundle_size,
        )
    }

    pub fn negotiation_policy(&self) -> Result<NegotiationPolicy> {
        NegotiationPolicy::new(
            Money::from_decimal(self.negotiator.max_volume_eur, MoneyUnit::Eur)?,
            self.negotiator.accept_tolerance,
            self.negotiator.counter_margin,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PisConfig {
    #[serde(default = "PisConfig::default_threshold")]
    pub sim_threshold: f64,
    #[serde(default = "PisConfig::default_half_life")]
    pub half_life_days: f64,
    #[serde(default)]
    pub weights: FeedWeights,
    #[serde(default = "PisConfig::default_summary_sentences")]
    pub summary_sentences: usize,
    /// Optional replacement for the built-in stopword list.
    #[serde(default)]
    pub stopwords_path: Option<PathBuf>,
}

impl PisConfig {
    fn default_threshold() -> f64 {
        0.6
    }
    fn default_half_life() -> f64 {
        7.0
    }
    fn default_summary_sentences() -> usize {
        2
    }
}

impl Default for PisConfig {
    fn default() -> Self {
        PisConfig {
            sim_threshold: 0.6,
            half_life_days: 7.0,
            weights: FeedWeights::default(),
            summary_sentences: 2,
            stopwords_path: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PaasConfig {
    #[serde(default = "PaasConfig::default_window")]
    pub moving_average_window: usize,
    #[serde(default = "PaasConfig::default_alpha")]
    pub smoothing_alpha: f64,
    /// Company-wide default characteristic weights for supplier rating.
    #[serde(default)]
    pub rating_weights: BTreeMap<String, f64>,
}

impl PaasConfig {
    fn default_window() -> usize {
        3
    }
    fn default_alpha() -> f64 {
        0.5
    }
}

impl Default for PaasConfig {
    fn default() -> Self {
        PaasConfig {
            moving_average_window: 3,
            smoothing_alpha: 0.5,
            rating_weights: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ServerConfig {
    pub bind: String,
    pub token_ttl_seconds: i64,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            bind: "127.0.0.1:8080".into(),
            token_ttl_seconds: 3600,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let c = Config::from_json("{}", ".").unwrap();
        assert_eq!(c.pis.sim_threshold, 0.6);
        assert_eq!(c.pis.half_life_days, 7.0);
        assert_eq!(c.paas.moving_average_window, 3);
        assert_eq!(c.default_layout.entries.len(), 2);
        assert_eq!(c.bot_policies.bundler.window_days, 30);
    }

    #[test]
    fn bot_policies_parse() {
        let c = Config::from_json(
            r#"{"botPolicies":{"bundler":{"groupBy":"MATERIAL","windowDays":30,"minBundleSize":2},
                "negotiator":{"maxVolumeEur":1000000,"acceptTolerance":0.02,"counterMargin":0.01}}}"#,
            ".",
        )
        .unwrap();
        let p = c.bot_policies.negotiation_policy().unwrap();
        assert_eq!(p.max_volume.cents(), 100_000_000);
    }

    #[test]
    fn gwp_without_unit_co2_rejected() {
        assert!(Config::from_json(r#"{"gwpTable":{"CO2":2}}"#, ".").is_err());
    }

    #[test]
    fn duplicate_sources_rejected() {
        let json = r#"{"sources":[
            {"sourceId":"a","kind":"NEWS_JSON","location":"n.json"},
            {"sourceId":"a","kind":"NEWS_JSON","location":"n.json"}]}"#;
        assert!(Config::from_json(json, ".").is_err());
    }

    #[test]
    fn priority_rank() {
        let c = Config::from_json(r#"{"sourcePriority":["mdm","erp"]}"#, ".").unwrap();
        assert_eq!(c.source_rank(&"mdm".into()), 0);
        assert_eq!(c.source_rank(&"erp".into()), 1);
        assert_eq!(c.source_rank(&"other".into()), 2);
    }
}
