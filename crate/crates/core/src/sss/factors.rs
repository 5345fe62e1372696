use std::collections::BTreeMap;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::error::{DpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FactorScope {
    /// Keyed by sector code, applied to spend.
    Sector,
    /// Keyed by material id, applied to quantity.
    Product,
}

impl FactorScope {
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "sector" => Some(FactorScope::Sector),
            "product" => Some(FactorScope::Product),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FactorScope::Sector => "sector",
            FactorScope::Product => "product",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorUnit {
    #[serde(rename = "tCO2e_per_kEUR")]
    PerKEur,
    #[serde(rename = "tCO2e_per_unit")]
    PerUnit,
}

impl FactorUnit {
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "tCO2e_per_kEUR" => Some(FactorUnit::PerKEur),
            "tCO2e_per_unit" => Some(FactorUnit::PerUnit),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FactorUnit::PerKEur => "tCO2e_per_kEUR",
            FactorUnit::PerUnit => "tCO2e_per_unit",
        }
    }
}

/// Third-party emission factor for a sector (spend-based) or a product
/// (quantity-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EmissionFactor {
    pub scope: FactorScope,
    pub key: String,
    pub value: Decimal,
    pub unit: FactorUnit,
    pub source_name: String,
}

impl EmissionFactor {
    pub fn sector(key: impl Into<String>, value: Decimal, source: impl Into<String>) -> Self {
        EmissionFactor {
            scope: FactorScope::Sector,
            key: key.into(),
            value,
            unit: FactorUnit::PerKEur,
            source_name: source.into(),
        }
    }

    pub fn product(key: impl Into<String>, value: Decimal, source: impl Into<String>) -> Self {
        EmissionFactor {
            scope: FactorScope::Product,
            key: key.into(),
            value,
            unit: FactorUnit::PerUnit,
            source_name: source.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let consistent = matches!(
            (self.scope, self.unit),
            (FactorScope::Sector, FactorUnit::PerKEur) | (FactorScope::Product, FactorUnit::PerUnit)
        );
        if !consistent {
            return Err(DpwError::validation(format!(
                "{} factor '{}' must not use unit {}",
                self.scope.as_str(),
                self.key,
                self.unit.as_str()
            )));
        }
        if self.value.is_sign_negative() && !self.value.is_zero() {
            return Err(DpwError::validation(format!(
                "factor_value must be >= 0, got {}",
                self.value
            )));
        }
        if self.key.trim().is_empty() {
            return Err(DpwError::validation("factor key must not be empty"));
        }
        Ok(())
    }

    /// Natural key used by the store: `sector:<code>` or `product:<material>`.
    pub fn natural_key(&self) -> String {
        factor_key(self.scope, &self.key)
    }
}

pub fn factor_key(scope: FactorScope, key: &str) -> String {
    format!("{}:{}", scope.as_str(), key)
}

/// Global-warming-potential multipliers by gas name. CO2 is always 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GwpTable {
    pub factors: BTreeMap<String, Decimal>,
}

impl Default for GwpTable {
    fn default() -> Self {
        GwpTable {
            factors: BTreeMap::from([("CO2".to_owned(), Decimal::ONE)]),
        }
    }
}

impl GwpTable {
    pub fn new(factors: BTreeMap<String, Decimal>) -> Result<Self> {
        let mut table = GwpTable { factors };
        table.factors.entry("CO2".into()).or_insert(Decimal::ONE);
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        match self.factors.get("CO2") {
            Some(v) if *v == Decimal::ONE => {}
            Some(v) => {
                return Err(DpwError::validation(format!(
                    "gwpTable must map CO2 to 1, got {v}"
                )))
            }
            None => return Err(DpwError::validation("gwpTable must contain CO2")),
        }
        if let Some((gas, v)) = self.factors.iter().find(|(_, v)| **v <= Decimal::ZERO) {
            return Err(DpwError::validation(format!(
                "gwp multiplier for {gas} must be > 0, got {v}"
            )));
        }
        Ok(())
    }
}

/// Σ amount × GWP multiplier, in tCO2e.
pub fn to_co2e(gas_amounts: &BTreeMap<String, Decimal>, table: &GwpTable) -> Result<Decimal> {
    gas_amounts.iter().try_fold(Decimal::ZERO, |acc, (gas, amount)| {
        let factor = table.factors.get(gas).ok_or_else(|| {
            DpwError::validation_with(format!("unknown gas '{gas}'"), vec![gas.clone()])
        })?;
        Ok(acc + amount * factor)
    })
}
