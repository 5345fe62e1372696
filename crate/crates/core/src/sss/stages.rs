//! The four ways of attributing emissions to purchases, from coarse to exact:
//!
//! 1. monetary CCF: the buyer's share of a supplier's revenue times the
//!    supplier's corporate footprint;
//! 2. sector CCF: spend times a third-party sector factor;
//! 3. database PCF: quantity times a third-party product factor;
//! 4. reported PCF: quantity times the footprint the supplier measured.

use std::fmt;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::{EmissionFactor, FactorScope, FactorUnit};
use crate::domain::Money;
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Stage {
    MonetaryCcf = 1,
    SectorCcf = 2,
    DatabasePcf = 3,
    ReportedPcf = 4,
}

impl Stage {
    pub const ALL: [Stage; 4] = [
        Stage::MonetaryCcf,
        Stage::SectorCcf,
        Stage::DatabasePcf,
        Stage::ReportedPcf,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn is_product_footprint(self) -> bool {
        self >= Stage::DatabasePcf
    }

    pub fn label(self) -> &'static str {
        match self {
            Stage::MonetaryCcf => "monetary",
            Stage::SectorCcf => "sector",
            Stage::DatabasePcf => "database",
            Stage::ReportedPcf => "measured",
        }
    }
}

impl From<Stage> for u8 {
    fn from(s: Stage) -> u8 {
        s.number()
    }
}

impl TryFrom<u8> for Stage {
    type Error = String;

    fn try_from(n: u8) -> std::result::Result<Self, String> {
        Stage::ALL
            .into_iter()
            .find(|s| s.number() == n)
            .ok_or_else(|| format!("stage must be 1..=4, got {n}"))
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} · {}", self.number(), self.label())
    }
}

/// Highest-numbered stage in `available`, if any.
pub fn select_stage(available: impl IntoIterator<Item = Stage>) -> Option<Stage> {
    available.into_iter().max()
}

/// `spend / revenue × ccf`, in tCO2e.
pub fn stage1_monetary_ccf(spend: Money, supplier_revenue: Money, supplier_ccf: Decimal) -> Result<Decimal> {
    if supplier_revenue == Money::ZERO {
        return Err(DpwError::UndefinedAllocation(
            "supplier revenue is zero".into(),
        ));
    }
    if spend > supplier_revenue {
        return Err(DpwError::validation(format!(
            "spend {spend} EUR exceeds supplier revenue {supplier_revenue} EUR"
        )));
    }
    if supplier_ccf.is_sign_negative() && !supplier_ccf.is_zero() {
        return Err(DpwError::validation("supplier CCF must be >= 0"));
    }
    // multiply first so terminating shares stay exact
    Ok(supplier_ccf * spend.as_decimal_cents() / supplier_revenue.as_decimal_cents())
}

/// `spend in kEUR × sector factor`, in tCO2e.
pub fn stage2_sector_ccf(spend: Money, sector_factor: &EmissionFactor) -> Result<Decimal> {
    if sector_factor.scope != FactorScope::Sector || sector_factor.unit != FactorUnit::PerKEur {
        return Err(DpwError::validation(format!(
            "stage 2 requires a sector factor in tCO2e_per_kEUR, got {} factor '{}' in {}",
            sector_factor.scope.as_str(),
            sector_factor.key,
            sector_factor.unit.as_str()
        )));
    }
    Ok(spend.as_keur() * sector_factor.value)
}

/// `quantity × product factor`, in tCO2e. The factor must be keyed to `material_id`.
pub fn stage3_product_pcf(material_id: &str, quantity: Decimal, product_factor: &EmissionFactor) -> Result<Decimal> {
    if product_factor.scope != FactorScope::Product || product_factor.unit != FactorUnit::PerUnit {
        return Err(DpwError::validation(format!(
            "stage 3 requires a product factor in tCO2e_per_unit, got {} factor '{}'",
            product_factor.scope.as_str(),
            product_factor.key
        )));
    }
    if product_factor.key != material_id {
        return Err(DpwError::validation(format!(
            "product factor is keyed to '{}', not material '{material_id}'",
            product_factor.key
        )));
    }
    if quantity.is_sign_negative() && !quantity.is_zero() {
        return Err(DpwError::validation("quantity must be >= 0"));
    }
    Ok(quantity * product_factor.value)
}

/// `quantity × reported PCF`, or `None` when the supplier reports nothing
/// for the material (stage unavailable).
pub fn stage4_reported_pcf(quantity: Decimal, reported_pcf: Option<Decimal>) -> Option<Decimal> {
    reported_pcf
        .filter(|pcf| !pcf.is_sign_negative() || pcf.is_zero())
        .map(|pcf| quantity * pcf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rust_decimal_macros::dec;

    fn eur(v: u64) -> Money {
        Money::from_eur(v)
    }

    #[test]
    fn stage1_ten_percent_share() {
        assert_eq!(stage1_monetary_ccf(eur(10), eur(100), dec!(1000)).unwrap(), dec!(100));
        assert_eq!(stage1_monetary_ccf(eur(0), eur(100), dec!(1000)).unwrap(), dec!(0));
        assert_eq!(stage1_monetary_ccf(eur(100), eur(100), dec!(773.2)).unwrap(), dec!(773.2));
    }

    #[test]
    fn stage1_errors() {
        assert!(matches!(
            stage1_monetary_ccf(eur(0), eur(0), dec!(1)),
            Err(DpwError::UndefinedAllocation(_))
        ));
        assert!(matches!(
            stage1_monetary_ccf(eur(101), eur(100), dec!(1)),
            Err(DpwError::Validation { .. })
        ));
    }

    #[test]
    fn stage2_spend_in_keur() {
        let f = EmissionFactor::sector("C24", dec!(0.35), "db");
        // 2 000 kEUR × 0.35
        assert_eq!(stage2_sector_ccf(eur(2_000_000), &f).unwrap(), dec!(700));
        assert_eq!(stage2_sector_ccf(eur(0), &f).unwrap(), dec!(0));
        let zero = EmissionFactor::sector("C24", dec!(0), "db");
        assert_eq!(stage2_sector_ccf(eur(12_345), &zero).unwrap(), dec!(0));
        let product = EmissionFactor::product("m1", dec!(1), "db");
        assert!(stage2_sector_ccf(eur(1), &product).is_err());
    }

    #[test]
    fn stage3_quantity_times_factor() {
        let f = EmissionFactor::product("m1", dec!(0.004), "db");
        assert_eq!(stage3_product_pcf("m1", dec!(500), &f).unwrap(), dec!(2.0));
        assert_eq!(stage3_product_pcf("m1", dec!(0), &f).unwrap(), dec!(0));
        assert!(stage3_product_pcf("m2", dec!(500), &f).is_err());
        let sector = EmissionFactor::sector("m1", dec!(1), "db");
        assert!(stage3_product_pcf("m1", dec!(1), &sector).is_err());
    }

    #[test]
    fn stage4_reported() {
        assert_eq!(stage4_reported_pcf(dec!(10), Some(dec!(0.5))), Some(dec!(5.0)));
        assert_eq!(stage4_reported_pcf(dec!(0), Some(dec!(0.5))), Some(dec!(0)));
        assert_eq!(stage4_reported_pcf(dec!(10), None), None);
    }

    #[test]
    fn selection_is_maximum_over_all_subsets() {
        for mask in 1u8..16 {
            let available: Vec<Stage> = Stage::ALL
                .into_iter()
                .filter(|s| mask & (1 << (s.number() - 1)) != 0)
                .collect();
            let expected = (1..=4u8).rev().find(|n| mask & (1 << (n - 1)) != 0).unwrap();
            assert_eq!(select_stage(available).unwrap().number(), expected, "mask {mask:04b}");
        }
        assert_eq!(select_stage([]), None);
    }

    #[test]
    fn stage_serializes_as_number() {
        assert_eq!(serde_json::to_string(&Stage::SectorCcf).unwrap(), "2");
        assert_eq!(serde_json::from_str::<Stage>("4").unwrap(), Stage::ReportedPcf);
        assert!(serde_json::from_str::<Stage>("5").is_err());
        assert_eq!(Stage::ReportedPcf.to_string(), "4 · measured");
    }
}
