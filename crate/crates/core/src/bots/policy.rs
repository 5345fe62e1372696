use chrono::Duration;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::domain::Money;
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GroupBy {
    Material,
    MaterialGroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundlePolicy {
    pub group_by: GroupBy,
    pub window: Duration,
    pub min_bundle_size: usize,
}

impl BundlePolicy {
    pub fn new(group_by: GroupBy, window: Duration, min_bundle_size: usize) -> Result<Self> {
        if window <= Duration::zero() {
            return Err(DpwError::validation("bundle window must be > 0"));
        }
        if min_bundle_size < 2 {
            return Err(DpwError::validation("minBundleSize must be >= 2"));
        }
        Ok(BundlePolicy {
            group_by,
            window,
            min_bundle_size,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegotiationPolicy {
    /// The bot never acts on volumes above this ceiling.
    pub max_volume: Money,
    pub accept_tolerance: Decimal,
    pub counter_margin: Decimal,
}

impl NegotiationPolicy {
    pub fn new(max_volume: Money, accept_tolerance: Decimal, counter_margin: Decimal) -> Result<Self> {
        for (name, v) in [("acceptTolerance", accept_tolerance), ("counterMargin", counter_margin)] {
            if v < Decimal::ZERO || v >= Decimal::ONE {
                return Err(DpwError::validation(format!("{name} must be in [0,1), got {v}")));
            }
        }
        Ok(NegotiationPolicy {
            max_volume,
            accept_tolerance,
            counter_margin,
        })
    }
}
