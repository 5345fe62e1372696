use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use rust_decimal::prelude::ToPrimitive;
use rust_decimal::{Decimal, RoundingStrategy};
use serde::{Deserialize, Serialize};

use crate::error::{DpwError, Result};

/// Non-negative amount of money in integer euro cents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Money(u64);

/// Currency units accepted in field-mapping annotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoneyUnit {
    Cents,
    Eur,
    KEur,
    MEur,
}

impl MoneyUnit {
    pub fn parse(annotation: &str) -> Option<Self> {
        match annotation {
            "ct" | "cents" => Some(MoneyUnit::Cents),
            "EUR" | "eur" => Some(MoneyUnit::Eur),
            "kEUR" | "keur" => Some(MoneyUnit::KEur),
            "MEUR" | "meur" => Some(MoneyUnit::MEur),
            _ => None,
        }
    }

    fn cents_per_unit(self) -> Decimal {
        match self {
            MoneyUnit::Cents => Decimal::ONE,
            MoneyUnit::Eur => Decimal::from(100),
            MoneyUnit::KEur => Decimal::from(100_000),
            MoneyUnit::MEur => Decimal::from(100_000_000),
        }
    }
}

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_cents(cents: u64) -> Self {
        Money(cents)
    }

    pub fn from_eur(eur: u64) -> Self {
        Money(eur * 100)
    }

    /// Converts a decimal amount in `unit` to cents, rounding half away from
    /// zero to the nearest cent. Negative amounts are rejected.
    pub fn from_decimal(amount: Decimal, unit: MoneyUnit) -> Result<Self> {
        if amount.is_sign_negative() && !amount.is_zero() {
            return Err(DpwError::validation(format!(
                "money amount must be >= 0, got {amount}"
            )));
        }
        let cents = (amount * unit.cents_per_unit())
            .round_dp_with_strategy(0, RoundingStrategy::MidpointAwayFromZero);
        cents
            .to_u64()
            .map(Money)
            .ok_or_else(|| DpwError::validation(format!("money amount out of range: {amount}")))
    }

    pub fn parse(text: &str, unit: MoneyUnit) -> Result<Self> {
        let amount = Decimal::from_str(text.trim())
            .map_err(|_| DpwError::validation(format!("not a number: '{text}'")))?;
        Money::from_decimal(amount, unit)
    }

    pub fn cents(self) -> u64 {
        self.0
    }

    pub fn as_eur(self) -> Decimal {
        Decimal::from(self.0) / Decimal::from(100)
    }

    pub fn as_keur(self) -> Decimal {
        Decimal::from(self.0) / Decimal::from(100_000)
    }

    pub fn as_decimal_cents(self) -> Decimal {
        Decimal::from(self.0)
    }

    pub fn checked_add(self, other: Money) -> Option<Money> {
        self.0.checked_add(other.0).map(Money)
    }
}

impl Add for Money {
    type Output = Money;

    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}
