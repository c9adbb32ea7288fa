//! Fixed-precision USD amounts.
//!
//! Every dollar figure in the simulator is a [`MoneyUsd`]: a decimal value
//! quantized to six fractional digits (micro-dollars). Addition and
//! subtraction of quantized values are exact, so ledger replays and the
//! profit identity hold to the last micro-dollar regardless of summation
//! order. Multiplying by a rate (profit margin, fee percentage) rounds the
//! product back to six places using banker's rounding.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use rust_decimal::{Decimal, RoundingStrategy};
use serde::{Deserialize, Serialize};

/// Number of fractional decimal digits carried by [`MoneyUsd`].
pub const MONEY_SCALE: u32 = 6;

/// A USD amount with exactly six decimal places.
///
/// The value may be negative: net profits, ledger deltas, and outflows are
/// signed. Construction always quantizes, so two `MoneyUsd` values compare
/// equal iff they denote the same micro-dollar amount.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(from = "Decimal", into = "Decimal")]
pub struct MoneyUsd(Decimal);

impl MoneyUsd {
    pub const ZERO: MoneyUsd = MoneyUsd(Decimal::ZERO);

    /// Quantizes `amount` to six decimal places, rounding half to even.
    pub fn new(amount: Decimal) -> Self {
        MoneyUsd(amount.round_dp_with_strategy(MONEY_SCALE, RoundingStrategy::MidpointNearestEven))
    }

    /// Whole-dollar constructor, handy for fixtures.
    pub fn from_dollars(dollars: i64) -> Self {
        MoneyUsd(Decimal::from(dollars))
    }

    /// The underlying decimal amount.
    pub fn amount(&self) -> Decimal {
        self.0
    }

    /// Multiplies by a dimensionless rate and re-quantizes.
    ///
    /// Used for `V_i * p_i` style terms where the rate is a fraction such as
    /// `0.01129` for 1.129%.
    pub fn mul_rate(&self, rate: Decimal) -> MoneyUsd {
        MoneyUsd::new(self.0 * rate)
    }

    /// `self / other` as a plain fraction (not money). `None` when `other`
    /// is zero.
    pub fn ratio(&self, other: MoneyUsd) -> Option<Decimal> {
        if other.0.is_zero() {
            None
        } else {
            Some(self.0 / other.0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }

    pub fn abs(&self) -> MoneyUsd {
        MoneyUsd(self.0.abs())
    }

    pub fn min(self, other: MoneyUsd) -> MoneyUsd {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: MoneyUsd) -> MoneyUsd {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Lossy conversion for statistics (standard deviations and the like).
    pub fn to_f64(&self) -> f64 {
        use rust_decimal::prelude::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<Decimal> for MoneyUsd {
    fn from(d: Decimal) -> Self {
        MoneyUsd::new(d)
    }
}

impl From<MoneyUsd> for Decimal {
    fn from(m: MoneyUsd) -> Decimal {
        m.0.normalize()
    }
}

impl fmt::Display for MoneyUsd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.normalize())
    }
}

impl std::str::FromStr for MoneyUsd {
    type Err = rust_decimal::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(MoneyUsd::new(s.parse::<Decimal>()?))
    }
}

impl Add for MoneyUsd {
    type Output = MoneyUsd;
    fn add(self, rhs: MoneyUsd) -> MoneyUsd {
        MoneyUsd(self.0 + rhs.0)
    }
}

impl Sub for MoneyUsd {
    type Output = MoneyUsd;
    fn sub(self, rhs: MoneyUsd) -> MoneyUsd {
        MoneyUsd(self.0 - rhs.0)
    }
}

impl Neg for MoneyUsd {
    type Output = MoneyUsd;
    fn neg(self) -> MoneyUsd {
        MoneyUsd(-self.0)
    }
}

impl AddAssign for MoneyUsd {
    fn add_assign(&mut self, rhs: MoneyUsd) {
        self.0 += rhs.0;
    }
}

impl SubAssign for MoneyUsd {
    fn sub_assign(&mut self, rhs: MoneyUsd) {
        self.0 -= rhs.0;
    }
}

impl Sum for MoneyUsd {
    fn sum<I: Iterator<Item = MoneyUsd>>(iter: I) -> MoneyUsd {
        iter.fold(MoneyUsd::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a MoneyUsd> for MoneyUsd {
    fn sum<I: Iterator<Item = &'a MoneyUsd>>(iter: I) -> MoneyUsd {
        iter.fold(MoneyUsd::ZERO, |acc, m| acc + *m)
    }
}
