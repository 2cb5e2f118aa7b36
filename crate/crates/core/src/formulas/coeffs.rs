use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which cuspform space a dimension refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Full,
    New,
    /// Twist-minimal newforms.
    Min,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 3] = [SpaceKind::Full, SpaceKind::New, SpaceKind::Min];

    pub fn as_str(self) -> &'static str {
        match self {
            SpaceKind::Full => "full",
            SpaceKind::New => "new",
            SpaceKind::Min => "min",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            SpaceKind::Full => 0,
            SpaceKind::New => 1,
            SpaceKind::Min => 2,
        }
    }

    pub(crate) fn from_code(c: u8) -> Option<Self> {
        Self::ALL.get(c as usize).copied()
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SpaceKind::Full),
            "new" => Ok(SpaceKind::New),
            "min" | "minimal" => Ok(SpaceKind::Min),
            _ => Err(Error::InvalidInput(format!(
                "unknown space {s:?} (expected full, new or min)"
            ))),
        }
    }
}

/// An even weight `k >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Weight(u64);

impl Weight {
    pub fn new(k: u64) -> Result<Self> {
        if k >= 2 && k % 2 == 0 {
            Ok(Weight(k))
        } else {
            Err(Error::InvalidWeight(k))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// All even weights in `2..=max`.
    pub fn up_to(max: u64) -> impl Iterator<Item = Weight> {
        (2..=max).step_by(2).map(Weight)
    }
}

impl TryFrom<u64> for Weight {
    type Error = Error;

    fn try_from(k: u64) -> Result<Self> {
        Weight::new(k)
    }
}

impl From<Weight> for u64 {
    fn from(w: Weight) -> u64 {
        w.0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An exact rational with denominator dividing 12, stored as its numerator
/// over 12.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TwelfthInt {
    pub num12: i128,
}

impl TwelfthInt {
    pub const ZERO: TwelfthInt = TwelfthInt { num12: 0 };

    pub const fn from_twelfths(num12: i128) -> Self {
        TwelfthInt { num12 }
    }

    pub const fn from_int(v: i128) -> Self {
        TwelfthInt { num12: 12 * v }
    }

    pub fn checked_mul_int(self, v: i128) -> Option<Self> {
        self.num12.checked_mul(v).map(Self::from_twelfths)
    }

    /// The integer value, if this is one.
    pub fn to_integer(self) -> Option<i128> {
        (self.num12 % 12 == 0).then_some(self.num12 / 12)
    }

    pub fn to_f64(self) -> f64 {
        self.num12 as f64 / 12.0
    }
}

impl Add for TwelfthInt {
    type Output = TwelfthInt;
    fn add(self, rhs: Self) -> Self {
        TwelfthInt::from_twelfths(self.num12 + rhs.num12)
    }
}

impl Sub for TwelfthInt {
    type Output = TwelfthInt;
    fn sub(self, rhs: Self) -> Self {
        TwelfthInt::from_twelfths(self.num12 - rhs.num12)
    }
}

impl Neg for TwelfthInt {
    type Output = TwelfthInt;
    fn neg(self) -> Self {
        TwelfthInt::from_twelfths(-self.num12)
    }
}

impl Mul<i128> for TwelfthInt {
    type Output = TwelfthInt;
    fn mul(self, rhs: i128) -> Self {
        TwelfthInt::from_twelfths(self.num12 * rhs)
    }
}

impl fmt::Display for TwelfthInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}/12", self.num12),
        }
    }
}

/// Kronecker symbol (-4/m) for odd m, read off m mod 4.
fn kronecker_minus4(m: u64) -> i128 {
    match m % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Kronecker symbol (-3/m), read off m mod 3.
fn kronecker_minus3(m: u64) -> i128 {
    match m % 3 {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

/// c2(k) = -(1/4)(-4 / k-1).
pub fn coeff_c2(k: Weight) -> TwelfthInt {
    TwelfthInt::from_twelfths(-3 * kronecker_minus4(k.get() - 1))
}

/// c3(k) = -(1/3)(-3 / k-1).
pub fn coeff_c3(k: Weight) -> TwelfthInt {
    TwelfthInt::from_twelfths(-4 * kronecker_minus3(k.get() - 1))
}

pub fn delta2(k: Weight) -> i128 {
    i128::from(k.get() == 2)
}
