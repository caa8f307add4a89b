//! Exact half-integer arithmetic for angular-momentum quantum numbers.
//!
//! `J` and `M` are stored as twice their value so that half-integers like
//! 21/2 are represented exactly and never compared through floats.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A half-integer stored as its doubled value.
///
/// ```
/// use tacs::HalfInt;
///
/// let j: HalfInt = "21/2".parse().unwrap();
/// assert_eq!(j.twice(), 21);
/// assert_eq!(j.to_string(), "21/2");
/// assert_eq!(j.value(), 10.5);
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    /// Builds from the doubled value, e.g. `from_twice(21)` is 21/2.
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    /// Builds from a whole integer.
    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// True when the value is of the form k + 1/2.
    pub const fn is_half_odd(self) -> bool {
        self.twice % 2 != 0
    }

    /// Dimension 2J+1 of the multiplet with this J.
    pub fn multiplet_dim(self) -> usize {
        (self.twice + 1) as usize
    }

    /// Descending M values J, J-1, ..., -J of this multiplet.
    pub fn multiplet(self) -> impl Iterator<Item = HalfInt> {
        let top = self.twice;
        (0..=top).map(move |i| HalfInt::from_twice(top - 2 * i))
    }

    /// Half-integers of the same parity as `self`, from `self` up to `max`.
    pub fn stride_to(self, max: HalfInt) -> impl Iterator<Item = HalfInt> {
        let start = self.twice;
        (0..).map(move |i| HalfInt::from_twice(start + 2 * i)).take_while(move |j| j.twice <= max.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"21/2"`, `"10.5"` and `"3"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::ParseHalfInt(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(bad());
            }
            let n: i64 = num.trim().parse().map_err(|_| bad())?;
            return Ok(HalfInt::from_twice(n));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
            let n: i64 = int.parse().map_err(|_| bad())?;
            return match frac {
                "0" | "00" => Ok(HalfInt::from_int(n)),
                "5" | "50" => Ok(HalfInt::from_twice(2 * n + sign)),
                _ => Err(bad()),
            };
        }
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok(HalfInt::from_int(n))
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}
