//! Extended nonnegative rationals `[0, inf]` with exact arithmetic.
//!
//! Every quantity in this crate is either a nonnegative rational (kept in
//! lowest terms) or the absorbing top element `inf`. Addition saturates,
//! subtraction truncates at zero, and empty infima/suprema default to the
//! corresponding unit (`inf` and `0`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational kept in lowest terms. Denominators stay tiny in practice
/// (entry pools use denominators <= 4), so `i64` components are ample.
pub type Rat = Ratio<i64>;

/// A value in `[0, inf]`: either an exact nonnegative rational or infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtVal {
    /// A finite nonnegative rational.
    Fin(Rat),
    /// The absorbing top element.
    Inf,
}

pub use ExtVal::{Fin, Inf};

/// Error produced when parsing a textual extended value fails.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseExtValError {
    #[error("empty value")]
    Empty,
    #[error("invalid numeral: {0:?}")]
    BadNumeral(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("negative values are not representable: {0:?}")]
    Negative(String),
}

impl ExtVal {
    /// The additive unit, `0`.
    pub const ZERO: ExtVal = Fin(Ratio::new_raw(0, 1));
    /// The absorbing top element.
    pub const INF: ExtVal = Inf;

    /// Builds `n` as an extended value.
    pub fn int(n: i64) -> ExtVal {
        assert!(n >= 0, "extended values are nonnegative");
        Fin(Ratio::from_integer(n))
    }

    /// Builds `num/den` (reduced). Panics on `den == 0` or a negative ratio.
    pub fn rat(num: i64, den: i64) -> ExtVal {
        assert!(den != 0, "zero denominator");
        let r = Ratio::new(num, den);
        assert!(!r.is_negative(), "extended values are nonnegative");
        Fin(r)
    }

    /// True for the zero value.
    pub fn is_zero(self) -> bool {
        self == ExtVal::ZERO
    }

    /// True for any finite value.
    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    /// True for `inf`.
    pub fn is_infinite(self) -> bool {
        matches!(self, Inf)
    }

    /// The finite payload, if any.
    pub fn finite(self) -> Option<Rat> {
        match self {
            Fin(r) => Some(r),
            Inf => None,
        }
    }

    /// Saturating addition: `inf + x = x + inf = inf`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: ExtVal) -> ExtVal {
        match (self, other) {
            (Fin(a), Fin(b)) => Fin(a + b),
            _ => Inf,
        }
    }

    /// Truncated subtraction `(self - other)_+`.
    ///
    /// Conventions: finite minus `inf` is `0`, `inf` minus finite is `inf`,
    /// and `inf - inf` truncates to `0`.
    pub fn tminus(self, other: ExtVal) -> ExtVal {
        match (self, other) {
            (Fin(a), Fin(b)) => {
                if a > b {
                    Fin(a - b)
                } else {
                    ExtVal::ZERO
                }
            }
            (_, Inf) => ExtVal::ZERO,
            (Inf, Fin(_)) => Inf,
        }
    }

    /// Scales by a natural number, with `0 * inf = 0`.
    pub fn scale(self, n: u32) -> ExtVal {
        if n == 0 {
            return ExtVal::ZERO;
        }
        match self {
            Fin(r) => Fin(r * Ratio::from_integer(n as i64)),
            Inf => Inf,
        }
    }

    /// Exact midpoint of two finite values; `inf` if either side is `inf`.
    pub fn midpoint(self, other: ExtVal) -> ExtVal {
        match (self, other) {
            (Fin(a), Fin(b)) => Fin((a + b) / Ratio::from_integer(2)),
            _ => Inf,
        }
    }

    /// Infimum of an iterator, with `inf {} = inf`.
    pub fn inf_of(values: impl IntoIterator<Item = ExtVal>) -> ExtVal {
        values.into_iter().fold(Inf, ExtVal::min)
    }

    /// Supremum of an iterator, with `sup {} = 0`.
    pub fn sup_of(values: impl IntoIterator<Item = ExtVal>) -> ExtVal {
        values.into_iter().fold(ExtVal::ZERO, ExtVal::max)
    }
}

impl Ord for ExtVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Fin(a), Fin(b)) => a.cmp(b),
            (Fin(_), Inf) => Ordering::Less,
            (Inf, Fin(_)) => Ordering::Greater,
            (Inf, Inf) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inf => write!(f, "inf"),
            Fin(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for ExtVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtVal {
    type Err = ParseExtValError;

    /// Accepts `"a/b"`, a plain integer `"a"`, or `"inf"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseExtValError::Empty);
        }
        if s == "inf" {
            return Ok(Inf);
        }
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num: i64 = num_s
            .parse()
            .map_err(|_| ParseExtValError::BadNumeral(s.to_string()))?;
        let den: i64 = match den_s {
            Some(d) => d
                .parse()
                .map_err(|_| ParseExtValError::BadNumeral(s.to_string()))?,
            None => 1,
        };
        if den == 0 {
            return Err(ParseExtValError::ZeroDenominator(s.to_string()));
        }
        let r = Ratio::new(num, den);
        if r.is_negative() {
            return Err(ParseExtValError::Negative(s.to_string()));
        }
        Ok(Fin(r))
    }
}

impl Serialize for ExtVal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtVal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
