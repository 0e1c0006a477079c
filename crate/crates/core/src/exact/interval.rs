use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use super::format_rational;

/// Closed interval with rational endpoints bracketing a real number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RealInterval {
    lo: BigRational,
    hi: BigRational,
}

/// Outcome of comparing interval-valued quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The intervals overlap at the requested width.
    Undecided,
}

impl RealInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(value: BigRational) -> Self {
        Self {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn one() -> Self {
        Self::point(BigRational::one())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Product of two intervals with non-negative endpoints.
    pub fn mul_nonneg(&self, other: &Self) -> Self {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Self::new(&self.lo * &other.lo, &self.hi * &other.hi)
    }

    pub fn pow_nonneg(&self, exponent: u32) -> Self {
        (0..exponent).fold(Self::one(), |acc, _| acc.mul_nonneg(self))
    }

    /// Certain `self ≤ other`, certain `self > other`, or overlap.
    pub fn le(&self, other: &Self) -> Verdict {
        if self.hi <= other.lo {
            Verdict::Holds
        } else if self.lo > other.hi {
            Verdict::Fails
        } else {
            Verdict::Undecided
        }
    }

    pub fn ge(&self, other: &Self) -> Verdict {
        other.le(self)
    }

    /// Midpoint as a float, for display only.
    pub fn approx(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

/// Width `2^-bits`.
pub fn width_from_bits(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", format_rational(&self.lo))
        } else {
            let lo = self.lo.to_f64().unwrap_or(f64::NAN);
            let hi = self.hi.to_f64().unwrap_or(f64::NAN);
            write!(f, "[{lo:.6}, {hi:.6}]")
        }
    }
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RealInterval[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

impl Serialize for RealInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("RealInterval", 3)?;
        s.serialize_field("lo", &format_rational(&self.lo))?;
        s.serialize_field("hi", &format_rational(&self.hi))?;
        s.serialize_field("approx", &format!("{:.9}", self.approx()))?;
        s.end()
    }
}

impl Verdict {
    /// Conjunction: any failure wins, then any undecided.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
            _ => Verdict::Holds,
        }
    }
}
