use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// An arbitrary-precision integer that is at least one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosInt(BigUint);

impl PosInt {
    pub fn new(value: BigUint) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::NotPositive(value.to_string()));
        }
        Ok(Self(value))
    }

    pub fn one() -> Self {
        Self(BigUint::one())
    }

    pub fn is_odd(&self) -> bool {
        self.0.bit(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    /// The value as a `u64`, when it fits.
    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }

    /// Used internally where the arithmetic guarantees a nonzero result.
    pub(crate) fn from_nonzero(value: BigUint) -> Self {
        debug_assert!(!value.is_zero());
        Self(value)
    }
}

impl Deref for PosInt {
    type Target = BigUint;

    fn deref(&self) -> &BigUint {
        &self.0
    }
}

impl TryFrom<u64> for PosInt {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        Self::new(BigUint::from(value))
    }
}

impl TryFrom<BigUint> for PosInt {
    type Error = Error;

    fn try_from(value: BigUint) -> Result<Self> {
        Self::new(value)
    }
}

impl From<PosInt> for BigUint {
    fn from(value: PosInt) -> Self {
        value.0
    }
}

impl FromStr for PosInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = BigUint::from_str(s.trim()).map_err(|_| Error::Parse(s.to_string()))?;
        Self::new(value)
    }
}

impl fmt::Display for PosInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for PosInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for PosInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        decimal::serialize(&self.0, serializer)
    }
}

impl<'de> Deserialize<'de> for PosInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Number::deserialize(deserializer)?;
        value.to_string().parse().map_err(serde::de::Error::custom)
    }
}

/// Serde helpers that write big integers as plain JSON numbers in decimal,
/// never in exponent notation and never as strings.
pub mod decimal {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::Serializer;

    pub fn serialize<T: Display, S: Serializer>(
        value: &T,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let number = serde_json::Number::from_str(&value.to_string())
            .map_err(serde::ser::Error::custom)?;
        serde::Serialize::serialize(&number, serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero() {
        assert!(PosInt::try_from(0u64).is_err());
        assert!("0".parse::<PosInt>().is_err());
        assert!("abc".parse::<PosInt>().is_err());
    }

    #[test]
    fn large_values_serialize_without_exponent() {
        let big: PosInt = "123456789012345678901234567890".parse().unwrap();
        let json = serde_json::to_string(&big).unwrap();
        assert_eq!(json, "123456789012345678901234567890");
        let back: PosInt = serde_json::from_str(&json).unwrap();
        assert_eq!(back, big);
    }
}
