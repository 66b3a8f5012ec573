use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraicNumber, Cyclotomic, Rational};
use crate::error::{Error, Result};

/// A cyclotomic number or an element of a small explicit number field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactNumber {
    Cyclotomic(Cyclotomic),
    Algebraic(AlgebraicNumber),
}

impl ExactNumber {
    pub fn parse(s: &str) -> Result<Self> {
        if s.contains(" mod ") {
            Ok(ExactNumber::Algebraic(AlgebraicNumber::parse(s)?))
        } else {
            Ok(ExactNumber::Cyclotomic(Cyclotomic::parse(s)?))
        }
    }

    pub fn multiplicative_order(&self) -> Result<Option<u64>> {
        match self {
            ExactNumber::Cyclotomic(c) => c.multiplicative_order(),
            ExactNumber::Algebraic(a) => a.multiplicative_order(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactNumber::Cyclotomic(c) => c.is_zero(),
            ExactNumber::Algebraic(a) => a.is_zero(),
        }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            ExactNumber::Cyclotomic(c) => c.to_rational(),
            ExactNumber::Algebraic(a) => a.to_rational(),
        }
    }

    /// Maps the value into a cyclotomic field, failing for fields that do not embed.
    pub fn to_cyclotomic(&self) -> Result<Cyclotomic> {
        match self {
            ExactNumber::Cyclotomic(c) => Ok(c.clone()),
            ExactNumber::Algebraic(a) => a.to_cyclotomic(),
        }
    }

    /// Product of two numbers, staying in the explicit field when the other factor is rational.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        use ExactNumber::*;
        match (self, other) {
            (Cyclotomic(a), Cyclotomic(b)) => Ok(Cyclotomic(a * b)),
            (Algebraic(a), Algebraic(b)) => match a.mul(b) {
                Ok(x) => Ok(Algebraic(x)),
                Err(_) => Ok(Cyclotomic(&a.to_cyclotomic()? * &b.to_cyclotomic()?)),
            },
            (Algebraic(a), Cyclotomic(c)) | (Cyclotomic(c), Algebraic(a)) => match c.to_rational() {
                Some(q) => Ok(Algebraic(a.mul(&a.from_rational_in(q))?)),
                None => Ok(Cyclotomic(&a.to_cyclotomic()? * c)),
            },
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self {
            ExactNumber::Cyclotomic(c) => Ok(ExactNumber::Cyclotomic(c.inv()?)),
            ExactNumber::Algebraic(a) => Ok(ExactNumber::Algebraic(a.inv()?)),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        match self {
            ExactNumber::Cyclotomic(c) => ExactNumber::Cyclotomic(c.pow(e)),
            ExactNumber::Algebraic(a) => ExactNumber::Algebraic(a.pow(e)),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ExactNumber::Cyclotomic(c) => c.is_one(),
            ExactNumber::Algebraic(a) => a.is_one(),
        }
    }
}

impl From<Cyclotomic> for ExactNumber {
    fn from(c: Cyclotomic) -> Self {
        ExactNumber::Cyclotomic(c)
    }
}

impl From<AlgebraicNumber> for ExactNumber {
    fn from(a: AlgebraicNumber) -> Self {
        ExactNumber::Algebraic(a)
    }
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactNumber::Cyclotomic(c) => c.fmt(f),
            ExactNumber::Algebraic(a) => a.fmt(f),
        }
    }
}

impl Serialize for ExactNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ExactNumber::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<&str> for ExactNumber {
    type Error = Error;
    fn try_from(s: &str) -> Result<Self> {
        ExactNumber::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_dispatch_and_serde() {
        let a = ExactNumber::parse("x mod x^2+5*x+1").unwrap();
        assert!(matches!(a, ExactNumber::Algebraic(_)));
        let z = ExactNumber::parse("1*z(6)^5").unwrap();
        assert_eq!(z.multiplicative_order().unwrap(), Some(6));
        let json = serde_json::to_string(&vec![a.clone(), z.clone()]).unwrap();
        let back: Vec<ExactNumber> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![a, z]);
    }

    #[test]
    fn mixed_products() {
        let a = ExactNumber::parse("x mod x^2+5*x+1").unwrap();
        let two = ExactNumber::parse("2").unwrap();
        assert!(matches!(a.mul(&two).unwrap(), ExactNumber::Algebraic(_)));
        let z3 = ExactNumber::parse("z(3)").unwrap();
        let p = a.mul(&z3).unwrap();
        assert!(matches!(p, ExactNumber::Cyclotomic(_)));
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).unwrap().is_one());
    }
}
