//! Numbers of the form `k` or `k/2`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

/// An exact rational with denominator 1 or 2, stored as its double.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn int(k: i64) -> Self {
        HalfInt(2 * k)
    }

    pub const fn from_twice(t: i64) -> Self {
        HalfInt(t)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(it: I) -> HalfInt {
        HalfInt(it.map(|h| h.0).sum())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `k`, `-k`, `k/2` and `-k/2`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::ParseError(format!("not a number: {s:?}"));
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::int).map_err(|_| bad()),
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                match den.trim() {
                    "1" => Ok(HalfInt::int(num)),
                    "2" => Ok(HalfInt(num)),
                    _ => Err(Error::ParseError(format!("denominator must be 1 or 2: {s:?}"))),
                }
            }
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["0", "3", "-2", "1/2", "-3/2", "7/2"] {
            assert_eq!(s.parse::<HalfInt>().unwrap().to_string(), s);
        }
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::int(2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
    }

    #[test]
    fn arithmetic() {
        let a: HalfInt = "3/2".parse().unwrap();
        assert_eq!(a + HalfInt::HALF, HalfInt::int(2));
        assert_eq!(-a, "-3/2".parse().unwrap());
        assert_eq!((a - HalfInt::int(2)).abs(), HalfInt::HALF);
        assert!(HalfInt::HALF < HalfInt::int(1));
    }
}
