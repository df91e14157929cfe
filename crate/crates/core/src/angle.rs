//! Unit-circle eigenvalues encoded by their exponent.
//!
//! An [`Angle`] `a` in `[0, 1)` stands for the eigenvalue `exp(-2πi a)`, so
//! angle `0` is the eigenvalue `1`, `1/2` is `-1`, and multiplying
//! eigenvalues adds angles modulo one.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Angle(Rational);

impl Angle {
    pub const ZERO: Angle = Angle(Ratio::new_raw(0, 1));

    /// Builds `numer/denom` reduced modulo one.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidAngle(format!("{numer}/{denom}")));
        }
        Ok(Self::reduce(Ratio::new(numer, denom)))
    }

    /// Like [`Angle::new`] but rejects values outside `[0, 1)`.
    pub fn exact(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidAngle(format!("{numer}/{denom}")));
        }
        let r = Ratio::new(numer, denom);
        if r < Rational::zero() || r >= Rational::one() {
            return Err(Error::InvalidAngle(format!("{numer}/{denom}")));
        }
        Ok(Angle(r))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::reduce(r)
    }

    fn reduce(r: Rational) -> Self {
        let floor = r.floor();
        Angle(r - floor)
    }

    pub fn value(self) -> Rational {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// Angle of the inverse eigenvalue.
    pub fn inverse(self) -> Self {
        -self
    }

    /// Short name of the eigenvalue when it is a sixth root of unity.
    ///
    /// `phi` is `exp(2πi/3)`, i.e. angle `2/3`.
    pub fn alias(self) -> Option<&'static str> {
        if 6 % self.denom() != 0 {
            return None;
        }
        Some(match (self.numer() * 6 / self.denom()) as u8 {
            0 => "1",
            1 => "-phi",
            2 => "phibar",
            3 => "-1",
            4 => "phi",
            5 => "-phibar",
            _ => unreachable!(),
        })
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::reduce(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::reduce(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::reduce(-self.0)
    }
}

impl std::iter::Sum for Angle {
    fn sum<I: Iterator<Item = Angle>>(iter: I) -> Angle {
        iter.fold(Angle::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({self})")
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Parses `n` or `n/d`; the value must already lie in `[0, 1)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAngle(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d <= 0 || n.gcd(&d) != 1 && n != 0 {
            return Err(bad());
        }
        Angle::exact(n, d).map_err(|_| bad())
    }
}
