use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Exact half-integer, stored as twice its value.
///
/// Quantum numbers `j` and `m` live on the half-integer lattice; keeping
/// the doubled value in an `i64` makes all comparisons and arithmetic
/// exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(v: i64) -> Self {
        HalfInt { twice: 2 * v }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Integer value, if this is a whole number.
    pub fn as_int(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub fn as_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub const fn is_negative(self) -> bool {
        self.twice < 0
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    /// `j(j+1)`, the eigenvalue of the squared angular momentum operator.
    pub fn casimir(self) -> f64 {
        let j = self.as_f64();
        j * (j + 1.0)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// A `(j, m)` pair is valid when `j >= 0`, `|m| <= j` and both sit on the
/// same half-integer sublattice.
pub fn valid_jm(j: HalfInt, m: HalfInt) -> bool {
    j.twice() >= 0 && m.twice().abs() <= j.twice() && (j.twice() - m.twice()) % 2 == 0
}
