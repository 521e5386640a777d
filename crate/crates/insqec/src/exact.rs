//! Big-integer and rational helpers shared by the closed-form layers.
//!
//! Everything here stays exact until the final square root; the single
//! conversion to `f64` happens in [`SignedSqrt::to_f64`] or
//! [`ratio_to_f64`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Binomial coefficient; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || k > n || n < 0 {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

pub fn big_to_ratio(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// A signed square root of a rational, `sign * sqrt(|r|)`, stored as the
/// signed square `sign * r`.
///
/// Sums of Racah terms are combined exactly in this form; the square root
/// is taken only when converting to floating point.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedSqrt(BigRational);

impl SignedSqrt {
    pub fn zero() -> Self {
        SignedSqrt(BigRational::zero())
    }

    /// Builds `c * sqrt(r)` for rational `c` and nonnegative rational `r`.
    pub fn new(c: BigRational, r: BigRational) -> Self {
        assert!(!r.is_negative(), "radicand must be nonnegative");
        let sign = if c.is_negative() { -BigRational::one() } else { BigRational::one() };
        SignedSqrt(sign * &c * &c * r)
    }

    /// The signed square `sign * |value|^2`.
    pub fn signed_sq(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let mag = ratio_to_f64(&self.0.abs()).sqrt();
        if self.0.is_negative() {
            -mag
        } else {
            mag
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(5, 6), BigUint::zero());
        assert_eq!(binomial(5, -1), BigUint::zero());
        assert_eq!(binomial(13, 6), BigUint::from(1716u32));
    }

    #[test]
    fn signed_sqrt_round_trip() {
        let v = SignedSqrt::new(ratio(-1, 1), ratio(2, 5));
        assert!((v.to_f64() + (0.4f64).sqrt()).abs() < 1e-15);
        assert!(SignedSqrt::zero().is_zero());
    }
}
