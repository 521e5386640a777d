//! Clebsch-Gordan coefficients in the Condon-Shortley convention.
//!
//! [`cg`] evaluates the general Racah closed form with exact big-integer
//! factorial ratios, taking the square root last. The two closed-form
//! families used by the syndrome analysis, [`cg_ohara_symmetric`] and
//! [`cg_recursion_mixed`], must agree with it on their whole domains.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{big_to_ratio, binomial, factorial, ratio, SignedSqrt};
use crate::halfint::valid_jm;
use crate::{Error, HalfInt, Result};

/// Arguments of `C^{j,m}_{j1,m1; j2,m2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CgArgs {
    pub j1: HalfInt,
    pub m1: HalfInt,
    pub j2: HalfInt,
    pub m2: HalfInt,
    pub j: HalfInt,
    pub m: HalfInt,
}

impl CgArgs {
    pub fn new(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Self {
        CgArgs { j1, m1, j2, m2, j, m }
    }

    /// Triangle and `(j, m)` pairing rules. Violating `m = m1 + m2` is not
    /// an error here; it is the selection rule and yields a zero
    /// coefficient.
    pub fn validate(&self) -> Result<()> {
        for (j, m) in [(self.j1, self.m1), (self.j2, self.m2), (self.j, self.m)] {
            if !valid_jm(j, m) {
                return Err(Error::InvalidCoupling(format!("invalid (j, m) pair ({j}, {m})")));
            }
        }
        let (t1, t2, t) = (self.j1.twice(), self.j2.twice(), self.j.twice());
        if t < (t1 - t2).abs() || t > t1 + t2 {
            return Err(Error::InvalidCoupling(format!(
                "triangle rule violated for (j1, j2, j) = ({}, {}, {})",
                self.j1, self.j2, self.j
            )));
        }
        if (t1 + t2 + t) % 2 != 0 {
            return Err(Error::InvalidCoupling(format!(
                "j1 + j2 + j must be an integer, got ({}, {}, {})",
                self.j1, self.j2, self.j
            )));
        }
        Ok(())
    }
}

// Twice-value combination that is an exact integer once the parity rules
// hold.
fn half_sum(parts: &[(HalfInt, i64)]) -> i64 {
    let twice: i64 = parts.iter().map(|(h, s)| s * h.twice()).sum();
    debug_assert!(twice % 2 == 0);
    twice / 2
}

fn fact_nonneg(v: i64) -> BigRational {
    debug_assert!(v >= 0);
    big_to_ratio(factorial(v as u64))
}

/// Exact Racah-series evaluation; the returned [`SignedSqrt`] squares to a
/// rational.
pub fn cg_exact(args: &CgArgs) -> Result<SignedSqrt> {
    args.validate()?;
    if args.m != args.m1 + args.m2 {
        return Ok(SignedSqrt::zero());
    }
    let CgArgs { j1, m1, j2, m2, j, m } = *args;

    // Prefactor under the square root.
    let tri_num = fact_nonneg(half_sum(&[(j1, 1), (j2, 1), (j, -1)]))
        * fact_nonneg(half_sum(&[(j1, 1), (j2, -1), (j, 1)]))
        * fact_nonneg(half_sum(&[(j1, -1), (j2, 1), (j, 1)]));
    let tri_den = fact_nonneg(half_sum(&[(j1, 1), (j2, 1), (j, 1)]) + 1);
    let mut pref = ratio(j.twice() + 1, 1) * tri_num / tri_den;
    for (a, b) in [(j, m), (j1, m1), (j2, m2)] {
        pref *= fact_nonneg(half_sum(&[(a, 1), (b, 1)])) * fact_nonneg(half_sum(&[(a, 1), (b, -1)]));
    }

    // Alternating sum over the overlap index.
    let c1 = half_sum(&[(j1, 1), (j2, 1), (j, -1)]);
    let c2 = half_sum(&[(j1, 1), (m1, -1)]);
    let c3 = half_sum(&[(j2, 1), (m2, 1)]);
    let c4 = half_sum(&[(j, 1), (j2, -1), (m1, 1)]);
    let c5 = half_sum(&[(j, 1), (j1, -1), (m2, -1)]);
    let k_lo = 0.max(-c4).max(-c5);
    let k_hi = c1.min(c2).min(c3);
    let mut sum = BigRational::zero();
    for k in k_lo..=k_hi {
        let den = fact_nonneg(k)
            * fact_nonneg(c1 - k)
            * fact_nonneg(c2 - k)
            * fact_nonneg(c3 - k)
            * fact_nonneg(c4 + k)
            * fact_nonneg(c5 + k);
        let term = BigRational::one() / den;
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(SignedSqrt::new(sum, pref))
}

/// Clebsch-Gordan coefficient as binary64; exact internals, square root
/// last.
pub fn cg(args: &CgArgs) -> Result<f64> {
    Ok(cg_exact(args)?.to_f64())
}

fn check_spin_half(m: HalfInt) -> Result<()> {
    if m.twice().abs() != 1 {
        return Err(Error::OutOfRange(format!("m must be +-1/2, got {m}")));
    }
    Ok(())
}

/// `C^{(N+1)/2, k+m-N/2}_{N/2, k-N/2; 1/2, m} = sqrt(binom(N,k) / binom(N+1, k+m+1/2))`:
/// coupling into the symmetric (stretched) sector.
pub fn cg_ohara_symmetric(big_n: u32, k: u32, m: HalfInt) -> Result<f64> {
    check_spin_half(m)?;
    if k > big_n {
        return Err(Error::OutOfRange(format!("k = {k} exceeds N = {big_n}")));
    }
    let shifted = k as i64 + (m.twice() + 1) / 2; // k + m + 1/2
    if shifted < 0 || shifted > big_n as i64 + 1 {
        return Err(Error::OutOfRange(format!("k + m + 1/2 = {shifted} outside 0..=N+1")));
    }
    let num = binomial(big_n as i64, k as i64);
    let den = binomial(big_n as i64 + 1, shifted);
    let r = big_to_ratio(num) / big_to_ratio(den);
    Ok(SignedSqrt::new(BigRational::one(), r).to_f64())
}

/// Recursion-relation instances for coupling into the `j = (N-1)/2` sector:
/// `C^{(N-1)/2, k-(N-1)/2}_{N/2, k-N/2; 1/2, +1/2} = -sqrt((N-k)/(N+1))` and
/// `C^{(N-1)/2, k-(N+1)/2}_{N/2, k-N/2; 1/2, -1/2} = sqrt(k/(N+1))`.
///
/// The Condon-Shortley sign sits on the `m = +1/2` branch; this pairing is
/// the one that agrees with [`cg`] on the same arguments.
pub fn cg_recursion_mixed(big_n: u32, k: u32, m: HalfInt) -> Result<f64> {
    check_spin_half(m)?;
    if k > big_n {
        return Err(Error::OutOfRange(format!("k = {k} exceeds N = {big_n}")));
    }
    if big_n == 0 {
        return Err(Error::OutOfRange("N must be at least 1".into()));
    }
    let n1 = big_n as i64 + 1;
    if m == HalfInt::HALF {
        let r = ratio(big_n as i64 - k as i64, n1);
        Ok(SignedSqrt::new(-BigRational::one(), r).to_f64())
    } else {
        let r = ratio(k as i64, n1);
        Ok(SignedSqrt::new(BigRational::one(), r).to_f64())
    }
}

/// [`CgArgs`] matching the closed forms above, for cross-checking against
/// the Racah evaluator.
pub fn mixed_recursion_args(big_n: u32, k: u32, m: HalfInt) -> CgArgs {
    let jn = HalfInt::from_twice(big_n as i64);
    let m1 = HalfInt::from_twice(2 * k as i64 - big_n as i64);
    CgArgs::new(jn, m1, HalfInt::HALF, m, HalfInt::from_twice(big_n as i64 - 1), m1 + m)
}

/// Symmetric-sector analogue of [`mixed_recursion_args`].
pub fn ohara_symmetric_args(big_n: u32, k: u32, m: HalfInt) -> CgArgs {
    let jn = HalfInt::from_twice(big_n as i64);
    let m1 = HalfInt::from_twice(2 * k as i64 - big_n as i64);
    CgArgs::new(jn, m1, HalfInt::HALF, m, HalfInt::from_twice(big_n as i64 + 1), m1 + m)
}
