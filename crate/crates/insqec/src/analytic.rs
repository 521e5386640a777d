//! Closed-form layer: gamma normalization constants, the joint syndrome
//! distribution, projected codewords in both sectors, and the
//! norm-equality verification with its exact binomial-identity machinery.
//!
//! Everything that can stay rational does; floats appear only at the
//! boundary. The brute-force oracle cross-checks every formula here.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

use crate::cg::{cg, cg_ohara_symmetric, cg_recursion_mixed, CgArgs};
use crate::channel::{insert, InsertionEvent, InsertionQubit};
use crate::exact::{big_to_ratio, binomial, ratio, ratio_to_f64};
use crate::oracle::{project_total_j, project_w_mod_g};
use crate::states::{encode, GnuCode, LogicalQubit, WeightState};
use crate::{max_qubits, Error, HalfInt, Result};

fn check_w(code: &GnuCode, w: u32) -> Result<()> {
    if w >= code.g() {
        return Err(Error::OutOfRange(format!("w = {w} must be below g = {}", code.g())));
    }
    Ok(())
}

/// Sum over one parity class: `sum_{i = x, x+2, ...} binom(n, i) f(i)`.
fn parity_sum<F>(n: i64, x: u8, f: F) -> BigRational
where
    F: Fn(i64) -> BigRational,
{
    let mut acc = BigRational::zero();
    let mut i = x as i64;
    while i <= n {
        acc += big_to_ratio(binomial(n, i)) * f(i);
        i += 2;
    }
    acc
}

/// Fixed-parity binomial sums `(sum_i binom(n,i), sum_i i binom(n,i))`,
/// which close to `2^{n-1}` and `n 2^{n-2}` for either parity.
pub fn binomial_sums(n: u32, parity: u8) -> (BigUint, BigUint) {
    let mut plain = BigUint::zero();
    let mut weighted = BigUint::zero();
    let mut i = parity as i64 & 1;
    while i <= n as i64 {
        let b = binomial(n as i64, i);
        plain += &b;
        weighted += b * BigUint::from(i as u64);
        i += 2;
    }
    (plain, weighted)
}

fn gamma_symmetric_exact(code: &GnuCode, w: u32) -> BigRational {
    let n = code.qubit_count() as i64;
    let u = code.u() as i64;
    match w {
        0 => BigRational::one() - ratio(n, 2 * u * (n + 1)),
        1 => ratio(1, n + 1) + ratio(n, 2 * u * (n + 1)),
        _ => BigRational::zero(),
    }
}

/// Symmetric-sector branch weight: `gamma_0 = 1 - N / (2u(N+1))`,
/// `gamma_1 = 1/(N+1) + N / (2u(N+1))`, zero in the band `2..g-1`.
pub fn gamma_symmetric(code: &GnuCode, w: u32) -> Result<f64> {
    check_w(code, w)?;
    Ok(ratio_to_f64(&gamma_symmetric_exact(code, w)))
}

fn gamma_mixed_exact(code: &GnuCode, a: u32, w: u32) -> BigRational {
    // Inserting before the first qubit routes through the same coupling
    // tree as inserting after the last, so the a = 0 row equals a = N.
    let a = if a == 0 { code.qubit_count() as i64 } else { a as i64 };
    let u = code.u() as i64;
    if w == 0 {
        (BigRational::one() - ratio(1, 2 * u)) * ratio(a, a + 1)
    } else if w == code.g() - 1 {
        ratio(1, 2 * u) * ratio(a, a + 1)
    } else {
        BigRational::zero()
    }
}

/// Mixed-sector branch weight `gamma_{a,w}`: `(1 - 1/2u) a/(a+1)` at
/// `w = 0`, `(1/2u) a/(a+1)` at `w = g-1`, zero in the band `1..g-2`.
pub fn gamma_mixed(code: &GnuCode, a: u32, w: u32) -> Result<f64> {
    check_w(code, w)?;
    if a > code.qubit_count() {
        return Err(Error::OutOfRange(format!(
            "a = {a} exceeds N = {}",
            code.qubit_count()
        )));
    }
    Ok(ratio_to_f64(&gamma_mixed_exact(code, a, w)))
}

/// All gamma constants of a code, tabulated.
#[derive(Clone, Debug, Serialize)]
pub struct GammaTable {
    pub code: GnuCode,
    /// `symmetric[w]` for `0 <= w < g`.
    pub symmetric: Vec<f64>,
    /// `mixed[a][w]` for `0 <= a <= N`, `0 <= w < g`.
    pub mixed: Vec<Vec<f64>>,
}

impl GammaTable {
    pub fn new(code: &GnuCode) -> Self {
        let g = code.g();
        let symmetric = (0..g)
            .map(|w| ratio_to_f64(&gamma_symmetric_exact(code, w)))
            .collect();
        let mixed = (0..=code.qubit_count())
            .map(|a| {
                (0..g)
                    .map(|w| ratio_to_f64(&gamma_mixed_exact(code, a, w)))
                    .collect()
            })
            .collect();
        GammaTable { code: *code, symmetric, mixed }
    }
}

/// One line of the joint syndrome distribution.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SyndromeProbability {
    pub j: HalfInt,
    pub w: u32,
    pub probability: f64,
}

/// Joint `(j, w)` distribution of the syndrome measurement after
/// inserting `q1` at position `a`. The distribution is independent of
/// both the payload and `a`; the position argument is validated and the
/// `a = N` gamma row (equal to every other row's total mass) supplies
/// the closed form.
pub fn syndrome_distribution(
    code: &GnuCode,
    q1: &InsertionQubit,
    a: u32,
) -> Result<Vec<SyndromeProbability>> {
    let n = code.qubit_count();
    if a > n {
        return Err(Error::OutOfRange(format!("a = {a} exceeds N = {n}")));
    }
    let v0 = q1.v0.norm_sqr();
    let v1 = q1.v1.norm_sqr();
    let sym = HalfInt::from_twice(n as i64 + 1);
    let mix = HalfInt::from_twice(n as i64 - 1);
    let gam = |w| ratio_to_f64(&gamma_symmetric_exact(code, w));
    let gam_m = |w| ratio_to_f64(&gamma_mixed_exact(code, n, w));
    let out = vec![
        SyndromeProbability { j: sym, w: 0, probability: v0 * gam(0) },
        SyndromeProbability { j: sym, w: 1, probability: v1 * gam(1) },
        SyndromeProbability { j: mix, w: code.g() - 1, probability: v0 * gam_m(code.g() - 1) },
        SyndromeProbability { j: mix, w: 0, probability: v1 * gam_m(0) },
    ];
    let total: f64 = out.iter().map(|s| s.probability).sum();
    debug_assert!((total - 1.0).abs() < 1e-12);
    Ok(out)
}

/// Normalized symmetric-sector codeword after a `(j = (N+1)/2, w)`
/// syndrome, with the norm of its unnormalized form.
#[derive(Clone, Debug)]
pub struct SymmetricCodeword {
    pub w: u32,
    pub x: u8,
    /// Normalized weight-indexed state on `N + 1` qubits.
    pub state: WeightState,
    /// Norm of the unnormalized codeword (closed form).
    pub norm: f64,
}

/// Symmetric projected codeword: weight `gi + w` carries amplitude
/// `2^{-(n-1)/2} sqrt(binom(n,i)) C(N, gi, w - 1/2)` over `i = x mod 2`.
pub fn symmetric_codeword(code: &GnuCode, w: u32, x: u8) -> Result<SymmetricCodeword> {
    check_w(code, w)?;
    if w > 1 {
        return Err(Error::ZeroCodeword);
    }
    let n = code.n() as i64;
    let nn = code.qubit_count();
    let u = code.u() as i64;
    let m2 = if w == 0 { -HalfInt::HALF } else { HalfInt::HALF };
    let scale = 2f64.powi(-(code.n() as i32 - 1)).sqrt();
    let mut amps = BTreeMap::new();
    let mut i = (x & 1) as i64;
    while i <= n * u {
        let b = binomial(n, i);
        if !b.is_zero() {
            let k = code.g() as i64 * i;
            let amp = scale
                * ratio_to_f64(&big_to_ratio(b)).sqrt()
                * cg_ohara_symmetric(nn, k as u32, m2)?;
            if amp != 0.0 {
                amps.insert((k + w as i64) as u32, Complex64::new(amp, 0.0));
            }
        }
        i += 2;
    }
    let raw = WeightState::new(nn as usize + 1, amps)?;
    let norm_sq = if w == 0 {
        parity_sum(n, x & 1, |i| {
            ratio(nn as i64 + 1 - code.g() as i64 * i, nn as i64 + 1)
        })
    } else {
        parity_sum(n, x & 1, |i| ratio(code.g() as i64 * i + 1, nn as i64 + 1))
    } * ratio(1, 1 << (code.n() - 1));
    Ok(SymmetricCodeword {
        w,
        x: x & 1,
        state: raw.normalized()?,
        norm: ratio_to_f64(&norm_sq).sqrt(),
    })
}

/// Unnormalized mixed-sector codeword, as coefficients per weight class.
/// The full state is `sum_p d_p sum_i coeff(i) |p, m_i>` for any unit
/// path-coefficient vector `d`; the norm is independent of `d` and of
/// `x`.
#[derive(Clone, Debug)]
pub struct MixedCodeword {
    pub a: u32,
    pub w: u32,
    pub x: u8,
    /// `i -> coeff(i)`, the per-unit-`d` amplitude of weight class `gi`
    /// (`g(i+1)` when `w = g-1` relabels through `i+1`).
    pub coeffs: BTreeMap<u32, f64>,
    /// `i -> twice the m label` of that component.
    pub m_labels: BTreeMap<u32, i64>,
    /// Norm of the codeword (closed form).
    pub norm: f64,
}

impl MixedCodeword {
    /// Expands against explicit path coefficients.
    pub fn expand(&self, d: &[Complex64]) -> BTreeMap<(usize, u32), Complex64> {
        let mut out = BTreeMap::new();
        for (p, dp) in d.iter().enumerate() {
            for (&i, &c) in &self.coeffs {
                out.insert((p, i), dp * c);
            }
        }
        out
    }
}

/// Mixed projected codeword for insertion position `a` and syndrome
/// `(j = (N-1)/2, w)`, `w` in `{0, g-1}`.
pub fn mixed_codeword(code: &GnuCode, a: u32, w: u32, x: u8) -> Result<MixedCodeword> {
    check_w(code, w)?;
    let g = code.g();
    if w != 0 && w != g - 1 {
        return Err(Error::ZeroCodeword);
    }
    let n = code.n() as i64;
    let nn = code.qubit_count() as i64;
    let u = code.u() as i64;
    if a as i64 > nn {
        return Err(Error::OutOfRange(format!("a = {a} exceeds N = {nn}")));
    }
    let scale = 2f64.powi(-(code.n() as i32 - 1)).sqrt();
    let x = x & 1;
    let mut coeffs = BTreeMap::new();
    let mut m_labels = BTreeMap::new();
    let mut i = x as i64;
    while i <= n * u {
        let b = binomial(n, i);
        if b.is_zero() {
            i += 2;
            continue;
        }
        let k = g as i64 * i;
        let amp = scale
            * ratio_to_f64(&big_to_ratio(b)).sqrt()
            * mixed_weight_factor(code, a, w, k as u32)?;
        if amp != 0.0 {
            coeffs.insert(i as u32, amp);
            let twice_m = if w == 0 { 2 * k - (nn - 1) } else { 2 * (k - 1) - (nn - 1) };
            m_labels.insert(i as u32, twice_m);
        }
        i += 2;
    }
    let aa = if a == 0 { nn } else { a as i64 };
    let norm_sq = ratio(aa, aa + 1)
        * ratio(1, 1 << (code.n() - 1))
        * parity_sum(n, x, |i| {
            if w == 0 {
                BigRational::one() - ratio(i, n * u)
            } else {
                ratio(i, n * u)
            }
        });
    Ok(MixedCodeword {
        a,
        w,
        x,
        coeffs,
        m_labels,
        norm: ratio_to_f64(&norm_sq).sqrt(),
    })
}

// The coupling-route factor multiplying sqrt(binom(n,i)) in the mixed
// codeword: the l-sum over hypergeometric weights and the two
// Clebsch-Gordan factors of the insertion route. For a = 0 the inserted
// qubit couples last and the sum collapses to a single recursion
// coefficient with the full weight k.
fn mixed_weight_factor(code: &GnuCode, a: u32, w: u32, k: u32) -> Result<f64> {
    let nn = code.qubit_count();
    let up = w == 0;
    if a == 0 {
        let m2 = if up { HalfInt::HALF } else { -HalfInt::HALF };
        return cg_recursion_mixed(nn, k, m2);
    }
    let (a, nn, k) = (a as i64, nn as i64, k as i64);
    let l_lo = 0.max(k - (nn - a));
    let l_hi = a.min(k);
    let mut acc = 0.0;
    for l in l_lo..=l_hi {
        let m2 = if up { HalfInt::HALF } else { -HalfInt::HALF };
        let first = cg_recursion_mixed(a as u32, l as u32, m2)?;
        if first == 0.0 {
            continue;
        }
        // Stretched coupling of (a-1)/2 with (N-a)/2 into (N-1)/2; the
        // -1/2 branch has already shed one unit from the a-side label.
        let drop = if up { 0 } else { 1 };
        let args = CgArgs::new(
            HalfInt::from_twice(a - 1),
            HalfInt::from_twice(2 * (l - drop) - (a - 1)),
            HalfInt::from_twice(nn - a),
            HalfInt::from_twice(2 * (k - l) - (nn - a)),
            HalfInt::from_twice(nn - 1),
            HalfInt::from_twice(2 * (k - drop) - (nn - 1)),
        );
        let second = cg(&args)?;
        let weight = big_to_ratio(binomial(a, l) * binomial(nn - a, k - l))
            / big_to_ratio(binomial(nn, k));
        acc += ratio_to_f64(&weight).sqrt() * first * second;
    }
    Ok(acc)
}

/// Direct Clebsch-Gordan evaluation of the mixed-sector norm function
/// `f_a(i)`; closes to `a/(a+1) binom(N-1, gi)`.
pub fn norm_function(code: &GnuCode, a: u32, i: u32) -> Result<f64> {
    let k = code.g() * i;
    let factor = mixed_weight_factor(code, a, 0, k)?;
    let b = ratio_to_f64(&big_to_ratio(binomial(
        code.qubit_count() as i64,
        k as i64,
    )));
    Ok(factor * factor * b)
}

/// Exact residues of the three alternating-sum norm-equality conditions;
/// all must vanish identically.
#[derive(Clone, Debug, Serialize)]
pub struct ExactConditions {
    /// `sum_i binom(n,i)(-1)^i (1 - gi/(N+1))` (symmetric sector).
    pub symmetric: String,
    /// `sum_i binom(n,i)(-1)^i (N - gi)/(N+1)` (mixed sector, a = 0).
    pub mixed_a0: String,
    /// `sum_i binom(n,i)(-1)^i (1 - i/(nu))` (mixed sector, a >= 1).
    pub mixed_general: String,
    pub all_zero: bool,
}

/// Norm-equality verification report.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma1Report {
    pub g: u32,
    pub n: u32,
    pub u: u32,
    pub conditions: ExactConditions,
    /// Worst oracle deviation: x=0 vs x=1 branch-probability gap and
    /// gap to the closed-form norms, over all (a, sector, w).
    pub max_oracle_deviation: Option<f64>,
    pub violations: Vec<String>,
    pub passed: bool,
}

fn alternating_sum<F>(n: i64, f: F) -> BigRational
where
    F: Fn(i64) -> BigRational,
{
    let mut acc = BigRational::zero();
    for i in 0..=n {
        let term = big_to_ratio(binomial(n, i)) * f(i);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Verifies the norm-equality conditions exactly and, where the dense
/// oracle fits, cross-checks all four branch probabilities per insertion
/// position against the closed forms and across the two codewords.
pub fn verify_lemma1(code: &GnuCode) -> Result<Lemma1Report> {
    let n = code.n() as i64;
    let nn = code.qubit_count() as i64;
    let g = code.g() as i64;
    let u = code.u() as i64;
    if n * u > 64 {
        return Err(Error::ResourceCap(format!(
            "closed-form verification capped at nu <= 64, got {}",
            n * u
        )));
    }

    let c_sym = alternating_sum(n, |i| BigRational::one() - ratio(g * i, nn + 1));
    let c_mix0 = alternating_sum(n, |i| ratio(nn - g * i, nn + 1));
    let c_mixg = alternating_sum(n, |i| BigRational::one() - ratio(i, n * u));
    let all_zero = c_sym.is_zero() && c_mix0.is_zero() && c_mixg.is_zero();
    let conditions = ExactConditions {
        symmetric: c_sym.to_string(),
        mixed_a0: c_mix0.to_string(),
        mixed_general: c_mixg.to_string(),
        all_zero,
    };

    let mut violations = Vec::new();
    if !all_zero {
        violations.push(format!(
            "exact conditions nonzero for ({}, {}, {})",
            code.g(),
            code.n(),
            code.u()
        ));
    }

    let mut max_dev = None;
    if nn as usize + 1 <= max_qubits() {
        let mut worst: f64 = 0.0;
        let sym = HalfInt::from_twice(nn + 1);
        let mix = HalfInt::from_twice(nn - 1);
        // (insertion branch, sector, w, closed-form weight of i).
        let branches: [(InsertionQubit, HalfInt, u32, Box<dyn Fn(i64) -> BigRational>); 4] = [
            (InsertionQubit::zero(), sym, 0, Box::new(|i| ratio(nn + 1 - g * i, nn + 1))),
            (InsertionQubit::one(), sym, 1 % code.g(), Box::new(|i| ratio(g * i + 1, nn + 1))),
            (
                InsertionQubit::zero(),
                mix,
                code.g() - 1,
                Box::new(|i| ratio(nn, nn + 1) * ratio(i, n * u)),
            ),
            (
                InsertionQubit::one(),
                mix,
                0,
                Box::new(|i| ratio(nn, nn + 1) * (BigRational::one() - ratio(i, n * u))),
            ),
        ];
        for a in 0..=nn as u32 {
            for (q1, j, w, weight) in &branches {
                let mut probs = [0.0; 2];
                for x in 0..2u8 {
                    let payload = if x == 0 { LogicalQubit::zero() } else { LogicalQubit::one() };
                    let state = insert(
                        &encode(code, &payload)?,
                        q1,
                        InsertionEvent { position: a },
                    )?;
                    let (pj, post) = project_total_j(&state, *j)?;
                    let p = if pj < 1e-14 {
                        0.0
                    } else {
                        let (pw, _) = project_w_mod_g(&post, *j, code.g(), *w)?;
                        pj * pw
                    };
                    probs[x as usize] = p;
                    let closed = ratio(1, 1 << (code.n() - 1)) * parity_sum(n, x, weight);
                    let dev = (p - ratio_to_f64(&closed)).abs();
                    worst = worst.max(dev);
                    if dev > 1e-10 {
                        violations.push(format!(
                            "closed-form norm mismatch at (g,n,u,a,w) = ({}, {}, {}, {}, {}), x = {}: {:.3e}",
                            code.g(), code.n(), code.u(), a, w, x, dev
                        ));
                    }
                }
                let gap = (probs[0] - probs[1]).abs();
                worst = worst.max(gap);
                if gap > 1e-10 {
                    violations.push(format!(
                        "norm equality violated at (g,n,u,a,w) = ({}, {}, {}, {}, {}): {:.3e}",
                        code.g(), code.n(), code.u(), a, w, gap
                    ));
                }
            }
        }
        max_dev = Some(worst);
    }

    let passed = violations.is_empty();
    Ok(Lemma1Report {
        g: code.g(),
        n: code.n(),
        u: code.u(),
        conditions,
        max_oracle_deviation: max_dev,
        violations,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::oracle::{born_probabilities, full_syndrome_projectors};
    use crate::scb::build_scb;
    use crate::states::DenseState;
    use num_traits::ToPrimitive;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn gamma_values_four_qubit() {
        let code = GnuCode::new(2, 2, 1).unwrap();
        assert!((gamma_symmetric(&code, 0).unwrap() - 0.6).abs() < 1e-15);
        assert!((gamma_symmetric(&code, 1).unwrap() - 0.6).abs() < 1e-15);
        assert!((gamma_mixed(&code, 4, 0).unwrap() - 0.4).abs() < 1e-15);
        assert!((gamma_mixed(&code, 4, 1).unwrap() - 0.4).abs() < 1e-15);
        assert!(gamma_symmetric(&code, 2).is_err());
    }

    #[test]
    fn gamma_zero_bands() {
        let code = GnuCode::new(4, 2, 1).unwrap();
        for w in 2..4 {
            assert_eq!(gamma_symmetric(&code, w).unwrap(), 0.0);
        }
        for w in 1..3 {
            assert_eq!(gamma_mixed(&code, 3, w).unwrap(), 0.0);
        }
        let table = GammaTable::new(&code);
        assert_eq!(table.symmetric.len(), 4);
        assert_eq!(table.mixed.len(), 9);
        for row in &table.mixed {
            for &v in row {
                assert!((0.0..=1.0).contains(&v));
            }
        }
        // a = 0 row equals the a = N row.
        assert_eq!(table.mixed[0], table.mixed[8]);
    }

    #[test]
    fn syndrome_distribution_examples() {
        let code = GnuCode::new(2, 2, 1).unwrap();

        let d = syndrome_distribution(&code, &InsertionQubit::one(), 4).unwrap();
        let lookup = |j: HalfInt, w: u32| {
            d.iter().find(|s| s.j == j && s.w == w).map(|s| s.probability).unwrap_or(0.0)
        };
        assert!((lookup(h(5), 1) - 0.6).abs() < 1e-12);
        assert!((lookup(h(3), 0) - 0.4).abs() < 1e-12);
        assert!(lookup(h(5), 0) < 1e-15);

        let d = syndrome_distribution(&code, &InsertionQubit::zero(), 2).unwrap();
        for s in &d {
            if s.probability > 0.0 {
                assert!((s.j == h(5) && s.w == 0) || (s.j == h(3) && s.w == 1));
            }
        }

        let d = syndrome_distribution(&code, &InsertionQubit::uniform(), 2).unwrap();
        let lookup = |j: HalfInt, w: u32| {
            d.iter().find(|s| s.j == j && s.w == w).map(|s| s.probability).unwrap_or(0.0)
        };
        assert!((lookup(h(5), 0) - 0.3).abs() < 1e-12);
        assert!((lookup(h(5), 1) - 0.3).abs() < 1e-12);
        assert!((lookup(h(3), 1) - 0.2).abs() < 1e-12);
        assert!((lookup(h(3), 0) - 0.2).abs() < 1e-12);
        let total: f64 = d.iter().map(|s| s.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_matches_oracle() {
        let code = GnuCode::new(3, 2, 1).unwrap();
        let n = code.qubit_count();
        let q = LogicalQubit::new(
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        )
        .unwrap();
        let q1 = InsertionQubit::new(
            Complex64::new(0.48, -0.36),
            Complex64::new(0.0, 0.8),
        )
        .unwrap();
        for a in [0u32, 3, 6] {
            let state = insert(&encode(&code, &q).unwrap(), &q1, InsertionEvent { position: a }).unwrap();
            let projs = full_syndrome_projectors(n as usize + 1, code.g());
            let oracle = born_probabilities(&state, &projs).unwrap();
            let analytic = syndrome_distribution(&code, &q1, a).unwrap();
            for (p, proj) in oracle.iter().zip(&projs) {
                let expect = analytic
                    .iter()
                    .find(|s| proj.label == format!("j={},w={}", s.j, s.w))
                    .map(|s| s.probability)
                    .unwrap_or(0.0);
                assert!(
                    (p - expect).abs() < 1e-10,
                    "a={a} {}: oracle {p} vs analytic {expect}",
                    proj.label
                );
            }
        }
    }

    #[test]
    fn symmetric_codeword_examples() {
        let code = GnuCode::new(2, 2, 1).unwrap();

        let cw = symmetric_codeword(&code, 0, 0).unwrap();
        let s6 = 6f64.sqrt();
        assert!((cw.state.amp(0).re - 5f64.sqrt() / s6).abs() < 1e-12);
        assert!((cw.state.amp(4).re - 1.0 / s6).abs() < 1e-12);

        let cw = symmetric_codeword(&code, 1, 0).unwrap();
        assert!((cw.state.amp(1).re - 1.0 / s6).abs() < 1e-12);
        assert!((cw.state.amp(5).re - 5f64.sqrt() / s6).abs() < 1e-12);

        let cw = symmetric_codeword(&code, 1, 1).unwrap();
        assert_eq!(cw.state.support(), vec![3]);
        assert!((cw.state.amp(3).re - 1.0).abs() < 1e-12);

        assert!(matches!(
            symmetric_codeword(&GnuCode::new(3, 2, 1).unwrap(), 2, 0),
            Err(Error::ZeroCodeword)
        ));
    }

    #[test]
    fn symmetric_codeword_norms_and_orthogonality() {
        for (g, n, u) in [(2, 2, 1), (3, 2, 1), (2, 3, 1), (3, 3, 1)] {
            let code = GnuCode::new(g, n, u).unwrap();
            for w in 0..2 {
                let c0 = symmetric_codeword(&code, w, 0).unwrap();
                let c1 = symmetric_codeword(&code, w, 1).unwrap();
                // Equal norms and disjoint weight support.
                assert!((c0.norm - c1.norm).abs() < 1e-12, "({g},{n},{u}) w={w}");
                let s0 = c0.state.support();
                let s1 = c1.state.support();
                assert!(s0.iter().all(|k| !s1.contains(k)));
                // The closed-form norm matches the direct sum of squares.
                let direct: f64 = c0
                    .state
                    .support()
                    .iter()
                    .map(|&k| {
                        let i = ((k - w) / g) as i64;
                        let b = ratio_to_f64(&big_to_ratio(binomial(n as i64, i)));
                        let c = cg_ohara_symmetric(
                            code.qubit_count(),
                            k - w,
                            if w == 0 { -HalfInt::HALF } else { HalfInt::HALF },
                        )
                        .unwrap();
                        2f64.powi(-(n as i32 - 1)) * b * c * c
                    })
                    .sum();
                assert!((c0.norm * c0.norm - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixed_codeword_norms() {
        for (g, n, u) in [(2, 2, 1), (3, 2, 1), (2, 3, 1), (2, 2, 2)] {
            let code = GnuCode::new(g, n, u).unwrap();
            let nn = code.qubit_count();
            for a in 0..=nn {
                for w in [0, g - 1] {
                    let c0 = mixed_codeword(&code, a, w, 0).unwrap();
                    let c1 = mixed_codeword(&code, a, w, 1).unwrap();
                    assert!(
                        (c0.norm - c1.norm).abs() < 1e-12,
                        "norm equality ({g},{n},{u}) a={a} w={w}"
                    );
                    // Coefficients square-sum to the closed-form norm.
                    for c in [&c0, &c1] {
                        let direct: f64 = c.coeffs.values().map(|v| v * v).sum();
                        assert!(
                            (direct - c.norm * c.norm).abs() < 1e-12,
                            "coeff sum ({g},{n},{u}) a={a} w={w} x={}",
                            c.x
                        );
                    }
                }
            }
            if g > 2 {
                assert!(matches!(mixed_codeword(&code, 1, 1, 0), Err(Error::ZeroCodeword)));
            }
        }
    }

    #[test]
    fn norm_function_closes_to_chu_vandermonde() {
        for (g, n, u) in [(2, 2, 1), (3, 2, 1), (2, 3, 1)] {
            let code = GnuCode::new(g, n, u).unwrap();
            let nn = code.qubit_count();
            for a in 1..=nn {
                for i in 0..=(n * u) {
                    let direct = norm_function(&code, a, i).unwrap();
                    let closed = a as f64 / (a as f64 + 1.0)
                        * ratio_to_f64(&big_to_ratio(binomial(
                            nn as i64 - 1,
                            (g * i) as i64,
                        )));
                    assert!(
                        (direct - closed).abs() < 1e-9 * closed.max(1.0),
                        "f_a ({g},{n},{u}) a={a} i={i}: {direct} vs {closed}"
                    );
                }
            }
        }
    }

    #[test]
    fn mixed_codeword_matches_oracle_projection() {
        // The mixed component factorizes as (path vector) x (m profile);
        // reconstruct it from the codeword coefficients and one oracle
        // projection, then demand unit overlap.
        let code = GnuCode::new(2, 2, 1).unwrap();
        let basis = build_scb(5).unwrap();
        let j = h(3);
        for a in [0u32, 2, 4] {
            let state = insert(
                &encode(&code, &LogicalQubit::plus()).unwrap(),
                &InsertionQubit::one(),
                InsertionEvent { position: a },
            )
            .unwrap();
            let (_, proj) = project_total_j(&state, j).unwrap();

            let c0 = mixed_codeword(&code, a, 0, 0).unwrap();
            let c1 = mixed_codeword(&code, a, 0, 1).unwrap();
            // Payload |+> weights both codewords equally.
            let mut profile: BTreeMap<i64, f64> = BTreeMap::new();
            for c in [&c0, &c1] {
                for (&i, &v) in &c.coeffs {
                    profile.insert(c.m_labels[&i], v);
                }
            }

            let mut recon = DenseState::zero(5).unwrap();
            for path in basis.paths_with_j(j) {
                // Path coefficient from the largest profile component.
                let (&m_ref, &c_ref) =
                    profile.iter().max_by(|x, y| x.1.abs().total_cmp(&y.1.abs())).unwrap();
                let v_ref = basis
                    .vectors_with_j(j)
                    .find(|v| &v.path == path && v.m.twice() == m_ref)
                    .unwrap();
                let dp = v_ref.state.inner(&proj) / c_ref;
                for v in basis.vectors_with_j(j).filter(|v| &v.path == path) {
                    if let Some(&c) = profile.get(&v.m.twice()) {
                        recon.add_scaled(&v.state, dp * c);
                    }
                }
            }
            let overlap = recon.normalized().unwrap().inner(&proj).norm();
            assert!((overlap - 1.0).abs() < 1e-10, "a={a}: overlap {overlap}");
        }
    }

    #[test]
    fn binomial_sum_identities() {
        let (s, ws) = binomial_sums(2, 0);
        assert_eq!(s.to_u64().unwrap(), 2);
        assert_eq!(ws.to_u64().unwrap(), 2);
        let (s, ws) = binomial_sums(5, 1);
        assert_eq!(s.to_u64().unwrap(), 16);
        assert_eq!(ws.to_u64().unwrap(), 40);
        let (s, ws) = binomial_sums(3, 0);
        assert_eq!(s.to_u64().unwrap(), 4);
        assert_eq!(ws.to_u64().unwrap(), 6);
        for n in 2..=12u32 {
            for parity in 0..2 {
                let (s, ws) = binomial_sums(n, parity);
                assert_eq!(s, BigUint::from(1u64 << (n - 1)));
                assert_eq!(ws, BigUint::from(n as u64 * (1u64 << (n - 2))));
            }
        }
    }

    #[test]
    fn lemma1_exact_and_oracle() {
        for (g, n, u) in [(2, 2, 1), (3, 3, 1)] {
            let code = GnuCode::new(g, n, u).unwrap();
            let report = verify_lemma1(&code).unwrap();
            assert!(report.conditions.all_zero, "({g},{n},{u}) exact conditions");
            assert!(report.passed, "({g},{n},{u}): {:?}", report.violations);
            let dev = report.max_oracle_deviation.unwrap();
            assert!(dev < 1e-10, "({g},{n},{u}) oracle deviation {dev}");
        }
    }

    #[test]
    fn lemma1_conditions_exact_for_large_parameters() {
        // The alternating sums vanish identically for any linear summand.
        for n in 2..=8i64 {
            for (g, u) in [(2i64, 1i64), (3, 2), (5, 3)] {
                let nn = g * n * u;
                let c = alternating_sum(n, |i| BigRational::one() - ratio(g * i, nn + 1));
                assert!(c.is_zero(), "n={n} g={g} u={u}");
                let c = alternating_sum(n, |i| ratio(nn - g * i, nn + 1));
                assert!(c.is_zero());
                let c = alternating_sum(n, |i| BigRational::one() - ratio(i, n * u));
                assert!(c.is_zero());
            }
        }
    }

    #[test]
    fn proportionality_across_insertion_amplitudes() {
        let code = GnuCode::new(2, 2, 1).unwrap();
        let mut last: Option<(f64, f64)> = None;
        for t in [0.3f64, 0.7, 1.2] {
            let q1 = InsertionQubit::new(
                Complex64::new(t.cos(), 0.0),
                Complex64::new(0.0, t.sin()),
            )
            .unwrap();
            let d = syndrome_distribution(&code, &q1, 1).unwrap();
            let p_sym1 = d.iter().find(|s| s.j == h(5) && s.w == 1).unwrap().probability;
            let p_mix0 = d.iter().find(|s| s.j == h(3) && s.w == 0).unwrap().probability;
            let ratios = (p_sym1 / t.sin().powi(2), p_mix0 / t.sin().powi(2));
            if let Some(prev) = last {
                assert!((ratios.0 - prev.0).abs() < 1e-10);
                assert!((ratios.1 - prev.1).abs() < 1e-10);
            }
            last = Some(ratios);
        }
    }
}
