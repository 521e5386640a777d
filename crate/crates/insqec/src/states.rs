//! Dicke states, gnu codes and logical encodings.
//!
//! Two representations coexist: [`WeightState`] indexes amplitudes by
//! Hamming weight and is the canonical symmetric-sector form;
//! [`DenseState`] is the full `2^M` computational-basis vector used by
//! the brute-force oracle. Bit value 1 is spin-up and contributes +1 to
//! the Dicke weight; bit `l` of a basis index is qubit `l`, with qubit 0
//! leftmost.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::exact::binomial;
use crate::{max_qubits, Error, Result};

/// Amplitudes below this threshold are dropped from serialized output.
pub const AMP_EPS: f64 = 1e-14;

/// gnu code parameters; `N = g*n*u` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnuCode {
    g: u32,
    n: u32,
    u: u32,
}

impl GnuCode {
    pub fn new(g: u32, n: u32, u: u32) -> Result<Self> {
        if g < 2 {
            return Err(Error::OutOfRange(format!("code gap g must be >= 2, got {g}")));
        }
        if n < 2 {
            return Err(Error::OutOfRange(format!("code occupancy n must be >= 2, got {n}")));
        }
        if u < 1 {
            return Err(Error::OutOfRange("scaling u must be >= 1".into()));
        }
        Ok(GnuCode { g, n, u })
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    /// `N = g*n*u`.
    pub fn qubit_count(&self) -> u32 {
        self.g * self.n * self.u
    }

    pub fn distance(&self) -> u32 {
        self.g.min(self.n)
    }
}

/// Payload qubit `c0|0> + c1|1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalQubit {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl LogicalQubit {
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        let norm = c0.norm_sqr() + c1.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("payload norm^2 = {norm}, expected 1")));
        }
        Ok(LogicalQubit { c0, c1 })
    }

    pub fn zero() -> Self {
        LogicalQubit { c0: Complex64::new(1.0, 0.0), c1: Complex64::zero() }
    }

    pub fn one() -> Self {
        LogicalQubit { c0: Complex64::zero(), c1: Complex64::new(1.0, 0.0) }
    }

    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        LogicalQubit { c0: h, c1: h }
    }
}

/// Symmetric-sector state: amplitude per Dicke weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightState {
    num_qubits: usize,
    amps: BTreeMap<u32, Complex64>,
}

impl WeightState {
    pub fn new(num_qubits: usize, amps: BTreeMap<u32, Complex64>) -> Result<Self> {
        if amps.keys().any(|&k| k as usize > num_qubits) {
            return Err(Error::OutOfRange("weight exceeds qubit count".into()));
        }
        Ok(WeightState { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amp(&self, k: u32) -> Complex64 {
        self.amps.get(&k).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn amps(&self) -> &BTreeMap<u32, Complex64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<WeightState> {
        let n = self.norm_sqr().sqrt();
        if n < AMP_EPS {
            return Err(Error::InvalidState("cannot normalize a zero state".into()));
        }
        let amps = self.amps.iter().map(|(&k, &a)| (k, a / n)).collect();
        Ok(WeightState { num_qubits: self.num_qubits, amps })
    }

    /// Nonzero weights, in increasing order.
    pub fn support(&self) -> Vec<u32> {
        self.amps
            .iter()
            .filter(|(_, a)| a.norm() > AMP_EPS)
            .map(|(&k, _)| k)
            .collect()
    }

    /// Expands into the dense computational-basis representation.
    pub fn to_dense(&self) -> Result<DenseState> {
        let mut dense = DenseState::zero(self.num_qubits)?;
        for (&k, &a) in &self.amps {
            let d = dicke(self.num_qubits, k as usize)?;
            dense.add_scaled(&d, a);
        }
        Ok(dense)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let amps: Vec<serde_json::Value> = self
            .amps
            .iter()
            .filter(|(_, a)| a.norm() >= AMP_EPS)
            .map(|(&k, a)| json!([k, a.re, a.im]))
            .collect();
        json!({ "num_qubits": self.num_qubits, "amps": amps })
    }
}

/// Dense complex amplitude vector over the computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        if num_qubits > max_qubits() {
            return Err(Error::ResourceCap(format!(
                "{num_qubits} qubits exceeds the dense-state cap of {}",
                max_qubits()
            )));
        }
        Ok(DenseState { num_qubits, amps: vec![Complex64::zero(); 1 << num_qubits] })
    }

    pub fn from_amps(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << num_qubits {
            return Err(Error::InvalidState("amplitude vector length mismatch".into()));
        }
        let mut s = DenseState::zero(num_qubits)?;
        s.amps = amps;
        Ok(s)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let mut s = DenseState::zero(num_qubits)?;
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        debug_assert_eq!(self.num_qubits, other.num_qubits);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in &mut self.amps {
            *a *= c;
        }
    }

    pub fn add_scaled(&mut self, other: &DenseState, c: Complex64) {
        debug_assert_eq!(self.num_qubits, other.num_qubits);
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += c * b;
        }
    }

    pub fn normalized(&self) -> Result<DenseState> {
        let n = self.norm();
        if n < AMP_EPS {
            return Err(Error::InvalidState("cannot normalize a zero state".into()));
        }
        let mut s = self.clone();
        s.scale(Complex64::new(1.0 / n, 0.0));
        Ok(s)
    }

    pub fn max_amp_diff(&self, other: &DenseState) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Swaps two qubits; permutation-invariant states are fixed points.
    pub fn swap_qubits(&self, p: usize, q: usize) -> DenseState {
        let mut out = self.clone();
        if p == q {
            return out;
        }
        for (idx, &a) in self.amps.iter().enumerate() {
            let bp = (idx >> p) & 1;
            let bq = (idx >> q) & 1;
            let mut j = idx & !(1 << p) & !(1 << q);
            j |= bq << p;
            j |= bp << q;
            out.amps[j] = a;
        }
        out
    }

    /// Probability mass per Hamming weight.
    pub fn weight_distribution(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.num_qubits + 1];
        for (idx, a) in self.amps.iter().enumerate() {
            out[idx.count_ones() as usize] += a.norm_sqr();
        }
        out
    }

    /// Projection of each weight class onto its Dicke state, as a
    /// [`WeightState`]. Exact for symmetric-sector states.
    pub fn symmetric_component(&self) -> Result<WeightState> {
        let mut amps = BTreeMap::new();
        for k in 0..=self.num_qubits {
            let d = dicke(self.num_qubits, k)?;
            let a = d.inner(self);
            if a.norm() > AMP_EPS {
                amps.insert(k as u32, a);
            }
        }
        WeightState::new(self.num_qubits, amps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let amps: Vec<serde_json::Value> = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() >= AMP_EPS)
            .map(|(i, a)| json!([i, a.re, a.im]))
            .collect();
        json!({ "num_qubits": self.num_qubits, "amps": amps })
    }
}

/// Dicke state `|D^M_k>`: uniform superposition over weight-`k`
/// bitstrings.
pub fn dicke(m: usize, k: usize) -> Result<DenseState> {
    if k > m {
        return Err(Error::OutOfRange(format!("weight {k} exceeds qubit count {m}")));
    }
    let mut s = DenseState::zero(m)?;
    let count = crate::exact::ratio_to_f64(&crate::exact::big_to_ratio(binomial(m as i64, k as i64)));
    let amp = Complex64::new(1.0 / count.sqrt(), 0.0);
    for idx in 0..s.dim() {
        if idx.count_ones() as usize == k {
            s.amps[idx] = amp;
        }
    }
    Ok(s)
}

/// Weight-indexed expansion coefficients of the encoded state:
/// `beta_{g i} = 2^{-(n-1)/2} c_x sqrt(binom(n, i))` with `x = i mod 2`,
/// zero elsewhere.
pub fn beta_coefficients(code: &GnuCode, q: &LogicalQubit) -> WeightState {
    let n = code.n() as i64;
    let scale = 2f64.powi(-(code.n() as i32 - 1)).sqrt();
    let mut amps = BTreeMap::new();
    for i in 0..=(code.n() * code.u()) as i64 {
        let b = binomial(n, i);
        if b.is_zero() {
            continue;
        }
        let c = if i % 2 == 0 { q.c0 } else { q.c1 };
        let coeff = c * scale * crate::exact::ratio_to_f64(&crate::exact::big_to_ratio(b)).sqrt();
        if coeff.norm() > 0.0 {
            amps.insert((code.g() as i64 * i) as u32, coeff);
        }
    }
    WeightState { num_qubits: code.qubit_count() as usize, amps }
}

/// Dense encoded state `sum_k beta_k |D^N_k>`.
pub fn encode(code: &GnuCode, q: &LogicalQubit) -> Result<DenseState> {
    let n = code.qubit_count() as usize;
    if n + 1 > max_qubits() {
        return Err(Error::ResourceCap(format!(
            "code on {n} qubits leaves no room for an insertion under the {}-qubit cap",
            max_qubits()
        )));
    }
    beta_coefficients(code, q).to_dense()
}
