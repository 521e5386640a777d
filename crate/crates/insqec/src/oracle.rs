//! Brute-force dense operator layer: angular momentum operators,
//! spectral and modular projectors, Born-rule sampling.
//!
//! This module is the ground truth the closed-form layer is checked
//! against, so it stays deliberately direct: operators act matrix-free on
//! statevectors, and total-angular-momentum projectors are built as
//! polynomials in `J^2` with exact rational coefficients rather than by
//! eigendecomposition.
//!
//! Sign convention: the z-projection of a weight-`k` basis state is
//! `m = k - M/2` (bit 1 is spin-up), so the modular syndrome value is
//! `j + m = j + k - M/2`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::states::DenseState;
use crate::{Error, HalfInt, Result};

/// Probabilities below this are treated as an empty branch.
pub const ZERO_BRANCH_EPS: f64 = 1e-14;

/// Dense operators are materialized only up to this many qubits.
pub const DENSE_OPERATOR_CAP: usize = 10;

/// Allowed total-angular-momentum values for `M` qubits, descending from
/// `M/2`.
pub fn j_ladder(m: usize) -> Vec<HalfInt> {
    let mut out = Vec::new();
    let mut t = m as i64;
    while t >= 0 {
        out.push(HalfInt::from_twice(t));
        t -= 2;
    }
    out
}

fn check_j_in_ladder(m: usize, j: HalfInt) -> Result<()> {
    if j.twice() < 0 || j.twice() > m as i64 || (m as i64 - j.twice()) % 2 != 0 {
        return Err(Error::OutOfRange(format!("j = {j} not in the ladder for {m} qubits")));
    }
    Ok(())
}

/// `J^z` applied matrix-free: eigenvalue `k - M/2` per weight-`k` basis
/// state.
pub fn apply_jz(state: &DenseState) -> DenseState {
    let m = state.num_qubits();
    let mut out = state.clone();
    for (idx, a) in out.amps_mut().iter_mut().enumerate() {
        *a *= Complex64::new(idx.count_ones() as f64 - m as f64 / 2.0, 0.0);
    }
    out
}

/// `J^+ = sum_l sigma^+_l` (raises Dicke weight by one).
pub fn apply_j_plus(state: &DenseState) -> DenseState {
    let m = state.num_qubits();
    let mut out = DenseState::zero(m).expect("same size as input");
    for (idx, &a) in state.amps().iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for l in 0..m {
            if idx & (1 << l) == 0 {
                out.amps_mut()[idx | (1 << l)] += a;
            }
        }
    }
    out
}

/// `J^- = (J^+)^dagger`.
pub fn apply_j_minus(state: &DenseState) -> DenseState {
    let m = state.num_qubits();
    let mut out = DenseState::zero(m).expect("same size as input");
    for (idx, &a) in state.amps().iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for l in 0..m {
            if idx & (1 << l) != 0 {
                out.amps_mut()[idx & !(1 << l)] += a;
            }
        }
    }
    out
}

/// Total angular momentum `J^2 = J^- J^+ + J^z (J^z + 1)`.
pub fn apply_j_squared(state: &DenseState) -> DenseState {
    let mut out = apply_j_minus(&apply_j_plus(state));
    let m = state.num_qubits() as f64;
    for (idx, a) in state.amps().iter().enumerate() {
        let z = idx.count_ones() as f64 - m / 2.0;
        out.amps_mut()[idx] += a * Complex64::new(z * (z + 1.0), 0.0);
    }
    out
}

/// Dense matrix on `M` qubits, row-major. Used for the elementwise
/// operator identities the statevector path cannot express.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    num_qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(num_qubits: usize) -> Result<Self> {
        if num_qubits > DENSE_OPERATOR_CAP {
            return Err(Error::ResourceCap(format!(
                "dense operators are capped at {DENSE_OPERATOR_CAP} qubits, got {num_qubits}"
            )));
        }
        let dim = 1 << num_qubits;
        Ok(DenseOperator { num_qubits, dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] })
    }

    /// Materializes an operator from its action on basis vectors.
    pub fn from_apply<F>(num_qubits: usize, f: F) -> Result<Self>
    where
        F: Fn(&DenseState) -> DenseState,
    {
        let mut op = DenseOperator::zeros(num_qubits)?;
        for c in 0..op.dim {
            let col = f(&DenseState::basis(num_qubits, c)?);
            for r in 0..op.dim {
                op.data[r * op.dim + c] = col.amps()[r];
            }
        }
        Ok(op)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn apply(&self, state: &DenseState) -> DenseState {
        let mut out = DenseState::zero(self.num_qubits).expect("within cap");
        for r in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..self.dim {
                acc += self.data[r * self.dim + c] * state.amps()[c];
            }
            out.amps_mut()[r] = acc;
        }
        out
    }

    pub fn matmul(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, other.dim);
        let mut out = DenseOperator::zeros(self.num_qubits).expect("within cap");
        for r in 0..self.dim {
            for k in 0..self.dim {
                let a = self.data[r * self.dim + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..self.dim {
                    out.data[r * self.dim + c] += a * other.data[k * self.dim + c];
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &DenseOperator, c: Complex64) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn identity(num_qubits: usize) -> Result<Self> {
        let mut op = DenseOperator::zeros(num_qubits)?;
        for i in 0..op.dim {
            op.data[i * op.dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(op)
    }
}

/// Dense `J^z` matrix.
pub fn j_z(m: usize) -> Result<DenseOperator> {
    DenseOperator::from_apply(m, apply_jz)
}

/// Dense `J^2` matrix.
pub fn j_squared(m: usize) -> Result<DenseOperator> {
    DenseOperator::from_apply(m, apply_j_squared)
}

/// Projects onto total angular momentum `j` via the polynomial
/// `prod_{j' != j} (J^2 - j'(j'+1)) / (j(j+1) - j'(j'+1))`; returns the
/// Born probability and the normalized post-state (zero state for an
/// empty branch).
pub fn project_total_j(state: &DenseState, j: HalfInt) -> Result<(f64, DenseState)> {
    let m = state.num_qubits();
    check_j_in_ladder(m, j)?;
    let mut cur = state.clone();
    let target = j.casimir();
    for jp in j_ladder(m) {
        if jp == j {
            continue;
        }
        let shift = jp.casimir();
        let denom = target - shift;
        let mut next = apply_j_squared(&cur);
        next.add_scaled(&cur, Complex64::new(-shift, 0.0));
        next.scale(Complex64::new(1.0 / denom, 0.0));
        cur = next;
    }
    let prob = cur.norm_sqr();
    if prob < ZERO_BRANCH_EPS {
        return Ok((prob, DenseState::zero(m)?));
    }
    Ok((prob, cur.normalized()?))
}

/// Syndrome value `j + m` for a weight-`k` basis state in the `j` sector.
fn syndrome_value(m: usize, j: HalfInt, weight: u32) -> i64 {
    let twice = j.twice() + 2 * weight as i64 - m as i64;
    debug_assert!(twice % 2 == 0);
    twice / 2
}

fn w_filter(state: &DenseState, j: HalfInt, g: u32, w: u32) -> DenseState {
    let m = state.num_qubits();
    let mut out = state.clone();
    for (idx, a) in out.amps_mut().iter_mut().enumerate() {
        let v = syndrome_value(m, j, idx.count_ones());
        if v.rem_euclid(g as i64) != w as i64 {
            *a = Complex64::new(0.0, 0.0);
        }
    }
    out
}

/// Modular `J^z` projector on the `j` sector: keeps eigenstates with
/// `j + m = w (mod g)`. The input must already lie in the `j` sector.
pub fn project_w_mod_g(state: &DenseState, j: HalfInt, g: u32, w: u32) -> Result<(f64, DenseState)> {
    let m = state.num_qubits();
    check_j_in_ladder(m, j)?;
    if w >= g {
        return Err(Error::OutOfRange(format!("w = {w} must be below g = {g}")));
    }
    let mut residual = apply_j_squared(state);
    residual.add_scaled(state, Complex64::new(-j.casimir(), 0.0));
    let leak = residual.norm();
    if leak > 1e-8 * state.norm().max(1.0) {
        return Err(Error::InvalidState(format!(
            "state is not in the j = {j} sector (residual {leak:.3e})"
        )));
    }
    let cur = w_filter(state, j, g, w);
    let prob = cur.norm_sqr() / state.norm_sqr();
    if cur.norm_sqr() < ZERO_BRANCH_EPS {
        return Ok((prob, DenseState::zero(m)?));
    }
    Ok((prob, cur.normalized()?))
}

/// One element of a complete measurement.
#[derive(Clone, Debug)]
pub struct Projector {
    pub label: String,
    kind: ProjectorKind,
}

#[derive(Clone, Debug)]
enum ProjectorKind {
    TotalJ(HalfInt),
    Syndrome { j: HalfInt, g: u32, w: u32 },
}

impl Projector {
    pub fn total_j(j: HalfInt) -> Self {
        Projector { label: format!("j={j}"), kind: ProjectorKind::TotalJ(j) }
    }

    pub fn syndrome(j: HalfInt, g: u32, w: u32) -> Self {
        Projector { label: format!("j={j},w={w}"), kind: ProjectorKind::Syndrome { j, g, w } }
    }

    /// Unnormalized projection `P|psi>`.
    pub fn apply_raw(&self, state: &DenseState) -> Result<DenseState> {
        match self.kind {
            ProjectorKind::TotalJ(j) => {
                let (prob, post) = project_total_j(state, j)?;
                let mut out = post;
                out.scale(Complex64::new(prob.sqrt() * state.norm(), 0.0));
                Ok(out)
            }
            ProjectorKind::Syndrome { j, g, w } => {
                let (prob, post) = project_total_j(state, j)?;
                if prob < ZERO_BRANCH_EPS {
                    return DenseState::zero(state.num_qubits());
                }
                let mut out = w_filter(&post, j, g, w);
                out.scale(Complex64::new(prob.sqrt() * state.norm(), 0.0));
                Ok(out)
            }
        }
    }
}

/// The complete `(j, w)` measurement over the full `j` ladder.
pub fn full_syndrome_projectors(m: usize, g: u32) -> Vec<Projector> {
    let mut out = Vec::new();
    for j in j_ladder(m) {
        for w in 0..g {
            out.push(Projector::syndrome(j, g, w));
        }
    }
    out
}

/// Outcome of a sampled projective measurement.
#[derive(Clone, Debug)]
pub struct MeasurementRecord {
    pub label: String,
    pub probability: f64,
    pub post_state: DenseState,
}

/// Born probabilities of a projector set on a normalized state.
pub fn born_probabilities(state: &DenseState, projectors: &[Projector]) -> Result<Vec<f64>> {
    projectors
        .iter()
        .map(|p| Ok(p.apply_raw(state)?.norm_sqr()))
        .collect()
}

/// Samples one outcome with the Born distribution using a deterministic
/// seeded generator. Per-shot streams are derived by
/// `ChaCha8Rng::seed_from_u64(seed).set_stream(shot)` upstream.
pub fn born_sample(state: &DenseState, projectors: &[Projector], seed: u64) -> Result<MeasurementRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    born_sample_with(state, projectors, &mut rng)
}

/// As [`born_sample`], with a caller-managed generator.
pub fn born_sample_with(
    state: &DenseState,
    projectors: &[Projector],
    rng: &mut impl Rng,
) -> Result<MeasurementRecord> {
    let raws: Vec<DenseState> = projectors
        .iter()
        .map(|p| p.apply_raw(state))
        .collect::<Result<_>>()?;
    let probs: Vec<f64> = raws.iter().map(|r| r.norm_sqr()).collect();
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::IncompleteProjectors(total));
    }
    let u: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut pick = probs.len() - 1;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            pick = i;
            break;
        }
    }
    let post = if probs[pick] < ZERO_BRANCH_EPS {
        DenseState::zero(state.num_qubits())?
    } else {
        raws[pick].normalized()?
    };
    Ok(MeasurementRecord {
        label: projectors[pick].label.clone(),
        probability: probs[pick],
        post_state: post,
    })
}
