//! Teleportation-based recovery: logical ancilla, logical CNOT,
//! position-independent logical-Z readout, and conditional correction.
//!
//! The two-register circuit is tracked at the codespace level (a joint
//! four-dimensional amplitude vector over the logical bases); the
//! logical-Z readout is additionally realized physically as a diagonal
//! measurement on the projected register, which is what makes the
//! recovery independent of where the insertion landed.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{insert, InsertionEvent, InsertionQubit};
use crate::oracle::{apply_j_squared, project_total_j, project_w_mod_g};
use crate::states::{encode, DenseState, GnuCode, LogicalQubit};
use crate::{Error, HalfInt, Result};

/// Measured syndrome `(j, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Syndrome {
    pub j: HalfInt,
    pub w: u32,
}

impl Syndrome {
    pub fn new(j: HalfInt, w: u32) -> Self {
        Syndrome { j, w }
    }

    /// True on the `j = (N+1)/2` branch of an `N`-qubit code.
    pub fn is_symmetric(&self, code: &GnuCode) -> bool {
        self.j.twice() == code.qubit_count() as i64 + 1
    }

    fn validate(&self, code: &GnuCode) -> Result<()> {
        let n = code.qubit_count() as i64;
        if self.j.twice() != n + 1 && self.j.twice() != n - 1 {
            return Err(Error::OutOfRange(format!(
                "syndrome j = {} is not (N±1)/2 for N = {n}",
                self.j
            )));
        }
        if self.w >= code.g() {
            return Err(Error::OutOfRange(format!(
                "syndrome w = {} must be below g = {}",
                self.w,
                code.g()
            )));
        }
        Ok(())
    }
}

/// A state confined to a two-dimensional codespace: an orthonormal
/// logical basis and the payload amplitudes in it.
#[derive(Clone, Debug)]
pub struct LogicalRegister {
    pub basis: [DenseState; 2],
    pub payload: [Complex64; 2],
}

impl LogicalRegister {
    pub fn new(basis: [DenseState; 2], payload: [Complex64; 2]) -> Result<Self> {
        for b in &basis {
            if (b.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidState("logical basis not normalized".into()));
            }
        }
        if basis[0].inner(&basis[1]).norm() > 1e-10 {
            return Err(Error::InvalidState("logical basis not orthogonal".into()));
        }
        let norm: f64 = payload.iter().map(|p| p.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "payload norm^2 = {norm}, expected 1"
            )));
        }
        Ok(LogicalRegister { basis, payload })
    }

    /// The physical state `sum_x payload_x |x_L>`.
    pub fn to_dense(&self) -> DenseState {
        let mut out = self.basis[0].clone();
        out.scale(self.payload[0]);
        out.add_scaled(&self.basis[1], self.payload[1]);
        out
    }

    /// `|<target payload | payload>|^2`, phase-insensitive.
    pub fn payload_fidelity(&self, target: &LogicalQubit) -> f64 {
        (target.c0.conj() * self.payload[0] + target.c1.conj() * self.payload[1]).norm_sqr()
    }
}

/// Result of one recovery run.
#[derive(Clone, Debug)]
pub struct RecoveryOutcome {
    pub measured_bit: u8,
    pub measured_probability: f64,
    pub corrected: bool,
    pub output: LogicalRegister,
    pub fidelity: f64,
}

/// `|+_L>` in the given code.
pub fn plus_ancilla(code: &GnuCode) -> Result<LogicalRegister> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    LogicalRegister::new(
        [
            encode(code, &LogicalQubit::zero())?,
            encode(code, &LogicalQubit::one())?,
        ],
        [h, h],
    )
}

// Which insertion feeds a given syndrome branch; also rejects the zero
// bands.
fn branch_insertion(code: &GnuCode, syndrome: &Syndrome) -> Result<InsertionQubit> {
    let g = code.g();
    if syndrome.is_symmetric(code) {
        match syndrome.w {
            0 => Ok(InsertionQubit::zero()),
            1 => Ok(InsertionQubit::one()),
            _ => Err(Error::ZeroCodeword),
        }
    } else if syndrome.w == 0 {
        Ok(InsertionQubit::one())
    } else if syndrome.w == g - 1 {
        Ok(InsertionQubit::zero())
    } else {
        Err(Error::ZeroCodeword)
    }
}

/// The post-syndrome logical codespace: each basis state is the
/// normalized projection of an inserted codeword.
pub fn codespace_basis(code: &GnuCode, a: u32, syndrome: &Syndrome) -> Result<[DenseState; 2]> {
    syndrome.validate(code)?;
    let q1 = branch_insertion(code, syndrome)?;
    let mut basis = Vec::with_capacity(2);
    for x in [LogicalQubit::zero(), LogicalQubit::one()] {
        let state = insert(&encode(code, &x)?, &q1, InsertionEvent { position: a })?;
        let (pj, post) = project_total_j(&state, syndrome.j)?;
        if pj < 1e-12 {
            return Err(Error::ZeroCodeword);
        }
        let (pw, post) = project_w_mod_g(&post, syndrome.j, code.g(), syndrome.w)?;
        if pw < 1e-12 {
            return Err(Error::ZeroCodeword);
        }
        basis.push(post);
    }
    Ok([basis.remove(0), basis.remove(0)])
}

/// Expresses a projected `N+1`-qubit state in the codespace of its
/// syndrome. Fails if the state leaks out of that codespace.
pub fn projected_register(
    code: &GnuCode,
    a: u32,
    syndrome: &Syndrome,
    state: &DenseState,
) -> Result<LogicalRegister> {
    let basis = codespace_basis(code, a, syndrome)?;
    let payload = [basis[0].inner(state), basis[1].inner(state)];
    let mut residual = state.clone();
    residual.add_scaled(&basis[0], -payload[0]);
    residual.add_scaled(&basis[1], -payload[1]);
    let leak = residual.norm_sqr();
    if leak > 1e-8 {
        return Err(Error::Leakage(leak));
    }
    let norm: f64 = payload.iter().map(|p| p.norm_sqr()).sum::<f64>().sqrt();
    LogicalRegister::new(basis, [payload[0] / norm, payload[1] / norm])
}

/// Complement every qubit (`m -> -m` on each total-spin sector).
pub fn m_negation(state: &DenseState) -> DenseState {
    let mask = state.dim() - 1;
    let mut out = DenseState::zero(state.num_qubits()).expect("same size as input");
    for (idx, &a) in state.amps().iter().enumerate() {
        out.amps_mut()[!idx & mask] = a;
    }
    out
}

/// Physical logical-X: m-negation, expressed back in the register's own
/// basis. Errors when m-negation does not preserve the codespace; note
/// that on codes with even `nu` the induced logical action is the
/// identity, not a bit flip.
pub fn logical_x(reg: &LogicalRegister) -> Result<LogicalRegister> {
    let mut u = [[Complex64::new(0.0, 0.0); 2]; 2];
    for x in 0..2 {
        let flipped = m_negation(&reg.basis[x]);
        for y in 0..2 {
            u[y][x] = reg.basis[y].inner(&flipped);
        }
        let kept = u[0][x].norm_sqr() + u[1][x].norm_sqr();
        if (kept - 1.0).abs() > 1e-9 {
            return Err(Error::LogicalXUnsupported);
        }
    }
    let payload = [
        u[0][0] * reg.payload[0] + u[0][1] * reg.payload[1],
        u[1][0] * reg.payload[0] + u[1][1] * reg.payload[1],
    ];
    LogicalRegister::new(reg.basis.clone(), payload)
}

/// Joint codespace state of two registers: amplitudes over
/// `|x_L>|y_L>` with `x` on the control.
#[derive(Clone, Debug)]
pub struct JointState {
    pub control_basis: [DenseState; 2],
    pub target_basis: [DenseState; 2],
    /// `amps[2x + y]`.
    pub amps: [Complex64; 4],
}

/// Logical CNOT on two separable registers: `|x_L, y_L> -> |x_L, (y^x)_L>`.
pub fn logical_cnot(control: &LogicalRegister, target: &LogicalRegister) -> Result<JointState> {
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for x in 0..2 {
        for y in 0..2 {
            amps[2 * x + (y ^ x)] = control.payload[x] * target.payload[y];
        }
    }
    Ok(JointState {
        control_basis: control.basis.clone(),
        target_basis: target.basis.clone(),
        amps,
    })
}

// Logical bit of a diagonal basis state: the parity of the weight class
// index `i`, recovered from the modular value `v = j + m`.
fn logical_bit(code: &GnuCode, syndrome: &Syndrome, num_qubits: usize, weight: u32) -> u8 {
    let v = (syndrome.j.twice() + 2 * weight as i64 - num_qubits as i64) / 2;
    let g = code.g() as i64;
    let mut i = (v - syndrome.w as i64).div_euclid(g);
    if !syndrome.is_symmetric(code) && syndrome.w == code.g() - 1 {
        i += 1;
    }
    (i.rem_euclid(2)) as u8
}

/// Probability of each logical-Z outcome for a state in the syndrome's
/// codespace. Diagonal in the computational basis, hence identical for
/// every insertion position.
pub fn logical_z_distribution(
    code: &GnuCode,
    syndrome: &Syndrome,
    state: &DenseState,
) -> Result<[f64; 2]> {
    syndrome.validate(code)?;
    let mut residual = apply_j_squared(state);
    residual.add_scaled(state, Complex64::new(-syndrome.j.casimir(), 0.0));
    if residual.norm_sqr() > 1e-8 {
        return Err(Error::Leakage(residual.norm_sqr()));
    }
    let m = state.num_qubits();
    let mut probs = [0.0f64; 2];
    for (idx, a) in state.amps().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let bit = logical_bit(code, syndrome, m, idx.count_ones());
        probs[bit as usize] += p;
    }
    let total = probs[0] + probs[1];
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Leakage((total - 1.0).abs()));
    }
    Ok(probs)
}

/// Samples the logical-Z readout and collapses the state.
pub fn logical_z_readout(
    code: &GnuCode,
    syndrome: &Syndrome,
    state: &DenseState,
    rng: &mut impl Rng,
) -> Result<(u8, f64, DenseState)> {
    let probs = logical_z_distribution(code, syndrome, state)?;
    let bit = if rng.gen::<f64>() < probs[0] { 0u8 } else { 1 };
    let m = state.num_qubits();
    let mut collapsed = state.clone();
    for (idx, a) in collapsed.amps_mut().iter_mut().enumerate() {
        if logical_bit(code, syndrome, m, idx.count_ones()) != bit {
            *a = Complex64::new(0.0, 0.0);
        }
    }
    Ok((bit, probs[bit as usize], collapsed.normalized()?))
}

/// Runs the recovery circuit: ancilla `|+_L>` on `N` fresh qubits,
/// logical CNOT onto the projected register, logical-Z readout there,
/// and a conditional bit-flip correction applied at the codespace level.
/// Reports the fidelity of the recovered payload against `target`.
pub fn teleport(
    ancilla_code: &GnuCode,
    code: &GnuCode,
    projected: &LogicalRegister,
    target: &LogicalQubit,
    seed: u64,
) -> Result<RecoveryOutcome> {
    if ancilla_code.g() != code.g() {
        return Err(Error::GapMismatch {
            ancilla: ancilla_code.g(),
            code: code.g(),
        });
    }
    let ancilla = plus_ancilla(ancilla_code)?;
    let joint = logical_cnot(&ancilla, projected)?;

    // Logical-Z marginal on the target register.
    let mut probs = [0.0f64; 2];
    for x in 0..2 {
        for y in 0..2 {
            probs[y] += joint.amps[2 * x + y].norm_sqr();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bit = if rng.gen::<f64>() < probs[0] { 0usize } else { 1 };
    let p = probs[bit];

    // Ancilla payload conditioned on the outcome, then the correction:
    // outcome 1 leaves the payload bit-swapped.
    let scale = p.sqrt();
    let mut payload = [joint.amps[bit] / scale, joint.amps[2 + bit] / scale];
    let corrected = bit == 1;
    if corrected {
        payload.swap(0, 1);
    }
    let output = LogicalRegister::new(joint.control_basis, payload)?;
    let fidelity = output.payload_fidelity(target);
    Ok(RecoveryOutcome {
        measured_bit: bit as u8,
        measured_probability: p,
        corrected,
        output,
        fidelity,
    })
}
