//! Single-insertion error channel: tensor a pure single-qubit state into
//! position `a` of an `N`-qubit register.
//!
//! Position `a` means the inserted qubit becomes qubit index `a`; the
//! original qubits `a..N-1` shift up by one. Position 0 prepends,
//! position `N` appends.

use num_complex::Complex64;

use crate::states::DenseState;
use crate::{Error, Result};

/// Inserted qubit `v0|0> + v1|1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InsertionQubit {
    pub v0: Complex64,
    pub v1: Complex64,
}

impl InsertionQubit {
    pub fn new(v0: Complex64, v1: Complex64) -> Result<Self> {
        let norm = v0.norm_sqr() + v1.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("insertion norm^2 = {norm}, expected 1")));
        }
        Ok(InsertionQubit { v0, v1 })
    }

    pub fn zero() -> Self {
        InsertionQubit { v0: Complex64::new(1.0, 0.0), v1: Complex64::new(0.0, 0.0) }
    }

    pub fn one() -> Self {
        InsertionQubit { v0: Complex64::new(0.0, 0.0), v1: Complex64::new(1.0, 0.0) }
    }

    pub fn uniform() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        InsertionQubit { v0: h, v1: h }
    }
}

/// Where the insertion lands, `0 <= a <= N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InsertionEvent {
    pub position: u32,
}

/// Applies the insertion isometry, producing an `N+1`-qubit state.
pub fn insert(state: &DenseState, q1: &InsertionQubit, ev: InsertionEvent) -> Result<DenseState> {
    let n = state.num_qubits();
    let a = ev.position as usize;
    if a > n {
        return Err(Error::OutOfRange(format!("insertion position {a} exceeds qubit count {n}")));
    }
    let mut out = DenseState::zero(n + 1)?;
    let low_mask = (1usize << a) - 1;
    for (idx, &amp) in state.amps().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let lo = idx & low_mask;
        let hi = idx >> a;
        let base = lo | (hi << (a + 1));
        out.amps_mut()[base] += q1.v0 * amp;
        out.amps_mut()[base | (1 << a)] += q1.v1 * amp;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{dicke, encode, GnuCode, LogicalQubit};

    #[test]
    fn basis_placement() {
        // |0000>, insert |1> at position 2 -> |00100> (bit 2 set).
        let s = DenseState::basis(4, 0).unwrap();
        let out = insert(&s, &InsertionQubit::one(), InsertionEvent { position: 2 }).unwrap();
        assert_eq!(out.amps()[0b00100].re, 1.0);
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dicke_overlap_after_append() {
        let code = GnuCode::new(2, 2, 1).unwrap();
        let s = encode(&code, &LogicalQubit::one()).unwrap(); // |D^4_2>
        let out = insert(&s, &InsertionQubit::one(), InsertionEvent { position: 4 }).unwrap();
        let dist = out.weight_distribution();
        assert!((dist[3] - 1.0).abs() < 1e-12, "weight-3 support only");
        let overlap = dicke(5, 3).unwrap().inner(&out);
        assert!((overlap.re - (6.0f64 / 10.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn prepend_is_tensor_product() {
        let s = dicke(3, 1).unwrap();
        let out = insert(&s, &InsertionQubit::uniform(), InsertionEvent { position: 0 }).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // q1 occupies bit 0; original amplitudes shift to bits 1..=3.
        for idx in 0..8usize {
            let expect = s.amps()[idx];
            assert!((out.amps()[idx << 1] - expect * h).norm() < 1e-12);
            assert!((out.amps()[(idx << 1) | 1] - expect * h).norm() < 1e-12);
        }
    }

    #[test]
    fn isometry_and_range_check() {
        let s = dicke(4, 2).unwrap();
        for a in 0..=4 {
            let out = insert(&s, &InsertionQubit::uniform(), InsertionEvent { position: a }).unwrap();
            assert!((out.norm() - s.norm()).abs() < 1e-12);
        }
        assert!(insert(&s, &InsertionQubit::zero(), InsertionEvent { position: 5 }).is_err());
    }
}
