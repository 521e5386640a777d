//! Spin coupled basis: the full `2^M`-dimensional basis obtained by
//! coupling `M` spin-1/2 qubits one at a time.
//!
//! Each basis vector is labelled by a coupling path (the sequence of
//! intermediate total spins `j_[1] = 1/2, j_[2], ..., j_[M]`) and a final
//! `m`. Paths distinguish the multiple copies of each `j` sector; the
//! multiplicity is the number of monotone `+-1/2` walks from `1/2` to `j`
//! that stay nonnegative.

use num_complex::Complex64;

use crate::cg::{cg, CgArgs};
use crate::states::DenseState;
use crate::{Error, HalfInt, Result};

/// Spin coupled bases are materialized only up to this many qubits.
pub const SCB_CAP: usize = 10;

/// Intermediate total spins along the coupling order, as twice-values;
/// entry `i` is `j_[i+1]`, so the sequence starts at 1 and steps by one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CouplingPath(Vec<i64>);

impl CouplingPath {
    pub fn twice_values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The total spin the path ends on.
    pub fn final_j(&self) -> HalfInt {
        HalfInt::from_twice(*self.0.last().expect("paths are nonempty"))
    }
}

impl std::fmt::Display for CouplingPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&t| HalfInt::from_twice(t).to_string())
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// One spin coupled basis vector.
#[derive(Clone, Debug)]
pub struct ScbVector {
    pub path: CouplingPath,
    pub m: HalfInt,
    pub state: DenseState,
}

/// The complete orthonormal spin coupled basis on `M` qubits, ordered by
/// path (lexicographically) and then by descending `m`.
#[derive(Clone, Debug)]
pub struct ScbBasis {
    num_qubits: usize,
    vectors: Vec<ScbVector>,
}

impl ScbBasis {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn vectors(&self) -> &[ScbVector] {
        &self.vectors
    }

    pub fn vectors_with_j(&self, j: HalfInt) -> impl Iterator<Item = &ScbVector> {
        self.vectors.iter().filter(move |v| v.path.final_j() == j)
    }

    pub fn paths_with_j(&self, j: HalfInt) -> Vec<&CouplingPath> {
        let mut out: Vec<&CouplingPath> = Vec::new();
        for v in self.vectors_with_j(j) {
            if out.last() != Some(&&v.path) {
                out.push(&v.path);
            }
        }
        out
    }

    /// Expansion coefficients `<v_i | state>` in basis order.
    pub fn overlap_coefficients(&self, state: &DenseState) -> Vec<Complex64> {
        self.vectors.iter().map(|v| v.state.inner(state)).collect()
    }
}

/// Number of coupling paths on `M` qubits ending at total spin `j`.
pub fn multiplicity(m: usize, j: HalfInt) -> u64 {
    if j.twice() < 0 || j.twice() > m as i64 || (m as i64 - j.twice()) % 2 != 0 {
        return 0;
    }
    // counts[t] = walks of the current length ending at twice-spin t.
    let mut counts = vec![0u64; m + 2];
    counts[1] = 1;
    for _ in 1..m {
        let mut next = vec![0u64; m + 2];
        for t in 0..=m {
            if counts[t] == 0 {
                continue;
            }
            next[t + 1] += counts[t];
            if t >= 1 {
                next[t - 1] += counts[t];
            }
        }
        counts = next;
    }
    counts[j.twice() as usize]
}

/// Builds the spin coupled basis by iterated Clebsch-Gordan coupling.
/// Qubit `i` is bit `i`; bit value 1 is `m_2 = +1/2`.
pub fn build_scb(m: usize) -> Result<ScbBasis> {
    if m == 0 {
        return Err(Error::OutOfRange("need at least one qubit".into()));
    }
    if m > SCB_CAP {
        return Err(Error::ResourceCap(format!(
            "spin coupled bases are capped at {SCB_CAP} qubits, got {m}"
        )));
    }

    // Per path: dense states for m = j, j-1, ..., -j.
    struct Node {
        path: Vec<i64>,
        states: Vec<DenseState>,
    }

    let mut level = vec![Node {
        path: vec![1],
        states: vec![DenseState::basis(1, 1)?, DenseState::basis(1, 0)?],
    }];

    for qubit in 1..m {
        let mut next = Vec::new();
        for node in &level {
            let t_old = *node.path.last().expect("nonempty");
            let j1 = HalfInt::from_twice(t_old);
            // Ascending lex order: step down before stepping up.
            let mut branches = Vec::new();
            if t_old >= 1 {
                branches.push(t_old - 1);
            }
            branches.push(t_old + 1);
            for t_new in branches {
                let j = HalfInt::from_twice(t_new);
                let mut states = Vec::with_capacity(t_new as usize + 1);
                let mut tm = t_new;
                while tm >= -t_new {
                    let mnew = HalfInt::from_twice(tm);
                    let mut acc = DenseState::zero(qubit + 1)?;
                    for (bit, tm2) in [(0usize, -1i64), (1, 1)] {
                        let tm1 = tm - tm2;
                        if tm1.abs() > t_old {
                            continue;
                        }
                        let c = cg(&CgArgs::new(
                            j1,
                            HalfInt::from_twice(tm1),
                            HalfInt::HALF,
                            HalfInt::from_twice(tm2),
                            j,
                            mnew,
                        ))?;
                        if c == 0.0 {
                            continue;
                        }
                        // m runs j, j-1, ... so index is (t_old - tm1)/2.
                        let old = &node.states[((t_old - tm1) / 2) as usize];
                        for (idx, &a) in old.amps().iter().enumerate() {
                            acc.amps_mut()[idx | (bit << qubit)] += a * c;
                        }
                    }
                    states.push(acc);
                    tm -= 2;
                }
                let mut path = node.path.clone();
                path.push(t_new);
                next.push(Node { path, states });
            }
        }
        next.sort_by(|a, b| a.path.cmp(&b.path));
        level = next;
    }

    let mut vectors = Vec::new();
    for node in level {
        let t = *node.path.last().expect("nonempty");
        let path = CouplingPath(node.path);
        for (i, state) in node.states.into_iter().enumerate() {
            vectors.push(ScbVector {
                path: path.clone(),
                m: HalfInt::from_twice(t - 2 * i as i64),
                state,
            });
        }
    }
    Ok(ScbBasis { num_qubits: m, vectors })
}
