//! The `4^n` product-state probe pool.
//!
//! Pool index convention: the base-4 digits of an index pick one of four
//! single-qubit states per wire, most significant digit for qubit 0.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{check_dims, StateVector, UnitaryMatrix};

pub const MAX_POOL_QUBITS: usize = 7;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeMode {
    /// `{|0⟩, |1⟩, |+⟩, |+i⟩}^⊗n`, an informationally complete product set.
    #[default]
    StandardIC,
    /// `P|0⟩^⊗n` for `P ∈ {I, X, Y, Z}^⊗n`. Only computational basis states up
    /// to phase, so not informationally complete.
    LiteralPauli,
}

impl ProbeMode {
    /// The four single-qubit states selected by a base-4 digit.
    pub fn local_states(self) -> [[Complex64; 2]; 4] {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            ProbeMode::StandardIC => [[one, z], [z, one], [h, h], [h, Complex64::new(0.0, FRAC_1_SQRT_2)]],
            ProbeMode::LiteralPauli => [[one, z], [z, one], [z, Complex64::new(0.0, 1.0)], [one, z]],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbePool {
    n_qubits: usize,
    /// `None` for hand-built pools without product structure.
    mode: Option<ProbeMode>,
    states: Vec<StateVector>,
}

/// Builds the pool of all `4^n` product probes.
pub fn generate_pool(n_qubits: usize, mode: ProbeMode) -> Result<ProbePool> {
    if !(1..=MAX_POOL_QUBITS).contains(&n_qubits) {
        return Err(Error::QubitRange(n_qubits));
    }
    let locals = mode.local_states();
    let states = (0..1usize << (2 * n_qubits))
        .map(|index| {
            let factors: Vec<_> = digits(index, n_qubits).map(|d| locals[d]).collect();
            StateVector::product(&factors)
        })
        .collect();
    Ok(ProbePool { n_qubits, mode: Some(mode), states })
}

/// Base-4 digits of `index`, qubit 0 first.
fn digits(index: usize, n_qubits: usize) -> impl Iterator<Item = usize> {
    (0..n_qubits).map(move |q| (index >> (2 * (n_qubits - 1 - q))) & 3)
}

impl ProbePool {
    /// A pool of arbitrary states on a common register, indexed in the given order.
    pub fn from_states(states: Vec<StateVector>) -> Result<Self> {
        let n_qubits = states.first().ok_or(Error::EmptyPool)?.n_qubits();
        for s in &states {
            check_dims(n_qubits, s.n_qubits())?;
        }
        Ok(ProbePool { n_qubits, mode: None, states })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn mode(&self) -> Option<ProbeMode> {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, index: usize) -> &StateVector {
        &self.states[index]
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// `M|ψ_p⟩` for every pool index `p`, as a flat `[p][row]` array.
    ///
    /// Uses the product structure: the column index of `M` is contracted one
    /// wire at a time against the 2×4 matrix of local states, which costs
    /// `O(n · 2^n · 4^n)` instead of `O(8^n)` for separate mat-vec products.
    pub fn apply_unitary_all(&self, m: &UnitaryMatrix) -> Result<Vec<Complex64>> {
        if m.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: m.n_qubits() });
        }
        let n = self.n_qubits;
        let dim = 1usize << n;
        let Some(mode) = self.mode else {
            let mut out = Vec::with_capacity(self.len() * dim);
            for s in &self.states {
                for r in 0..dim {
                    out.push((0..dim).map(|k| m.get(r, k) * s.amplitudes()[k]).sum());
                }
            }
            return Ok(out);
        };
        let locals = mode.local_states();
        // Layout [axis_0]…[axis_{n-1}][row]; axis q has length 4 once
        // contracted, 2 before. Starts as Mᵀ and ends as [p][row].
        let mut cur = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                cur[k * dim + r] = m.get(r, k);
            }
        }
        for q in 0..n {
            let outer = 1usize << (2 * q);
            let inner = (1usize << (n - 1 - q)) * dim;
            let mut next = vec![Complex64::new(0.0, 0.0); outer * 4 * inner];
            for (src, dst) in cur.chunks_exact(2 * inner).zip(next.chunks_exact_mut(4 * inner)) {
                let (s0, s1) = src.split_at(inner);
                for (local, out) in locals.iter().zip(dst.chunks_exact_mut(inner)) {
                    for ((x, a), b) in out.iter_mut().zip(s0).zip(s1) {
                        *x = a * local[0] + b * local[1];
                    }
                }
            }
            cur = next;
        }
        Ok(cur)
    }
}
