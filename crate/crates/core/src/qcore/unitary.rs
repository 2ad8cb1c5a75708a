use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use crate::error::{Error, Result};

/// Largest register for which a dense unitary is assembled by default.
pub const DEFAULT_UNITARY_CAP: usize = 7;

/// Dense `2^n × 2^n` matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryMatrix {
    n_qubits: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        UnitaryMatrix { n_qubits, entries }
    }

    pub fn from_rows(n_qubits: usize, entries: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if entries.len() != dim * dim {
            return Err(Error::InvalidCircuit(format!("expected {} entries, got {}", dim * dim, entries.len())));
        }
        Ok(UnitaryMatrix { n_qubits, entries })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        let dim = self.dim();
        (0..dim).map(|r| self.entries[r * dim + col]).collect()
    }

    pub fn scale(&self, factor: Complex64) -> UnitaryMatrix {
        UnitaryMatrix { n_qubits: self.n_qubits, entries: self.entries.iter().map(|e| e * factor).collect() }
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let dim = self.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[c * dim + r] = self.entries[r * dim + c].conj();
            }
        }
        UnitaryMatrix { n_qubits: self.n_qubits, entries }
    }

    /// `self · rhs`.
    pub fn matmul(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.n_qubits != rhs.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: rhs.n_qubits });
        }
        let dim = self.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            let out_row = &mut entries[r * dim..(r + 1) * dim];
            for k in 0..dim {
                let a = self.entries[r * dim + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(&rhs.entries[k * dim..(k + 1) * dim]) {
                    *o += a * b;
                }
            }
        }
        Ok(UnitaryMatrix { n_qubits: self.n_qubits, entries })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_F`.
    pub fn frobenius_distance(&self, other: &UnitaryMatrix) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }

    /// `tr(self† · other)`.
    pub fn hs_inner(&self, other: &UnitaryMatrix) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum())
    }

    /// `‖M†M − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("same dimension");
        gram.frobenius_distance(&UnitaryMatrix::identity(self.n_qubits)).expect("same dimension")
    }
}

/// Dense unitary of `circuit`, column `j` being the circuit applied to `|j⟩`.
pub fn assemble_unitary(circuit: &Circuit) -> Result<UnitaryMatrix> {
    assemble_unitary_capped(circuit, DEFAULT_UNITARY_CAP)
}

pub fn assemble_unitary_capped(circuit: &Circuit, cap: usize) -> Result<UnitaryMatrix> {
    let n = circuit.n_qubits();
    if n > cap {
        return Err(Error::TooManyQubits { n_qubits: n, cap });
    }
    let dim = 1usize << n;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut column = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        column.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        column[j] = Complex64::new(1.0, 0.0);
        circuit.run_in_place(&mut column);
        for (r, a) in column.iter().enumerate() {
            entries[r * dim + j] = *a;
        }
    }
    Ok(UnitaryMatrix { n_qubits: n, entries })
}
