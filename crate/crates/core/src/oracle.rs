//! Seeded random target circuits and the query interface that labels probes.
//!
//! Target layout: a Hadamard wall, then for each depth `d = 1..=depth` a CZ
//! brickwork layer (pairs `(0,1),(2,3),…` on odd `d`, `(1,2),(3,4),…` on even
//! `d`) followed by one gate per qubit drawn uniformly from `{T, √X, √Y}`,
//! then a closing Hadamard wall. Draws are consumed in `(depth, qubit)` order.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probes::MAX_POOL_QUBITS;
use crate::qcore::{check_dims, Circuit, Gate, StateVector};
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub n_qubits: usize,
    pub depth: usize,
    pub seed: u64,
}

/// The hidden process. Each call to [`Oracle::query`] costs one label.
#[derive(Debug, Clone)]
pub struct Oracle {
    circuit: Circuit,
    query_count: usize,
}

pub fn generate_target(spec: &TargetSpec) -> Result<Oracle> {
    let n = spec.n_qubits;
    if !(1..=MAX_POOL_QUBITS).contains(&n) {
        return Err(Error::QubitRange(n));
    }
    let mut rng = seed::rng(spec.seed);
    let mut circuit = Circuit::new(n);
    for q in 0..n {
        circuit.push(Gate::H(q))?;
    }
    for d in 1..=spec.depth {
        let start = if d % 2 == 1 { 0 } else { 1 };
        let mut q = start;
        while q + 1 < n {
            circuit.push(Gate::Cz(q, q + 1))?;
            q += 2;
        }
        for q in 0..n {
            let gate = match rng.gen_range(0..3) {
                0 => Gate::T(q),
                1 => Gate::SqrtX(q),
                _ => Gate::SqrtY(q),
            };
            circuit.push(gate)?;
        }
    }
    for q in 0..n {
        circuit.push(Gate::H(q))?;
    }
    Ok(Oracle { circuit, query_count: 0 })
}

impl Oracle {
    /// Wraps an arbitrary circuit as a target.
    pub fn from_circuit(circuit: Circuit) -> Self {
        Oracle { circuit, query_count: 0 }
    }

    /// `U|probe⟩`; increments the query counter.
    pub fn query(&mut self, probe: &StateVector) -> Result<StateVector> {
        check_dims(self.circuit.n_qubits(), probe.n_qubits())?;
        let mut out = probe.clone();
        self.circuit.run_in_place(out.amplitudes_mut());
        self.query_count += 1;
        Ok(out)
    }

    pub fn query_count(&self) -> usize {
        self.query_count
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }

    /// The target circuit, for evaluation and audit only. Learners must go
    /// through [`Oracle::query`].
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }
}
