use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::gate::Gate;
use super::state::{apply_in_place, check_dims, StateVector};
use crate::error::{Error, Result};

/// Ordered gate list on a fixed register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit { n_qubits, ops: Vec::new() }
    }

    pub fn from_ops(n_qubits: usize, ops: Vec<Gate>) -> Result<Self> {
        for g in &ops {
            g.validate(n_qubits)?;
        }
        Ok(Circuit { n_qubits, ops })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.ops.push(gate);
        Ok(())
    }

    /// Appends every gate of `other`; both circuits must share a register size.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        check_dims(self.n_qubits, other.n_qubits).map_err(|e| Error::InvalidCircuit(e.to_string()))?;
        self.ops.extend_from_slice(&other.ops);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Applies the circuit to raw amplitudes in place.
    pub(crate) fn run_in_place(&self, amps: &mut [num_complex::Complex64]) {
        for g in &self.ops {
            apply_in_place(amps, self.n_qubits, g);
        }
    }

    /// One gate per line: `GATE q [q2] [angle]`.
    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.n_qubits);
        for g in &self.ops {
            writeln!(out, "{g}").expect("writing to a String");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut n_qubits = None;
        let mut ops = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: &str| Error::Parse { line: lineno + 1, reason: reason.to_string() };
            let mut fields = line.split_whitespace();
            let name = fields.next().expect("non-empty line");
            let rest: Vec<&str> = fields.collect();
            let uint = |i: usize| -> Result<usize> {
                rest.get(i).ok_or_else(|| err("missing operand"))?.parse().map_err(|_| err("bad qubit index"))
            };
            let angle = |i: usize| -> Result<f64> {
                rest.get(i).ok_or_else(|| err("missing angle"))?.parse().map_err(|_| err("bad angle"))
            };
            let expect_len = |n: usize| if rest.len() == n { Ok(()) } else { Err(err("wrong operand count")) };
            let gate = match name {
                "QUBITS" => {
                    expect_len(1)?;
                    n_qubits = Some(uint(0)?);
                    continue;
                }
                "H" | "T" | "SQRTX" | "SQRTY" | "X" | "Y" | "Z" => {
                    expect_len(1)?;
                    let q = uint(0)?;
                    match name {
                        "H" => Gate::H(q),
                        "T" => Gate::T(q),
                        "SQRTX" => Gate::SqrtX(q),
                        "SQRTY" => Gate::SqrtY(q),
                        "X" => Gate::X(q),
                        "Y" => Gate::Y(q),
                        _ => Gate::Z(q),
                    }
                }
                "RY" | "RZ" => {
                    expect_len(2)?;
                    let (q, t) = (uint(0)?, angle(1)?);
                    if name == "RY" {
                        Gate::Ry(q, t)
                    } else {
                        Gate::Rz(q, t)
                    }
                }
                "CZ" => {
                    expect_len(2)?;
                    Gate::Cz(uint(0)?, uint(1)?)
                }
                "CNOT" => {
                    expect_len(2)?;
                    Gate::Cnot { control: uint(0)?, target: uint(1)? }
                }
                _ => return Err(err(&format!("unknown gate {name}"))),
            };
            ops.push(gate);
        }
        let n_qubits = n_qubits.ok_or(Error::Parse { line: 0, reason: "missing QUBITS header".into() })?;
        Circuit::from_ops(n_qubits, ops)
    }
}

/// Left fold of gate application over the circuit.
pub fn apply_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    if state.n_qubits() != circuit.n_qubits {
        return Err(Error::InvalidCircuit(format!(
            "circuit acts on {} qubits, state has {}",
            circuit.n_qubits,
            state.n_qubits()
        )));
    }
    let mut out = state.clone();
    circuit.run_in_place(out.amplitudes_mut());
    Ok(out)
}
