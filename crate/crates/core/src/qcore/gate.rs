use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A gate application on specific qubit wires.
///
/// Qubit 0 is the most significant bit of the basis index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    T(usize),
    SqrtX(usize),
    SqrtY(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Ry(usize, f64),
    Rz(usize, f64),
    Cz(usize, usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::T(_) => "T",
            Gate::SqrtX(_) => "SQRTX",
            Gate::SqrtY(_) => "SQRTY",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::Ry(..) => "RY",
            Gate::Rz(..) => "RZ",
            Gate::Cz(..) => "CZ",
            Gate::Cnot { .. } => "CNOT",
        }
    }

    /// Wires touched by the gate, control first for CNOT.
    pub fn qubits(&self) -> ([usize; 2], usize) {
        match *self {
            Gate::H(q)
            | Gate::T(q)
            | Gate::SqrtX(q)
            | Gate::SqrtY(q)
            | Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::Ry(q, _)
            | Gate::Rz(q, _) => ([q, q], 1),
            Gate::Cz(a, b) => ([a, b], 2),
            Gate::Cnot { control, target } => ([control, target], 2),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Ry(_, t) | Gate::Rz(_, t) => Some(t),
            _ => None,
        }
    }

    pub fn is_parameterized(&self) -> bool {
        self.angle().is_some()
    }

    /// Same gate with its rotation angle replaced. Fixed gates are returned unchanged.
    pub fn with_angle(self, theta: f64) -> Gate {
        match self {
            Gate::Ry(q, _) => Gate::Ry(q, theta),
            Gate::Rz(q, _) => Gate::Rz(q, theta),
            g => g,
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let (qs, arity) = self.qubits();
        for &q in &qs[..arity] {
            if q >= n_qubits {
                return Err(Error::InvalidGate {
                    gate: self.to_string(),
                    reason: format!("qubit {q} out of range for {n_qubits} qubits"),
                });
            }
        }
        if arity == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidGate {
                gate: self.to_string(),
                reason: "two-qubit gate needs distinct wires".into(),
            });
        }
        if let Some(t) = self.angle() {
            if !t.is_finite() {
                return Err(Error::InvalidGate {
                    gate: self.to_string(),
                    reason: "rotation angle is not finite".into(),
                });
            }
        }
        Ok(())
    }

    /// 2x2 matrix for single-qubit kinds, `None` for two-qubit gates.
    pub fn matrix2(&self) -> Option<Matrix2> {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let m = match *self {
            Gate::H(_) => [[h, h], [h, -h]],
            Gate::T(_) => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
            Gate::SqrtX(_) => {
                let p = Complex64::new(0.5, 0.5);
                let m = Complex64::new(0.5, -0.5);
                [[p, m], [m, p]]
            }
            Gate::SqrtY(_) => {
                let p = Complex64::new(0.5, 0.5);
                [[p, -p], [p, p]]
            }
            Gate::X(_) => [[ZERO, ONE], [ONE, ZERO]],
            Gate::Y(_) => [[ZERO, -I], [I, ZERO]],
            Gate::Z(_) => [[ONE, ZERO], [ZERO, -ONE]],
            Gate::Ry(_, t) => {
                let (s, c) = (t / 2.0).sin_cos();
                [[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]]
            }
            Gate::Rz(_, t) => [
                [Complex64::from_polar(1.0, -t / 2.0), ZERO],
                [ZERO, Complex64::from_polar(1.0, t / 2.0)],
            ],
            Gate::Cz(..) | Gate::Cnot { .. } => return None,
        };
        Some(m)
    }

    /// 4x4 matrix on the gate's own wires, first listed wire as the high bit.
    pub fn matrix4(&self) -> Option<[[Complex64; 4]; 4]> {
        let mut m = [[ZERO; 4]; 4];
        match self {
            Gate::Cz(..) => {
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = ONE;
                }
                m[3][3] = -ONE;
            }
            Gate::Cnot { .. } => {
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][3] = ONE;
                m[3][2] = ONE;
            }
            _ => return None,
        }
        Some(m)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (qs, arity) = self.qubits();
        write!(f, "{} {}", self.name(), qs[0])?;
        if arity == 2 {
            write!(f, " {}", qs[1])?;
        }
        if let Some(t) = self.angle() {
            write!(f, " {t:?}")?;
        }
        Ok(())
    }
}

pub(crate) fn adjoint2(m: &Matrix2) -> Matrix2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}
