use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gate::{adjoint2, Gate, Matrix2};
use crate::error::{Error, Result};

/// Dense pure state on `n_qubits` wires, basis-ordered with qubit 0 as the
/// most significant bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index {index} out of range for {n_qubits} qubits");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// Wraps raw amplitudes. The length must be a power of two; no
    /// normalization is applied, so this also admits the unnormalized vectors
    /// used by linearity checks.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidCircuit(format!("amplitude length {dim} is not a power of two ≥ 2")));
        }
        Ok(StateVector { n_qubits: dim.trailing_zeros() as usize, amps })
    }

    /// Kronecker product of single-qubit states, qubit 0 first.
    pub fn product(locals: &[[Complex64; 2]]) -> Self {
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for local in locals {
            let mut next = Vec::with_capacity(amps.len() * 2);
            for a in &amps {
                next.push(a * local[0]);
                next.push(a * local[1]);
            }
            amps = next;
        }
        StateVector { n_qubits: locals.len(), amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dims(self.n_qubits, other.n_qubits)?;
        Ok(inner_unchecked(&self.amps, &other.amps))
    }

    /// Euclidean distance between amplitude vectors (global-phase sensitive).
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        check_dims(self.n_qubits, other.n_qubits)?;
        Ok(distance_unchecked(&self.amps, &other.amps))
    }

    pub fn scale(&self, factor: Complex64) -> StateVector {
        StateVector { n_qubits: self.n_qubits, amps: self.amps.iter().map(|a| a * factor).collect() }
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[inline]
pub(crate) fn inner_unchecked(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
    }
    Complex64::new(re, im)
}

/// `Re⟨a|b⟩` without forming the imaginary part.
#[inline]
pub(crate) fn real_inner_unchecked(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

#[inline]
pub(crate) fn distance_unchecked(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩`, the inner product of two states.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.inner(b)
}

/// Returns the image of `state` under `gate`. The input is left untouched.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    gate.validate(state.n_qubits)?;
    let mut out = state.clone();
    apply_in_place(&mut out.amps, state.n_qubits, gate);
    Ok(out)
}

#[inline]
fn stride_of(n_qubits: usize, q: usize) -> usize {
    1usize << (n_qubits - 1 - q)
}

/// Strided in-place application. Targets must already be validated.
pub(crate) fn apply_in_place(amps: &mut [Complex64], n_qubits: usize, gate: &Gate) {
    match *gate {
        Gate::Rz(q, t) => {
            let lo = Complex64::from_polar(1.0, -t / 2.0);
            apply_diag(amps, stride_of(n_qubits, q), lo, lo.conj());
        }
        Gate::Z(q) => apply_diag(amps, stride_of(n_qubits, q), Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)),
        Gate::T(q) => apply_diag(
            amps,
            stride_of(n_qubits, q),
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        ),
        Gate::Ry(q, t) => {
            let (s, c) = (t / 2.0).sin_cos();
            apply_real_rotation(amps, stride_of(n_qubits, q), c, s);
        }
        Gate::Cz(a, b) => {
            let mask = stride_of(n_qubits, a) | stride_of(n_qubits, b);
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & mask == mask {
                    *amp = -*amp;
                }
            }
        }
        Gate::Cnot { control, target } => {
            let cbit = stride_of(n_qubits, control);
            let tbit = stride_of(n_qubits, target);
            for i in 0..amps.len() {
                if i & cbit != 0 && i & tbit == 0 {
                    amps.swap(i, i | tbit);
                }
            }
        }
        _ => {
            let (qs, _) = gate.qubits();
            let m = gate.matrix2().expect("single-qubit gate");
            apply_matrix2(amps, stride_of(n_qubits, qs[0]), &m);
        }
    }
}

/// In-place application of `gate†`.
pub(crate) fn apply_adjoint_in_place(amps: &mut [Complex64], n_qubits: usize, gate: &Gate) {
    match *gate {
        Gate::Rz(q, t) => apply_in_place(amps, n_qubits, &Gate::Rz(q, -t)),
        Gate::Ry(q, t) => apply_in_place(amps, n_qubits, &Gate::Ry(q, -t)),
        Gate::Cz(..) | Gate::Cnot { .. } | Gate::H(_) | Gate::X(_) | Gate::Y(_) | Gate::Z(_) => {
            apply_in_place(amps, n_qubits, gate)
        }
        _ => {
            let (qs, _) = gate.qubits();
            let m = adjoint2(&gate.matrix2().expect("single-qubit gate"));
            apply_matrix2(amps, stride_of(n_qubits, qs[0]), &m);
        }
    }
}

#[inline]
/// `(Re⟨bra|A|ket⟩, Re⟨bra|B|ket⟩)` for single-qubit `A`, `B` on wire `q`,
/// in one pass and without touching `ket`.
pub(crate) fn real_overlaps2(
    bra: &[Complex64],
    ket: &[Complex64],
    n_qubits: usize,
    q: usize,
    a: &Matrix2,
    b: &Matrix2,
) -> (f64, f64) {
    let stride = stride_of(n_qubits, q);
    let re_dot = |l: Complex64, v: Complex64| l.re * v.re + l.im * v.im;
    let (mut ra, mut rb) = (0.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if [a[0][1], a[1][0], b[0][1], b[1][0]] == [zero; 4] {
        for (lb, kb) in bra.chunks_exact(2 * stride).zip(ket.chunks_exact(2 * stride)) {
            let (l0s, l1s) = lb.split_at(stride);
            let (k0s, k1s) = kb.split_at(stride);
            for (((&l0, &l1), &k0), &k1) in l0s.iter().zip(l1s).zip(k0s).zip(k1s) {
                let (p0, p1) = (l0.conj() * k0, l1.conj() * k1);
                ra += (a[0][0] * p0 + a[1][1] * p1).re;
                rb += (b[0][0] * p0 + b[1][1] * p1).re;
            }
        }
        return (ra, rb);
    }
    for (lb, kb) in bra.chunks_exact(2 * stride).zip(ket.chunks_exact(2 * stride)) {
        let (l0s, l1s) = lb.split_at(stride);
        let (k0s, k1s) = kb.split_at(stride);
        for (((&l0, &l1), &k0), &k1) in l0s.iter().zip(l1s).zip(k0s).zip(k1s) {
            ra += re_dot(l0, a[0][0] * k0 + a[0][1] * k1) + re_dot(l1, a[1][0] * k0 + a[1][1] * k1);
            rb += re_dot(l0, b[0][0] * k0 + b[0][1] * k1) + re_dot(l1, b[1][0] * k0 + b[1][1] * k1);
        }
    }
    (ra, rb)
}

fn apply_matrix2(amps: &mut [Complex64], stride: usize, m: &Matrix2) {
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
            let (a, b) = (*x, *y);
            *x = m[0][0] * a + m[0][1] * b;
            *y = m[1][0] * a + m[1][1] * b;
        }
    }
}

#[inline]
fn apply_diag(amps: &mut [Complex64], stride: usize, d0: Complex64, d1: Complex64) {
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for x in lo.iter_mut() {
            *x *= d0;
        }
        for y in hi.iter_mut() {
            *y *= d1;
        }
    }
}

#[inline]
fn apply_real_rotation(amps: &mut [Complex64], stride: usize, c: f64, s: f64) {
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
            let (a, b) = (*x, *y);
            *x = a * c - b * s;
            *y = a * s + b * c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_on_zero() {
        let out = apply_gate(&StateVector::zero(1), &Gate::H(0)).unwrap();
        assert!((out.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cnot_truth_table() {
        // |10⟩ has qubit 0 set, which is the high bit: index 2.
        let out = apply_gate(&StateVector::basis(2, 0b10), &Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(out, StateVector::basis(2, 0b11));
        let out = apply_gate(&StateVector::basis(2, 0b01), &Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(out, StateVector::basis(2, 0b01));
    }

    #[test]
    fn euler_rotation_matches_closed_form() {
        // Rz(π/2)·Ry(π/2)·Rz(π/2)|0⟩: Rz gives e^{-iπ/4}|0⟩, Ry spreads it to
        // (|0⟩+|1⟩)/√2, the final Rz applies e^{∓iπ/4} to each branch.
        let mut s = StateVector::zero(1);
        for g in [Gate::Rz(0, FRAC_PI_2), Gate::Ry(0, FRAC_PI_2), Gate::Rz(0, FRAC_PI_2)] {
            s = apply_gate(&s, &g).unwrap();
        }
        let expect0 = c(0.0, -FRAC_1_SQRT_2);
        let expect1 = c(FRAC_1_SQRT_2, 0.0);
        assert!((s.amplitudes()[0] - expect0).norm() < 1e-15);
        assert!((s.amplitudes()[1] - expect1).norm() < 1e-15);
    }

    #[test]
    fn apply_gate_is_pure() {
        let s = StateVector::zero(2);
        let _ = apply_gate(&s, &Gate::H(1)).unwrap();
        assert_eq!(s, StateVector::zero(2));
    }

    #[test]
    fn out_of_range_target_errors() {
        assert!(matches!(apply_gate(&StateVector::zero(2), &Gate::X(2)), Err(Error::InvalidGate { .. })));
    }

    #[test]
    fn inner_products() {
        let zero = StateVector::zero(1);
        let one = StateVector::basis(1, 1);
        let plus = apply_gate(&zero, &Gate::H(0)).unwrap();
        assert!((inner_product(&zero, &zero).unwrap() - 1.0).norm() < 1e-15);
        assert_eq!(inner_product(&zero, &one).unwrap(), c(0.0, 0.0));
        assert!((inner_product(&zero, &plus).unwrap() - FRAC_1_SQRT_2).norm() < 1e-15);
        assert!(inner_product(&zero, &StateVector::zero(2)).is_err());
    }

    #[test]
    fn adjoint_undoes_every_kind() {
        let gates = [
            Gate::H(1),
            Gate::T(0),
            Gate::SqrtX(2),
            Gate::SqrtY(1),
            Gate::X(0),
            Gate::Y(2),
            Gate::Z(1),
            Gate::Ry(0, 0.7),
            Gate::Rz(2, -1.3),
            Gate::Cz(0, 2),
            Gate::Cnot { control: 2, target: 0 },
        ];
        let start = StateVector::product(&[[c(0.6, 0.0), c(0.0, 0.8)], [c(0.8, 0.0), c(0.6, 0.0)], [
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, -FRAC_1_SQRT_2),
        ]]);
        for g in gates {
            let mut amps = start.amplitudes().to_vec();
            apply_in_place(&mut amps, 3, &g);
            apply_adjoint_in_place(&mut amps, 3, &g);
            assert!(distance_unchecked(&amps, start.amplitudes()) < 1e-14, "{g}");
        }
    }

    #[test]
    fn product_state_ordering() {
        // qubit 0 = |1⟩, qubit 1 = |0⟩ → index 0b10.
        let s = StateVector::product(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        assert_eq!(s, StateVector::basis(2, 2));
    }
}
