//! The trainable circuit: `k + 1` layers of per-qubit `Rz·Ry·Rz` rotations
//! interleaved with `k` linear-chain CNOT layers, its mean-square loss and
//! parameter-shift gradients.
//!
//! Parameters are laid out layer-major, then by qubit, then by position within
//! the `(Rz, Ry, Rz)` triple, which is also the order in which the rotation
//! gates appear in the built circuit.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{
    apply_adjoint_in_place, check_dims, real_inner_unchecked, real_overlaps2, Circuit, Gate, StateVector,
};
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n_qubits: usize,
    /// Number of CNOT entangling layers.
    pub depth: usize,
}

impl AnsatzSpec {
    pub fn new(n_qubits: usize, depth: usize) -> Self {
        AnsatzSpec { n_qubits, depth }
    }

    pub fn n_params(&self) -> usize {
        3 * self.n_qubits * (self.depth + 1)
    }

    /// Uniform draw on `[-π, π)` for every parameter.
    pub fn random_params(&self, seed: u64) -> ParamVector {
        let mut rng = seed::rng(seed);
        ParamVector((0..self.n_params()).map(|_| rng.gen_range(-PI..PI)).collect())
    }

    fn check(&self, params: &ParamVector) -> Result<()> {
        if params.len() != self.n_params() {
            return Err(Error::ParamLength { expected: self.n_params(), found: params.len() });
        }
        Ok(())
    }
}

/// Flat rotation angles in radians. Serializes as a plain JSON array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector(pub Vec<f64>);

impl ParamVector {
    pub fn zeros(len: usize) -> Self {
        ParamVector(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// A probe state and the target's response to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledPair {
    pub probe: StateVector,
    pub ideal: StateVector,
}

impl LabeledPair {
    pub fn new(probe: StateVector, ideal: StateVector) -> Result<Self> {
        check_dims(probe.n_qubits(), ideal.n_qubits())?;
        Ok(LabeledPair { probe, ideal })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainSchedule {
    pub learning_rate: f64,
    pub epochs: usize,
}

impl Default for TrainSchedule {
    fn default() -> Self {
        TrainSchedule { learning_rate: 0.05, epochs: 200 }
    }
}

pub fn build_ansatz(spec: &AnsatzSpec, params: &ParamVector) -> Result<Circuit> {
    spec.check(params)?;
    let n = spec.n_qubits;
    let mut ops = Vec::with_capacity(params.len() + spec.depth * n.saturating_sub(1));
    let mut p = params.0.iter().copied();
    for layer in 0..=spec.depth {
        for q in 0..n {
            ops.push(Gate::Rz(q, p.next().expect("length checked")));
            ops.push(Gate::Ry(q, p.next().expect("length checked")));
            ops.push(Gate::Rz(q, p.next().expect("length checked")));
        }
        if layer < spec.depth {
            ops.extend((0..n.saturating_sub(1)).map(|q| Gate::Cnot { control: q, target: q + 1 }));
        }
    }
    Circuit::from_ops(n, ops)
}

/// `C(θ)|probe⟩`.
pub fn forward(spec: &AnsatzSpec, params: &ParamVector, probe: &StateVector) -> Result<StateVector> {
    check_dims(spec.n_qubits, probe.n_qubits())?;
    let circuit = build_ansatz(spec, params)?;
    let mut out = probe.clone();
    circuit.run_in_place(out.amplitudes_mut());
    Ok(out)
}

fn check_pool(spec: &AnsatzSpec, pool: &[LabeledPair]) -> Result<()> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    for pair in pool {
        check_dims(spec.n_qubits, pair.probe.n_qubits())?;
        check_dims(spec.n_qubits, pair.ideal.n_qubits())?;
    }
    Ok(())
}

/// Mean-square loss in overlap form, `(2/m) Σ [1 − Re⟨ideal|C(θ)|probe⟩]`.
pub fn loss(spec: &AnsatzSpec, params: &ParamVector, pool: &[LabeledPair]) -> Result<f64> {
    check_pool(spec, pool)?;
    let circuit = build_ansatz(spec, params)?;
    Ok(loss_with_circuit(&circuit, pool))
}

pub(crate) fn loss_with_circuit(circuit: &Circuit, pool: &[LabeledPair]) -> f64 {
    let mut buf = Vec::new();
    let total: f64 = pool
        .iter()
        .map(|pair| {
            buf.clear();
            buf.extend_from_slice(pair.probe.amplitudes());
            circuit.run_in_place(&mut buf);
            1.0 - real_inner_unchecked(pair.ideal.amplitudes(), &buf)
        })
        .sum();
    2.0 * total / pool.len() as f64
}

/// Mean-square loss computed directly as `(1/m) Σ ‖C(θ)|probe⟩ − |ideal⟩‖²`.
pub fn loss_direct(spec: &AnsatzSpec, params: &ParamVector, pool: &[LabeledPair]) -> Result<f64> {
    check_pool(spec, pool)?;
    let mut total = 0.0;
    for pair in pool {
        let pred = forward(spec, params, &pair.probe)?;
        total += pred.amplitudes().iter().zip(pair.ideal.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>();
    }
    Ok(total / pool.len() as f64)
}

/// Adds `scale · ∂O/∂θᵢ` to `out[i]` for every rotation parameter, where
/// `O(θ) = Re⟨bra|C(θ)|probe⟩`.
///
/// `O` is an amplitude overlap, so it depends on each angle through `θᵢ/2`
/// only. The two-point difference at `±π/2` is then exact with weight
/// `1/(2√2)` rather than the `½` that holds for expectation values.
///
/// The shifted observables are evaluated exactly by sweeping the circuit
/// backwards: at each rotation the register holds the state just before the
/// gate and the bra has been pulled back through every later gate, so each
/// shifted evaluation costs one gate application instead of a full re-run.
const SHIFT_WEIGHT: f64 = 0.5 * FRAC_1_SQRT_2;

pub(crate) fn accumulate_shift_gradient(
    circuit: &Circuit,
    probe: &[Complex64],
    bra: &[Complex64],
    scale: f64,
    out: &mut [f64],
) {
    let n = circuit.n_qubits();
    let mut ket = probe.to_vec();
    circuit.run_in_place(&mut ket);
    let mut lambda = bra.to_vec();
    let mut idx = out.len();
    for gate in circuit.ops().iter().rev() {
        if gate.is_parameterized() {
            idx -= 1;
            // Same-axis rotations compose, so G(θ ± π/2)|before⟩ = G(±π/2)|after⟩.
            let plus = gate.with_angle(FRAC_PI_2).matrix2().expect("rotation");
            let minus = gate.with_angle(-FRAC_PI_2).matrix2().expect("rotation");
            let (o_plus, o_minus) = real_overlaps2(&lambda, &ket, n, gate.qubits().0[0], &plus, &minus);
            out[idx] += scale * SHIFT_WEIGHT * (o_plus - o_minus);
        }
        apply_adjoint_in_place(&mut ket, n, gate);
        apply_adjoint_in_place(&mut lambda, n, gate);
    }
    debug_assert_eq!(idx, 0, "every parameter visited");
}

/// Loss gradient via the chain rule `∂L/∂O · ∂O/∂θᵢ` with `∂L/∂O = −2/m`
/// and the parameter-shift rule for `∂O/∂θᵢ`.
pub fn grad_param_shift(spec: &AnsatzSpec, params: &ParamVector, pool: &[LabeledPair]) -> Result<Vec<f64>> {
    check_pool(spec, pool)?;
    let circuit = build_ansatz(spec, params)?;
    Ok(grad_with_circuit(&circuit, params.len(), pool))
}

fn grad_with_circuit(circuit: &Circuit, n_params: usize, pool: &[LabeledPair]) -> Vec<f64> {
    let mut grad = vec![0.0; n_params];
    let dloss_dobs = -2.0 / pool.len() as f64;
    for pair in pool {
        accumulate_shift_gradient(circuit, pair.probe.amplitudes(), pair.ideal.amplitudes(), dloss_dobs, &mut grad);
    }
    grad
}

/// Central finite differences of [`loss`] with step `h`.
pub fn grad_finite_diff(spec: &AnsatzSpec, params: &ParamVector, pool: &[LabeledPair], h: f64) -> Result<Vec<f64>> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Config(format!("finite-difference step must be positive, got {h}")));
    }
    check_pool(spec, pool)?;
    let mut work = params.clone();
    let mut grad = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let orig = work.0[i];
        work.0[i] = orig + h;
        let up = loss(spec, &work, pool)?;
        work.0[i] = orig - h;
        let down = loss(spec, &work, pool)?;
        work.0[i] = orig;
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// `params − α·grad`.
pub fn sgd_step(params: &ParamVector, grad: &[f64], alpha: f64) -> Result<ParamVector> {
    if grad.len() != params.len() {
        return Err(Error::ParamLength { expected: params.len(), found: grad.len() });
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::Config(format!("learning rate must be non-negative, got {alpha}")));
    }
    Ok(ParamVector(params.0.iter().zip(grad).map(|(p, g)| p - alpha * g).collect()))
}

/// Full-batch gradient descent for `schedule.epochs` steps.
pub fn train(
    spec: &AnsatzSpec,
    params: &ParamVector,
    pool: &[LabeledPair],
    schedule: &TrainSchedule,
) -> Result<ParamVector> {
    check_pool(spec, pool)?;
    spec.check(params)?;
    let mut current = params.clone();
    for _ in 0..schedule.epochs {
        let circuit = build_ansatz(spec, &current)?;
        let grad = grad_with_circuit(&circuit, current.len(), pool);
        for (p, g) in current.0.iter_mut().zip(&grad) {
            *p -= schedule.learning_rate * g;
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{apply_gate, assemble_unitary, Gate};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single_pair(probe: StateVector, ideal: StateVector) -> Vec<LabeledPair> {
        vec![LabeledPair::new(probe, ideal).unwrap()]
    }

    #[test]
    fn parameter_counts() {
        assert_eq!(AnsatzSpec::new(2, 3).n_params(), 24);
        assert_eq!(AnsatzSpec::new(7, 8).n_params(), 189);
        let spec = AnsatzSpec::new(2, 3);
        let circuit = build_ansatz(&spec, &ParamVector::zeros(24)).unwrap();
        assert_eq!(circuit.ops().iter().filter(|g| g.is_parameterized()).count(), 24);
        assert_eq!(circuit.ops().iter().filter(|g| matches!(g, Gate::Cnot { .. })).count(), 3);
    }

    #[test]
    fn depth_zero_single_qubit_layout() {
        let spec = AnsatzSpec::new(1, 0);
        let circuit = build_ansatz(&spec, &ParamVector(vec![0.1, 0.2, 0.3])).unwrap();
        assert_eq!(circuit.ops(), &[Gate::Rz(0, 0.1), Gate::Ry(0, 0.2), Gate::Rz(0, 0.3)]);
    }

    #[test]
    fn layout_is_layer_then_qubit_then_position() {
        let spec = AnsatzSpec::new(2, 1);
        let params = ParamVector((0..12).map(f64::from).collect());
        let ops = build_ansatz(&spec, &params).unwrap().ops().to_vec();
        assert_eq!(ops[0], Gate::Rz(0, 0.0));
        assert_eq!(ops[3], Gate::Rz(1, 3.0));
        assert_eq!(ops[6], Gate::Cnot { control: 0, target: 1 });
        assert_eq!(ops[7], Gate::Rz(0, 6.0));
        assert_eq!(ops[12], Gate::Rz(1, 11.0));
    }

    #[test]
    fn length_mismatch_errors() {
        let spec = AnsatzSpec::new(2, 1);
        assert!(matches!(
            build_ansatz(&spec, &ParamVector::zeros(5)),
            Err(Error::ParamLength { expected: 12, found: 5 })
        ));
        assert!(sgd_step(&ParamVector::zeros(3), &[0.0; 2], 0.1).is_err());
    }

    #[test]
    fn zero_params_are_identity() {
        let spec = AnsatzSpec::new(1, 0);
        let probe = StateVector::product(&[[c(0.6, 0.0), c(0.0, 0.8)]]);
        let out = forward(&spec, &ParamVector::zeros(3), &probe).unwrap();
        assert_eq!(out, probe);
    }

    #[test]
    fn ry_action() {
        let spec = AnsatzSpec::new(1, 0);
        let theta = 1.1;
        let out = forward(&spec, &ParamVector(vec![0.0, theta, 0.0]), &StateVector::zero(1)).unwrap();
        assert!((out.amplitudes()[0] - (theta / 2.0).cos()).norm() < 1e-15);
        assert!((out.amplitudes()[1] - (theta / 2.0).sin()).norm() < 1e-15);
    }

    #[test]
    fn forward_matches_matrix_path() {
        let spec = AnsatzSpec::new(3, 2);
        let params = spec.random_params(11);
        let probe = StateVector::product(&[[c(0.6, 0.0), c(0.0, 0.8)], [c(1.0, 0.0), c(0.0, 0.0)], [
            c(0.0, 0.6),
            c(0.8, 0.0),
        ]]);
        let fwd = forward(&spec, &params, &probe).unwrap();
        let u = assemble_unitary(&build_ansatz(&spec, &params).unwrap()).unwrap();
        for r in 0..8 {
            let expect: Complex64 = (0..8).map(|k| u.get(r, k) * probe.amplitudes()[k]).sum();
            assert!((fwd.amplitudes()[r] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn loss_special_values() {
        let spec = AnsatzSpec::new(1, 0);
        let zero = ParamVector::zeros(3);
        let s0 = StateVector::zero(1);
        let s1 = StateVector::basis(1, 1);
        assert!(loss(&spec, &zero, &single_pair(s0.clone(), s0.clone())).unwrap().abs() < 1e-15);
        assert!((loss(&spec, &zero, &single_pair(s0.clone(), s1)).unwrap() - 2.0).abs() < 1e-15);
        let neg = s0.scale(c(-1.0, 0.0));
        assert!((loss(&spec, &zero, &single_pair(s0, neg)).unwrap() - 4.0).abs() < 1e-15);
        assert!(matches!(loss(&spec, &zero, &[]), Err(Error::EmptyPool)));
    }

    #[test]
    fn ry_gradient_closed_form() {
        // O = cos(θ/2), L = 2(1 − cos(θ/2)), dL/dθ = sin(θ/2).
        let spec = AnsatzSpec::new(1, 0);
        let pool = single_pair(StateVector::zero(1), StateVector::zero(1));
        let g0 = grad_param_shift(&spec, &ParamVector(vec![0.0, 0.0, 0.0]), &pool).unwrap();
        assert!(g0.iter().all(|g| g.abs() < 1e-15));
        let gpi = grad_param_shift(&spec, &ParamVector(vec![0.0, PI, 0.0]), &pool).unwrap();
        assert!((gpi[1] - 1.0).abs() < 1e-12);
        for theta in [-2.0, -0.3, 0.9, 2.5] {
            let g = grad_param_shift(&spec, &ParamVector(vec![0.0, theta, 0.0]), &pool).unwrap();
            assert!((g[1] - (theta / 2.0).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_diff_zero_on_matched_identity() {
        let spec = AnsatzSpec::new(1, 0);
        let pool = single_pair(StateVector::zero(1), StateVector::zero(1));
        let g = grad_finite_diff(&spec, &ParamVector::zeros(3), &pool, 1e-5).unwrap();
        assert!(g.iter().all(|g| g.abs() < 1e-8));
        assert!(grad_finite_diff(&spec, &ParamVector::zeros(3), &pool, 0.0).is_err());
    }

    #[test]
    fn sgd_trivial_cases() {
        let p = ParamVector(vec![0.3, -1.0]);
        assert_eq!(sgd_step(&p, &[5.0, 2.0], 0.0).unwrap(), p);
        assert_eq!(sgd_step(&p, &[0.0, 0.0], 0.7).unwrap(), p);
        assert_eq!(sgd_step(&p, &[1.0, -2.0], 0.5).unwrap(), ParamVector(vec![-0.2, 0.0]));
        assert!(sgd_step(&p, &[0.0, 0.0], -0.1).is_err());
    }

    #[test]
    fn zero_epochs_leave_params() {
        let spec = AnsatzSpec::new(1, 1);
        let p = spec.random_params(3);
        let pool = single_pair(StateVector::zero(1), StateVector::basis(1, 1));
        let out = train(&spec, &p, &pool, &TrainSchedule { learning_rate: 0.05, epochs: 0 }).unwrap();
        assert_eq!(out, p);
    }

    #[test]
    fn learns_single_qubit_rotation() {
        let spec = AnsatzSpec::new(1, 1);
        let target = |s: &StateVector| apply_gate(s, &Gate::Ry(0, 0.7)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let probes = [
            StateVector::zero(1),
            StateVector::basis(1, 1),
            StateVector::product(&[[c(h, 0.0), c(h, 0.0)]]),
            StateVector::product(&[[c(h, 0.0), c(0.0, h)]]),
        ];
        let pool: Vec<_> = probes.iter().map(|p| LabeledPair::new(p.clone(), target(p)).unwrap()).collect();
        let init = spec.random_params(5);
        let trained = train(&spec, &init, &pool, &TrainSchedule { learning_rate: 0.05, epochs: 500 }).unwrap();
        let final_loss = loss(&spec, &trained, &pool).unwrap();
        assert!(final_loss <= 1e-3, "loss {final_loss}");
    }

    #[test]
    fn params_serialize_flat() {
        let p = ParamVector(vec![0.5, -1.25]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[0.5,-1.25]");
        let back: ParamVector = serde_json::from_str("[0.5,-1.25]").unwrap();
        assert_eq!(back, p);
    }
}
