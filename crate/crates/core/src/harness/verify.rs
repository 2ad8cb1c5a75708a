//! Quick invariant checks behind `alqpt verify`.

use num_complex::Complex64;
use rand::Rng as _;

use super::config::ExperimentConfig;
use super::experiment::{records_csv, run_experiment};
use crate::al::{gs_order, gs_select, DistanceKind, PoolState};
use crate::ansatz::{
    build_ansatz, grad_finite_diff, grad_param_shift, loss, loss_direct, AnsatzSpec, LabeledPair,
};
use crate::error::Result;
use crate::oracle::{generate_target, TargetSpec};
use crate::probes::{generate_pool, ProbeMode};
use crate::qcore::{apply_gate, assemble_unitary, Gate, StateVector};
use crate::seed;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn random_state(n_qubits: usize, rng: &mut seed::Rng) -> StateVector {
    let amps: Vec<Complex64> =
        (0..1usize << n_qubits).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).expect("power-of-two length")
}

fn random_gate(n_qubits: usize, rng: &mut seed::Rng) -> Gate {
    let q = rng.gen_range(0..n_qubits);
    let other = if n_qubits > 1 { (q + rng.gen_range(1..n_qubits)) % n_qubits } else { q };
    let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    match rng.gen_range(0..(if n_qubits > 1 { 11 } else { 9 })) {
        0 => Gate::H(q),
        1 => Gate::T(q),
        2 => Gate::SqrtX(q),
        3 => Gate::SqrtY(q),
        4 => Gate::X(q),
        5 => Gate::Y(q),
        6 => Gate::Z(q),
        7 => Gate::Ry(q, theta),
        8 => Gate::Rz(q, theta),
        9 => Gate::Cz(q, other),
        _ => Gate::Cnot { control: q, target: other },
    }
}

fn random_pool(spec: &AnsatzSpec, size: usize, rng: &mut seed::Rng) -> Vec<LabeledPair> {
    (0..size)
        .map(|_| {
            LabeledPair::new(random_state(spec.n_qubits, rng), random_state(spec.n_qubits, rng)).expect("same size")
        })
        .collect()
}

fn check(name: &'static str, worst: f64, tol: f64) -> Check {
    Check { name, passed: worst <= tol, detail: format!("worst {worst:.3e}, tolerance {tol:.0e}") }
}

pub fn norm_preservation(rng: &mut seed::Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=7);
        let s = random_state(n, rng);
        let g = random_gate(n, rng);
        let out = apply_gate(&s, &g).expect("valid gate");
        worst = worst.max((out.norm() - 1.0).abs());
    }
    check("norm preservation", worst, 1e-10)
}

pub fn gradient_agreement(rng: &mut seed::Rng) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let spec = AnsatzSpec::new(rng.gen_range(1..=3), rng.gen_range(0..=4));
        let params = spec.random_params(rng.gen());
        let pool = random_pool(&spec, rng.gen_range(1..=4), rng);
        let ps = grad_param_shift(&spec, &params, &pool)?;
        let fd = grad_finite_diff(&spec, &params, &pool, 1e-5)?;
        worst = ps.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    Ok(check("parameter-shift vs finite differences", worst, 1e-6))
}

pub fn loss_identity(rng: &mut seed::Rng) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let spec = AnsatzSpec::new(rng.gen_range(1..=3), rng.gen_range(0..=3));
        let params = spec.random_params(rng.gen());
        let pool = random_pool(&spec, rng.gen_range(1..=4), rng);
        let a = loss(&spec, &params, &pool)?;
        let b = loss_direct(&spec, &params, &pool)?;
        worst = worst.max((a - b).abs());
    }
    Ok(check("loss overlap form vs squared-norm form", worst, 1e-12))
}

pub fn unitarity(rng: &mut seed::Rng) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let n = rng.gen_range(1..=5);
        let oracle = generate_target(&TargetSpec { n_qubits: n, depth: rng.gen_range(0..=8), seed: rng.gen() })?;
        worst = worst.max(assemble_unitary(oracle.circuit())?.unitarity_defect());
        let spec = AnsatzSpec::new(n, rng.gen_range(0..=8));
        let circuit = build_ansatz(&spec, &spec.random_params(rng.gen()))?;
        worst = worst.max(assemble_unitary(&circuit)?.unitarity_defect());
    }
    Ok(check("unitarity of assembled circuits", worst, 1e-9))
}

pub fn greedy_precompute(rng: &mut seed::Rng) -> Result<Check> {
    let pool = generate_pool(2, ProbeMode::StandardIC)?;
    let start = rng.gen_range(0..pool.len());
    let order = gs_order(&[start], &pool, pool.len() - 1, DistanceKind::Euclidean)?;
    let mut state = PoolState::new(pool.len());
    let label = |i: usize| LabeledPair::new(pool.state(i).clone(), pool.state(i).clone());
    state.add(start, label(start)?)?;
    let mut mismatches = 0;
    for &expected in &order {
        let pick = gs_select(&state, &pool)?;
        if pick != expected {
            mismatches += 1;
        }
        state.add(pick, label(pick)?)?;
    }
    Ok(Check {
        name: "greedy order precomputed vs stepwise",
        passed: mismatches == 0,
        detail: format!("{mismatches} mismatches over {} selections", order.len()),
    })
}

pub fn determinism() -> Result<Check> {
    let cfg = ExperimentConfig {
        n_qubits: 2,
        vqc_depth: Some(1),
        budget: Some(5),
        repeats: 2,
        committee_size: 2,
        epochs: 10,
        base_seed: 2024,
        ..Default::default()
    };
    let a = records_csv(&run_experiment(&cfg)?.records)?;
    let b = records_csv(&run_experiment(&cfg)?.records)?;
    Ok(Check {
        name: "byte-identical records for a fixed seed",
        passed: a == b,
        detail: format!("{} bytes", a.len()),
    })
}

/// Runs every check with a fixed seed.
pub fn run_all(seed_value: u64) -> Result<Vec<Check>> {
    let mut rng = seed::rng(seed_value);
    Ok(vec![
        norm_preservation(&mut rng),
        gradient_agreement(&mut rng)?,
        loss_identity(&mut rng)?,
        unitarity(&mut rng)?,
        greedy_precompute(&mut rng)?,
        determinism()?,
    ])
}
