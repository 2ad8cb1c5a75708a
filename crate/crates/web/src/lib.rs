//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; the plain `*_json` functions are the
//! same operations without the wasm-bindgen wrapper, so they run natively too.

use alqpt::al::{al_run, AlConfig, Strategy, StrategyKind};
use alqpt::ansatz::{build_ansatz, loss, train, AnsatzSpec, LabeledPair, TrainSchedule};
use alqpt::harness::{run_experiment, similarity, ExperimentConfig};
use alqpt::oracle::{generate_target, TargetSpec};
use alqpt::probes::{generate_pool, ProbeMode};
use alqpt::qcore::assemble_unitary;
use alqpt::seed::{self, Stream};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest register the page may request.
const MAX_QUBITS: usize = 2;

fn check_qubits(n_qubits: usize) -> alqpt::Result<()> {
    if !(1..=MAX_QUBITS).contains(&n_qubits) {
        return Err(alqpt::Error::Config(format!("the demo supports 1 to {MAX_QUBITS} qubits, got {n_qubits}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct Curve {
    strategy: String,
    labels_used: Vec<usize>,
    mean_similarity: Vec<f64>,
}

/// Mean similarity against labels used for every strategy.
pub fn al_curves_json(n_qubits: usize, repeats: usize, epochs: usize, base_seed: u64) -> alqpt::Result<String> {
    check_qubits(n_qubits)?;
    let cfg = ExperimentConfig {
        n_qubits,
        repeats: repeats.clamp(1, 10),
        epochs: epochs.min(400),
        committee_size: 4,
        base_seed,
        ..Default::default()
    };
    let out = run_experiment(&cfg)?;
    let curves: Vec<Curve> = cfg
        .strategies
        .iter()
        .filter_map(|&k| {
            let rows = out.summary.rows(k)?;
            Some(Curve {
                strategy: k.to_string(),
                labels_used: rows.iter().map(|r| r.labels_used).collect(),
                mean_similarity: rows.iter().map(|r| r.mean_similarity).collect(),
            })
        })
        .collect();
    Ok(serde_json::to_string(&curves)?)
}

#[derive(Serialize)]
struct Order {
    strategy: String,
    /// Pool indices in labeling order.
    selected: Vec<usize>,
}

/// Labeling order of GS and RAND over the whole pool from a shared first label.
pub fn selection_order_json(n_qubits: usize, seed_value: u64) -> alqpt::Result<String> {
    check_qubits(n_qubits)?;
    let probes = generate_pool(n_qubits, ProbeMode::StandardIC)?;
    let mut cfg = AlConfig::new(AnsatzSpec::new(n_qubits, 1), probes.len());
    cfg.schedule = TrainSchedule { learning_rate: 0.05, epochs: 0 };
    cfg.bootstrap_seed = seed::derive(seed_value, 0, Stream::Bootstrap, 0);
    let mut orders = Vec::new();
    for kind in [StrategyKind::Gs, StrategyKind::Rand] {
        let mut oracle = generate_target(&TargetSpec { n_qubits, depth: 1, seed: seed_value })?;
        let strategy = Strategy { kind, rng_seed: seed::derive(seed_value, 0, Stream::Strategy, kind as u64) };
        let run = al_run(&strategy, &mut oracle, &probes, &cfg)?;
        orders.push(Order { strategy: kind.to_string(), selected: run.selected });
    }
    Ok(serde_json::to_string(&orders)?)
}

#[derive(Serialize)]
struct Reconstruction {
    epochs: Vec<usize>,
    loss: Vec<f64>,
    similarity: f64,
    /// `|U_rc|`, row-major.
    target_abs: Vec<f64>,
    model_abs: Vec<f64>,
    dim: usize,
}

/// Trains the ansatz on every probe of a random target and reports the loss
/// curve plus entry magnitudes of both unitaries.
pub fn reconstruct_json(n_qubits: usize, target_seed: u64, epochs: usize, learning_rate: f64) -> alqpt::Result<String> {
    check_qubits(n_qubits)?;
    let depth = alqpt::harness::default_vqc_depth(n_qubits);
    let mut oracle = generate_target(&TargetSpec { n_qubits, depth, seed: target_seed })?;
    let probes = generate_pool(n_qubits, ProbeMode::StandardIC)?;
    let labeled = probes
        .states()
        .iter()
        .map(|s| LabeledPair::new(s.clone(), oracle.query(s)?))
        .collect::<alqpt::Result<Vec<_>>>()?;
    let spec = AnsatzSpec::new(n_qubits, depth);
    let mut params = spec.random_params(seed::derive(target_seed, 0, Stream::Model, 0));
    let step = 10;
    let mut out = Reconstruction {
        epochs: vec![0],
        loss: vec![loss(&spec, &params, &labeled)?],
        similarity: 0.0,
        target_abs: vec![],
        model_abs: vec![],
        dim: 1 << n_qubits,
    };
    let schedule = TrainSchedule { learning_rate, epochs: step };
    let mut done = 0;
    while done < epochs.min(5000) {
        params = train(&spec, &params, &labeled, &schedule)?;
        done += step;
        out.epochs.push(done);
        out.loss.push(loss(&spec, &params, &labeled)?);
    }
    let u = assemble_unitary(oracle.circuit())?;
    let c = assemble_unitary(&build_ansatz(&spec, &params)?)?;
    out.similarity = similarity(&u, &c)?;
    out.target_abs = u.entries().iter().map(|z| z.norm()).collect();
    out.model_abs = c.entries().iter().map(|z| z.norm()).collect();
    Ok(serde_json::to_string(&out)?)
}

fn to_js(r: alqpt::Result<String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn al_curves(n_qubits: usize, repeats: usize, epochs: usize, seed: u32) -> Result<String, JsError> {
    to_js(al_curves_json(n_qubits, repeats, epochs, seed.into()))
}

#[wasm_bindgen]
pub fn selection_order(n_qubits: usize, seed: u32) -> Result<String, JsError> {
    to_js(selection_order_json(n_qubits, seed.into()))
}

#[wasm_bindgen]
pub fn reconstruct(n_qubits: usize, seed: u32, epochs: usize, learning_rate: f64) -> Result<String, JsError> {
    to_js(reconstruct_json(n_qubits, seed.into(), epochs, learning_rate))
}
