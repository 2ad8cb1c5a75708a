use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Committee, PoolState};
use crate::ansatz::{accumulate_shift_gradient, build_ansatz, forward, ParamVector};
use crate::error::{Error, Result};
use crate::probes::ProbePool;
use crate::qcore::{assemble_unitary_capped, check_dims, distance_unchecked, inner_unchecked, StateVector};
use crate::{par, seed};

/// How two probe or prediction states are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    /// Euclidean distance between raw amplitude vectors.
    #[default]
    Euclidean,
    /// `min_φ ‖a − e^{iφ}b‖`, i.e. `√(2 − 2|⟨a|b⟩|)` for unit vectors.
    PhaseInvariant,
}

impl DistanceKind {
    pub fn distance(self, a: &[Complex64], b: &[Complex64]) -> f64 {
        match self {
            DistanceKind::Euclidean => distance_unchecked(a, b),
            DistanceKind::PhaseInvariant => {
                let na: f64 = a.iter().map(|x| x.norm_sqr()).sum();
                let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
                (na + nb - 2.0 * inner_unchecked(a, b).norm()).max(0.0).sqrt()
            }
        }
    }
}

/// Knobs for the committee-disagreement score.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QbcOptions {
    /// Average squared distances instead of plain distances.
    pub squared: bool,
    pub distance: DistanceKind,
}

/// Committee disagreement from the members' predictions for one probe: the
/// mean distance of each prediction to the normalized mean prediction.
///
/// A committee whose predictions are all identical scores exactly zero, so
/// a collapsed committee falls through to the lowest-index tie rule.
///
/// When the predictions cancel (mean norm below `1e-12`) the score is the
/// largest value the distance can take between unit vectors: 2, or 4 when
/// squared.
pub fn qbc_from_predictions(predictions: &[&[Complex64]], opts: QbcOptions) -> f64 {
    let dim = predictions[0].len();
    if predictions.iter().all(|p| *p == predictions[0]) {
        return 0.0;
    }
    let mut mean = vec![Complex64::new(0.0, 0.0); dim];
    for p in predictions {
        for (m, a) in mean.iter_mut().zip(p.iter()) {
            *m += a;
        }
    }
    let norm = mean.iter().map(|m| m.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return if opts.squared { 4.0 } else { 2.0 };
    }
    mean.iter_mut().for_each(|m| *m /= norm);
    let total: f64 = predictions
        .iter()
        .map(|p| {
            let d = opts.distance.distance(p, &mean);
            if opts.squared {
                d * d
            } else {
                d
            }
        })
        .sum();
    total / predictions.len() as f64
}

/// Committee disagreement on a single probe.
pub fn qbc_score(committee: &Committee, probe: &StateVector) -> Result<f64> {
    qbc_score_with(committee, probe, QbcOptions::default())
}

pub fn qbc_score_with(committee: &Committee, probe: &StateVector, opts: QbcOptions) -> Result<f64> {
    let preds = committee
        .members()
        .iter()
        .map(|m| forward(committee.spec(), m, probe))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&[Complex64]> = preds.iter().map(|p| p.amplitudes()).collect();
    Ok(qbc_from_predictions(&refs, opts))
}

/// Expected model change of `current` if `probe` were labeled: the Euclidean
/// norm of the ensemble-averaged single-sample loss gradient, where member
/// `k`'s prediction stands in for the unknown label.
///
/// Each member contributes `∂ℓ/∂Ô_k · ½[Ô_k(θᵢ⁺) − Ô_k(θᵢ⁻)]` with
/// `Ô_k(θ) = Re⟨ψ(θ_k)|C(θ)|probe⟩` and `∂ℓ/∂Ô_k = −2`. Because `Ô_k` is
/// linear in the member prediction, the ensemble average equals one
/// parameter-shift sweep against the summed predictions.
pub fn emcm_score(current: &ParamVector, ensemble: &Committee, probe: &StateVector) -> Result<f64> {
    let spec = ensemble.spec();
    check_dims(spec.n_qubits, probe.n_qubits())?;
    let circuit = build_ansatz(spec, current)?;
    let mut summed = vec![Complex64::new(0.0, 0.0); probe.dim()];
    for member in ensemble.members() {
        let pred = forward(spec, member, probe)?;
        for (s, a) in summed.iter_mut().zip(pred.amplitudes()) {
            *s += a;
        }
    }
    Ok(emcm_from_summed(&circuit, probe.amplitudes(), &summed, ensemble.len()))
}

fn emcm_from_summed(
    circuit: &crate::qcore::Circuit,
    probe: &[Complex64],
    summed_predictions: &[Complex64],
    n_members: usize,
) -> f64 {
    let n_params = circuit.ops().iter().filter(|g| g.is_parameterized()).count();
    let mut grad = vec![0.0; n_params];
    accumulate_shift_gradient(circuit, probe, summed_predictions, -2.0 / n_members as f64, &mut grad);
    grad.iter().map(|g| g * g).sum::<f64>().sqrt()
}

/// Per-member predictions for every pool state, flat `[member][p][row]`.
fn committee_predictions(committee: &Committee, probes: &ProbePool) -> Result<Vec<Vec<Complex64>>> {
    committee
        .members()
        .iter()
        .map(|m| {
            let circuit = build_ansatz(committee.spec(), m)?;
            let u = assemble_unitary_capped(&circuit, crate::probes::MAX_POOL_QUBITS)?;
            probes.apply_unitary_all(&u)
        })
        .collect()
}

/// Disagreement scores for `candidates`, in the same order.
pub fn qbc_scores(
    committee: &Committee,
    probes: &ProbePool,
    candidates: &[usize],
    opts: QbcOptions,
) -> Result<Vec<f64>> {
    check_dims(committee.spec().n_qubits, probes.n_qubits())?;
    let preds = committee_predictions(committee, probes)?;
    let dim = 1usize << probes.n_qubits();
    Ok(par::map(candidates, |&p| {
        let refs: Vec<&[Complex64]> = preds.iter().map(|m| &m[p * dim..(p + 1) * dim]).collect();
        qbc_from_predictions(&refs, opts)
    }))
}

/// Expected-model-change scores of `current` for `candidates`, in order.
pub fn emcm_scores(
    current: &ParamVector,
    ensemble: &Committee,
    probes: &ProbePool,
    candidates: &[usize],
) -> Result<Vec<f64>> {
    check_dims(ensemble.spec().n_qubits, probes.n_qubits())?;
    let circuit = build_ansatz(ensemble.spec(), current)?;
    let preds = committee_predictions(ensemble, probes)?;
    let dim = 1usize << probes.n_qubits();
    Ok(par::map(candidates, |&p| {
        let mut summed = vec![Complex64::new(0.0, 0.0); dim];
        for m in &preds {
            for (s, a) in summed.iter_mut().zip(&m[p * dim..(p + 1) * dim]) {
                *s += a;
            }
        }
        emcm_from_summed(&circuit, probes.state(p).amplitudes(), &summed, ensemble.len())
    }))
}

/// First candidate holding the maximum score. Candidates are expected in
/// ascending pool order, so ties go to the lowest pool index.
pub fn select_argmax(candidates: &[usize], scores: &[f64]) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (&idx, &s) in candidates.iter().zip(scores) {
        match best {
            Some((_, b)) if s <= b => {}
            _ => best = Some((idx, s)),
        }
    }
    best.map(|(i, _)| i).ok_or(Error::NoUnlabeled)
}

/// Max–min distance rule: the unlabeled probe farthest from its nearest
/// labeled probe.
pub fn gs_select(state: &PoolState, probes: &ProbePool) -> Result<usize> {
    gs_select_with(state, probes, DistanceKind::Euclidean)
}

pub fn gs_select_with(state: &PoolState, probes: &ProbePool, distance: DistanceKind) -> Result<usize> {
    if state.unlabeled().is_empty() {
        return Err(Error::NoUnlabeled);
    }
    if state.labeled_indices().is_empty() {
        return Err(Error::EmptyPool);
    }
    let scores: Vec<f64> = state
        .unlabeled()
        .iter()
        .map(|&u| {
            state
                .labeled_indices()
                .iter()
                .map(|&l| distance.distance(probes.state(u).amplitudes(), probes.state(l).amplitudes()))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    select_argmax(state.unlabeled(), &scores)
}

/// The next `count` greedy selections starting from `labeled`, computed up
/// front. The rule only looks at probe geometry, so this equals calling
/// [`gs_select`] after each query.
pub fn gs_order(labeled: &[usize], probes: &ProbePool, count: usize, distance: DistanceKind) -> Result<Vec<usize>> {
    if labeled.is_empty() {
        return Err(Error::EmptyPool);
    }
    let n = probes.len();
    let mut is_labeled = vec![false; n];
    let mut nearest = vec![f64::INFINITY; n];
    let update = |nearest: &mut [f64], is_labeled: &[bool], from: usize| {
        let src = probes.state(from).amplitudes();
        for (p, d) in nearest.iter_mut().enumerate() {
            if !is_labeled[p] {
                *d = d.min(distance.distance(probes.state(p).amplitudes(), src));
            }
        }
    };
    for &l in labeled {
        is_labeled[l] = true;
    }
    for &l in labeled {
        update(&mut nearest, &is_labeled, l);
    }
    let mut order = Vec::with_capacity(count);
    for _ in 0..count {
        let mut best: Option<(usize, f64)> = None;
        for p in 0..n {
            if is_labeled[p] {
                continue;
            }
            match best {
                Some((_, b)) if nearest[p] <= b => {}
                _ => best = Some((p, nearest[p])),
            }
        }
        let (pick, _) = best.ok_or(Error::NoUnlabeled)?;
        is_labeled[pick] = true;
        order.push(pick);
        update(&mut nearest, &is_labeled, pick);
    }
    Ok(order)
}

/// Uniform draw from the unlabeled indices.
pub fn rand_select(state: &PoolState, rng: &mut seed::Rng) -> Result<usize> {
    let unlabeled = state.unlabeled();
    if unlabeled.is_empty() {
        return Err(Error::NoUnlabeled);
    }
    Ok(unlabeled[rng.gen_range(0..unlabeled.len())])
}
