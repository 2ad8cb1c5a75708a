//! Acquisition functions and the evaluate–select–query–add–update loop.

mod acquisition;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use acquisition::{
    emcm_score, emcm_scores, gs_order, gs_select, gs_select_with, qbc_from_predictions, qbc_score, qbc_score_with,
    qbc_scores, rand_select, select_argmax, DistanceKind, QbcOptions,
};

use crate::ansatz::{build_ansatz, loss, train, AnsatzSpec, LabeledPair, ParamVector, TrainSchedule};
use crate::error::{Error, Result};
use crate::harness::{phase_aligned_similarity, similarity, RunRecord};
use crate::oracle::Oracle;
use crate::probes::ProbePool;
use crate::qcore::{assemble_unitary, check_dims, UnitaryMatrix};
use crate::{par, seed};

/// Models sharing one ansatz, trained on the same labeled pool from
/// different starting parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Committee {
    spec: AnsatzSpec,
    members: Vec<ParamVector>,
}

impl Committee {
    pub fn new(spec: AnsatzSpec, members: Vec<ParamVector>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Config("committee needs at least one member".into()));
        }
        for m in &members {
            if m.len() != spec.n_params() {
                return Err(Error::ParamLength { expected: spec.n_params(), found: m.len() });
            }
        }
        Ok(Committee { spec, members })
    }

    /// `size` members with independent uniform initializations.
    pub fn random(spec: AnsatzSpec, size: usize, model_seed: u64) -> Result<Self> {
        let members = (0..size as u64).map(|k| spec.random_params(member_seed(model_seed, k))).collect();
        Committee::new(spec, members)
    }

    pub fn spec(&self) -> &AnsatzSpec {
        &self.spec
    }

    pub fn members(&self) -> &[ParamVector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Retrains the members whose index satisfies `which`, warm-starting from
    /// their current parameters.
    fn retrain(&mut self, pool: &[LabeledPair], schedule: &TrainSchedule, which: impl Fn(usize) -> bool + Sync) -> Result<()> {
        let spec = self.spec;
        let indexed: Vec<(usize, &ParamVector)> = self.members.iter().enumerate().collect();
        let updated = par::map(&indexed, |&(k, p)| if which(k) { train(&spec, p, pool, schedule).map(Some) } else { Ok(None) });
        for (slot, result) in self.members.iter_mut().zip(updated) {
            if let Some(p) = result? {
                *slot = p;
            }
        }
        Ok(())
    }
}

fn member_seed(model_seed: u64, k: u64) -> u64 {
    seed::derive(model_seed, 0, seed::Stream::Model, k)
}

/// Which probes are labeled, which are still available.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PoolState {
    /// Ascending pool indices.
    unlabeled: Vec<usize>,
    labeled: Vec<(usize, LabeledPair)>,
}

impl PoolState {
    pub fn new(pool_size: usize) -> Self {
        PoolState { unlabeled: (0..pool_size).collect(), labeled: Vec::new() }
    }

    pub fn unlabeled(&self) -> &[usize] {
        &self.unlabeled
    }

    pub fn labeled_indices(&self) -> Vec<usize> {
        self.labeled.iter().map(|(i, _)| *i).collect()
    }

    pub fn labeled_pairs(&self) -> Vec<LabeledPair> {
        self.labeled.iter().map(|(_, p)| p.clone()).collect()
    }

    pub fn n_labeled(&self) -> usize {
        self.labeled.len()
    }

    /// Moves `index` from the unlabeled set to the labeled pool.
    pub fn add(&mut self, index: usize, pair: LabeledPair) -> Result<()> {
        let pos = self
            .unlabeled
            .binary_search(&index)
            .map_err(|_| Error::Config(format!("pool index {index} is not unlabeled")))?;
        self.unlabeled.remove(pos);
        self.labeled.push((index, pair));
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyKind {
    #[serde(rename = "QBC")]
    Qbc,
    #[serde(rename = "EMCM")]
    Emcm,
    #[serde(rename = "GS")]
    Gs,
    #[serde(rename = "RAND")]
    Rand,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [StrategyKind::Qbc, StrategyKind::Emcm, StrategyKind::Gs, StrategyKind::Rand];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyKind::Qbc => "QBC",
            StrategyKind::Emcm => "EMCM",
            StrategyKind::Gs => "GS",
            StrategyKind::Rand => "RAND",
        }
    }

    /// Whether selection needs a trained committee.
    pub fn uses_committee(self) -> bool {
        matches!(self, StrategyKind::Qbc | StrategyKind::Emcm)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "QBC" => Ok(StrategyKind::Qbc),
            "EMCM" => Ok(StrategyKind::Emcm),
            "GS" => Ok(StrategyKind::Gs),
            "RAND" => Ok(StrategyKind::Rand),
            other => Err(Error::Config(format!("unknown strategy {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub kind: StrategyKind,
    /// Feeds RAND selection. No other strategy draws from it.
    pub rng_seed: u64,
}

/// Everything one active-learning run needs besides the oracle and the pool.
#[derive(Clone, Debug, PartialEq)]
pub struct AlConfig {
    pub ansatz: AnsatzSpec,
    /// Total labels at the end of the run, bootstrap included.
    pub budget: usize,
    /// Randomly labeled states before acquisition starts.
    pub bootstrap: usize,
    pub committee_size: usize,
    pub schedule: TrainSchedule,
    pub bootstrap_seed: u64,
    pub model_seed: u64,
    pub qbc: QbcOptions,
    /// Distance used by greedy sampling.
    pub gs_distance: DistanceKind,
    /// EMCM retrains the non-base ensemble members every this many steps.
    pub emcm_refresh_every: usize,
    /// Fill `wall_time_s`; off by default so records replay byte-for-byte.
    pub record_wall_time: bool,
    /// Label copied into every emitted record.
    pub repeat: usize,
}

impl AlConfig {
    pub fn new(ansatz: AnsatzSpec, budget: usize) -> Self {
        AlConfig {
            ansatz,
            budget,
            bootstrap: 1,
            committee_size: 6,
            schedule: TrainSchedule::default(),
            bootstrap_seed: 0,
            model_seed: 0,
            qbc: QbcOptions::default(),
            gs_distance: DistanceKind::Euclidean,
            emcm_refresh_every: 1,
            record_wall_time: false,
            repeat: 0,
        }
    }
}

/// Records from one run plus the selection trace.
#[derive(Clone, Debug, PartialEq)]
pub struct AlRun {
    pub records: Vec<RunRecord>,
    /// Pool indices in labeling order, bootstrap first.
    pub selected: Vec<usize>,
    /// Final parameters of the reported model.
    pub model: ParamVector,
}

/// Pool indices labeled before acquisition starts; depends only on the seed
/// so that every strategy in a repeat starts from the same labels.
pub fn bootstrap_indices(pool_size: usize, count: usize, bootstrap_seed: u64) -> Vec<usize> {
    let mut rng = seed::rng(bootstrap_seed);
    rand::seq::index::sample(&mut rng, pool_size, count).into_vec()
}

fn validate(strategy: &Strategy, oracle: &Oracle, probes: &ProbePool, config: &AlConfig) -> Result<()> {
    check_dims(config.ansatz.n_qubits, probes.n_qubits())?;
    check_dims(config.ansatz.n_qubits, oracle.n_qubits())?;
    if config.budget > probes.len() {
        return Err(Error::BudgetExceedsPool { budget: config.budget, pool: probes.len() });
    }
    if config.bootstrap == 0 {
        return Err(Error::Config("bootstrap must label at least one state".into()));
    }
    if config.bootstrap > config.budget {
        return Err(Error::Config(format!("bootstrap {} exceeds budget {}", config.bootstrap, config.budget)));
    }
    if strategy.kind.uses_committee() && config.committee_size < 2 {
        return Err(Error::Config(format!("{} needs at least two committee members", strategy.kind)));
    }
    if config.emcm_refresh_every == 0 {
        return Err(Error::Config("emcm_refresh_every must be at least 1".into()));
    }
    Ok(())
}

struct Tracker<'a> {
    strategy: StrategyKind,
    config: &'a AlConfig,
    target: UnitaryMatrix,
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Tracker<'_> {
    fn record(&self, step: usize, state: &PoolState, model: &ParamVector) -> Result<RunRecord> {
        let pairs = state.labeled_pairs();
        let spec = &self.config.ansatz;
        let circuit = build_ansatz(spec, model)?;
        let model_u = assemble_unitary(&circuit)?;
        #[cfg(not(target_arch = "wasm32"))]
        let wall_time_s = if self.config.record_wall_time { self.start.elapsed().as_secs_f64() } else { 0.0 };
        #[cfg(target_arch = "wasm32")]
        let wall_time_s = 0.0;
        Ok(RunRecord {
            strategy: self.strategy,
            repeat: self.config.repeat,
            step,
            labels_used: state.n_labeled(),
            loss: loss(spec, model, &pairs)?,
            similarity: similarity(&self.target, &model_u)?,
            similarity_phase_aligned: phase_aligned_similarity(&self.target, &model_u)?.similarity,
            wall_time_s,
        })
    }
}

/// Runs one strategy to budget exhaustion.
///
/// The reported model (loss and similarity columns) is committee member 0,
/// which is also the base model whose expected change EMCM maximizes. RAND
/// and GS train that one model only.
pub fn al_run(strategy: &Strategy, oracle: &mut Oracle, probes: &ProbePool, config: &AlConfig) -> Result<AlRun> {
    validate(strategy, oracle, probes, config)?;
    let tracker = Tracker {
        strategy: strategy.kind,
        config,
        target: assemble_unitary(oracle.circuit())?,
        #[cfg(not(target_arch = "wasm32"))]
        start: std::time::Instant::now(),
    };
    let mut state = PoolState::new(probes.len());
    let mut selected = Vec::with_capacity(config.budget);
    let mut label = |state: &mut PoolState, oracle: &mut Oracle, index: usize| -> Result<()> {
        let probe = probes.state(index);
        let ideal = oracle.query(probe)?;
        state.add(index, LabeledPair::new(probe.clone(), ideal)?)?;
        selected.push(index);
        Ok(())
    };

    for index in bootstrap_indices(probes.len(), config.bootstrap, config.bootstrap_seed) {
        label(&mut state, oracle, index)?;
    }

    let n_models = if strategy.kind.uses_committee() { config.committee_size } else { 1 };
    let mut committee = Committee::random(config.ansatz, n_models, config.model_seed)?;
    committee.retrain(&state.labeled_pairs(), &config.schedule, |_| true)?;

    let mut records = vec![tracker.record(0, &state, &committee.members()[0])?];

    let remaining = config.budget - config.bootstrap;
    let gs_plan = match strategy.kind {
        StrategyKind::Gs => gs_order(&state.labeled_indices(), probes, remaining, config.gs_distance)?,
        _ => Vec::new(),
    };
    let mut rand_rng = seed::rng(strategy.rng_seed);

    for step in 1..=remaining {
        let pick = match strategy.kind {
            StrategyKind::Qbc => {
                let scores = qbc_scores(&committee, probes, state.unlabeled(), config.qbc)?;
                select_argmax(state.unlabeled(), &scores)?
            }
            StrategyKind::Emcm => {
                let scores = emcm_scores(&committee.members()[0], &committee, probes, state.unlabeled())?;
                select_argmax(state.unlabeled(), &scores)?
            }
            StrategyKind::Gs => gs_plan[step - 1],
            StrategyKind::Rand => rand_select(&state, &mut rand_rng)?,
        };
        label(&mut state, oracle, pick)?;
        let pairs = state.labeled_pairs();
        match strategy.kind {
            StrategyKind::Emcm => {
                let refresh = step % config.emcm_refresh_every == 0;
                committee.retrain(&pairs, &config.schedule, |k| k == 0 || refresh)?;
            }
            _ => committee.retrain(&pairs, &config.schedule, |_| true)?,
        }
        records.push(tracker.record(step, &state, &committee.members()[0])?);
    }

    Ok(AlRun { records, selected, model: committee.members()[0].clone() })
}
