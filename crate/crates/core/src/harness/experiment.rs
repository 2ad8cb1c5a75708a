use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::metrics::improvement;
use crate::al::{al_run, Strategy, StrategyKind};
use crate::error::{Error, Result};
use crate::oracle::{generate_target, TargetSpec};
use crate::probes::{generate_pool, ProbePool};
use crate::seed::{self, Stream};
use crate::par;

pub const CSV_HEADER: &str = "strategy,repeat,step,labels_used,loss,similarity,similarity_phase_aligned,wall_time_s";

/// One row of `records.csv`: the reported model after an AL step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub strategy: StrategyKind,
    pub repeat: usize,
    pub step: usize,
    pub labels_used: usize,
    pub loss: f64,
    pub similarity: f64,
    pub similarity_phase_aligned: f64,
    pub wall_time_s: f64,
}

/// Aggregate over repeats at one label count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub labels_used: usize,
    pub count: usize,
    pub mean_similarity: f64,
    /// Sample standard deviation (zero for a single repeat).
    pub std_similarity: f64,
    pub mean_similarity_phase_aligned: f64,
    pub mean_loss: f64,
    /// Mean similarity over RAND's mean similarity at the same label count;
    /// `None` without a RAND run or when the baseline is zero.
    pub improvement: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n_qubits: usize,
    pub vqc_depth: usize,
    pub target_depth: usize,
    pub repeats: usize,
    pub strategies: BTreeMap<String, Vec<SummaryRow>>,
}

impl Summary {
    pub fn rows(&self, kind: StrategyKind) -> Option<&[SummaryRow]> {
        self.strategies.get(kind.as_str()).map(Vec::as_slice)
    }

    /// Mean similarity of `kind` at `labels_used`.
    pub fn mean_at(&self, kind: StrategyKind, labels_used: usize) -> Option<f64> {
        self.rows(kind)?.iter().find(|r| r.labels_used == labels_used).map(|r| r.mean_similarity)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    /// Ordered by (strategy as listed in the config, repeat, step).
    pub records: Vec<RunRecord>,
    pub summary: Summary,
}

/// Seeds for one repeat, shared by every strategy so they face the same
/// target, bootstrap labels and initial models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepeatSeeds {
    pub target: u64,
    pub bootstrap: u64,
    pub model: u64,
}

impl RepeatSeeds {
    pub fn derive(base_seed: u64, repeat: usize) -> Self {
        let r = repeat as u64;
        RepeatSeeds {
            target: seed::derive(base_seed, r, Stream::Target, 0),
            bootstrap: seed::derive(base_seed, r, Stream::Bootstrap, 0),
            model: seed::derive(base_seed, r, Stream::Model, 0),
        }
    }
}

fn run_repeat(config: &ExperimentConfig, probes: &ProbePool, repeat: usize) -> Result<Vec<RunRecord>> {
    let seeds = RepeatSeeds::derive(config.base_seed, repeat);
    let target = TargetSpec { n_qubits: config.n_qubits, depth: config.target_depth(), seed: seeds.target };
    let mut al_cfg = config.al_config(repeat);
    al_cfg.bootstrap_seed = seeds.bootstrap;
    al_cfg.model_seed = seeds.model;
    let mut records = Vec::new();
    for &kind in &config.strategies {
        let mut oracle = generate_target(&target)?;
        let strategy = Strategy { kind, rng_seed: seed::derive(config.base_seed, repeat as u64, Stream::Strategy, kind as u64) };
        let run = al_run(&strategy, &mut oracle, probes, &al_cfg)
            .map_err(|e| Error::Config(format!("repeat {repeat}, strategy {kind}: {e}")))?;
        if oracle.query_count() != al_cfg.budget {
            return Err(Error::Config(format!(
                "repeat {repeat}, strategy {kind}: {} queries for a budget of {}",
                oracle.query_count(),
                al_cfg.budget
            )));
        }
        records.extend(run.records);
    }
    Ok(records)
}

/// Runs every (strategy, repeat) pair and aggregates. Deterministic in
/// `config.base_seed` regardless of how repeats are scheduled.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let config = config.clone().resolved();
    config.validate()?;
    let probes = generate_pool(config.n_qubits, config.probe_mode)?;
    let repeats: Vec<usize> = (0..config.repeats).collect();
    let per_repeat = par::map(&repeats, |&r| run_repeat(&config, &probes, r));
    let mut records = Vec::new();
    for result in per_repeat {
        records.extend(result?);
    }
    let order = |k: StrategyKind| config.strategies.iter().position(|&s| s == k).unwrap_or(usize::MAX);
    records.sort_by_key(|r| (order(r.strategy), r.repeat, r.step));
    let summary = summarize(&config, &records);
    Ok(ExperimentOutput { config, records, summary })
}

pub fn summarize(config: &ExperimentConfig, records: &[RunRecord]) -> Summary {
    let mut groups: BTreeMap<(StrategyKind, usize), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.strategy, r.labels_used)).or_default().push(r);
    }
    let mean = |xs: &[&RunRecord], f: fn(&RunRecord) -> f64| xs.iter().map(|r| f(r)).sum::<f64>() / xs.len() as f64;
    let rand_means: BTreeMap<usize, f64> = groups
        .iter()
        .filter(|((k, _), _)| *k == StrategyKind::Rand)
        .map(|((_, l), rs)| (*l, mean(rs, |r| r.similarity)))
        .collect();

    let mut strategies: BTreeMap<String, Vec<SummaryRow>> = BTreeMap::new();
    for ((kind, labels_used), rs) in &groups {
        let m = mean(rs, |r| r.similarity);
        let std = if rs.len() > 1 {
            (rs.iter().map(|r| (r.similarity - m).powi(2)).sum::<f64>() / (rs.len() - 1) as f64).sqrt()
        } else {
            0.0
        };
        let improvement = rand_means.get(labels_used).and_then(|&base| improvement(m, base).ok());
        strategies.entry(kind.as_str().to_string()).or_default().push(SummaryRow {
            labels_used: *labels_used,
            count: rs.len(),
            mean_similarity: m,
            std_similarity: std,
            mean_similarity_phase_aligned: mean(rs, |r| r.similarity_phase_aligned),
            mean_loss: mean(rs, |r| r.loss),
            improvement,
        });
    }
    Summary {
        n_qubits: config.n_qubits,
        vqc_depth: config.vqc_depth(),
        target_depth: config.target_depth(),
        repeats: config.repeats,
        strategies,
    }
}

/// CSV bytes of `records` under [`CSV_HEADER`].
pub fn records_csv(records: &[RunRecord]) -> Result<Vec<u8>> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in records {
        writer.serialize(r)?;
    }
    if records.is_empty() {
        writer.write_record(CSV_HEADER.split(','))?;
    }
    writer.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn read_records_csv(bytes: &[u8]) -> Result<Vec<RunRecord>> {
    let mut reader = csv::Reader::from_reader(bytes);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Config(format!("unexpected records header {}", header.join(","))));
    }
    reader.deserialize().map(|r| r.map_err(Error::from)).collect()
}

impl ExperimentOutput {
    /// Writes `records.csv`, `summary.json` and `config.echo.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("records.csv"), records_csv(&self.records)?)?;
        let mut summary = serde_json::to_vec_pretty(&self.summary)?;
        summary.push(b'\n');
        std::fs::write(dir.join("summary.json"), summary)?;
        let mut echo = serde_json::to_vec_pretty(&self.config)?;
        echo.push(b'\n');
        std::fs::write(dir.join("config.echo.json"), echo)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            n_qubits: 1,
            vqc_depth: Some(1),
            budget: Some(4),
            repeats: 2,
            committee_size: 2,
            epochs: 10,
            base_seed: 17,
            ..Default::default()
        }
    }

    #[test]
    fn records_are_ordered_and_complete() {
        let out = run_experiment(&tiny_config()).unwrap();
        assert_eq!(out.records.len(), 4 * 2 * 4);
        let header = String::from_utf8(records_csv(&out.records).unwrap()).unwrap();
        assert!(header.starts_with(&format!("{CSV_HEADER}\n")));
        assert!(!header.contains('\r'));
        let keys: Vec<_> = out.records.iter().map(|r| (r.strategy, r.repeat, r.step)).collect();
        assert_eq!(keys[0], (StrategyKind::Qbc, 0, 0));
        assert_eq!(keys.last().unwrap(), &(StrategyKind::Rand, 1, 3));
        for r in &out.records {
            assert!((0.0..=1.0).contains(&r.similarity));
            assert!(r.similarity_phase_aligned >= r.similarity - 1e-12);
        }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let out = run_experiment(&tiny_config()).unwrap();
        let bytes = records_csv(&out.records).unwrap();
        assert_eq!(read_records_csv(&bytes).unwrap(), out.records);
    }

    #[test]
    fn strategies_share_bootstrap_and_initial_model() {
        let out = run_experiment(&tiny_config()).unwrap();
        for repeat in 0..2 {
            let first: Vec<_> = out.records.iter().filter(|r| r.repeat == repeat && r.step == 0).collect();
            assert_eq!(first.len(), 4);
            // Same target, same bootstrap label, same member-0 start → same step-0 model.
            assert!(first.windows(2).all(|w| w[0].similarity == w[1].similarity && w[0].loss == w[1].loss));
        }
    }

    #[test]
    fn summary_shape_and_improvement() {
        let out = run_experiment(&tiny_config()).unwrap();
        assert_eq!(out.summary.strategies.len(), 4);
        for rows in out.summary.strategies.values() {
            assert_eq!(rows.iter().map(|r| r.labels_used).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
            assert!(rows.iter().all(|r| r.count == 2));
        }
        for row in out.summary.rows(StrategyKind::Rand).unwrap() {
            assert_eq!(row.improvement, Some(1.0));
        }
    }

    #[test]
    fn writes_three_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&tiny_config()).unwrap();
        out.write(dir.path()).unwrap();
        for f in ["records.csv", "summary.json", "config.echo.json"] {
            assert!(dir.path().join(f).exists());
        }
        let echo: ExperimentConfig =
            serde_json::from_slice(&std::fs::read(dir.path().join("config.echo.json")).unwrap()).unwrap();
        assert_eq!(echo, out.config);
    }
}
