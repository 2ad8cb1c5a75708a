use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::al::{AlConfig, DistanceKind, QbcOptions, StrategyKind};
use crate::ansatz::{AnsatzSpec, TrainSchedule};
use crate::error::{Error, Result};
use crate::probes::{ProbeMode, MAX_POOL_QUBITS};

/// Default ansatz depth per register size.
pub fn default_vqc_depth(n_qubits: usize) -> usize {
    match n_qubits {
        0..=2 => 3,
        3 => 5,
        4 => 7,
        _ => 8,
    }
}

/// One experiment: every listed strategy, `repeats` times, on fresh targets.
///
/// Parsed from TOML; every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    /// Defaults to [`default_vqc_depth`].
    pub vqc_depth: Option<usize>,
    /// Depth of the random target circuits. Defaults to the ansatz depth.
    pub target_depth: Option<usize>,
    pub strategies: Vec<StrategyKind>,
    /// Total labels per run. Defaults to the full pool, `4^n`.
    pub budget: Option<usize>,
    pub bootstrap: usize,
    pub committee_size: usize,
    pub repeats: usize,
    pub base_seed: u64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub probe_mode: ProbeMode,
    pub qbc_squared: bool,
    /// Use global-phase-invariant distances in QBC and GS.
    pub phase_invariant_distance: bool,
    pub emcm_refresh_every: usize,
    pub record_wall_time: bool,
    pub output: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let schedule = TrainSchedule::default();
        ExperimentConfig {
            n_qubits: 2,
            vqc_depth: None,
            target_depth: None,
            strategies: StrategyKind::ALL.to_vec(),
            budget: None,
            bootstrap: 1,
            committee_size: 6,
            repeats: 30,
            base_seed: 0,
            learning_rate: schedule.learning_rate,
            epochs: schedule.epochs,
            probe_mode: ProbeMode::StandardIC,
            qbc_squared: false,
            phase_invariant_distance: false,
            emcm_refresh_every: 1,
            record_wall_time: false,
            output: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn for_qubits(n_qubits: usize) -> Self {
        ExperimentConfig { n_qubits, ..Default::default() }.resolved()
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        let cfg = cfg.resolved();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Fills every optional field with its default.
    pub fn resolved(mut self) -> Self {
        let depth = *self.vqc_depth.get_or_insert(default_vqc_depth(self.n_qubits));
        self.target_depth.get_or_insert(depth);
        if (1..=MAX_POOL_QUBITS).contains(&self.n_qubits) {
            self.budget.get_or_insert(self.pool_size());
        }
        self
    }

    pub fn pool_size(&self) -> usize {
        1usize << (2 * self.n_qubits)
    }

    pub fn vqc_depth(&self) -> usize {
        self.vqc_depth.unwrap_or_else(|| default_vqc_depth(self.n_qubits))
    }

    pub fn target_depth(&self) -> usize {
        self.target_depth.unwrap_or_else(|| self.vqc_depth())
    }

    pub fn budget(&self) -> usize {
        self.budget.unwrap_or_else(|| self.pool_size())
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_POOL_QUBITS).contains(&self.n_qubits) {
            return Err(Error::QubitRange(self.n_qubits));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("no strategies listed".into()));
        }
        let mut seen = self.strategies.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.strategies.len() {
            return Err(Error::Config("strategies must not repeat".into()));
        }
        if self.budget() > self.pool_size() {
            return Err(Error::BudgetExceedsPool { budget: self.budget(), pool: self.pool_size() });
        }
        if self.bootstrap == 0 || self.bootstrap > self.budget() {
            return Err(Error::Config(format!("bootstrap must lie in 1..={}", self.budget())));
        }
        if self.strategies.iter().any(|s| s.uses_committee()) && self.committee_size < 2 {
            return Err(Error::Config("committee_size must be at least 2 for QBC and EMCM".into()));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config("learning_rate must be finite and non-negative".into()));
        }
        if self.emcm_refresh_every == 0 {
            return Err(Error::Config("emcm_refresh_every must be at least 1".into()));
        }
        Ok(())
    }

    pub fn schedule(&self) -> TrainSchedule {
        TrainSchedule { learning_rate: self.learning_rate, epochs: self.epochs }
    }

    pub fn distance(&self) -> DistanceKind {
        if self.phase_invariant_distance {
            DistanceKind::PhaseInvariant
        } else {
            DistanceKind::Euclidean
        }
    }

    /// Run settings shared by every strategy in `repeat`; seeds are filled
    /// in by the caller.
    pub fn al_config(&self, repeat: usize) -> AlConfig {
        let mut cfg = AlConfig::new(AnsatzSpec::new(self.n_qubits, self.vqc_depth()), self.budget());
        cfg.bootstrap = self.bootstrap;
        cfg.committee_size = self.committee_size;
        cfg.schedule = self.schedule();
        cfg.qbc = QbcOptions { squared: self.qbc_squared, distance: self.distance() };
        cfg.gs_distance = self.distance();
        cfg.emcm_refresh_every = self.emcm_refresh_every;
        cfg.record_wall_time = self.record_wall_time;
        cfg.repeat = repeat;
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_toml_resolves_defaults() {
        let cfg = ExperimentConfig::from_toml_str("n_qubits = 3\n").unwrap();
        assert_eq!(cfg.vqc_depth, Some(5));
        assert_eq!(cfg.target_depth, Some(5));
        assert_eq!(cfg.budget, Some(64));
        assert_eq!(cfg.repeats, 30);
        assert_eq!(cfg.committee_size, 6);
        assert_eq!(cfg.strategies, StrategyKind::ALL.to_vec());
    }

    #[test]
    fn depth_table() {
        let depths: Vec<_> = (2..=7).map(default_vqc_depth).collect();
        assert_eq!(depths, vec![3, 5, 7, 8, 8, 8]);
    }

    #[test]
    fn full_toml() {
        let text = r#"
            n_qubits = 2
            vqc_depth = 2
            target_depth = 4
            strategies = ["GS", "RAND"]
            budget = 10
            bootstrap = 2
            repeats = 3
            base_seed = 99
            learning_rate = 0.1
            epochs = 50
            probe_mode = "LiteralPauli"
            phase_invariant_distance = true
            output = "results/n2"
        "#;
        let cfg = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.strategies, vec![StrategyKind::Gs, StrategyKind::Rand]);
        assert_eq!(cfg.probe_mode, ProbeMode::LiteralPauli);
        assert_eq!(cfg.distance(), DistanceKind::PhaseInvariant);
        assert_eq!(cfg.al_config(1).bootstrap, 2);
        assert_eq!(cfg.target_depth(), 4);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml_str("n_qubits = 8\n").is_err());
        assert!(ExperimentConfig::from_toml_str("n_qubits = 2\nbudget = 17\n").is_err());
        assert!(ExperimentConfig::from_toml_str("n_qubits = 2\nrepeats = 0\n").is_err());
        assert!(ExperimentConfig::from_toml_str("n_qubits = 2\ncommittee_size = 1\n").is_err());
        assert!(ExperimentConfig::from_toml_str("n_qubits = 2\nbogus = 1\n").is_err());
        assert!(ExperimentConfig::from_toml_str("n_qubits = 2\nstrategies = [\"GS\", \"GS\"]\n").is_err());
        assert!(ExperimentConfig::from_toml_str("n_qubits = 2\nstrategies = [\"GS\", \"RAND\"]\ncommittee_size = 1\n").is_ok());
    }
}
