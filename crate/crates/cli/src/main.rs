use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use alqpt::harness::{run_experiment, verify, ExperimentConfig, ExperimentOutput};
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "alqpt", version, about = "Active-learning process tomography experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the default experiment for each register size in a range.
    Sweep {
        /// Inclusive range such as `2..4`, or a single size.
        #[arg(long, value_parser = parse_range, default_value = "2..4")]
        qubits: RangeInclusive<usize>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant checks; exits non-zero if any fails.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct Common {
    /// Output directory; overrides the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed; overrides the config's `base_seed`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repeats: Option<usize>,
}

impl Common {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(out) = &self.out {
            cfg.output = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.base_seed = seed;
        }
        if let Some(repeats) = self.repeats {
            cfg.repeats = repeats;
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected N or LO..HI, got {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn run_and_write(cfg: &ExperimentConfig, dir: &Path) -> anyhow::Result<()> {
    eprintln!(
        "n={} depth={} budget={} repeats={} strategies={:?}",
        cfg.n_qubits,
        cfg.vqc_depth(),
        cfg.budget(),
        cfg.repeats,
        cfg.strategies.iter().map(|s| s.as_str()).collect::<Vec<_>>()
    );
    let start = Instant::now();
    let out = run_experiment(cfg)?;
    out.write(dir).with_context(|| format!("writing results to {}", dir.display()))?;
    print_final(&out);
    eprintln!("done in {:.1}s, wrote {}", start.elapsed().as_secs_f64(), dir.display());
    Ok(())
}

fn print_final(out: &ExperimentOutput) {
    let budget = out.config.budget();
    println!("{:<6} {:>7} {:>10} {:>10} {:>12}", "", "labels", "similarity", "std", "improvement");
    for kind in &out.config.strategies {
        let Some(row) = out.summary.rows(*kind).and_then(|rows| rows.iter().find(|r| r.labels_used == budget)) else {
            continue;
        };
        let imp = row.improvement.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!("{:<6} {:>7} {:>10.4} {:>10.4} {:>12}", kind.as_str(), budget, row.mean_similarity, row.std_similarity, imp);
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { config, common } => {
            let mut cfg = ExperimentConfig::load(&config).with_context(|| format!("loading {}", config.display()))?;
            common.apply(&mut cfg);
            cfg.validate()?;
            let dir = cfg.output.clone();
            run_and_write(&cfg, &dir)?;
        }
        Command::Sweep { qubits, budget, epochs, common } => {
            if qubits.is_empty() {
                bail!("empty qubit range");
            }
            for n in qubits {
                let mut cfg = ExperimentConfig::for_qubits(n);
                common.apply(&mut cfg);
                if let Some(b) = budget {
                    cfg.budget = Some(b.min(cfg.pool_size()));
                }
                if let Some(e) = epochs {
                    cfg.epochs = e;
                }
                cfg.validate()?;
                let dir = cfg.output.join(format!("n{n}"));
                run_and_write(&cfg, &dir)?;
            }
        }
        Command::Verify { seed } => {
            let mut failed = 0;
            for check in verify::run_all(seed)? {
                println!("{} {}: {}", if check.passed { "PASS" } else { "FAIL" }, check.name, check.detail);
                failed += usize::from(!check.passed);
            }
            if failed > 0 {
                eprintln!("{failed} check(s) failed");
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
