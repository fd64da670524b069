//! Fully resolved invocations and the manifests that record them.
//!
//! A manifest holds everything needed to regenerate a run's outputs:
//! every seed, the whole search or evaluation config, the worker count and
//! absolute input/output paths. Replaying it through [`crate::execute`]
//! reproduces every output byte except wall-clock fields.

use std::path::{Path, PathBuf};

use qarch_core::circuits::parse_gate_list;
use qarch_core::optimizer::OptimizerConfig;
use qarch_core::{EnumerationMode, EvalConfig, GateCombination, SearchConfig};
use serde::{Deserialize, Serialize};

use crate::args::{
    BenchArgs, BenchMode, Command, EvaluateArgs, GateArgs, GenGraphsArgs, GraphKind, RunArgs, SearchArgs,
};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenGraphsSpec {
    pub kind: GraphKind,
    pub n_graphs: usize,
    pub n_nodes: usize,
    pub edge_probs: Vec<f64>,
    pub degree: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub dataset: PathBuf,
    pub out: PathBuf,
    pub aggregate: bool,
    pub config: SearchConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateSpec {
    pub dataset: PathBuf,
    pub out: PathBuf,
    pub mixer: GateCombination,
    pub baseline: Option<GateCombination>,
    pub config: EvalConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub dataset: PathBuf,
    pub out: PathBuf,
    pub modes: Vec<BenchMode>,
    pub depths: Vec<usize>,
    pub workers: Vec<usize>,
    pub reps: usize,
    pub graphs: Option<usize>,
    /// `workers` here is unused; each cell sets its own.
    pub config: SearchConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Invocation {
    GenGraphs(GenGraphsSpec),
    Search(SearchSpec),
    Evaluate(EvaluateSpec),
    Bench(BenchSpec),
}

impl Invocation {
    pub fn out(&self) -> &Path {
        match self {
            Invocation::GenGraphs(s) => &s.out,
            Invocation::Search(s) => &s.out,
            Invocation::Evaluate(s) => &s.out,
            Invocation::Bench(s) => &s.out,
        }
    }

    pub fn set_out(&mut self, out: PathBuf) {
        match self {
            Invocation::GenGraphs(s) => s.out = out,
            Invocation::Search(s) => s.out = out,
            Invocation::Evaluate(s) => s.out = out,
            Invocation::Bench(s) => s.out = out,
        }
    }

    /// Search and evaluate write into a directory; the others write one file.
    pub fn writes_directory(&self) -> bool {
        matches!(self, Invocation::Search(_) | Invocation::Evaluate(_))
    }

    /// `<dir>/manifest.json`, or `<stem>.manifest.json` next to a file output.
    pub fn manifest_path(&self) -> PathBuf {
        let out = self.out();
        if self.writes_directory() {
            return out.join("manifest.json");
        }
        let stem = out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        out.with_file_name(format!("{stem}.manifest.json"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Command line as typed; informational only; replay uses `invocation`.
    pub argv: Vec<String>,
    pub invocation: Invocation,
    pub outputs: Vec<PathBuf>,
    pub started_at: String,
    pub finished_at: String,
}

pub fn available_cores() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn absolute(p: &Path) -> CliResult<PathBuf> {
    std::path::absolute(p).map_err(|source| CliError::Io {
        path: p.to_path_buf(),
        source,
    })
}

fn optimizer(run: &RunArgs) -> OptimizerConfig {
    OptimizerConfig {
        max_iters: run.max_iters,
        ..OptimizerConfig::default()
    }
}

fn search_config(run: &RunArgs, gates: &GateArgs, p_max: usize) -> CliResult<SearchConfig> {
    let cfg = SearchConfig {
        p_max,
        k_max: gates.k_max,
        alphabet: parse_gate_list(&gates.alphabet)?,
        workers: run.workers.unwrap_or_else(available_cores),
        optimizer: optimizer(run),
        seed: run.seed,
        mode: if gates.fixed_k {
            EnumerationMode::FixedK
        } else {
            EnumerationMode::CumulativeK
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

fn gen_graphs(a: &GenGraphsArgs) -> CliResult<GenGraphsSpec> {
    Ok(GenGraphsSpec {
        kind: a.kind,
        n_graphs: a.n_graphs,
        n_nodes: a.n_nodes,
        edge_probs: a.edge_probs.clone(),
        degree: a.degree,
        seed: a.seed,
        out: absolute(&a.out)?,
    })
}

fn search(a: &SearchArgs) -> CliResult<SearchSpec> {
    Ok(SearchSpec {
        dataset: absolute(&a.run.dataset)?,
        out: absolute(&a.run.out)?,
        aggregate: a.aggregate,
        config: search_config(&a.run, &a.gates, a.p_max)?,
    })
}

fn evaluate(a: &EvaluateArgs) -> CliResult<EvaluateSpec> {
    let config = EvalConfig {
        depths: a.depths.clone(),
        optimizer: optimizer(&a.run),
        seed: a.run.seed,
        workers: a.run.workers.unwrap_or_else(available_cores),
    };
    if config.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    Ok(EvaluateSpec {
        dataset: absolute(&a.run.dataset)?,
        out: absolute(&a.run.out)?,
        mixer: a.mixer.clone(),
        baseline: a.baseline.clone(),
        config,
    })
}

fn bench(a: &BenchArgs) -> CliResult<BenchSpec> {
    let depths = match (&a.p_sweep, a.p) {
        (Some(s), _) => s.0.clone(),
        (None, Some(p)) => vec![p],
        (None, None) => (1..=4).collect(),
    };
    let workers = match &a.workers_sweep {
        Some(s) => s.0.clone(),
        None => vec![a.run.workers.unwrap_or_else(available_cores)],
    };
    if depths.is_empty() || depths.contains(&0) {
        return Err(CliError::Usage("depths must be positive".into()));
    }
    if workers.is_empty() || workers.contains(&0) {
        return Err(CliError::Usage("worker counts must be positive".into()));
    }
    if a.modes.is_empty() || a.reps == 0 {
        return Err(CliError::Usage("--modes and --reps must be non-empty".into()));
    }
    let p_max = *depths.iter().max().expect("non-empty");
    Ok(BenchSpec {
        dataset: absolute(&a.run.dataset)?,
        out: absolute(&a.run.out)?,
        modes: a.modes.clone(),
        depths,
        workers,
        reps: a.reps,
        graphs: a.graphs,
        config: search_config(&a.run, &a.gates, p_max)?,
    })
}

/// Turns parsed arguments into a self-contained invocation. Replay is
/// handled by the caller, since it needs to read a file.
pub fn resolve(cmd: &Command) -> CliResult<Invocation> {
    Ok(match cmd {
        Command::GenGraphs(a) => Invocation::GenGraphs(gen_graphs(a)?),
        Command::Search(a) => Invocation::Search(search(a)?),
        Command::Evaluate(a) => Invocation::Evaluate(evaluate(a)?),
        Command::Bench(a) => Invocation::Bench(bench(a)?),
        Command::Replay(_) => return Err(CliError::Usage("replay cannot be resolved directly".into())),
    })
}
