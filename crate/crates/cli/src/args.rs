use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qarch_core::GateCombination;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "qarch",
    version,
    about = "Search, evaluate and benchmark QAOA maxcut mixer circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded graph dataset.
    GenGraphs(GenGraphsArgs),
    /// Search mixer combinations on every graph of a dataset.
    Search(SearchArgs),
    /// Score a mixer (and optionally a baseline) on a dataset.
    Evaluate(EvaluateArgs),
    /// Time serial and parallel candidate evaluation.
    Bench(BenchArgs),
    /// Re-run a command from its manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Er,
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMode {
    Serial,
    Parallel,
}

/// Integer list such as `1..4`, `8..64:8` or `1,2,8`; ranges are inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep(pub Vec<usize>);

pub fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let (range, step) = match part.split_once(':') {
            Some((r, st)) => (
                r,
                st.parse::<usize>().map_err(|e| format!("bad step in {part:?}: {e}"))?,
            ),
            None => (part, 1),
        };
        if step == 0 {
            return Err(format!("zero step in {part:?}"));
        }
        match range.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.parse().map_err(|e| format!("bad range start in {part:?}: {e}"))?;
                let b: usize = b.parse().map_err(|e| format!("bad range end in {part:?}: {e}"))?;
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend((a..=b).step_by(step));
            }
            None => out.push(range.parse().map_err(|e| format!("bad value {part:?}: {e}"))?),
        }
    }
    Ok(Sweep(out))
}

fn parse_combination(s: &str) -> Result<GateCombination, String> {
    s.parse().map_err(|e: qarch_core::QarchError| e.to_string())
}

#[derive(Debug, Args)]
pub struct GenGraphsArgs {
    #[arg(long, value_enum, default_value = "er")]
    pub kind: GraphKind,
    #[arg(long, default_value_t = 20)]
    pub n_graphs: usize,
    #[arg(long, default_value_t = 10)]
    pub n_nodes: usize,
    /// Edge probabilities assigned to graphs round-robin (er only).
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7")]
    pub edge_probs: Vec<f64>,
    /// Node degree (regular only).
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Settings shared by every command that optimizes circuits.
#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to the number of available cores.
    #[arg(long, env = "QARCH_WORKERS")]
    pub workers: Option<usize>,
    /// Objective evaluations per optimization.
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    #[arg(long, default_value_t = 4)]
    pub k_max: usize,
    /// Only enumerate combinations of exactly `k_max` gates.
    #[arg(long)]
    pub fixed_k: bool,
    #[arg(long, default_value = "RX,RY,RZ,RXX,RYY")]
    pub alphabet: String,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub gates: GateArgs,
    #[arg(long, default_value_t = 4)]
    pub p_max: usize,
    /// Write one dataset-level result ranked by mean rank instead of one file per graph.
    #[arg(long)]
    pub aggregate: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_parser = parse_combination)]
    pub mixer: GateCombination,
    #[arg(long, value_parser = parse_combination)]
    pub baseline: Option<GateCombination>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub depths: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub gates: GateArgs,
    #[arg(long, value_delimiter = ',', default_value = "serial,parallel")]
    pub modes: Vec<BenchMode>,
    #[arg(long, value_parser = parse_sweep, conflicts_with = "p")]
    pub p_sweep: Option<Sweep>,
    /// Single depth; shorthand for `--p-sweep N`.
    #[arg(long)]
    pub p: Option<usize>,
    /// Worker counts for parallel mode; defaults to the available cores.
    #[arg(long, value_parser = parse_sweep)]
    pub workers_sweep: Option<Sweep>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Only time the first N graphs of the dataset.
    #[arg(long)]
    pub graphs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write outputs here instead of the recorded location.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
