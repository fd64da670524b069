//! Approximation ratios of optimized mixers on held-out graph datasets,
//! and paired comparisons between a searched mixer and the baseline.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::circuits::{build_mixer, build_qaoa, GateCombination};
use crate::error::{QarchError, Result};
use crate::graphs::{maxcut_bruteforce, Graph};
use crate::optimizer::{optimize_ansatz, OptimizerConfig};
use crate::search::parallel_map_candidates;
use crate::seeds::derive_seed;

/// `energy / classical`.
pub fn approximation_ratio(energy: f64, classical: f64) -> Result<f64> {
    if classical.is_nan() || classical <= 0.0 {
        return Err(QarchError::invalid(format!(
            "approximation ratio undefined for classical optimum {classical}"
        )));
    }
    Ok(energy / classical)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixerTag {
    Searched,
    Baseline,
}

impl fmt::Display for MixerTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MixerTag::Searched => "searched",
            MixerTag::Baseline => "baseline",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub depths: Vec<usize>,
    pub optimizer: OptimizerConfig,
    pub seed: u64,
    pub workers: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            depths: vec![1, 2, 3],
            optimizer: OptimizerConfig::default(),
            seed: 0,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub graph_id: usize,
    pub p: usize,
    pub mixer: MixerTag,
    pub combination: GateCombination,
    pub energy: f64,
    pub classical: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthMean {
    pub mixer: MixerTag,
    pub p: usize,
    pub mean_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverallMean {
    pub mixer: MixerTag,
    pub mean_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub records: Vec<EvalRecord>,
    pub per_depth: Vec<DepthMean>,
    pub overall: Vec<OverallMean>,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

impl EvaluationReport {
    fn from_records(records: Vec<EvalRecord>, depths: &[usize]) -> Self {
        let mut tags: Vec<MixerTag> = records.iter().map(|r| r.mixer).collect();
        tags.sort_unstable();
        tags.dedup();
        let mut per_depth = Vec::new();
        let mut overall = Vec::new();
        for &tag in &tags {
            for &p in depths {
                per_depth.push(DepthMean {
                    mixer: tag,
                    p,
                    mean_ratio: mean(records.iter().filter(|r| r.mixer == tag && r.p == p).map(|r| r.ratio)),
                });
            }
            overall.push(OverallMean {
                mixer: tag,
                mean_ratio: mean(records.iter().filter(|r| r.mixer == tag).map(|r| r.ratio)),
            });
        }
        EvaluationReport {
            records,
            per_depth,
            overall,
        }
    }

    pub fn mean_ratio(&self, tag: MixerTag, p: Option<usize>) -> Option<f64> {
        match p {
            Some(p) => self
                .per_depth
                .iter()
                .find(|d| d.mixer == tag && d.p == p)
                .map(|d| d.mean_ratio),
            None => self.overall.iter().find(|d| d.mixer == tag).map(|d| d.mean_ratio),
        }
    }

    /// Flat CSV with header `graph_id,p,mixer,energy,classical,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("graph_id,p,mixer,energy,classical,ratio\n");
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.graph_id, r.p, r.mixer, r.energy, r.classical, r.ratio
            )
            .expect("writing to a String cannot fail");
        }
        out
    }
}

struct Task<'a> {
    graph_id: usize,
    depth_idx: usize,
    tag: MixerTag,
    combination: &'a GateCombination,
}

fn validate(dataset: &[Graph], cfg: &EvalConfig) -> Result<()> {
    if dataset.is_empty() {
        return Err(QarchError::invalid("evaluation dataset is empty"));
    }
    if cfg.depths.is_empty() || cfg.depths.contains(&0) {
        return Err(QarchError::invalid(
            "depths must be a non-empty list of positive integers",
        ));
    }
    cfg.optimizer.validate()
}

fn run(mixers: &[(MixerTag, &GateCombination)], dataset: &[Graph], cfg: &EvalConfig) -> Result<EvaluationReport> {
    validate(dataset, cfg)?;
    let classical = dataset
        .iter()
        .map(|g| maxcut_bruteforce(g).map(|m| m.value))
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = classical.iter().position(|&c| c <= 0.0) {
        return Err(QarchError::invalid(format!(
            "graph {i} has no cut edges; ratio undefined"
        )));
    }
    let tasks: Vec<Task> = mixers
        .iter()
        .flat_map(|&(tag, combination)| {
            (0..dataset.len()).flat_map(move |graph_id| {
                (0..cfg.depths.len()).map(move |depth_idx| Task {
                    graph_id,
                    depth_idx,
                    tag,
                    combination,
                })
            })
        })
        .collect();
    let records = parallel_map_candidates(&tasks, cfg.workers, |_, t| {
        let g = &dataset[t.graph_id];
        let p = cfg.depths[t.depth_idx];
        let ansatz = build_qaoa(g, build_mixer(g, t.combination), p)?;
        // seeds depend on (graph, depth) only, so mixers share them
        let canonical = (t.graph_id * cfg.depths.len() + t.depth_idx) as u64;
        let record = optimize_ansatz(&ansatz, g, &cfg.optimizer.with_seed(derive_seed(cfg.seed, canonical)))?;
        let c = classical[t.graph_id];
        Ok(EvalRecord {
            graph_id: t.graph_id,
            p,
            mixer: t.tag,
            combination: t.combination.clone(),
            energy: record.best_value,
            classical: c,
            ratio: approximation_ratio(record.best_value, c)?,
        })
    })?;
    Ok(EvaluationReport::from_records(records, &cfg.depths))
}

/// Optimizes `mixer` on every graph at every depth and scores it against
/// the exact maxcut.
pub fn evaluate_mixer(
    mixer: &GateCombination,
    tag: MixerTag,
    dataset: &[Graph],
    cfg: &EvalConfig,
) -> Result<EvaluationReport> {
    run(&[(tag, mixer)], dataset, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedDelta {
    pub graph_id: usize,
    pub p: usize,
    pub searched_ratio: f64,
    pub baseline_ratio: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthDelta {
    pub p: usize,
    pub mean_delta: f64,
}

/// Paired comparison; `delta = searched − baseline` per (graph, depth).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixerComparison {
    pub searched: GateCombination,
    pub baseline: GateCombination,
    pub report: EvaluationReport,
    pub deltas: Vec<PairedDelta>,
    pub per_depth_delta: Vec<DepthDelta>,
    pub overall_delta: f64,
}

pub fn compare_mixers(
    searched: &GateCombination,
    baseline: &GateCombination,
    dataset: &[Graph],
    cfg: &EvalConfig,
) -> Result<MixerComparison> {
    let report = run(
        &[(MixerTag::Searched, searched), (MixerTag::Baseline, baseline)],
        dataset,
        cfg,
    )?;
    let half = report.records.len() / 2;
    let (s, b) = report.records.split_at(half);
    let deltas: Vec<PairedDelta> = s
        .iter()
        .zip(b)
        .map(|(s, b)| {
            debug_assert_eq!((s.graph_id, s.p), (b.graph_id, b.p));
            PairedDelta {
                graph_id: s.graph_id,
                p: s.p,
                searched_ratio: s.ratio,
                baseline_ratio: b.ratio,
                delta: s.ratio - b.ratio,
            }
        })
        .collect();
    let per_depth_delta = cfg
        .depths
        .iter()
        .map(|&p| DepthDelta {
            p,
            mean_delta: mean(deltas.iter().filter(|d| d.p == p).map(|d| d.delta)),
        })
        .collect();
    let overall_delta = mean(deltas.iter().map(|d| d.delta));
    Ok(MixerComparison {
        searched: searched.clone(),
        baseline: baseline.clone(),
        report,
        deltas,
        per_depth_delta,
        overall_delta,
    })
}
