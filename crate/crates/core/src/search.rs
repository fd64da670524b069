//! Mixer search: enumerate gate combinations per depth, optimize each
//! candidate, and keep the best mixer across depths.
//!
//! Every candidate has a global index (depth-major, then combination
//! order) and an optimizer seed derived from `(seed, index)`. Results are
//! stored by index, so the worker count never changes any non-timing field.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::circuits::{build_mixer, build_qaoa, gate_combinations, GateCombination, GateKind};
use crate::error::{QarchError, Result};
use crate::graphs::Graph;
use crate::optimizer::{optimize_ansatz, OptimizationRecord, OptimizerConfig};
use crate::seeds::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationMode {
    /// All lengths `1..=k_max` per depth.
    CumulativeK,
    /// Only length `k_max` per depth.
    FixedK,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub p_max: usize,
    pub k_max: usize,
    pub alphabet: Vec<GateKind>,
    /// 1 runs the serial loop on the calling thread.
    pub workers: usize,
    pub optimizer: OptimizerConfig,
    pub seed: u64,
    pub mode: EnumerationMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            p_max: 4,
            k_max: 4,
            alphabet: GateKind::ALPHABET.to_vec(),
            workers: 1,
            optimizer: OptimizerConfig::default(),
            seed: 0,
            mode: EnumerationMode::CumulativeK,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_max == 0 || self.k_max == 0 || self.workers == 0 {
            return Err(QarchError::invalid("p_max, k_max and workers must all be at least 1"));
        }
        self.optimizer.validate()
    }

    /// Gate combinations evaluated at every depth, in index order.
    pub fn combinations(&self) -> Result<Vec<GateCombination>> {
        let lengths = match self.mode {
            EnumerationMode::CumulativeK => 1..=self.k_max,
            EnumerationMode::FixedK => self.k_max..=self.k_max,
        };
        let mut out = Vec::new();
        for k in lengths {
            out.extend(gate_combinations(&self.alphabet, k)?);
        }
        Ok(out)
    }

    /// Closed-form number of candidates over all depths.
    pub fn candidate_count(&self) -> usize {
        let a = self.alphabet.len();
        let per_depth = match self.mode {
            EnumerationMode::CumulativeK => (1..=self.k_max as u32).map(|k| a.pow(k)).sum(),
            EnumerationMode::FixedK => a.pow(self.k_max as u32),
        };
        per_depth * self.p_max
    }
}

/// A candidate to evaluate: depth plus mixer combination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub index: usize,
    pub p: usize,
    pub combination: GateCombination,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateResult {
    pub candidate_index: usize,
    pub p: usize,
    pub combination: GateCombination,
    pub energy: f64,
    pub params: Vec<f64>,
    pub evaluations: usize,
    #[serde(skip)]
    pub record: Option<OptimizationRecord>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestMixer {
    pub combination: GateCombination,
    pub shared_beta: bool,
    pub p: usize,
    pub energy: f64,
    pub candidate_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTiming {
    pub total_s: f64,
    pub per_depth_s: Vec<f64>,
}

/// Search output, serialized as
/// `{"best": {..}, "candidates": [..], "timing": {"total_s": .., "per_depth_s": [..]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best: BestMixer,
    pub candidates: Vec<CandidateResult>,
    pub timing: SearchTiming,
}

impl SearchResult {
    /// Copy with every wall-clock field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> SearchResult {
        let mut r = self.clone();
        r.timing.total_s = 0.0;
        r.timing.per_depth_s.iter_mut().for_each(|t| *t = 0.0);
        r.candidates.iter_mut().for_each(|c| c.wall_time_s = 0.0);
        r
    }
}

fn ranks_before(a: &CandidateResult, b: &CandidateResult) -> bool {
    a.energy > b.energy || (a.energy == b.energy && (a.p, a.candidate_index) < (b.p, b.candidate_index))
}

/// Highest energy wins; ties go to the lower depth, then the lower index.
/// The incumbent is kept unless a candidate is strictly better.
pub fn select_best<'a>(
    candidates: &'a [CandidateResult],
    incumbent: Option<&'a CandidateResult>,
) -> Result<&'a CandidateResult> {
    let challenger = candidates
        .iter()
        .reduce(|best, c| if ranks_before(c, best) { c } else { best });
    match (challenger, incumbent) {
        (None, None) => Err(QarchError::invalid("no candidates and no incumbent")),
        (Some(c), None) => Ok(c),
        (None, Some(i)) => Ok(i),
        (Some(c), Some(i)) => Ok(if c.energy > i.energy { c } else { i }),
    }
}

/// Maps `eval` over `items` with at most `workers` threads. Output order
/// follows input order. A failure or panic aborts remaining work and is
/// reported for the lowest failing index.
pub fn parallel_map_candidates<T, R, F>(items: &[T], workers: usize, eval: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> Result<R> + Sync,
{
    if workers == 0 {
        return Err(QarchError::invalid("workers must be at least 1"));
    }
    let run_one = |i: usize, item: &T| -> Result<R> {
        match catch_unwind(AssertUnwindSafe(|| eval(i, item))) {
            Ok(Ok(r)) => Ok(r),
            Ok(Err(e @ QarchError::CandidateFailed { .. })) => Err(e),
            Ok(Err(e)) => Err(QarchError::CandidateFailed {
                index: i,
                message: e.to_string(),
            }),
            Err(panic) => Err(QarchError::CandidateFailed {
                index: i,
                message: panic_message(&*panic),
            }),
        }
    };

    if workers == 1 || items.len() <= 1 {
        return items.iter().enumerate().map(|(i, t)| run_one(i, t)).collect();
    }

    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let mut slots: Vec<Option<R>> = std::iter::repeat_with(|| None).take(items.len()).collect();
    let mut first_error: Option<QarchError> = None;
    thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        for _ in 0..workers.min(items.len()) {
            let tx = tx.clone();
            let (next, abort, run_one) = (&next, &abort, &run_one);
            scope.spawn(move || loop {
                if abort.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let out = run_one(i, &items[i]);
                if out.is_err() {
                    abort.store(true, Ordering::Relaxed);
                }
                if tx.send((i, out)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, out) in rx {
            match out {
                Ok(r) => slots[i] = Some(r),
                Err(e) => {
                    let lower = match &first_error {
                        Some(QarchError::CandidateFailed { index, .. }) => i < *index,
                        _ => true,
                    };
                    if lower {
                        first_error = Some(e);
                    }
                }
            }
        }
    });
    if let Some(e) = first_error {
        return Err(e);
    }
    Ok(slots
        .into_iter()
        .map(|s| s.expect("every slot filled when no worker failed"))
        .collect())
}

fn panic_message(panic: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = panic.downcast_ref::<&str>() {
        format!("panicked: {s}")
    } else if let Some(s) = panic.downcast_ref::<String>() {
        format!("panicked: {s}")
    } else {
        "panicked".to_string()
    }
}

/// Builds, optimizes and scores one candidate on `g`.
pub fn evaluate_candidate(g: &Graph, cand: &Candidate, cfg: &SearchConfig) -> Result<CandidateResult> {
    let start = Instant::now();
    let ansatz = build_qaoa(g, build_mixer(g, &cand.combination), cand.p)?;
    let opt = cfg.optimizer.with_seed(derive_seed(cfg.seed, cand.index as u64));
    let record = optimize_ansatz(&ansatz, g, &opt)?;
    Ok(CandidateResult {
        candidate_index: cand.index,
        p: cand.p,
        combination: cand.combination.clone(),
        energy: record.best_value,
        params: record.best_params.clone(),
        evaluations: record.evaluations,
        record: Some(record),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Candidates at depth `p`, with indices continuing from `first_index`.
pub fn depth_candidates(cfg: &SearchConfig, p: usize, first_index: usize) -> Result<Vec<Candidate>> {
    Ok(cfg
        .combinations()?
        .into_iter()
        .enumerate()
        .map(|(i, combination)| Candidate {
            index: first_index + i,
            p,
            combination,
        })
        .collect())
}

/// Evaluates every candidate at one depth with the configured worker count.
pub fn search_depth(g: &Graph, p: usize, cfg: &SearchConfig) -> Result<Vec<CandidateResult>> {
    cfg.validate()?;
    let per_depth = cfg.combinations()?.len();
    let cands = depth_candidates(cfg, p, (p - 1) * per_depth)?;
    parallel_map_candidates(&cands, cfg.workers, |_, c| evaluate_candidate(g, c, cfg))
}

/// Runs the search for depths `1..=p_max` on a single graph.
pub fn search_mixer(g: &Graph, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    if g.n_nodes() > crate::simulator::MAX_QUBITS {
        return Err(QarchError::SizeLimit {
            what: "qubit count",
            actual: g.n_nodes(),
            limit: crate::simulator::MAX_QUBITS,
        });
    }
    let start = Instant::now();
    let mut candidates: Vec<CandidateResult> = Vec::with_capacity(cfg.candidate_count());
    let mut per_depth_s = Vec::with_capacity(cfg.p_max);
    let mut best: Option<CandidateResult> = None;
    for p in 1..=cfg.p_max {
        let t = Instant::now();
        let energies = search_depth(g, p, cfg)?;
        per_depth_s.push(t.elapsed().as_secs_f64());
        best = Some(select_best(&energies, best.as_ref())?.clone());
        candidates.extend(energies);
    }
    let best = best.expect("p_max >= 1");
    Ok(SearchResult {
        best: BestMixer {
            combination: best.combination,
            shared_beta: true,
            p: best.p,
            energy: best.energy,
            candidate_index: best.candidate_index,
        },
        candidates,
        timing: SearchTiming {
            total_s: start.elapsed().as_secs_f64(),
            per_depth_s,
        },
    })
}

/// Per-candidate aggregate across a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSummary {
    pub candidate_index: usize,
    pub p: usize,
    pub combination: GateCombination,
    pub mean_rank: f64,
    pub mean_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSearchResult {
    pub best: CandidateSummary,
    pub summaries: Vec<CandidateSummary>,
    pub per_graph: Vec<SearchResult>,
}

/// Searches every graph, then picks the candidate with the lowest mean
/// rank across graphs. Rank 1 is the highest energy on a graph; equal
/// energies share a rank. Ties on mean rank go to the lower index.
pub fn search_dataset(graphs: &[Graph], cfg: &SearchConfig) -> Result<DatasetSearchResult> {
    if graphs.is_empty() {
        return Err(QarchError::invalid("dataset contains no graphs"));
    }
    let per_graph = graphs
        .iter()
        .map(|g| search_mixer(g, cfg))
        .collect::<Result<Vec<_>>>()?;
    let n_cand = per_graph[0].candidates.len();
    let mut rank_sum = vec![0.0; n_cand];
    let mut energy_sum = vec![0.0; n_cand];
    for result in &per_graph {
        let energies: Vec<f64> = result.candidates.iter().map(|c| c.energy).collect();
        for (j, &e) in energies.iter().enumerate() {
            let rank = 1 + energies.iter().filter(|&&o| o > e).count();
            rank_sum[j] += rank as f64;
            energy_sum[j] += e;
        }
    }
    let n = per_graph.len() as f64;
    let summaries: Vec<CandidateSummary> = per_graph[0]
        .candidates
        .iter()
        .enumerate()
        .map(|(j, c)| CandidateSummary {
            candidate_index: c.candidate_index,
            p: c.p,
            combination: c.combination.clone(),
            mean_rank: rank_sum[j] / n,
            mean_energy: energy_sum[j] / n,
        })
        .collect();
    let best = summaries
        .iter()
        .reduce(|b, s| if s.mean_rank < b.mean_rank { s } else { b })
        .expect("non-empty candidate list")
        .clone();
    Ok(DatasetSearchResult {
        best,
        summaries,
        per_graph,
    })
}
