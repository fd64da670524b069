use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qarch_core::search::search_depth;
use qarch_core::{compare_mixers, evaluate_mixer, search_dataset, search_mixer, Dataset, MixerTag, SearchConfig};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::{BenchMode, GraphKind};
use crate::error::{CliError, CliResult};
use crate::manifest::{available_cores, BenchSpec, EvaluateSpec, GenGraphsSpec, SearchSpec};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("result types serialize infallibly");
    text.push('\n');
    write_text(path, &text)
}

fn warn_oversubscription(workers: usize) {
    let cores = available_cores();
    if workers > cores {
        eprintln!("warning: {workers} workers requested but only {cores} cores available");
    }
}

fn load_dataset(path: &Path) -> CliResult<Dataset> {
    let ds: Dataset = read_json(path)?;
    if ds.graphs.is_empty() {
        return Err(qarch_core::QarchError::InvalidArgument(format!("{} contains no graphs", path.display())).into());
    }
    Ok(ds)
}

pub fn gen_graphs(spec: &GenGraphsSpec) -> CliResult<Vec<PathBuf>> {
    let ds = match spec.kind {
        GraphKind::Er => Dataset::erdos_renyi(spec.n_graphs, spec.n_nodes, &spec.edge_probs, spec.seed)?,
        GraphKind::Regular => Dataset::random_regular(spec.n_graphs, spec.n_nodes, spec.degree, spec.seed)?,
    };
    write_json(&spec.out, &ds)?;
    println!("wrote {} graphs to {}", ds.graphs.len(), spec.out.display());
    Ok(vec![spec.out.clone()])
}

pub fn search(spec: &SearchSpec) -> CliResult<Vec<PathBuf>> {
    let ds = load_dataset(&spec.dataset)?;
    warn_oversubscription(spec.config.workers);
    if spec.aggregate {
        let result = search_dataset(&ds.graphs, &spec.config)?;
        let path = spec.out.join("aggregate.json");
        write_json(&path, &result)?;
        println!(
            "dataset best: {} at p={} (mean rank {:.3})",
            result.best.combination, result.best.p, result.best.mean_rank
        );
        return Ok(vec![path]);
    }
    let mut outputs = Vec::with_capacity(ds.graphs.len());
    for (i, g) in ds.graphs.iter().enumerate() {
        let result = search_mixer(g, &spec.config)?;
        let path = spec.out.join(format!("graph_{i:03}.json"));
        write_json(&path, &result)?;
        println!(
            "graph {i}: best {} at p={} energy={:.6} ({} candidates, {:.2}s)",
            result.best.combination,
            result.best.p,
            result.best.energy,
            result.candidates.len(),
            result.timing.total_s
        );
        outputs.push(path);
    }
    Ok(outputs)
}

pub fn evaluate(spec: &EvaluateSpec) -> CliResult<Vec<PathBuf>> {
    let ds = load_dataset(&spec.dataset)?;
    warn_oversubscription(spec.config.workers);
    let json_path = spec.out.join("evaluation.json");
    let csv_path = spec.out.join("evaluation.csv");
    let report = match &spec.baseline {
        Some(baseline) => {
            let cmp = compare_mixers(&spec.mixer, baseline, &ds.graphs, &spec.config)?;
            write_json(&json_path, &cmp)?;
            for d in &cmp.per_depth_delta {
                println!("p={}: mean delta {:+.6}", d.p, d.mean_delta);
            }
            println!("overall mean delta {:+.6}", cmp.overall_delta);
            cmp.report
        }
        None => {
            let report = evaluate_mixer(&spec.mixer, MixerTag::Searched, &ds.graphs, &spec.config)?;
            write_json(&json_path, &report)?;
            report
        }
    };
    for m in &report.per_depth {
        println!("{} p={}: mean ratio {:.6}", m.mixer, m.p, m.mean_ratio);
    }
    write_text(&csv_path, &report.to_csv())?;
    Ok(vec![json_path, csv_path])
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub mode: BenchMode,
    pub workers: usize,
    pub p: usize,
    pub graph_id: usize,
    pub rep: usize,
    pub wall_time_s: f64,
}

pub const BENCH_CSV_HEADER: &str = "mode,workers,p,graph_id,rep,wall_time_s";

/// Serial cells use one worker. Parallel cells with one worker would
/// duplicate them, so they are skipped.
fn bench_cells(spec: &BenchSpec) -> Vec<(BenchMode, usize)> {
    let mut cells = Vec::new();
    for &mode in &spec.modes {
        match mode {
            BenchMode::Serial => cells.push((mode, 1)),
            BenchMode::Parallel => cells.extend(spec.workers.iter().filter(|&&w| w > 1).map(|&w| (mode, w))),
        }
    }
    cells.dedup();
    cells
}

pub fn bench_records(spec: &BenchSpec) -> CliResult<Vec<BenchRecord>> {
    let ds = load_dataset(&spec.dataset)?;
    let n = spec.graphs.unwrap_or(ds.graphs.len()).min(ds.graphs.len());
    let cells = bench_cells(spec);
    if let Some(&(_, w)) = cells.iter().max_by_key(|c| c.1) {
        warn_oversubscription(w);
    }
    let mut records = Vec::new();
    for &p in &spec.depths {
        for (graph_id, g) in ds.graphs[..n].iter().enumerate() {
            for &(mode, workers) in &cells {
                let cfg = SearchConfig {
                    workers,
                    ..spec.config.clone()
                };
                for rep in 0..spec.reps {
                    let t = Instant::now();
                    search_depth(g, p, &cfg)?;
                    records.push(BenchRecord {
                        mode,
                        workers,
                        p,
                        graph_id,
                        rep,
                        wall_time_s: t.elapsed().as_secs_f64(),
                    });
                }
            }
        }
    }
    Ok(records)
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = format!("{BENCH_CSV_HEADER}\n");
    for r in records {
        let mode = match r.mode {
            BenchMode::Serial => "serial",
            BenchMode::Parallel => "parallel",
        };
        writeln!(
            out,
            "{mode},{},{},{},{},{}",
            r.workers, r.p, r.graph_id, r.rep, r.wall_time_s
        )
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn bench(spec: &BenchSpec) -> CliResult<Vec<PathBuf>> {
    let records = bench_records(spec)?;
    write_text(&spec.out, &bench_csv(&records))?;
    println!("wrote {} timing records to {}", records.len(), spec.out.display());
    Ok(vec![spec.out.clone()])
}
