//! Derivative-free variational optimization under a fixed evaluation budget.
//!
//! The local method is COBYLA (linear models on a simplex inside a shrinking
//! trust region), applied to `−⟨C⟩` so that the expected cut is maximized.

use std::cell::RefCell;
use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::QaoaAnsatz;
use crate::error::{QarchError, Result};
use crate::graphs::Graph;
use crate::seeds::rng_from_seed;
use crate::simulator::{ansatz_expectation, init_plus_state};

/// `⟨C⟩` is snapped to this grid before the optimizer sees it, so circuits
/// that agree up to rounding (e.g. relabeled graphs) follow the same path.
pub const OBJECTIVE_RESOLUTION: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialParams {
    /// Every parameter starts at the same value (radians).
    Fill(f64),
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Objective evaluation budget for the whole run, restarts included.
    pub max_iters: usize,
    pub initial_params: InitialParams,
    pub rng_seed: u64,
    /// Extra starts drawn uniformly with `γ ∈ [0, 2π)`, `β ∈ [0, π)`.
    /// The budget is split evenly across all starts.
    pub restarts: usize,
    pub rho_begin: f64,
    pub rho_end: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iters: 200,
            initial_params: InitialParams::Fill(0.1),
            rng_seed: 0,
            restarts: 0,
            rho_begin: 0.5,
            rho_end: 1e-4,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(QarchError::invalid("max_iters must be at least 1"));
        }
        if self.max_iters < self.restarts + 1 {
            return Err(QarchError::invalid("max_iters must cover one evaluation per start"));
        }
        if !(self.rho_begin > 0.0 && self.rho_end > 0.0 && self.rho_end <= self.rho_begin) {
            return Err(QarchError::invalid(
                "trust region radii must satisfy 0 < rho_end <= rho_begin",
            ));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        OptimizerConfig {
            rng_seed: seed,
            ..self.clone()
        }
    }

    fn initial_point(&self, dim: usize) -> Result<Vec<f64>> {
        match &self.initial_params {
            InitialParams::Fill(v) => Ok(vec![*v; dim]),
            InitialParams::Explicit(x) if x.len() == dim => Ok(x.clone()),
            InitialParams::Explicit(x) => Err(QarchError::invalid(format!(
                "{} initial parameters given, {dim} expected",
                x.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// 1-based evaluation number.
    pub evaluation: usize,
    pub value: f64,
    /// Best value seen up to and including this evaluation.
    pub best: f64,
}

/// Outcome of one optimization. For [`optimize_ansatz`] values are `⟨C⟩`
/// (maximized); for [`minimize`] they are raw objective values (minimized).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationRecord {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    pub trace: Vec<TracePoint>,
}

struct Tracker {
    budget: usize,
    best_x: Vec<f64>,
    best_f: f64,
    trace: Vec<TracePoint>,
}

impl Tracker {
    fn record(&mut self, x: &[f64], f: f64) {
        if self.trace.is_empty() || f < self.best_f {
            self.best_f = f;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
        }
        self.trace.push(TracePoint {
            evaluation: self.trace.len() + 1,
            value: f,
            best: self.best_f,
        });
    }
}

fn run_cobyla(tracker: &RefCell<Tracker>, f: &dyn Fn(&[f64]) -> f64, x0: &[f64], budget: usize, cfg: &OptimizerConfig) {
    let start = tracker.borrow().trace.len();
    tracker.borrow_mut().budget = start + budget;
    let objective = |x: &[f64], _: &mut ()| {
        let t = tracker.borrow_mut();
        if t.trace.len() >= t.budget {
            // out of budget: report the incumbent so the solver stops improving
            return t.best_f;
        }
        drop(t);
        let v = f(x);
        tracker.borrow_mut().record(x, v);
        v
    };
    if budget == 1 {
        objective(x0, &mut ());
        return;
    }
    let bounds = vec![(-f64::INFINITY, f64::INFINITY); x0.len()];
    let no_constraints: &[fn(&[f64], &mut ()) -> f64] = &[];
    let stop = cobyla::StopTols {
        xtol_abs: vec![cfg.rho_end; x0.len()],
        ..cobyla::StopTols::default()
    };
    // Termination status carries no information the tracker lacks.
    let _ = cobyla::minimize(
        objective,
        x0,
        &bounds,
        no_constraints,
        (),
        budget,
        cobyla::RhoBeg::All(cfg.rho_begin),
        Some(stop),
    );
}

fn new_tracker(dim: usize) -> RefCell<Tracker> {
    RefCell::new(Tracker {
        budget: 0,
        best_x: vec![0.0; dim],
        best_f: f64::INFINITY,
        trace: Vec::new(),
    })
}

fn into_record(t: Tracker) -> OptimizationRecord {
    OptimizationRecord {
        best_params: t.best_x,
        best_value: t.best_f,
        evaluations: t.trace.len(),
        trace: t.trace,
    }
}

/// Minimizes an arbitrary objective with the configured budget from `x0`.
/// Restarts are not used here; see [`optimize_ansatz`].
pub fn minimize(f: impl Fn(&[f64]) -> f64, x0: &[f64], cfg: &OptimizerConfig) -> Result<OptimizationRecord> {
    cfg.validate()?;
    if x0.is_empty() {
        return Err(QarchError::invalid("cannot optimize zero parameters"));
    }
    let tracker = new_tracker(x0.len());
    run_cobyla(&tracker, &f, x0, cfg.max_iters, cfg);
    Ok(into_record(tracker.into_inner()))
}

/// Maximizes `⟨C⟩` of the ansatz on `g` over its `2p` parameters.
pub fn optimize_ansatz(a: &QaoaAnsatz, g: &Graph, cfg: &OptimizerConfig) -> Result<OptimizationRecord> {
    cfg.validate()?;
    if a.graph() != g {
        return Err(QarchError::invalid("ansatz was built for a different graph"));
    }
    let dim = a.parameter_count();
    let p = a.depth();
    let workspace = RefCell::new(init_plus_state(a.n_qubits())?);
    // parameter count is validated once here, so the closure cannot fail
    let objective = |x: &[f64]| -> f64 {
        let e = ansatz_expectation(a, x, &mut workspace.borrow_mut()).expect("parameter count checked");
        -(e / OBJECTIVE_RESOLUTION).round() * OBJECTIVE_RESOLUTION
    };

    let starts = cfg.restarts + 1;
    let mut rng = rng_from_seed(cfg.rng_seed);
    let tracker = new_tracker(dim);
    for start in 0..starts {
        let x0 = if start == 0 {
            cfg.initial_point(dim)?
        } else {
            (0..dim)
                .map(|i| {
                    if i < p {
                        rng.random_range(0.0..TAU)
                    } else {
                        rng.random_range(0.0..PI)
                    }
                })
                .collect()
        };
        let budget = cfg.max_iters / starts + usize::from(start < cfg.max_iters % starts);
        run_cobyla(&tracker, &objective, &x0, budget, cfg);
    }

    let mut record = into_record(tracker.into_inner());
    record.best_value = -record.best_value;
    for t in &mut record.trace {
        t.value = -t.value;
        t.best = -t.best;
    }
    Ok(record)
}
