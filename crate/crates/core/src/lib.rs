//! Quantum architecture search for QAOA maxcut mixers.
//!
//! Candidate mixer layers are composed from a small alphabet of rotation
//! gates, each candidate is variationally optimized on a dense statevector
//! simulator, and the best-performing mixer is selected per depth.
//!
//! The crate is organized bottom-up:
//!
//! - [`graphs`]: graphs, seeded generators, cut values and an exact maxcut oracle.
//! - [`simulator`]: statevector simulation of the QAOA operator sequence.
//! - [`circuits`]: gate alphabet, candidate enumeration, mixer and ansatz assembly.
//! - [`optimizer`]: derivative-free parameter optimization under an evaluation budget.
//! - [`search`]: the search loop with serial and deterministic parallel executors.
//! - [`evaluator`]: approximation ratios and paired baseline comparisons.

pub mod circuits;
pub mod error;
pub mod evaluator;
pub mod graphs;
pub mod optimizer;
pub mod search;
pub mod seeds;
pub mod simulator;

pub use circuits::{
    build_mixer, build_qaoa, gate_combinations, GateCombination, GateKind, MixerGate, MixerLayer, QaoaAnsatz, Target,
};
pub use error::{QarchError, Result};
pub use evaluator::{
    approximation_ratio, compare_mixers, evaluate_mixer, EvalConfig, EvaluationReport, MixerComparison, MixerTag,
};
pub use graphs::{cut_value, erdos_renyi, maxcut_bruteforce, random_regular, CutAssignment, Dataset, Graph, MaxCut};
pub use optimizer::{minimize, optimize_ansatz, InitialParams, OptimizationRecord, OptimizerConfig};
pub use search::{
    parallel_map_candidates, search_dataset, search_mixer, select_best, CandidateResult, DatasetSearchResult,
    EnumerationMode, SearchConfig, SearchResult,
};
pub use simulator::{apply_cost_phase, apply_rotation, expectation_cut, init_plus_state, simulate_ansatz, Statevector};
