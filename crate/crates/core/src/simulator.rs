//! Dense statevector simulation of QAOA circuits.
//!
//! Basis index `b` encodes qubit `q` as bit `q` of `b`. Bit clear is `|0⟩`
//! (spin `+1`), bit set is `|1⟩` (spin `-1`), matching [`Graph::cut_value_bits`].
//!
//! Rotations follow `R_P(θ) = exp(−i θ/2 P)` for `P ∈ {X, Y, Z, X⊗X, Y⊗Y}`.
//! The cost block multiplies amplitude `b` by `exp(−i γ C(b))`.

use num_complex::Complex64;

use crate::circuits::{GateKind, QaoaAnsatz, Target};
use crate::error::{QarchError, Result};
use crate::graphs::Graph;

pub const MAX_QUBITS: usize = 24;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(QarchError::SizeLimit {
            what: "qubit count",
            actual: n,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

impl Statevector {
    /// Wraps raw amplitudes. The length must be `2^n_qubits`; the norm is not checked.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return Err(QarchError::invalid(format!(
                "{} amplitudes for {n_qubits} qubits",
                amps.len()
            )));
        }
        Ok(Statevector { n_qubits, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        if index >= 1 << n_qubits {
            return Err(QarchError::invalid(format!("basis index {index} out of range")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    fn reset_plus(&mut self) {
        let a = Complex64::new((self.amps.len() as f64).sqrt().recip(), 0.0);
        self.amps.fill(a);
    }

    pub fn apply_phase_mut(&mut self, cost: &CostDiagonal, gamma: f64) {
        let table: Vec<Complex64> = cost
            .distinct
            .iter()
            .map(|&c| Complex64::from_polar(1.0, -gamma * c))
            .collect();
        for (a, &lvl) in self.amps.iter_mut().zip(&cost.levels) {
            *a *= table[lvl as usize];
        }
    }

    /// Applies a rotation in place. Targets must already be validated.
    pub fn apply_gate_mut(&mut self, kind: GateKind, target: Target, angle: f64) {
        let (s, c) = (0.5 * angle).sin_cos();
        match (kind, target) {
            (GateKind::RX, Target::Qubit(q)) => {
                let (c, mis) = (Complex64::new(c, 0.0), Complex64::new(0.0, -s));
                self.for_each_pair(1 << q, |a0, a1| (c * a0 + mis * a1, mis * a0 + c * a1));
            }
            (GateKind::RY, Target::Qubit(q)) => {
                self.for_each_pair(1 << q, |a0, a1| (a0 * c - a1 * s, a0 * s + a1 * c));
            }
            (GateKind::RZ, Target::Qubit(q)) => {
                let (lo, hi) = (Complex64::new(c, -s), Complex64::new(c, s));
                self.for_each_pair(1 << q, |a0, a1| (a0 * lo, a1 * hi));
            }
            (GateKind::RXX, Target::Edge(u, v)) => {
                let mis = Complex64::new(0.0, -s);
                let flip = (1 << u) | (1 << v);
                for b in 0..self.amps.len() {
                    if b & (1 << u) == 0 {
                        let (a0, a1) = (self.amps[b], self.amps[b ^ flip]);
                        self.amps[b] = a0 * c + mis * a1;
                        self.amps[b ^ flip] = a1 * c + mis * a0;
                    }
                }
            }
            (GateKind::RYY, Target::Edge(u, v)) => {
                let flip = (1 << u) | (1 << v);
                for b in 0..self.amps.len() {
                    if b & (1 << u) == 0 {
                        // Y⊗Y |b⟩ = σ |b ⊕ flip⟩, σ = −1 when the two bits agree
                        let sigma = if (b >> v) & 1 == 0 { -1.0 } else { 1.0 };
                        let k = -I * (s * sigma);
                        let (a0, a1) = (self.amps[b], self.amps[b ^ flip]);
                        self.amps[b] = a0 * c + k * a1;
                        self.amps[b ^ flip] = a1 * c + k * a0;
                    }
                }
            }
            _ => unreachable!("gate arity checked by caller"),
        }
    }

    fn for_each_pair(&mut self, mask: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        for base in (0..self.amps.len()).step_by(mask << 1) {
            for i in base..base + mask {
                let (a0, a1) = f(self.amps[i], self.amps[i | mask]);
                self.amps[i] = a0;
                self.amps[i | mask] = a1;
            }
        }
    }

    /// `Σ_b |ψ_b|² C(b)`.
    pub fn expectation(&self, cost: &CostDiagonal) -> f64 {
        self.amps.iter().zip(&cost.values).map(|(a, &c)| a.norm_sqr() * c).sum()
    }
}

/// Cut value of every basis state, plus a level index into the distinct
/// values so each cost block needs one complex exponential per level.
#[derive(Debug, Clone)]
pub struct CostDiagonal {
    n_qubits: usize,
    values: Vec<f64>,
    distinct: Vec<f64>,
    levels: Vec<u32>,
}

impl CostDiagonal {
    pub fn new(g: &Graph) -> Result<Self> {
        let n = g.n_nodes();
        check_qubits(n)?;
        let values: Vec<f64> = (0..1u64 << n).map(|b| g.cut_value_bits(b)).collect();
        let mut distinct = values.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        let levels = values
            .iter()
            .map(|v| distinct.binary_search_by(|d| d.total_cmp(v)).unwrap() as u32)
            .collect();
        Ok(CostDiagonal {
            n_qubits: n,
            values,
            distinct,
            levels,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.distinct.last().copied().unwrap_or(0.0)
    }
}

fn check_dims(s: &Statevector, g: &Graph) -> Result<()> {
    if s.n_qubits != g.n_nodes() {
        return Err(QarchError::invalid(format!(
            "statevector has {} qubits, graph has {} nodes",
            s.n_qubits,
            g.n_nodes()
        )));
    }
    Ok(())
}

/// `|+⟩^⊗n`.
pub fn init_plus_state(n: usize) -> Result<Statevector> {
    check_qubits(n)?;
    let mut s = Statevector {
        n_qubits: n,
        amps: vec![Complex64::default(); 1 << n],
    };
    s.reset_plus();
    Ok(s)
}

pub fn apply_cost_phase(mut s: Statevector, g: &Graph, gamma: f64) -> Result<Statevector> {
    check_dims(&s, g)?;
    s.apply_phase_mut(&CostDiagonal::new(g)?, gamma);
    Ok(s)
}

pub fn apply_rotation(mut s: Statevector, gate: GateKind, target: Target, angle: f64) -> Result<Statevector> {
    let n = s.n_qubits;
    match (gate.arity(), target) {
        (1, Target::Qubit(q)) if q < n => {}
        (2, Target::Edge(u, v)) if u < n && v < n && u != v => {}
        _ => {
            return Err(QarchError::invalid(format!(
                "{gate} cannot target {target:?} on {n} qubits"
            )))
        }
    }
    s.apply_gate_mut(gate, target, angle);
    Ok(s)
}

pub fn expectation_cut(s: &Statevector, g: &Graph) -> Result<f64> {
    check_dims(s, g)?;
    Ok(s.expectation(&CostDiagonal::new(g)?))
}

fn check_params(a: &QaoaAnsatz, params: &[f64]) -> Result<()> {
    if params.len() != a.parameter_count() {
        return Err(QarchError::invalid(format!(
            "ansatz of depth {} takes {} parameters, got {}",
            a.depth(),
            a.parameter_count(),
            params.len()
        )));
    }
    Ok(())
}

/// Runs the ansatz from `|+⟩^n` with `params = [γ_1..γ_p, β_1..β_p]`.
pub fn simulate_ansatz(a: &QaoaAnsatz, params: &[f64]) -> Result<Statevector> {
    check_params(a, params)?;
    let mut s = init_plus_state(a.n_qubits())?;
    run_layers(a, params, &mut s);
    Ok(s)
}

/// Like [`simulate_ansatz`] but reuses `workspace`, returning `⟨C⟩`.
pub fn ansatz_expectation(a: &QaoaAnsatz, params: &[f64], workspace: &mut Statevector) -> Result<f64> {
    check_params(a, params)?;
    if workspace.n_qubits != a.n_qubits() {
        *workspace = init_plus_state(a.n_qubits())?;
    }
    workspace.reset_plus();
    run_layers(a, params, workspace);
    Ok(workspace.expectation(a.cost()))
}

fn run_layers(a: &QaoaAnsatz, params: &[f64], s: &mut Statevector) {
    debug_assert_eq!(a.cost().n_qubits, s.n_qubits);
    let (gammas, betas) = params.split_at(a.depth());
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        s.apply_phase_mut(a.cost(), gamma);
        for gate in a.mixer().gates() {
            s.apply_gate_mut(gate.kind, gate.target, 2.0 * beta);
        }
    }
}
