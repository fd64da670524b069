//! Reference implementations used only by tests. They share no code path
//! with the simulator: operators are assembled as explicit dense matrices
//! and cut values are computed straight from spin products.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use qarch_core::{GateKind, Graph};

pub type Matrix = Vec<Vec<C>>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli(kind: char) -> [[C; 2]; 2] {
    match kind {
        'X' => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        'Y' => [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
        'Z' => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
        _ => unreachable!(),
    }
}

/// exp(−i θ/2 P) = cos(θ/2) I − i sin(θ/2) P for an involutory P.
fn exp_pauli(p: &Matrix, theta: f64) -> Matrix {
    let d = p.len();
    let (s, co) = (theta / 2.0).sin_cos();
    (0..d)
        .map(|r| {
            (0..d)
                .map(|k| {
                    let id = if r == k { c(co, 0.) } else { c(0., 0.) };
                    id + c(0., -s) * p[r][k]
                })
                .collect()
        })
        .collect()
}

fn kron2(a: [[C; 2]; 2], b: [[C; 2]; 2]) -> Matrix {
    // row index = 2 * (first-qubit bit) + (second-qubit bit)
    let mut m = vec![vec![c(0., 0.); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    m
}

/// The local unitary of a gate, over its own 1 or 2 qubits.
pub fn local_gate(kind: GateKind, theta: f64) -> Matrix {
    let p: Matrix = match kind {
        GateKind::RX => pauli('X').iter().map(|r| r.to_vec()).collect(),
        GateKind::RY => pauli('Y').iter().map(|r| r.to_vec()).collect(),
        GateKind::RZ => pauli('Z').iter().map(|r| r.to_vec()).collect(),
        GateKind::RXX => kron2(pauli('X'), pauli('X')),
        GateKind::RYY => kron2(pauli('Y'), pauli('Y')),
    };
    exp_pauli(&p, theta)
}

/// Embeds a local gate acting on `qubits` (in local row order) into the full
/// 2^n space; qubit q is bit q of the basis index.
pub fn embed(local: &Matrix, qubits: &[usize], n: usize) -> Matrix {
    let dim = 1 << n;
    let mask: usize = qubits.iter().map(|q| 1 << q).sum();
    let local_index = |b: usize| qubits.iter().fold(0, |acc, &q| (acc << 1) | ((b >> q) & 1));
    let mut m = vec![vec![c(0., 0.); dim]; dim];
    for r in 0..dim {
        for k in 0..dim {
            if r & !mask == k & !mask {
                m[r][k] = local[local_index(r)][local_index(k)];
            }
        }
    }
    m
}

pub fn spin_cut(g: &Graph, b: usize) -> f64 {
    let z = |q: usize| if (b >> q) & 1 == 0 { 1.0 } else { -1.0 };
    g.edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| 0.5 * g.weights().map_or(1.0, |w| w[i]) * (1.0 - z(u) * z(v)))
        .sum()
}

pub fn cost_matrix(g: &Graph, gamma: f64) -> Matrix {
    let dim = 1 << g.n_nodes();
    let mut m = vec![vec![c(0., 0.); dim]; dim];
    for (b, row) in m.iter_mut().enumerate() {
        row[b] = C::from_polar(1.0, -gamma * spin_cut(g, b));
    }
    m
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    let mut out = vec![vec![c(0., 0.); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == c(0., 0.) {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn apply(m: &Matrix, v: &[C]) -> Vec<C> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Dense QAOA state: |+⟩, then per layer the cost matrix and every mixer
/// gate (combination order, nodes ascending or edges in graph order) at 2β.
pub fn dense_qaoa_state(g: &Graph, mixer: &[GateKind], gammas: &[f64], betas: &[f64]) -> Vec<C> {
    let n = g.n_nodes();
    let dim = 1 << n;
    let mut total: Matrix = (0..dim)
        .map(|r| (0..dim).map(|k| if r == k { c(1., 0.) } else { c(0., 0.) }).collect())
        .collect();
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        total = matmul(&cost_matrix(g, gamma), &total);
        for &kind in mixer {
            let local = local_gate(kind, 2.0 * beta);
            let targets: Vec<Vec<usize>> = if kind.arity() == 1 {
                (0..n).map(|q| vec![q]).collect()
            } else {
                g.edges().iter().map(|&(u, v)| vec![u, v]).collect()
            };
            for t in targets {
                total = matmul(&embed(&local, &t, n), &total);
            }
        }
    }
    let plus = vec![c((dim as f64).sqrt().recip(), 0.); dim];
    apply(&total, &plus)
}

pub fn dense_expectation(g: &Graph, state: &[C]) -> f64 {
    state
        .iter()
        .enumerate()
        .map(|(b, a)| a.norm_sqr() * spin_cut(g, b))
        .sum()
}

/// Exhaustive maxcut over all 2^n assignments (no symmetry reduction).
pub fn exhaustive_maxcut(g: &Graph) -> f64 {
    (0..1usize << g.n_nodes())
        .map(|b| spin_cut(g, b))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Closed-form p = 1 expected cut for the RX mixer on an unweighted graph:
/// per edge, ½ + ¼ sin4β sinγ (cos^{d_u}γ + cos^{d_v}γ)
///        − ¼ sin²2β cos^{d_u + d_v − 2λ}γ (1 − cos^λ 2γ),
/// with d the other-neighbour counts and λ the triangles on the edge.
pub fn p1_rx_expectation(g: &Graph, gamma: f64, beta: f64) -> f64 {
    let n = g.n_nodes();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let deg = |x: usize| adj[x].iter().filter(|&&a| a).count() as i32;
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let du = deg(u) - 1;
            let dv = deg(v) - 1;
            let lambda = (0..n).filter(|&w| adj[u][w] && adj[v][w]).count() as i32;
            0.5 + 0.25 * (4.0 * beta).sin() * gamma.sin() * (gamma.cos().powi(du) + gamma.cos().powi(dv))
                - 0.25
                    * (2.0 * beta).sin().powi(2)
                    * gamma.cos().powi(du + dv - 2 * lambda)
                    * (1.0 - (2.0 * gamma).cos().powi(lambda))
        })
        .sum()
}

/// Maximum of the closed-form landscape on a `points × points` grid over [0, π]².
pub fn p1_rx_grid_max(g: &Graph, points: usize) -> f64 {
    let step = std::f64::consts::PI / (points - 1) as f64;
    let mut best = f64::NEG_INFINITY;
    for i in 0..points {
        for j in 0..points {
            best = best.max(p1_rx_expectation(g, i as f64 * step, j as f64 * step));
        }
    }
    best
}
