//! Undirected simple graphs, seeded random generators and maxcut values.
//!
//! Nodes are `0..n_nodes`. A cut assignment gives each node a spin in
//! `{-1, +1}`; an edge contributes its weight when its endpoints disagree.
//! Basis-state bitmasks use the same convention as the simulator: bit `q`
//! clear means spin `+1`, bit `q` set means spin `-1`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QarchError, Result};
use crate::seeds::{derive_seed, rng_from_seed};

/// Largest graph the exhaustive maxcut oracle accepts by default.
pub const DEFAULT_BRUTEFORCE_CAP: usize = 24;

/// Attempts the pairing model gets before `random_regular` gives up.
pub const REGULAR_MAX_ATTEMPTS: usize = 1000;

/// Undirected simple graph with optional edge weights (default 1.0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = QarchError;

    fn try_from(raw: GraphJson) -> Result<Self> {
        let edges = raw.edges.into_iter().map(|[u, v]| (u, v)).collect();
        match raw.weights {
            Some(w) => Graph::with_weights(raw.n, edges, w),
            None => Graph::new(raw.n, edges),
        }
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n_nodes,
            edges: g.edges.into_iter().map(|(u, v)| [u, v]).collect(),
            weights: g.weights,
        }
    }
}

impl Graph {
    /// Builds an unweighted graph, validating node bounds, self-loops and duplicates.
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        validate_edges(n_nodes, &edges)?;
        Ok(Graph {
            n_nodes,
            edges,
            weights: None,
        })
    }

    pub fn with_weights(n_nodes: usize, edges: Vec<(usize, usize)>, weights: Vec<f64>) -> Result<Self> {
        validate_edges(n_nodes, &edges)?;
        if weights.len() != edges.len() {
            return Err(QarchError::invalid(format!(
                "{} weights given for {} edges",
                weights.len(),
                edges.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(QarchError::invalid(format!("non-finite edge weight {w}")));
        }
        Ok(Graph {
            n_nodes,
            edges,
            weights: Some(weights),
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, edge: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[edge])
    }

    pub fn total_weight(&self) -> f64 {
        match &self.weights {
            Some(w) => w.iter().sum(),
            None => self.edges.len() as f64,
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Iterates `(u, v, weight)` in edge order.
    pub fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().enumerate().map(|(i, &(u, v))| (u, v, self.weight(i)))
    }

    /// Cut value of the assignment encoded as a bitmask (bit set = spin -1).
    pub fn cut_value_bits(&self, bits: u64) -> f64 {
        self.weighted_edges()
            .filter(|&(u, v, _)| ((bits >> u) ^ (bits >> v)) & 1 == 1)
            .map(|(_, _, w)| w)
            .sum()
    }

    /// Returns the graph with node `i` renamed to `perm[i]`. Edge order is kept.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n_nodes {
            return Err(QarchError::invalid("permutation length does not match node count"));
        }
        let mut seen = vec![false; self.n_nodes];
        for &p in perm {
            if p >= self.n_nodes || std::mem::replace(&mut seen[p], true) {
                return Err(QarchError::invalid("not a permutation"));
            }
        }
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Ok(Graph {
            n_nodes: self.n_nodes,
            edges,
            weights: self.weights.clone(),
        })
    }
}

fn validate_edges(n_nodes: usize, edges: &[(usize, usize)]) -> Result<()> {
    if n_nodes == 0 {
        return Err(QarchError::invalid("graph must have at least one node"));
    }
    let mut seen = HashSet::with_capacity(edges.len());
    for &(u, v) in edges {
        if u >= n_nodes || v >= n_nodes {
            return Err(QarchError::invalid(format!(
                "edge ({u}, {v}) out of range for {n_nodes} nodes"
            )));
        }
        if u == v {
            return Err(QarchError::invalid(format!("self-loop on node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(QarchError::invalid(format!("duplicate edge ({u}, {v})")));
        }
    }
    Ok(())
}

/// Spin assignment, one entry in `{-1, +1}` per node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CutAssignment(Vec<i8>);

impl CutAssignment {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(s) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(QarchError::invalid(format!("spin {s} is not +1 or -1")));
        }
        Ok(CutAssignment(spins))
    }

    /// Decodes a bitmask over `n` nodes (bit set = spin -1).
    pub fn from_bits(bits: u64, n: usize) -> Self {
        CutAssignment((0..n).map(|q| if (bits >> q) & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn to_bits(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == -1)
            .fold(0, |acc, (q, _)| acc | (1 << q))
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flipped(&self) -> Self {
        CutAssignment(self.0.iter().map(|s| -s).collect())
    }
}

/// `½ Σ w_uv (1 − z_u z_v)` over the graph's edges.
pub fn cut_value(g: &Graph, z: &CutAssignment) -> Result<f64> {
    if z.len() != g.n_nodes() {
        return Err(QarchError::invalid(format!(
            "assignment has {} spins, graph has {} nodes",
            z.len(),
            g.n_nodes()
        )));
    }
    let s = z.spins();
    Ok(g.weighted_edges()
        .map(|(u, v, w)| 0.5 * w * (1.0 - f64::from(s[u] * s[v])))
        .sum())
}

/// Exact maxcut value with one maximizing assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxCut {
    pub value: f64,
    pub argmax: CutAssignment,
}

/// Exhaustive maxcut with the default node cap.
pub fn maxcut_bruteforce(g: &Graph) -> Result<MaxCut> {
    maxcut_bruteforce_capped(g, DEFAULT_BRUTEFORCE_CAP)
}

/// Enumerates the `2^(n-1)` assignments with node 0 fixed to spin `+1`.
/// The lowest bit encoding among maximizers is returned.
pub fn maxcut_bruteforce_capped(g: &Graph, cap: usize) -> Result<MaxCut> {
    let n = g.n_nodes();
    if n > cap {
        return Err(QarchError::SizeLimit {
            what: "maxcut oracle node count",
            actual: n,
            limit: cap,
        });
    }
    let mut best_bits = 0u64;
    let mut best = g.cut_value_bits(0);
    for half in 1..(1u64 << (n - 1)) {
        let bits = half << 1;
        let value = g.cut_value_bits(bits);
        if value > best {
            best = value;
            best_bits = bits;
        }
    }
    Ok(MaxCut {
        value: best,
        argmax: CutAssignment::from_bits(best_bits, n),
    })
}

/// G(n, p) random graph. Pairs `(u, v)`, `u < v`, are visited in
/// lexicographic order and each is kept with probability `edge_prob`.
pub fn erdos_renyi(n: usize, edge_prob: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(QarchError::invalid("graph must have at least one node"));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(QarchError::invalid(format!(
            "edge probability {edge_prob} outside [0, 1]"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < edge_prob {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random `d`-regular graph via the pairing model, restarting from scratch
/// whenever a pairing produces a self-loop or multi-edge.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(QarchError::invalid("graph must have at least one node"));
    }
    if d >= n {
        return Err(QarchError::invalid(format!("degree {d} must be below node count {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(QarchError::invalid(format!("n * d = {} is odd", n * d)));
    }
    let mut rng = rng_from_seed(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..REGULAR_MAX_ATTEMPTS {
        points.shuffle(&mut rng);
        let mut seen = HashSet::with_capacity(points.len() / 2);
        let mut edges = Vec::with_capacity(points.len() / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        return Graph::new(n, edges);
    }
    Err(QarchError::GenerationFailed {
        attempts: REGULAR_MAX_ATTEMPTS,
        reason: format!("no simple {d}-regular pairing on {n} nodes"),
    })
}

/// Generator family recorded in dataset files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphFamily {
    ErdosRenyi { edge_probs: Vec<f64> },
    Regular { degree: usize },
}

/// A seeded collection of graphs, stored as
/// `{"seed": .., "family": {..}, "graphs": [{"n": .., "edges": [[u, v], ..]}, ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<GraphFamily>,
    pub graphs: Vec<Graph>,
}

impl Dataset {
    /// `n_graphs` Erdős–Rényi graphs; graph `i` uses `edge_probs[i % len]`
    /// and the seed derived from `(seed, i)`.
    pub fn erdos_renyi(n_graphs: usize, n_nodes: usize, edge_probs: &[f64], seed: u64) -> Result<Self> {
        if edge_probs.is_empty() {
            return Err(QarchError::invalid("at least one edge probability is required"));
        }
        let graphs = (0..n_graphs)
            .map(|i| erdos_renyi(n_nodes, edge_probs[i % edge_probs.len()], derive_seed(seed, i as u64)))
            .collect::<Result<_>>()?;
        Ok(Dataset {
            seed,
            family: Some(GraphFamily::ErdosRenyi {
                edge_probs: edge_probs.to_vec(),
            }),
            graphs,
        })
    }

    pub fn random_regular(n_graphs: usize, n_nodes: usize, degree: usize, seed: u64) -> Result<Self> {
        let graphs = (0..n_graphs)
            .map(|i| random_regular(n_nodes, degree, derive_seed(seed, i as u64)))
            .collect::<Result<_>>()?;
        Ok(Dataset {
            seed,
            family: Some(GraphFamily::Regular { degree }),
            graphs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn four_cycle() -> Graph {
        Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn cut_value_examples() {
        let edge = Graph::new(2, vec![(0, 1)]).unwrap();
        let z = CutAssignment::new(vec![1, -1]).unwrap();
        assert_eq!(cut_value(&edge, &z).unwrap(), 1.0);

        let all_up = CutAssignment::new(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(cut_value(&four_cycle(), &all_up).unwrap(), 0.0);

        let z = CutAssignment::new(vec![1, 1, -1]).unwrap();
        assert_eq!(cut_value(&triangle(), &z).unwrap(), 2.0);
    }

    #[test]
    fn cut_value_rejects_length_mismatch() {
        let z = CutAssignment::new(vec![1, -1]).unwrap();
        assert!(matches!(
            cut_value(&triangle(), &z),
            Err(QarchError::InvalidArgument(_))
        ));
    }

    #[test]
    fn weighted_cut() {
        let g = Graph::with_weights(3, vec![(0, 1), (1, 2)], vec![2.5, 0.5]).unwrap();
        let z = CutAssignment::new(vec![1, -1, -1]).unwrap();
        assert_eq!(cut_value(&g, &z).unwrap(), 2.5);
        assert_eq!(maxcut_bruteforce(&g).unwrap().value, 3.0);
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(0, vec![]).is_err());
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
        assert!(Graph::new(2, vec![(1, 1)]).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::with_weights(2, vec![(0, 1)], vec![]).is_err());
    }

    #[test]
    fn bruteforce_small_graphs() {
        let edge = Graph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(maxcut_bruteforce(&edge).unwrap().value, 1.0);
        assert_eq!(maxcut_bruteforce(&four_cycle()).unwrap().value, 4.0);
        let tri = maxcut_bruteforce(&triangle()).unwrap();
        assert_eq!(tri.value, 2.0);
        // lowest encoding with z_0 = +1 achieving 2 is bits 0b010
        assert_eq!(tri.argmax.to_bits(), 0b010);
        assert_eq!(cut_value(&triangle(), &tri.argmax).unwrap(), 2.0);
    }

    #[test]
    fn bruteforce_single_node_and_cap() {
        let g = Graph::new(1, vec![]).unwrap();
        assert_eq!(maxcut_bruteforce(&g).unwrap().value, 0.0);
        let big = Graph::new(5, vec![]).unwrap();
        assert!(matches!(
            maxcut_bruteforce_capped(&big, 4),
            Err(QarchError::SizeLimit {
                actual: 5,
                limit: 4,
                ..
            })
        ));
    }

    #[test]
    fn erdos_renyi_extremes() {
        assert_eq!(erdos_renyi(5, 0.0, 3).unwrap().n_edges(), 0);
        assert_eq!(erdos_renyi(5, 1.0, 3).unwrap().n_edges(), 10);
        assert_eq!(erdos_renyi(10, 0.5, 3).unwrap().n_nodes(), 10);
        assert!(erdos_renyi(5, 1.5, 3).is_err());
        assert!(erdos_renyi(5, -0.1, 3).is_err());
    }

    #[test]
    fn random_regular_examples() {
        let g = random_regular(10, 4, 11).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 4));
        assert_eq!(g.n_edges(), 20);
        assert_eq!(random_regular(6, 0, 1).unwrap().n_edges(), 0);
        assert!(matches!(random_regular(5, 3, 1), Err(QarchError::InvalidArgument(_))));
        assert!(random_regular(4, 4, 1).is_err());
    }

    #[test]
    fn graph_json_format() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
        let back: Graph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        let weighted: Graph = serde_json::from_str(r#"{"n":2,"edges":[[0,1]],"weights":[0.5]}"#).unwrap();
        assert_eq!(weighted.total_weight(), 0.5);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn dataset_rotates_edge_probabilities() {
        let ds = Dataset::erdos_renyi(6, 8, &[0.0, 1.0], 5).unwrap();
        assert_eq!(ds.graphs.len(), 6);
        for (i, g) in ds.graphs.iter().enumerate() {
            assert_eq!(g.n_edges(), if i % 2 == 0 { 0 } else { 28 });
        }
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..9, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, p, s)| erdos_renyi(n, p, s).unwrap())
    }

    proptest! {
        #[test]
        fn cut_is_flip_symmetric_and_bounded(g in arb_graph(), bits in any::<u64>()) {
            let z = CutAssignment::from_bits(bits & ((1 << g.n_nodes()) - 1), g.n_nodes());
            let c = cut_value(&g, &z).unwrap();
            prop_assert_eq!(c, cut_value(&g, &z.flipped()).unwrap());
            prop_assert!(c >= 0.0 && c <= g.total_weight());
            prop_assert_eq!(c, g.cut_value_bits(z.to_bits()));
            prop_assert!(c <= maxcut_bruteforce(&g).unwrap().value);
        }

        #[test]
        fn generators_are_reproducible(n in 2usize..12, p in 0.0f64..=1.0, seed in any::<u64>()) {
            prop_assert_eq!(erdos_renyi(n, p, seed).unwrap(), erdos_renyi(n, p, seed).unwrap());
            let d = if n % 2 == 0 { 3.min(n - 1) } else { 2.min(n - 1) };
            let g = random_regular(n, d, seed).unwrap();
            prop_assert_eq!(&g, &random_regular(n, d, seed).unwrap());
            prop_assert!(g.degrees().iter().all(|&x| x == d));
        }
    }
}
