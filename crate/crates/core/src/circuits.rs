//! Gate alphabet, candidate enumeration and QAOA ansatz assembly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QarchError, Result};
use crate::graphs::Graph;
use crate::simulator::CostDiagonal;

/// Parameterized rotation gates available to the mixer search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    RXX,
    RYY,
}

impl GateKind {
    /// The default search alphabet, in enumeration order.
    pub const ALPHABET: [GateKind; 5] = [GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::RXX, GateKind::RYY];

    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ => 1,
            GateKind::RXX | GateKind::RYY => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::RXX => "RXX",
            GateKind::RYY => "RYY",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = QarchError;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALPHABET
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| QarchError::invalid(format!("unknown gate '{s}'")))
    }
}

/// Parses a comma-separated gate list such as `RX,RY`.
pub fn parse_gate_list(s: &str) -> Result<Vec<GateKind>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// Ordered, non-empty sequence of gates forming one mixer layer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<GateKind>", into = "Vec<GateKind>")]
pub struct GateCombination(Vec<GateKind>);

impl GateCombination {
    pub fn new(gates: Vec<GateKind>) -> Result<Self> {
        if gates.is_empty() {
            return Err(QarchError::invalid("gate combination must not be empty"));
        }
        Ok(GateCombination(gates))
    }

    /// The textbook transverse-field mixer, `RX(2β)` on every qubit.
    pub fn baseline() -> Self {
        GateCombination(vec![GateKind::RX])
    }

    pub fn gates(&self) -> &[GateKind] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<GateKind>> for GateCombination {
    type Error = QarchError;

    fn try_from(v: Vec<GateKind>) -> Result<Self> {
        GateCombination::new(v)
    }
}

impl From<GateCombination> for Vec<GateKind> {
    fn from(c: GateCombination) -> Self {
        c.0
    }
}

impl fmt::Display for GateCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(g.name())?;
        }
        Ok(())
    }
}

impl FromStr for GateCombination {
    type Err = QarchError;

    fn from_str(s: &str) -> Result<Self> {
        GateCombination::new(parse_gate_list(s)?)
    }
}

/// All ordered length-`k` sequences over `alphabet` (with repetition), in
/// lexicographic order of alphabet position. Returns `|alphabet|^k` items.
pub fn gate_combinations(alphabet: &[GateKind], k: usize) -> Result<Vec<GateCombination>> {
    if alphabet.is_empty() {
        return Err(QarchError::invalid("gate alphabet is empty"));
    }
    if k == 0 {
        return Err(QarchError::invalid("combination length must be at least 1"));
    }
    for (i, g) in alphabet.iter().enumerate() {
        if alphabet[..i].contains(g) {
            return Err(QarchError::invalid(format!("gate {g} appears twice in the alphabet")));
        }
    }
    let count = u32::try_from(k)
        .ok()
        .and_then(|k| alphabet.len().checked_pow(k))
        .ok_or(QarchError::SizeLimit {
            what: "combination count",
            actual: usize::MAX,
            limit: usize::MAX,
        })?;
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0usize; k];
    for _ in 0..count {
        out.push(GateCombination(digits.iter().map(|&d| alphabet[d]).collect()));
        // odometer increment, last position fastest
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < alphabet.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// Where an expanded gate acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    Qubit(usize),
    Edge(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixerGate {
    pub kind: GateKind,
    pub target: Target,
}

/// A gate combination expanded over a specific graph. Every gate in the
/// layer is driven by the same angle `2β`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixerLayer {
    combination: GateCombination,
    gates: Vec<MixerGate>,
}

/// Wire form of a mixer layer: `{"combination": ["RX","RY"], "shared_beta": true}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixerSpec {
    pub combination: GateCombination,
    pub shared_beta: bool,
}

impl MixerLayer {
    pub fn combination(&self) -> &GateCombination {
        &self.combination
    }

    pub fn gates(&self) -> &[MixerGate] {
        &self.gates
    }

    pub fn spec(&self) -> MixerSpec {
        MixerSpec {
            combination: self.combination.clone(),
            shared_beta: true,
        }
    }
}

/// Expands each gate of `comb`, in order, onto every node (arity 1) or
/// every edge in graph order (arity 2).
pub fn build_mixer(g: &Graph, comb: &GateCombination) -> MixerLayer {
    let mut gates = Vec::new();
    for &kind in comb.gates() {
        match kind.arity() {
            1 => gates.extend((0..g.n_nodes()).map(|q| MixerGate {
                kind,
                target: Target::Qubit(q),
            })),
            _ => gates.extend(g.edges().iter().map(|&(u, v)| MixerGate {
                kind,
                target: Target::Edge(u, v),
            })),
        }
    }
    MixerLayer {
        combination: comb.clone(),
        gates,
    }
}

/// `p` alternating (cost, mixer) blocks applied to `|+⟩^n`. Parameters are
/// laid out as `γ_1..γ_p` followed by `β_1..β_p`.
#[derive(Debug, Clone)]
pub struct QaoaAnsatz {
    graph: Graph,
    mixer: MixerLayer,
    depth: usize,
    cost: CostDiagonal,
}

pub fn build_qaoa(g: &Graph, mixer: MixerLayer, p: usize) -> Result<QaoaAnsatz> {
    if p == 0 {
        return Err(QarchError::invalid("QAOA depth must be at least 1"));
    }
    for gate in mixer.gates() {
        let ok = match gate.target {
            Target::Qubit(q) => q < g.n_nodes(),
            Target::Edge(u, v) => u < g.n_nodes() && v < g.n_nodes() && u != v,
        };
        if !ok {
            return Err(QarchError::invalid("mixer gate targets lie outside the graph"));
        }
    }
    let cost = CostDiagonal::new(g)?;
    Ok(QaoaAnsatz {
        graph: g.clone(),
        mixer,
        depth: p,
        cost,
    })
}

impl QaoaAnsatz {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn mixer(&self) -> &MixerLayer {
        &self.mixer
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn parameter_count(&self) -> usize {
        2 * self.depth
    }

    pub fn n_qubits(&self) -> usize {
        self.graph.n_nodes()
    }

    pub fn cost(&self) -> &CostDiagonal {
        &self.cost
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn combination_counts_and_order() {
        let a = GateKind::ALPHABET;
        assert_eq!(gate_combinations(&a, 1).unwrap().len(), 5);
        let two = gate_combinations(&a, 2).unwrap();
        assert_eq!(two.len(), 25);
        assert_eq!(two[0].gates(), &[GateKind::RX, GateKind::RX]);
        assert_eq!(two[1].gates(), &[GateKind::RX, GateKind::RY]);
        assert_eq!(two[24].gates(), &[GateKind::RYY, GateKind::RYY]);
        let four = gate_combinations(&a, 4).unwrap();
        assert_eq!(four.len(), 625);
        assert_eq!(4 * four.len(), 2500);
    }

    #[test]
    fn combination_errors() {
        assert!(gate_combinations(&[], 2).is_err());
        assert!(gate_combinations(&GateKind::ALPHABET, 0).is_err());
        assert!(gate_combinations(&[GateKind::RX, GateKind::RX], 1).is_err());
    }

    #[test]
    fn mixer_expansion() {
        let g = crate::graphs::erdos_renyi(10, 0.5, 1).unwrap();
        let rx = build_mixer(&g, &GateCombination::baseline());
        assert_eq!(rx.gates().len(), 10);
        assert!(rx.gates().iter().all(|m| m.kind == GateKind::RX));

        let rxry = build_mixer(&g, &"RX,RY".parse().unwrap());
        assert_eq!(rxry.gates().len(), 20);
        assert_eq!(rxry.gates()[9].target, Target::Qubit(9));
        assert_eq!(
            rxry.gates()[10],
            MixerGate {
                kind: GateKind::RY,
                target: Target::Qubit(0)
            }
        );

        let edge = Graph::new(2, vec![(0, 1)]).unwrap();
        let rxx = build_mixer(&edge, &"RXX".parse().unwrap());
        assert_eq!(
            rxx.gates(),
            &[MixerGate {
                kind: GateKind::RXX,
                target: Target::Edge(0, 1)
            }]
        );
    }

    #[test]
    fn ansatz_parameter_count() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let m = build_mixer(&g, &"RX,RY,RXX".parse().unwrap());
        assert_eq!(build_qaoa(&g, m.clone(), 1).unwrap().parameter_count(), 2);
        assert_eq!(build_qaoa(&g, m.clone(), 3).unwrap().parameter_count(), 6);
        assert!(build_qaoa(&g, m, 0).is_err());
    }

    #[test]
    fn mixer_spec_json() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let spec = build_mixer(&g, &"RX,RY".parse().unwrap()).spec();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"combination":["RX","RY"],"shared_beta":true}"#);
        assert!(serde_json::from_str::<MixerSpec>(r#"{"combination":[],"shared_beta":true}"#).is_err());
    }

    #[test]
    fn parse_and_display() {
        let c: GateCombination = "rx, RYY".parse().unwrap();
        assert_eq!(c.to_string(), "RX,RYY");
        assert!("RQ".parse::<GateCombination>().is_err());
        assert!("".parse::<GateCombination>().is_err());
    }

    proptest! {
        #[test]
        fn combinations_are_unique_and_complete(n in 1usize..=5, k in 1usize..=4) {
            let alphabet = &GateKind::ALPHABET[..n];
            let combos = gate_combinations(alphabet, k).unwrap();
            prop_assert_eq!(combos.len(), n.pow(k as u32));
            let unique: HashSet<_> = combos.iter().collect();
            prop_assert_eq!(unique.len(), combos.len());
            let pos = |c: &GateCombination| -> Vec<usize> {
                c.gates().iter().map(|g| alphabet.iter().position(|a| a == g).unwrap()).collect()
            };
            let sorted = combos.windows(2).all(|w| pos(&w[0]) < pos(&w[1]));
            prop_assert!(sorted);
        }
    }
}
