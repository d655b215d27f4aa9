//! The oracle side: port numbers to pebble states and back, and pebble
//! placement along the shortest path.
//!
//! Encoded ports are 1-based (`j = internal_port + 1`). Port `j = 2i + 1`
//! maps to `|i+>` and `j = 2i + 2` to `|i->`, so the decoded eigenvalue
//! `(i, sign)` identifies the port without a lookup table.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, NodeId, PortGraph};
use crate::quantum::{
    basis_family, born_probability, build_basis, MeasurementBasis, Outcome, QuantumError,
    QubitState, RngStream, Sign, MAX_DIRECT_DELTA,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingScheme {
    /// Phase-offset family `M(0) .. M(delta/2 - 1)`.
    General,
    /// Degree at most 4: `|0>, |1>, |+>, |->` for ports 1..=4.
    #[serde(rename = "bitsign4")]
    BitSign4,
    /// One `delta`-level system per node, read in the computational basis.
    Qudit,
    /// Whole port sequence in one qubit; analysis only, never walked.
    #[serde(rename = "fullpath")]
    FullPathSingleQubit,
}

impl fmt::Display for EncodingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingScheme::General => "general",
            EncodingScheme::BitSign4 => "bitsign4",
            EncodingScheme::Qudit => "qudit",
            EncodingScheme::FullPathSingleQubit => "fullpath",
        })
    }
}

impl FromStr for EncodingScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "general" => Ok(EncodingScheme::General),
            "bitsign4" | "bitsign" => Ok(EncodingScheme::BitSign4),
            "qudit" => Ok(EncodingScheme::Qudit),
            "fullpath" => Ok(EncodingScheme::FullPathSingleQubit),
            other => Err(format!("unknown scheme {other:?} (general|bitsign4|qudit|fullpath)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("port {port} outside 1..={delta}")]
    PortOutOfRange { port: usize, delta: usize },
    #[error("outcome {outcome:?} has no port for delta {delta}")]
    BadOutcome { outcome: Outcome, delta: usize },
    #[error("scheme {scheme} cannot encode a graph of maximum degree {max_degree}")]
    SchemeIncompatible { scheme: EncodingScheme, max_degree: usize },
    #[error("full-path family {delta}^{len} exceeds the direct-simulation cap of 2^20 states")]
    FullPathTooLarge { delta: usize, len: usize },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Smallest even family size covering `max_degree` (at least 2).
pub fn basis_delta(max_degree: usize) -> usize {
    (max_degree + max_degree % 2).max(2)
}

/// Eigenvalue label assigned to 1-based port `j`.
pub fn port_outcome(j: usize, delta: usize) -> Result<Outcome, EncodingError> {
    if j == 0 || j > delta {
        return Err(EncodingError::PortOutOfRange { port: j, delta });
    }
    let sign = if j % 2 == 1 { Sign::Plus } else { Sign::Minus };
    Ok(Outcome::new((j - 1) / 2, sign))
}

/// `f(j)` in the phase-offset family of size `delta`.
pub fn encode_port(j: usize, delta: usize) -> Result<QubitState, EncodingError> {
    let o = port_outcome(j, delta)?;
    let b = build_basis(o.basis_index, basis_delta(delta))?;
    Ok(*b.vector(o.sign))
}

/// `f^-1`: the 1-based port named by an eigenvalue.
pub fn decode_outcome(o: Outcome, delta: usize) -> Result<usize, EncodingError> {
    if o.basis_index >= basis_delta(delta) / 2 {
        return Err(EncodingError::BadOutcome { outcome: o, delta });
    }
    Ok(2 * o.basis_index + if o.sign == Sign::Plus { 1 } else { 2 })
}

pub fn encode_qudit(j: usize, delta: usize) -> Result<usize, EncodingError> {
    if j == 0 || j > delta {
        return Err(EncodingError::PortOutOfRange { port: j, delta });
    }
    Ok(j - 1)
}

pub fn decode_qudit(level: usize) -> usize {
    level + 1
}

/// The bases an agent sweeps for a qubit scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisFamily {
    /// `M(j)` for `j in 0..delta/2`.
    Phase { delta: usize },
    /// Index 0 is the computational basis (`+` = `|0>`), index 1 the
    /// Hadamard basis.
    BitSign,
}

impl BasisFamily {
    pub fn delta(&self) -> usize {
        match self {
            BasisFamily::Phase { delta } => *delta,
            BasisFamily::BitSign => 4,
        }
    }

    pub fn len(&self) -> usize {
        self.delta() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bases(&self) -> Result<Vec<MeasurementBasis>, QuantumError> {
        match self {
            BasisFamily::Phase { delta } => basis_family(*delta),
            BasisFamily::BitSign => Ok(vec![
                MeasurementBasis::from_vectors(0, 4, QubitState::ZERO, QubitState::ONE),
                MeasurementBasis::from_vectors(1, 4, QubitState::PLUS, QubitState::MINUS),
            ]),
        }
    }

    /// The state encoding 1-based port `j`.
    pub fn state_for(&self, j: usize) -> Result<QubitState, EncodingError> {
        let o = port_outcome(j, self.delta())?;
        let bases = self.bases()?;
        Ok(*bases[o.basis_index].vector(o.sign))
    }
}

/// Full path packed into one index of the enlarged family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FullPathCode {
    /// `delta^D`, the enlarged family size.
    pub family_delta: usize,
    /// `delta^D / 2` bases.
    pub basis_count: usize,
    /// Mixed-radix index in `1..=delta^D`, first step most significant.
    pub state_index: usize,
}

impl FullPathCode {
    pub fn state(&self) -> Result<QubitState, EncodingError> {
        encode_port(self.state_index, self.family_delta)
    }
}

pub fn encode_full_path(ports: &[usize], delta: usize) -> Result<FullPathCode, EncodingError> {
    let family_delta = full_path_size(delta, ports.len())?;
    let mut index = 0usize;
    for &p in ports {
        if p == 0 || p > delta {
            return Err(EncodingError::PortOutOfRange { port: p, delta });
        }
        index = index * delta + (p - 1);
    }
    Ok(FullPathCode {
        family_delta,
        basis_count: family_delta / 2,
        state_index: index + 1,
    })
}

pub fn decode_full_path(state_index: usize, delta: usize, len: usize) -> Result<Vec<usize>, EncodingError> {
    let size = full_path_size(delta, len)?;
    if state_index == 0 || state_index > size {
        return Err(EncodingError::PortOutOfRange { port: state_index, delta: size });
    }
    let mut rest = state_index - 1;
    let mut ports = vec![0; len];
    for slot in ports.iter_mut().rev() {
        *slot = rest % delta + 1;
        rest /= delta;
    }
    Ok(ports)
}

fn full_path_size(delta: usize, len: usize) -> Result<usize, EncodingError> {
    if delta < 2 || !delta.is_multiple_of(2) {
        return Err(QuantumError::BadDelta { delta }.into());
    }
    if len == 0 {
        return Err(EncodingError::PortOutOfRange { port: 0, delta });
    }
    u32::try_from(len)
        .ok()
        .and_then(|l| delta.checked_pow(l))
        .filter(|&s| s <= MAX_DIRECT_DELTA)
        .ok_or(EncodingError::FullPathTooLarge { delta, len })
}

/// What a pebble emits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Emission {
    /// Qubits in `state`, which is the `label` vector of the family.
    Qubit { state: QubitState, label: Outcome },
    /// A `delta`-level system in computational level `level`.
    Level(usize),
    /// Classical marker: presence is the only information.
    Marker,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumPebble {
    pub node: NodeId,
    pub emission: Emission,
}

impl QuantumPebble {
    /// Measures one fresh emitted qubit. `None` for non-qubit pebbles.
    pub fn measure(&self, basis: &MeasurementBasis, rng: &mut RngStream) -> Option<Sign> {
        match &self.emission {
            Emission::Qubit { state, .. } => {
                Some(crate::quantum::sample_measurement(state, basis, rng).sign)
            }
            _ => None,
        }
    }

    /// `P(plus)` for one emitted qubit in `basis`.
    pub fn plus_probability(&self, basis: &MeasurementBasis) -> Option<f64> {
        match &self.emission {
            Emission::Qubit { state, .. } => Some(born_probability(state, &basis.plus)),
            _ => None,
        }
    }

    /// A computational-basis measurement of a qudit pebble.
    pub fn measure_level(&self) -> Option<usize> {
        match self.emission {
            Emission::Level(l) => Some(l),
            _ => None,
        }
    }
}

/// Pebbles placed by the oracle, at most one per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    scheme: Option<EncodingScheme>,
    delta: usize,
    pebbles: BTreeMap<NodeId, QuantumPebble>,
}

impl Placement {
    /// Classical markers on `nodes`.
    pub fn markers(nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let pebbles = nodes
            .into_iter()
            .map(|node| (node, QuantumPebble { node, emission: Emission::Marker }))
            .collect();
        Self {
            scheme: None,
            delta: 0,
            pebbles,
        }
    }

    /// `None` for classical markers.
    pub fn scheme(&self) -> Option<EncodingScheme> {
        self.scheme
    }

    /// Family size the pebbles were encoded against (level count for qudits).
    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn family(&self) -> Option<BasisFamily> {
        match self.scheme? {
            EncodingScheme::General => Some(BasisFamily::Phase { delta: self.delta }),
            EncodingScheme::BitSign4 => Some(BasisFamily::BitSign),
            _ => None,
        }
    }

    pub fn get(&self, node: NodeId) -> Option<&QuantumPebble> {
        self.pebbles.get(&node)
    }

    pub fn has_pebble(&self, node: NodeId) -> bool {
        self.pebbles.contains_key(&node)
    }

    pub fn len(&self) -> usize {
        self.pebbles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pebbles.is_empty()
    }

    pub fn pebbles(&self) -> impl Iterator<Item = &QuantumPebble> {
        self.pebbles.values()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pebbles: Vec<serde_json::Value> = self
            .pebbles
            .values()
            .map(|p| match p.emission {
                Emission::Qubit { label, .. } => serde_json::json!({
                    "node": p.node,
                    "basis_index": label.basis_index,
                    "sign": label.sign,
                }),
                Emission::Level(level) => serde_json::json!({ "node": p.node, "level": level }),
                Emission::Marker => serde_json::json!({ "node": p.node }),
            })
            .collect();
        serde_json::json!({
            "scheme": self.scheme.map(|s| s.to_string()).unwrap_or_else(|| "classical".into()),
            "delta": self.delta,
            "pebbles": pebbles,
        })
    }
}

/// One pebble per shortest-path node from the start up to (not including)
/// the treasure, each encoding that node's exit port.
pub fn place_pebbles(g: &PortGraph, scheme: EncodingScheme) -> Result<Placement, EncodingError> {
    let max_degree = g.max_degree();
    let delta = match scheme {
        EncodingScheme::General => basis_delta(max_degree),
        EncodingScheme::BitSign4 if max_degree <= 4 => 4,
        EncodingScheme::Qudit => max_degree,
        _ => return Err(EncodingError::SchemeIncompatible { scheme, max_degree }),
    };
    let family = match scheme {
        EncodingScheme::General => Some(BasisFamily::Phase { delta }),
        EncodingScheme::BitSign4 => Some(BasisFamily::BitSign),
        _ => None,
    };
    let path = g.shortest_path(g.start(), g.treasure())?;
    let mut pebbles = BTreeMap::new();
    for (&node, &port) in path.nodes.iter().zip(&path.ports) {
        let j = port + 1;
        let emission = match &family {
            Some(f) => Emission::Qubit {
                state: f.state_for(j)?,
                label: port_outcome(j, delta)?,
            },
            None => Emission::Level(encode_qudit(j, delta)?),
        };
        pebbles.insert(node, QuantumPebble { node, emission });
    }
    Ok(Placement {
        scheme: Some(scheme),
        delta,
        pebbles,
    })
}
