//! Anonymous port-labeled graphs.
//!
//! Nodes carry no identifiers the agent can see; the `NodeId`s here exist
//! only for the simulator and the oracle. Each edge endpoint carries its own
//! port label, and at every node the labels are exactly `0..deg`.

mod generators;
mod text;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use generators::{gen_gpqr, gen_padded_path, GadgetSpec, GADGET_NODE_NAMES};
pub use text::{parse_graph, serialize_graph};

pub type NodeId = usize;
pub type Port = usize;

/// One undirected edge with an independent port label at each end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub port_u: Port,
    pub v: NodeId,
    pub port_v: Port,
}

impl Edge {
    pub const fn new(u: NodeId, port_u: Port, v: NodeId, port_v: Port) -> Self {
        Self { u, port_u, v, port_v }
    }
}

/// The first invariant a candidate graph breaks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("graph has no nodes")]
    Empty,
    #[error("node {node} out of range (node_count = {node_count})")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("start and treasure are both node {0}")]
    StartIsTreasure(NodeId),
    #[error("self-loop at node {node} (edge {edge})")]
    SelfLoop { node: NodeId, edge: usize },
    #[error("parallel edge between {u} and {v} (edge {edge})")]
    ParallelEdge { u: NodeId, v: NodeId, edge: usize },
    #[error("port set not contiguous at node {node}: ports {ports:?}")]
    PortSetNotContiguous { node: NodeId, ports: Vec<Port> },
    #[error("not connected: node {node} unreachable from node 0")]
    NotConnected { node: NodeId },
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("port {port} out of range at node {node} (degree {degree})")]
    PortOutOfRange { node: NodeId, port: Port, degree: usize },
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid graph: {0}")]
    Invalid(#[from] Violation),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Checks every [`PortGraph`] invariant on raw parts, in a fixed order:
/// node ranges, start/treasure, self-loops, parallel edges, port sets,
/// connectivity.
pub fn validate(
    node_count: usize,
    edges: &[Edge],
    start: NodeId,
    treasure: NodeId,
) -> Result<(), Violation> {
    if node_count == 0 {
        return Err(Violation::Empty);
    }
    for node in [start, treasure] {
        if node >= node_count {
            return Err(Violation::NodeOutOfRange { node, node_count });
        }
    }
    if start == treasure {
        return Err(Violation::StartIsTreasure(start));
    }

    let mut pairs = BTreeSet::new();
    for (i, e) in edges.iter().enumerate() {
        for node in [e.u, e.v] {
            if node >= node_count {
                return Err(Violation::NodeOutOfRange { node, node_count });
            }
        }
        if e.u == e.v {
            return Err(Violation::SelfLoop { node: e.u, edge: i });
        }
        if !pairs.insert((e.u.min(e.v), e.u.max(e.v))) {
            return Err(Violation::ParallelEdge { u: e.u, v: e.v, edge: i });
        }
    }

    let mut ports: Vec<Vec<Port>> = vec![Vec::new(); node_count];
    for e in edges {
        ports[e.u].push(e.port_u);
        ports[e.v].push(e.port_v);
    }
    for (node, list) in ports.iter_mut().enumerate() {
        list.sort_unstable();
        if list.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(Violation::PortSetNotContiguous {
                node,
                ports: list.clone(),
            });
        }
    }

    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); node_count];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; node_count];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    if let Some(node) = seen.iter().position(|s| !s) {
        return Err(Violation::NotConnected { node });
    }
    Ok(())
}

/// A validated anonymous graph with a start node and a treasure node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortGraph {
    node_count: usize,
    edges: Vec<Edge>,
    start: NodeId,
    treasure: NodeId,
    // ports[v][p] = (neighbor, port at neighbor)
    ports: Vec<Vec<(NodeId, Port)>>,
}

impl PortGraph {
    pub fn new(
        node_count: usize,
        edges: Vec<Edge>,
        start: NodeId,
        treasure: NodeId,
    ) -> Result<Self, Violation> {
        validate(node_count, &edges, start, treasure)?;
        let mut ports: Vec<Vec<(NodeId, Port)>> = vec![Vec::new(); node_count];
        for e in &edges {
            ports[e.u].push((usize::MAX, 0));
            ports[e.v].push((usize::MAX, 0));
        }
        for e in &edges {
            ports[e.u][e.port_u] = (e.v, e.port_v);
            ports[e.v][e.port_v] = (e.u, e.port_u);
        }
        Ok(Self {
            node_count,
            edges,
            start,
            treasure,
            ports,
        })
    }

    /// Re-checks the invariants; always `Ok` for a constructed graph.
    pub fn validate(&self) -> Result<(), Violation> {
        validate(self.node_count, &self.edges, self.start, self.treasure)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn treasure(&self) -> NodeId {
        self.treasure
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.ports[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.ports.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Same graph with the start moved. Fails if `start` is the treasure.
    pub fn with_start(&self, start: NodeId) -> Result<Self, Violation> {
        Self::new(self.node_count, self.edges.clone(), start, self.treasure)
    }

    /// Leaves `u` through port `p`; returns the far node and the port of
    /// the same edge at that node.
    pub fn neighbor_via_port(&self, u: NodeId, p: Port) -> Result<(NodeId, Port), GraphError> {
        let row = self.ports.get(u).ok_or(GraphError::UnknownNode(u))?;
        row.get(p).copied().ok_or(GraphError::PortOutOfRange {
            node: u,
            port: p,
            degree: row.len(),
        })
    }

    /// Hop distances to `target` from every node.
    pub fn distances_to(&self, target: NodeId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count];
        dist[target] = 0;
        let mut queue = VecDeque::from([target]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.ports[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// BFS shortest path from `s` to `t`. Among equal-length paths the one
    /// taking the smallest exit port at each step is returned.
    pub fn shortest_path(&self, s: NodeId, t: NodeId) -> Result<ShortestPath, GraphError> {
        for node in [s, t] {
            if node >= self.node_count {
                return Err(GraphError::UnknownNode(node));
            }
        }
        let dist = self.distances_to(t);
        let mut nodes = vec![s];
        let mut ports = Vec::with_capacity(dist[s]);
        let mut cur = s;
        while cur != t {
            let (port, &(next, _)) = self.ports[cur]
                .iter()
                .enumerate()
                .find(|(_, (y, _))| dist[*y] + 1 == dist[cur])
                .expect("connected graph has a BFS predecessor");
            ports.push(port);
            nodes.push(next);
            cur = next;
        }
        Ok(ShortestPath { nodes, ports })
    }
}

/// `nodes[i]` leaves through `ports[i]` to reach `nodes[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPath {
    pub nodes: Vec<NodeId>,
    pub ports: Vec<Port>,
}

impl ShortestPath {
    pub fn len(&self) -> usize {
        self.ports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ports.is_empty()
    }
}

impl fmt::Display for PortGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_graph(self))
    }
}
