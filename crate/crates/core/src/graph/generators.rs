use super::{Edge, GraphError, NodeId, Port, PortGraph};
use crate::quantum::RngStream;

/// Stream id reserved for graph generation, so trial streams never collide
/// with it.
pub(crate) const GENERATOR_STREAM: u64 = u64::MAX;

/// A chain `v0 .. vD` from start `v0` to treasure `vD`. Every internal chain
/// node is padded with degree-1 decoys up to degree `delta`, and the port
/// labels at each chain node are a seeded random permutation.
///
/// Node ids: chain nodes are `0..=D`, decoys follow.
pub fn gen_padded_path(d: usize, delta: usize, seed: u64) -> Result<PortGraph, GraphError> {
    if d == 0 {
        return Err(GraphError::InvalidParameters("D must be at least 1".into()));
    }
    if delta < 2 || !delta.is_multiple_of(2) {
        return Err(GraphError::InvalidParameters(format!(
            "delta must be even and at least 2, got {delta}"
        )));
    }
    let mut rng = RngStream::new(seed, GENERATOR_STREAM);
    let mut next_id = d + 1;
    // neighbor lists in port order, one per chain node
    let mut slots: Vec<Vec<NodeId>> = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let mut nbrs = Vec::with_capacity(delta);
        if i > 0 {
            nbrs.push(i - 1);
        }
        if i < d {
            nbrs.push(i + 1);
        }
        if i > 0 && i < d {
            for _ in 2..delta {
                nbrs.push(next_id);
                next_id += 1;
            }
        }
        rng.shuffle(&mut nbrs);
        slots.push(nbrs);
    }
    let port_of = |at: NodeId, to: NodeId| -> Port {
        slots[at].iter().position(|&x| x == to).expect("neighbor present")
    };

    let mut edges = Vec::with_capacity(next_id - 1);
    for i in 0..d {
        edges.push(Edge::new(i, port_of(i, i + 1), i + 1, port_of(i + 1, i)));
    }
    for (i, nbrs) in slots.iter().enumerate() {
        for (p, &x) in nbrs.iter().enumerate() {
            if x > d {
                edges.push(Edge::new(i, p, x, 0));
            }
        }
    }
    Ok(PortGraph::new(next_id, edges, 0, d)?)
}

/// Node names of the impossibility gadget, indexed by node id.
pub const GADGET_NODE_NAMES: [&str; 6] = ["S", "U", "V", "T", "U'", "V'"];

const S: NodeId = 0;
const U: NodeId = 1;
const V: NodeId = 2;
const T: NodeId = 3;
const U_PENDANT: NodeId = 4;
const V_PENDANT: NodeId = 5;

/// Port labeling of the six-node gadget: triangle `S, U, V` with pendants
/// `T` at `S`, `U'` at `U`, `V'` at `V`.
///
/// `pendant_ports` gives the pendant port at `S`, `U`, `V`. The two ports
/// left at each triangle node go to its cyclic successor (`S -> U -> V -> S`)
/// and predecessor: with `swapped[i] == false` the smaller remaining port
/// goes to the successor, otherwise to the predecessor. The 27 * 8 specs
/// cover every one of the 6^3 port assignments at `S, U, V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GadgetSpec {
    pub pendant_ports: [Port; 3],
    pub swapped: [bool; 3],
}

impl GadgetSpec {
    pub fn new(p: Port, q: Port, r: Port) -> Self {
        Self {
            pendant_ports: [p, q, r],
            swapped: [false; 3],
        }
    }

    /// The labeling walked through in the classical impossibility argument:
    /// from `S`, port 1 reaches `U`; from `U`, port 1 returns to `S` and
    /// port 0 reaches `V`; from `V`, port 1 returns to `U` and port 0
    /// reaches `S`. Port 2 is the pendant everywhere.
    pub fn trap() -> Self {
        Self {
            pendant_ports: [2, 2, 2],
            swapped: [true, false, false],
        }
    }

    /// All 216 labelings, in a fixed order.
    pub fn family() -> impl Iterator<Item = GadgetSpec> {
        (0..216usize).map(|idx| {
            let mut k = idx;
            let mut pendant_ports = [0; 3];
            let mut swapped = [false; 3];
            for port in &mut pendant_ports {
                *port = k % 3;
                k /= 3;
            }
            for s in &mut swapped {
                *s = k % 2 == 1;
                k /= 2;
            }
            GadgetSpec { pendant_ports, swapped }
        })
    }

    fn is_valid(&self) -> bool {
        self.pendant_ports.iter().all(|&p| p < 3)
    }
}

/// Builds the gadget graph for `spec`, starting at `S` with the treasure at
/// `T`. Node ids follow [`GADGET_NODE_NAMES`].
pub fn gen_gpqr(spec: GadgetSpec) -> Result<PortGraph, GraphError> {
    if !spec.is_valid() {
        return Err(GraphError::InvalidParameters(format!(
            "pendant ports must lie in 0..3, got {:?}",
            spec.pendant_ports
        )));
    }
    let triangle = [S, U, V];
    // (successor port, predecessor port) at each triangle node
    let mut side_ports = [(0, 0); 3];
    for ((slot, &pendant), &swapped) in side_ports.iter_mut().zip(&spec.pendant_ports).zip(&spec.swapped) {
        let mut rest = (0..3).filter(|&p| p != pendant);
        let lo = rest.next().unwrap();
        let hi = rest.next().unwrap();
        *slot = if swapped { (hi, lo) } else { (lo, hi) };
    }
    let mut edges = Vec::with_capacity(6);
    for i in 0..3 {
        let j = (i + 1) % 3;
        edges.push(Edge::new(triangle[i], side_ports[i].0, triangle[j], side_ports[j].1));
    }
    edges.push(Edge::new(S, spec.pendant_ports[0], T, 0));
    edges.push(Edge::new(U, spec.pendant_ports[1], U_PENDANT, 0));
    edges.push(Edge::new(V, spec.pendant_ports[2], V_PENDANT, 0));
    Ok(PortGraph::new(6, edges, S, T)?)
}
