//! Oblivious agents and the walk executor.
//!
//! Each round the agent sees only an [`Observation`]: the degree of its
//! node and, if a pebble is there, a handle it can measure. The executor
//! owns the position; [`Agent::act`] takes `&self` and keeps nothing
//! between rounds.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{decode_outcome, decode_qudit, EncodingScheme, Placement, QuantumPebble};
use crate::graph::{NodeId, Port, PortGraph};
use crate::quantum::{sample_sign, MeasurementBasis, Outcome, QuantumError, RngStream, Sign};

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("placement inconsistent with graph or strategy: {0}")]
    InconsistentPlacement(String),
    #[error("decision table has no entry for degree {0}")]
    TablePartial(usize),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Stay,
    Port(Port),
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Stay => f.write_str("stay"),
            Action::Port(p) => write!(f, "{p}"),
        }
    }
}

/// A deterministic oblivious policy: `(degree, pebble present) -> action`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DecisionTable {
    // [without pebble, with pebble]
    rows: BTreeMap<usize, [Action; 2]>,
}

impl DecisionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the row for `degree`. Ports must be below `degree`.
    pub fn with(mut self, degree: usize, no_pebble: Action, pebble: Action) -> Result<Self, AgentError> {
        for a in [no_pebble, pebble] {
            if let Action::Port(p) = a {
                if p >= degree {
                    return Err(AgentError::InvalidStrategy(format!(
                        "port {p} does not exist at degree {degree}"
                    )));
                }
            }
        }
        self.rows.insert(degree, [no_pebble, pebble]);
        Ok(self)
    }

    /// Stays put everywhere on the listed degrees.
    pub fn stay_always(degrees: &[usize]) -> Self {
        Self {
            rows: degrees.iter().map(|&d| (d, [Action::Stay; 2])).collect(),
        }
    }

    pub fn action(&self, degree: usize, pebble: bool) -> Result<Action, AgentError> {
        self.rows
            .get(&degree)
            .map(|row| row[pebble as usize])
            .ok_or(AgentError::TablePartial(degree))
    }
}

impl fmt::Display for DecisionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, [none, some]) in &self.rows {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "deg{d}: empty->{none} pebble->{some}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AgentStrategy {
    /// `n` samples in every basis, then the uniform-run rule.
    QuantumFixedN { n: usize },
    /// Round-robin elimination with a per-node sample cap.
    QuantumAdaptive { cap: usize },
    QuditOneShot,
    ClassicalTable(DecisionTable),
    /// Uniform port every round.
    RandomWalk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    None,
    AmbiguousDecode,
    WrongPortRange,
    MissingPebble,
    StepBudgetExhausted,
    DeclaredFailure,
}

impl FailureKind {
    pub const ALL: [FailureKind; 6] = [
        FailureKind::None,
        FailureKind::AmbiguousDecode,
        FailureKind::WrongPortRange,
        FailureKind::MissingPebble,
        FailureKind::StepBudgetExhausted,
        FailureKind::DeclaredFailure,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FailureKind::None => "none",
            FailureKind::AmbiguousDecode => "ambiguous_decode",
            FailureKind::WrongPortRange => "wrong_port_range",
            FailureKind::MissingPebble => "missing_pebble",
            FailureKind::StepBudgetExhausted => "step_budget_exhausted",
            FailureKind::DeclaredFailure => "declared_failure",
        }
    }
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub success: bool,
    pub steps_taken: usize,
    pub measurements_total: u64,
    pub failure_kind: FailureKind,
}

/// Per-basis outcome sequences from one node, in basis order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tallies {
    pub per_basis: Vec<(usize, Vec<Sign>)>,
}

impl Tallies {
    pub fn total(&self) -> usize {
        self.per_basis.iter().map(|(_, v)| v.len()).sum()
    }

    /// Sign of the run if every sample in basis slot `i` agrees.
    pub fn uniform_sign(&self, i: usize) -> Option<Sign> {
        let (_, seq) = &self.per_basis[i];
        let first = *seq.first()?;
        seq.iter().all(|&s| s == first).then_some(first)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decode {
    Port(usize),
    Ambiguous,
}

/// `n` fresh samples in each basis, basis by basis. Uses `n * bases.len()`
/// draws; the pebble must emit qubits.
pub fn measure_node_fixed(
    pebble: &QuantumPebble,
    bases: &[MeasurementBasis],
    n: usize,
    rng: &mut RngStream,
) -> Option<Tallies> {
    let mut per_basis = Vec::with_capacity(bases.len());
    for b in bases {
        let p = pebble.plus_probability(b)?;
        per_basis.push((b.index, (0..n).map(|_| sample_sign(p, rng)).collect()));
    }
    Some(Tallies { per_basis })
}

/// Exactly one uniform basis decodes to its eigenvalue's port; anything
/// else is ambiguous.
pub fn decide_fixed(tallies: &Tallies, delta: usize) -> Decode {
    let mut found = None;
    for i in 0..tallies.per_basis.len() {
        if let Some(sign) = tallies.uniform_sign(i) {
            if found.is_some() {
                return Decode::Ambiguous;
            }
            found = Some(Outcome::new(tallies.per_basis[i].0, sign));
        }
    }
    match found.map(|o| decode_outcome(o, delta)) {
        Some(Ok(j)) => Decode::Port(j),
        _ => Decode::Ambiguous,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdaptiveFailure {
    BudgetExhausted { used: usize },
    AllEliminated { used: usize },
}

/// Round-robin over live bases, one sample each; a basis dies the first
/// time it disagrees with its own earlier outcome. Returns the survivor's
/// port and the samples used once a single sampled basis is left.
pub fn measure_node_adaptive(
    pebble: &QuantumPebble,
    bases: &[MeasurementBasis],
    delta: usize,
    cap: usize,
    rng: &mut RngStream,
) -> Option<Result<(usize, usize), AdaptiveFailure>> {
    let probs: Vec<f64> = bases
        .iter()
        .map(|b| pebble.plus_probability(b))
        .collect::<Option<_>>()?;
    let mut first: Vec<Option<Sign>> = vec![None; bases.len()];
    let mut live: Vec<bool> = vec![true; bases.len()];
    let mut alive = bases.len();
    let mut used = 0;
    loop {
        for i in 0..bases.len() {
            if !live[i] {
                continue;
            }
            if alive == 1 && first[i].is_some() {
                let o = Outcome::new(bases[i].index, first[i].unwrap());
                return Some(match decode_outcome(o, delta) {
                    Ok(j) => Ok((j, used)),
                    Err(_) => Err(AdaptiveFailure::AllEliminated { used }),
                });
            }
            if used == cap {
                return Some(Err(AdaptiveFailure::BudgetExhausted { used }));
            }
            let s = sample_sign(probs[i], rng);
            used += 1;
            match first[i] {
                None => first[i] = Some(s),
                Some(prev) if prev != s => {
                    live[i] = false;
                    alive -= 1;
                }
                Some(_) => {}
            }
        }
        if alive == 0 {
            return Some(Err(AdaptiveFailure::AllEliminated { used }));
        }
    }
}

/// What the agent perceives in one round.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub degree: usize,
    pub pebble: Option<&'a QuantumPebble>,
}

/// Outcome of one look-compute round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub action: StepAction,
    pub measurements: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepAction {
    Move(Port),
    Stay,
    Fail(FailureKind),
}

/// A strategy bound to its measurement apparatus.
#[derive(Debug, Clone)]
pub struct Agent {
    strategy: AgentStrategy,
    bases: Vec<MeasurementBasis>,
    delta: usize,
}

impl Agent {
    /// Binds `strategy` to the bases implied by `placement`.
    pub fn new(strategy: AgentStrategy, placement: &Placement) -> Result<Self, AgentError> {
        let needs_qubits = matches!(
            strategy,
            AgentStrategy::QuantumFixedN { .. } | AgentStrategy::QuantumAdaptive { .. }
        );
        let (bases, delta) = match (needs_qubits, placement.family()) {
            (true, Some(f)) => (f.bases()?, f.delta()),
            (true, None) => {
                return Err(AgentError::InconsistentPlacement(
                    "quantum strategy needs a qubit placement".into(),
                ))
            }
            (false, _) => (Vec::new(), placement.delta()),
        };
        match &strategy {
            AgentStrategy::QuantumFixedN { n } if *n == 0 => {
                return Err(AgentError::InvalidStrategy("n must be at least 1".into()))
            }
            AgentStrategy::QuantumAdaptive { cap } if *cap < bases.len() => {
                return Err(AgentError::InvalidStrategy(format!(
                    "cap {cap} below the {} bases",
                    bases.len()
                )))
            }
            AgentStrategy::QuditOneShot if placement.scheme() != Some(EncodingScheme::Qudit) => {
                return Err(AgentError::InconsistentPlacement(
                    "qudit agent needs a qudit placement".into(),
                ))
            }
            _ => {}
        }
        Ok(Self {
            strategy,
            bases,
            delta,
        })
    }

    pub fn strategy(&self) -> &AgentStrategy {
        &self.strategy
    }

    pub fn bases(&self) -> &[MeasurementBasis] {
        &self.bases
    }

    pub fn act(&self, obs: &Observation<'_>, rng: &mut RngStream) -> Result<Step, AgentError> {
        let fail = |kind, measurements| Step {
            action: StepAction::Fail(kind),
            measurements,
        };
        let go = |j: usize, measurements| Step {
            action: StepAction::Move(j - 1),
            measurements,
        };
        Ok(match &self.strategy {
            AgentStrategy::QuantumFixedN { n } => {
                let Some(pebble) = obs.pebble else {
                    return Ok(fail(FailureKind::MissingPebble, 0));
                };
                let Some(t) = measure_node_fixed(pebble, &self.bases, *n, rng) else {
                    return Ok(fail(FailureKind::MissingPebble, 0));
                };
                let used = t.total() as u64;
                match decide_fixed(&t, self.delta) {
                    Decode::Port(j) => go(j, used),
                    Decode::Ambiguous => fail(FailureKind::AmbiguousDecode, used),
                }
            }
            AgentStrategy::QuantumAdaptive { cap } => {
                let Some(pebble) = obs.pebble else {
                    return Ok(fail(FailureKind::MissingPebble, 0));
                };
                match measure_node_adaptive(pebble, &self.bases, self.delta, *cap, rng) {
                    None => fail(FailureKind::MissingPebble, 0),
                    Some(Ok((j, used))) => go(j, used as u64),
                    Some(Err(AdaptiveFailure::BudgetExhausted { used })) => {
                        fail(FailureKind::DeclaredFailure, used as u64)
                    }
                    Some(Err(AdaptiveFailure::AllEliminated { used })) => {
                        fail(FailureKind::AmbiguousDecode, used as u64)
                    }
                }
            }
            AgentStrategy::QuditOneShot => match obs.pebble.and_then(QuantumPebble::measure_level) {
                Some(level) => go(decode_qudit(level), 1),
                None => fail(FailureKind::MissingPebble, 0),
            },
            AgentStrategy::ClassicalTable(table) => {
                match table.action(obs.degree, obs.pebble.is_some())? {
                    Action::Stay => Step {
                        action: StepAction::Stay,
                        measurements: 0,
                    },
                    Action::Port(p) => Step {
                        action: StepAction::Move(p),
                        measurements: 0,
                    },
                }
            }
            AgentStrategy::RandomWalk => Step {
                action: StepAction::Move(rng.below(obs.degree)),
                measurements: 0,
            },
        })
    }
}

fn check_placement(g: &PortGraph, placement: &Placement) -> Result<(), AgentError> {
    if let Some(p) = placement.pebbles().find(|p| p.node >= g.node_count()) {
        return Err(AgentError::InconsistentPlacement(format!(
            "pebble on node {} of a {}-node graph",
            p.node,
            g.node_count()
        )));
    }
    Ok(())
}

/// Walks from the start until the treasure, a failure, or `step_budget`
/// rounds. A round that stays in place still counts against the budget.
pub fn run_trial(
    g: &PortGraph,
    placement: &Placement,
    strategy: &AgentStrategy,
    step_budget: usize,
    rng: &mut RngStream,
) -> Result<TrialResult, AgentError> {
    let agent = Agent::new(strategy.clone(), placement)?;
    run_agent(g, placement, &agent, step_budget, rng)
}

/// [`run_trial`] with an already bound agent.
pub fn run_agent(
    g: &PortGraph,
    placement: &Placement,
    agent: &Agent,
    step_budget: usize,
    rng: &mut RngStream,
) -> Result<TrialResult, AgentError> {
    check_placement(g, placement)?;
    let mut at = g.start();
    let mut steps = 0;
    let mut measurements = 0u64;
    let done = |kind: FailureKind, steps, measurements| TrialResult {
        success: kind == FailureKind::None,
        steps_taken: steps,
        measurements_total: measurements,
        failure_kind: kind,
    };
    loop {
        if at == g.treasure() {
            return Ok(done(FailureKind::None, steps, measurements));
        }
        if steps >= step_budget {
            return Ok(done(FailureKind::StepBudgetExhausted, steps, measurements));
        }
        let degree = g.degree(at);
        let obs = Observation {
            degree,
            pebble: placement.get(at),
        };
        let step = agent.act(&obs, rng)?;
        measurements += step.measurements;
        match step.action {
            StepAction::Fail(kind) => return Ok(done(kind, steps, measurements)),
            StepAction::Stay => steps += 1,
            StepAction::Move(p) if p >= degree => {
                return Ok(done(FailureKind::WrongPortRange, steps, measurements))
            }
            StepAction::Move(p) => {
                at = g.neighbor_via_port(at, p).expect("port checked against degree").0;
                steps += 1;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub visited: Vec<NodeId>,
    pub reached_treasure: bool,
}

/// Deterministic walk of a decision table over static markers. The next
/// node depends on the current node alone, so the walk stops at the
/// treasure or at the first repeated node: at most `node_count + 1` entries.
pub fn classical_trajectory(
    g: &PortGraph,
    pebbles: &[bool],
    table: &DecisionTable,
) -> Result<Trajectory, AgentError> {
    if pebbles.len() != g.node_count() {
        return Err(AgentError::InconsistentPlacement(format!(
            "{} pebble bits for {} nodes",
            pebbles.len(),
            g.node_count()
        )));
    }
    let mut seen = vec![false; g.node_count()];
    let mut at = g.start();
    let mut visited = vec![at];
    seen[at] = true;
    loop {
        if at == g.treasure() {
            return Ok(Trajectory {
                visited,
                reached_treasure: true,
            });
        }
        let next = match table.action(g.degree(at), pebbles[at])? {
            Action::Stay => at,
            Action::Port(p) => {
                g.neighbor_via_port(at, p)
                    .map_err(|e| AgentError::InvalidStrategy(e.to_string()))?
                    .0
            }
        };
        visited.push(next);
        if seen[next] {
            return Ok(Trajectory {
                visited,
                reached_treasure: next == g.treasure(),
            });
        }
        seen[next] = true;
        at = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{place_pebbles, BasisFamily, Emission};
    use crate::graph::{gen_gpqr, gen_padded_path, Edge, GadgetSpec};
    use crate::quantum::{build_basis, QubitState};

    fn qubit(state: QubitState) -> QuantumPebble {
        QuantumPebble {
            node: 0,
            emission: Emission::Qubit {
                state,
                label: Outcome::new(0, Sign::Plus),
            },
        }
    }

    fn tallies(rows: &[(usize, &[Sign])]) -> Tallies {
        Tallies {
            per_basis: rows.iter().map(|(i, s)| (*i, s.to_vec())).collect(),
        }
    }

    use Sign::{Minus as M, Plus as P};

    #[test]
    fn fixed_tally_shape_and_correct_basis() {
        let bases = BasisFamily::Phase { delta: 4 }.bases().unwrap();
        let pebble = qubit(build_basis(0, 4).unwrap().plus);
        let mut rng = RngStream::new(1, 1);
        let t = measure_node_fixed(&pebble, &bases, 25, &mut rng).unwrap();
        assert_eq!(t.total(), 25 * 2);
        assert_eq!(rng.draws(), 50);
        assert_eq!(t.per_basis[0].1, vec![P; 25]);
    }

    #[test]
    fn bitsign_wrong_basis_is_balanced() {
        let bases = BasisFamily::BitSign.bases().unwrap();
        let pebble = qubit(QubitState::PLUS);
        let mut rng = RngStream::new(2, 0);
        let n = 10_000;
        let t = measure_node_fixed(&pebble, &bases, n, &mut rng).unwrap();
        let zeros = t.per_basis[0].1.iter().filter(|&&s| s == P).count() as f64 / n as f64;
        assert!((zeros - 0.5).abs() <= 0.02, "{zeros}");
        assert_eq!(t.per_basis[1].1, vec![P; n]);
    }

    #[test]
    fn decide_rules() {
        assert_eq!(decide_fixed(&tallies(&[(0, &[P, M, P]), (1, &[M, M, M])]), 4), Decode::Port(4));
        assert_eq!(decide_fixed(&tallies(&[(0, &[P, P, P]), (1, &[P, P, P])]), 4), Decode::Ambiguous);
        assert_eq!(decide_fixed(&tallies(&[(0, &[P, M]), (1, &[M, P])]), 4), Decode::Ambiguous);
        // n = 1: every basis is trivially uniform
        assert_eq!(decide_fixed(&tallies(&[(0, &[M]), (1, &[P])]), 4), Decode::Ambiguous);
        assert_eq!(decide_fixed(&tallies(&[(0, &[M])]), 2), Decode::Port(2));
    }

    #[test]
    fn adaptive_single_basis_needs_one_sample() {
        let bases = BasisFamily::Phase { delta: 2 }.bases().unwrap();
        let pebble = qubit(build_basis(0, 2).unwrap().minus);
        let mut rng = RngStream::new(0, 0);
        assert_eq!(measure_node_adaptive(&pebble, &bases, 2, 10, &mut rng), Some(Ok((2, 1))));
    }

    #[test]
    fn adaptive_never_loses_correct_basis() {
        let bases = BasisFamily::Phase { delta: 4 }.bases().unwrap();
        let pebble = qubit(build_basis(0, 4).unwrap().plus);
        let mut rng = RngStream::new(5, 0);
        for _ in 0..10_000 {
            let r = measure_node_adaptive(&pebble, &bases, 4, 10_000, &mut rng).unwrap();
            assert_eq!(r.unwrap().0, 1);
        }
    }

    #[test]
    fn adaptive_budget_is_reported() {
        let bases = BasisFamily::Phase { delta: 8 }.bases().unwrap();
        let pebble = qubit(build_basis(1, 8).unwrap().plus);
        let mut rng = RngStream::new(5, 0);
        let r = measure_node_adaptive(&pebble, &bases, 8, 4, &mut rng).unwrap();
        assert_eq!(r, Err(AdaptiveFailure::BudgetExhausted { used: 4 }));
    }

    #[test]
    fn single_edge_fixed_n() {
        let g = PortGraph::new(2, vec![Edge::new(0, 0, 1, 0)], 0, 1).unwrap();
        let p = place_pebbles(&g, EncodingScheme::General).unwrap();
        let mut rng = RngStream::new(0, 0);
        let r = run_trial(&g, &p, &AgentStrategy::QuantumFixedN { n: 8 }, 1, &mut rng).unwrap();
        assert!(r.success);
        assert_eq!((r.steps_taken, r.measurements_total), (1, 8));
    }

    #[test]
    fn qudit_is_exact() {
        for seed in 0..10 {
            let g = gen_padded_path(7, 6, seed).unwrap();
            let p = place_pebbles(&g, EncodingScheme::Qudit).unwrap();
            let mut rng = RngStream::new(seed, 0);
            let r = run_trial(&g, &p, &AgentStrategy::QuditOneShot, 7, &mut rng).unwrap();
            assert!(r.success);
            assert_eq!((r.steps_taken, r.measurements_total), (7, 7));
        }
    }

    #[test]
    fn missing_pebble_and_wrong_range() {
        let g = gen_padded_path(3, 4, 3).unwrap();
        let p = Placement::markers([]);
        let agent_err = run_trial(&g, &p, &AgentStrategy::QuantumFixedN { n: 3 }, 3, &mut RngStream::new(0, 0));
        assert!(matches!(agent_err, Err(AgentError::InconsistentPlacement(_))));

        // qubit placement but the start pebble removed: use a placement for
        // a different start
        let shifted = g.with_start(1).unwrap();
        let p = place_pebbles(&shifted, EncodingScheme::General).unwrap();
        let r = run_trial(&g, &p, &AgentStrategy::QuantumFixedN { n: 30 }, 3, &mut RngStream::new(0, 0)).unwrap();
        assert_eq!(r.failure_kind, FailureKind::MissingPebble);
        assert!(!r.success);
    }

    #[test]
    fn wrong_port_range_is_distinct() {
        // star centered at 0 whose port 3 leads to the treasure
        let star = PortGraph::new(
            5,
            vec![
                Edge::new(0, 0, 1, 0),
                Edge::new(0, 1, 2, 0),
                Edge::new(0, 2, 3, 0),
                Edge::new(0, 3, 4, 0),
            ],
            0,
            4,
        )
        .unwrap();
        let p = place_pebbles(&star, EncodingScheme::General).unwrap();
        // same pebbles on a path where node 0 has degree 1
        let path = PortGraph::new(
            5,
            vec![
                Edge::new(0, 0, 1, 0),
                Edge::new(1, 1, 2, 0),
                Edge::new(2, 1, 3, 0),
                Edge::new(3, 1, 4, 0),
            ],
            0,
            4,
        )
        .unwrap();
        let r = run_trial(&path, &p, &AgentStrategy::QuantumFixedN { n: 40 }, 5, &mut RngStream::new(3, 0)).unwrap();
        assert_eq!(r.failure_kind, FailureKind::WrongPortRange);
        assert_eq!(r.steps_taken, 0);
    }

    #[test]
    fn classical_table_oscillates_on_proof_gadget() {
        let g = gen_gpqr(GadgetSpec::trap()).unwrap();
        let table = DecisionTable::new()
            .with(3, Action::Port(0), Action::Port(1))
            .unwrap()
            .with(1, Action::Port(0), Action::Port(0))
            .unwrap();
        let p = Placement::markers([0, 1, 2]);
        let r = run_trial(&g, &p, &AgentStrategy::ClassicalTable(table.clone()), 100, &mut RngStream::new(0, 0)).unwrap();
        assert_eq!(r.failure_kind, FailureKind::StepBudgetExhausted);

        let mut bits = vec![false; 6];
        bits[..3].fill(true);
        let t = classical_trajectory(&g, &bits, &table).unwrap();
        assert_eq!(t.visited, vec![0, 1, 0]);
        assert!(!t.reached_treasure);
    }

    #[test]
    fn stay_table() {
        let g = gen_gpqr(GadgetSpec::new(2, 2, 2)).unwrap();
        let table = DecisionTable::stay_always(&[1, 3]);
        let t = classical_trajectory(&g, &[false; 6], &table).unwrap();
        assert_eq!(t.visited, vec![0, 0]);
        let partial = DecisionTable::stay_always(&[1]);
        assert!(matches!(
            classical_trajectory(&g, &[false; 6], &partial),
            Err(AgentError::TablePartial(3))
        ));
    }

    #[test]
    fn trajectories_are_short_on_gadgets() {
        let tables = [
            DecisionTable::new().with(3, Action::Port(0), Action::Port(2)).unwrap().with(1, Action::Port(0), Action::Stay).unwrap(),
            DecisionTable::new().with(3, Action::Port(1), Action::Port(1)).unwrap().with(1, Action::Port(0), Action::Port(0)).unwrap(),
        ];
        for spec in GadgetSpec::family() {
            let g = gen_gpqr(spec).unwrap();
            for mask in 0..64u32 {
                let bits: Vec<bool> = (0..6).map(|i| mask >> i & 1 == 1).collect();
                for table in &tables {
                    let t = classical_trajectory(&g, &bits, table).unwrap();
                    assert!(t.visited.len() <= 7);
                }
            }
        }
    }

    #[test]
    fn table_rejects_missing_ports() {
        assert!(DecisionTable::new().with(1, Action::Port(1), Action::Stay).is_err());
    }

    #[test]
    fn strategy_validation() {
        let g = gen_padded_path(2, 4, 0).unwrap();
        let p = place_pebbles(&g, EncodingScheme::General).unwrap();
        assert!(Agent::new(AgentStrategy::QuantumFixedN { n: 0 }, &p).is_err());
        assert!(Agent::new(AgentStrategy::QuantumAdaptive { cap: 1 }, &p).is_err());
        assert!(Agent::new(AgentStrategy::QuditOneShot, &p).is_err());
        assert!(Agent::new(AgentStrategy::RandomWalk, &p).is_ok());
    }
}
