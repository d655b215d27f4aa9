//! Treasure hunting on anonymous port-labeled graphs with quantum pebbles.
//!
//! An oracle places one pebble per shortest-path node, each emitting copies
//! of a qubit that encodes the next exit port. An oblivious agent measures
//! those copies in a fixed family of bases and walks the decoded port.
//!
//! - [`graph`]: port-labeled graphs, generators and the text format.
//! - [`quantum`]: states, bases, Born sampling and the counter-based RNG.
//! - [`encoding`]: port to state maps and pebble placement.
//! - [`agent`]: decision rules and the walk executor.
//! - [`analysis`]: closed-form bounds and the classical impossibility check.
//! - [`harness`]: seeded Monte-Carlo experiments and sweeps.

pub mod agent;
pub mod analysis;
pub mod encoding;
pub mod graph;
pub mod harness;
pub mod quantum;

pub use agent::{run_trial, AgentStrategy, FailureKind, TrialResult};
pub use encoding::{place_pebbles, EncodingScheme, Placement};
pub use graph::{PortGraph, Violation};
pub use harness::{run_experiment, ExperimentConfig, SummaryStats};
pub use quantum::{MeasurementBasis, QubitState, RngStream};
