//! Seeded Monte-Carlo runs, parameter sweeps and their CSV/JSON output.
//!
//! Trial `i` always draws from `RngStream::new(seed, i)`, and results are
//! collected by trial index, so output does not depend on the worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{run_agent, Agent, AgentError, AgentStrategy, FailureKind, TrialResult};
use crate::analysis::{self, AnalysisError, BoundReport, DEFAULT_EPS};
use crate::encoding::{place_pebbles, EncodingError, EncodingScheme, Placement};
use crate::graph::{gen_gpqr, gen_padded_path, parse_graph, GadgetSpec, GraphError, PortGraph};
use crate::quantum::RngStream;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("placement: {0}")]
    Encoding(#[from] EncodingError),
    #[error("agent: {0}")]
    Agent(#[from] AgentError),
    #[error("analysis: {0}")]
    Analysis(#[from] AnalysisError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn config_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphFamily {
    /// Padded path of length `D`, max degree `delta`.
    Path,
    /// One of the 216 gadget graphs; `D` selects the family index.
    Gadget,
}

/// `path:D=10,delta=4` or `gadget:17`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: GraphFamily,
    #[serde(rename = "D", default)]
    pub d: usize,
    #[serde(default)]
    pub delta: usize,
}

impl GeneratorSpec {
    pub fn path(d: usize, delta: usize) -> Self {
        GeneratorSpec {
            family: GraphFamily::Path,
            d,
            delta,
        }
    }

    pub fn build(&self, seed: u64) -> Result<PortGraph, HarnessError> {
        match self.family {
            GraphFamily::Path => Ok(gen_padded_path(self.d, self.delta, seed)?),
            GraphFamily::Gadget => {
                let spec = GadgetSpec::family()
                    .nth(self.d)
                    .ok_or_else(|| config_err(format!("gadget index {} out of 0..216", self.d)))?;
                Ok(gen_gpqr(spec)?)
            }
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            GraphFamily::Path => write!(f, "path:D={},delta={}", self.d, self.delta),
            GraphFamily::Gadget => write!(f, "gadget:{}", self.d),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, rest) = s
            .split_once(':')
            .ok_or_else(|| config_err(format!("generator {s:?}: expected family:params")))?;
        match family {
            "path" => {
                let (mut d, mut delta) = (None, None);
                for kv in rest.split(',') {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| config_err(format!("generator {s:?}: expected key=value")))?;
                    let v: usize = v
                        .trim()
                        .parse()
                        .map_err(|_| config_err(format!("generator {s:?}: bad number {v:?}")))?;
                    match k.trim() {
                        "D" | "d" => d = Some(v),
                        "delta" => delta = Some(v),
                        other => return Err(config_err(format!("generator {s:?}: unknown key {other:?}"))),
                    }
                }
                match (d, delta) {
                    (Some(d), Some(delta)) => Ok(GeneratorSpec::path(d, delta)),
                    _ => Err(config_err(format!("generator {s:?}: need D and delta"))),
                }
            }
            "gadget" => {
                let index = rest
                    .trim()
                    .parse()
                    .map_err(|_| config_err(format!("generator {s:?}: bad gadget index")))?;
                Ok(GeneratorSpec {
                    family: GraphFamily::Gadget,
                    d: index,
                    delta: 3,
                })
            }
            other => Err(config_err(format!("unknown graph family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    File(PathBuf),
    Generator(GeneratorSpec),
}

/// Strategy as written in configs: `fixed:auto`, `fixed:N`, `adaptive:auto`,
/// `adaptive:N`, `qudit`, `random-walk`. `auto` is resolved from `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StrategySpec {
    Fixed(Option<usize>),
    Adaptive(Option<usize>),
    Qudit,
    RandomWalk,
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = |n: &Option<usize>| n.map_or("auto".to_string(), |n| n.to_string());
        match self {
            StrategySpec::Fixed(n) => write!(f, "fixed:{}", num(n)),
            StrategySpec::Adaptive(n) => write!(f, "adaptive:{}", num(n)),
            StrategySpec::Qudit => f.write_str("qudit"),
            StrategySpec::RandomWalk => f.write_str("random-walk"),
        }
    }
}

impl FromStr for StrategySpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |v: &str| -> Result<Option<usize>, HarnessError> {
            if v == "auto" {
                Ok(None)
            } else {
                v.parse()
                    .map(Some)
                    .map_err(|_| config_err(format!("strategy {s:?}: bad count {v:?}")))
            }
        };
        match s.split_once(':') {
            Some(("fixed", v)) => Ok(StrategySpec::Fixed(num(v)?)),
            Some(("adaptive", v)) => Ok(StrategySpec::Adaptive(num(v)?)),
            None if s == "fixed" => Ok(StrategySpec::Fixed(None)),
            None if s == "adaptive" => Ok(StrategySpec::Adaptive(None)),
            None if s == "qudit" => Ok(StrategySpec::Qudit),
            None if s == "random-walk" || s == "random_walk" => Ok(StrategySpec::RandomWalk),
            _ => Err(config_err(format!(
                "unknown strategy {s:?}; use fixed:auto|fixed:N|adaptive:auto|adaptive:N|qudit|random-walk"
            ))),
        }
    }
}

impl TryFrom<String> for StrategySpec {
    type Error = HarnessError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<StrategySpec> for String {
    fn from(s: StrategySpec) -> Self {
        s.to_string()
    }
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph_source: GraphSource,
    pub scheme: EncodingScheme,
    pub strategy: StrategySpec,
    pub trials: usize,
    pub seed: u64,
    /// Defaults to the start-treasure distance.
    #[serde(default)]
    pub step_budget: Option<usize>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Worker threads; `None` uses rayon's default.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(graph_source: GraphSource, scheme: EncodingScheme, strategy: StrategySpec, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            graph_source,
            scheme,
            strategy,
            trials,
            seed,
            step_budget: None,
            eps: DEFAULT_EPS,
            threads: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(config_err("trials must be at least 1"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(config_err(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if self.threads == Some(0) {
            return Err(config_err("threads must be at least 1"));
        }
        let compatible = match self.strategy {
            StrategySpec::Fixed(_) | StrategySpec::Adaptive(_) => {
                matches!(self.scheme, EncodingScheme::General | EncodingScheme::BitSign4)
            }
            StrategySpec::Qudit => self.scheme == EncodingScheme::Qudit,
            StrategySpec::RandomWalk => true,
        };
        if !compatible {
            return Err(config_err(format!(
                "strategy {} cannot read {} pebbles",
                self.strategy, self.scheme
            )));
        }
        if self.scheme == EncodingScheme::FullPathSingleQubit {
            return Err(config_err("the full-path scheme is analysis-only; use compare-fullpath"));
        }
        Ok(())
    }
}

/// A config with graph, placement and strategy resolved.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub graph: PortGraph,
    pub placement: Placement,
    pub strategy: AgentStrategy,
    pub path_length: usize,
    pub step_budget: usize,
    pub bound: BoundReport,
}

pub fn load_graph(source: &GraphSource, seed: u64) -> Result<PortGraph, HarnessError> {
    match source {
        GraphSource::File(path) => Ok(parse_graph(&std::fs::read_to_string(path)?)?),
        GraphSource::Generator(spec) => spec.build(seed),
    }
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared, HarnessError> {
    cfg.validate()?;
    let graph = load_graph(&cfg.graph_source, cfg.seed)?;
    let placement = place_pebbles(&graph, cfg.scheme)?;
    let d = graph.shortest_path(graph.start(), graph.treasure())?.len();
    let bitsign = cfg.scheme == EncodingScheme::BitSign4;
    let auto_n = if bitsign {
        analysis::bitsign4_required_n(d, cfg.eps)
    } else {
        analysis::required_n(d, placement.delta(), cfg.eps)
    };
    let bases = placement.family().map_or(1, |f| f.len());
    let (strategy, n) = match cfg.strategy {
        StrategySpec::Fixed(n) => {
            let n = n.unwrap_or(auto_n);
            (AgentStrategy::QuantumFixedN { n }, Some(n))
        }
        StrategySpec::Adaptive(cap) => {
            let cap = cap.unwrap_or(auto_n * bases);
            (AgentStrategy::QuantumAdaptive { cap }, None)
        }
        StrategySpec::Qudit => (AgentStrategy::QuditOneShot, None),
        StrategySpec::RandomWalk => (AgentStrategy::RandomWalk, None),
    };
    Agent::new(strategy.clone(), &placement).map_err(|e| config_err(e.to_string()))?;
    let bound = if bitsign {
        analysis::bitsign4_bound_report(d, n, cfg.eps)?
    } else {
        analysis::bound_report(d, placement.delta(), n, cfg.eps)?
    };
    Ok(Prepared {
        graph,
        placement,
        strategy,
        path_length: d,
        step_budget: cfg.step_budget.unwrap_or(d),
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub success: bool,
    pub steps: usize,
    pub measurements: u64,
    pub failure_kind: FailureKind,
}

impl TrialRecord {
    fn new(trial: usize, r: TrialResult) -> Self {
        TrialRecord {
            trial,
            success: r.success,
            steps: r.steps_taken,
            measurements: r.measurements_total,
            failure_kind: r.failure_kind,
        }
    }
}

/// Wilson score interval at 95%.
pub fn wilson_ci_95(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub wilson_ci_95: (f64, f64),
    pub mean_steps: f64,
    pub mean_measurements: f64,
    pub failure_breakdown: BTreeMap<FailureKind, usize>,
    pub bound: BoundReport,
    pub strategy: AgentStrategy,
    pub step_budget: usize,
}

impl SummaryStats {
    pub fn from_records(records: &[TrialRecord], bound: BoundReport, strategy: AgentStrategy, step_budget: usize) -> Self {
        let trials = records.len();
        let successes = records.iter().filter(|r| r.success).count();
        let mut failure_breakdown: BTreeMap<FailureKind, usize> =
            FailureKind::ALL.iter().map(|&k| (k, 0)).collect();
        for r in records {
            *failure_breakdown.entry(r.failure_kind).or_default() += 1;
        }
        let n = trials.max(1) as f64;
        SummaryStats {
            trials,
            successes,
            success_rate: successes as f64 / n,
            wilson_ci_95: wilson_ci_95(successes, trials),
            mean_steps: records.iter().map(|r| r.steps as f64).sum::<f64>() / n,
            mean_measurements: records.iter().map(|r| r.measurements as f64).sum::<f64>() / n,
            failure_breakdown,
            bound,
            strategy,
            step_budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Experiment {
    pub summary: SummaryStats,
    pub records: Vec<TrialRecord>,
}

impl Experiment {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["trial", "success", "steps", "measurements", "failure_kind"])?;
        for r in &self.records {
            w.write_record([
                r.trial.to_string(),
                r.success.to_string(),
                r.steps.to_string(),
                r.measurements.to_string(),
                r.failure_kind.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String, HarnessError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

fn run_trials(p: &Prepared, trials: usize, seed: u64) -> Result<Vec<TrialRecord>, HarnessError> {
    let agent = Agent::new(p.strategy.clone(), &p.placement)?;
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i as u64);
            let r = run_agent(&p.graph, &p.placement, &agent, p.step_budget, &mut rng)?;
            Ok(TrialRecord::new(i, r))
        })
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment, HarnessError> {
    let p = prepare(cfg)?;
    let records = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| config_err(e.to_string()))?
            .install(|| run_trials(&p, cfg.trials, cfg.seed))?,
        None => run_trials(&p, cfg.trials, cfg.seed)?,
    };
    let summary = SummaryStats::from_records(&records, p.bound, p.strategy, p.step_budget);
    Ok(Experiment { summary, records })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "n")]
    N,
    D,
    #[serde(rename = "delta")]
    Delta,
}

impl FromStr for SweepAxis {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "n" => Ok(SweepAxis::N),
            "D" | "d" => Ok(SweepAxis::D),
            "delta" => Ok(SweepAxis::Delta),
            _ => Err(config_err(format!("unknown sweep axis {s:?}; use n, D or delta"))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::N => "n",
            SweepAxis::D => "D",
            SweepAxis::Delta => "delta",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: usize,
    pub summary: SummaryStats,
}

/// One experiment per value, all on the base seed. `D` and `delta` sweeps
/// need a generated graph; an `n` sweep forces the fixed strategy.
pub fn sweep(cfg: &ExperimentConfig, axis: SweepAxis, values: &[usize]) -> Result<Vec<SweepRow>, HarnessError> {
    values
        .iter()
        .map(|&value| {
            let mut c = cfg.clone();
            match (axis, &mut c.graph_source) {
                (SweepAxis::N, _) => c.strategy = StrategySpec::Fixed(Some(value)),
                (SweepAxis::D, GraphSource::Generator(g)) if g.family == GraphFamily::Path => g.d = value,
                (SweepAxis::Delta, GraphSource::Generator(g)) if g.family == GraphFamily::Path => g.delta = value,
                _ => return Err(config_err(format!("sweeping {axis} needs a path generator"))),
            }
            Ok(SweepRow {
                axis,
                value,
                summary: run_experiment(&c)?.summary,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "axis",
        "value",
        "trials",
        "successes",
        "success_rate",
        "ci_lo",
        "ci_hi",
        "mean_steps",
        "mean_measurements",
        "bound_success_lower",
        "required_n",
    ])?;
    for r in rows {
        let s = &r.summary;
        w.write_record([
            r.axis.to_string(),
            r.value.to_string(),
            s.trials.to_string(),
            s.successes.to_string(),
            s.success_rate.to_string(),
            s.wilson_ci_95.0.to_string(),
            s.wilson_ci_95.1.to_string(),
            s.mean_steps.to_string(),
            s.mean_measurements.to_string(),
            s.bound.success_lower.to_string(),
            s.bound.required_n.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
