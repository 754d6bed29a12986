//! Runs ladders against solvers, records timings and filters fit sets.

mod external;
mod run;
mod store;

pub use external::{ConfigError, ExternalSolver, TimingExtractor};
pub use run::{run_ladder, HarnessError, RunOptions};
pub use store::{load_results, LoadError, LoadedResults, ResultsSink, SkippedLine};

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fit::FitPoint;
use crate::gen::FamilyId;
use crate::lp::ResidualReport;
use crate::pdhg::PdhgConfig;

/// Version written into every record; loading a different version fails.
pub const SCHEMA_VERSION: u32 = 1;

/// Overrides the default output directory.
pub const RESULTS_DIR_ENV: &str = "LP_ASYMPT_RESULTS_DIR";

/// Successful runs required before a component is fitted.
pub const MIN_FIT_POINTS: usize = 20;

/// `$LP_ASYMPT_RESULTS_DIR` if set and nonempty, else `./results`.
pub fn results_dir() -> PathBuf {
    match std::env::var_os(RESULTS_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from("results"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Presolve,
    Ordering,
    Iterations,
    Crossover,
    Total,
}

impl Component {
    pub const ALL: [Component; 5] = [
        Component::Presolve,
        Component::Ordering,
        Component::Iterations,
        Component::Crossover,
        Component::Total,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::Presolve => "presolve",
            Component::Ordering => "ordering",
            Component::Iterations => "iterations",
            Component::Crossover => "crossover",
            Component::Total => "total",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Component {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Component::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                format!("unknown component {s:?} (expected presolve, ordering, iterations, crossover or total)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RunStatus {
    Optimal,
    IterationLimit,
    TimeLimit,
    NumericalTrouble,
    Infeasible,
    Unbounded,
    Error,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One solve of one rung.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub family: FamilyId,
    /// 1-based position in the ladder.
    pub rung: usize,
    pub knobs: BTreeMap<String, u64>,
    pub seed: u64,
    pub rows_pre: usize,
    pub cols_pre: usize,
    pub nnz_pre: usize,
    pub rows_post: usize,
    pub cols_post: usize,
    pub nnz_post: usize,
    pub solver: String,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub component_seconds: BTreeMap<Component, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<ResidualReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    /// Seconds since the Unix epoch when the record was produced.
    pub timestamp: u64,
    pub host: String,
    /// Set when the run shared the machine with other runs of the ladder.
    #[serde(default)]
    pub parallel_timing: bool,
}

impl RunRecord {
    pub fn seconds(&self, c: Component) -> Option<f64> {
        self.component_seconds.get(&c).copied()
    }

    /// True when `c` finished normally in this run. Presolve counts whenever
    /// it was timed; every other component needs an optimal solve.
    pub fn component_succeeded(&self, c: Component) -> bool {
        let timed = self.seconds(c).is_some_and(|s| s.is_finite() && s > 0.0);
        timed && (c == Component::Presolve || self.status == RunStatus::Optimal)
    }
}

/// What a ladder is solved with.
#[derive(Debug, Clone)]
pub enum SolverSpec {
    BuiltinPdhg(PdhgConfig),
    External(ExternalSolver),
}

impl SolverSpec {
    /// Identifier stored in records.
    pub fn id(&self) -> &str {
        match self {
            SolverSpec::BuiltinPdhg(_) => "pdhg",
            SolverSpec::External(e) => &e.name,
        }
    }
}

/// Points for one component, or none when too few runs succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct FitSet {
    pub points: Vec<FitPoint>,
    /// Number of records in which the component succeeded.
    pub successes: usize,
    pub insufficient: bool,
}

/// `(nnz, seconds)` pairs for `component`. The presolve component is
/// plotted against nnz before presolve, everything else against nnz after.
/// Fewer than [`MIN_FIT_POINTS`] successes yield an empty set.
pub fn filter_fit_set(records: &[RunRecord], component: Component) -> FitSet {
    let points: Vec<FitPoint> = records
        .iter()
        .filter(|r| r.component_succeeded(component))
        .map(|r| {
            let nnz = if component == Component::Presolve {
                r.nnz_pre
            } else {
                r.nnz_post
            };
            FitPoint::new(nnz as f64, r.seconds(component).unwrap_or_default())
        })
        .filter(|p| p.nnz > 0.0)
        .collect();
    let successes = points.len();
    if successes < MIN_FIT_POINTS {
        FitSet {
            points: Vec::new(),
            successes,
            insufficient: true,
        }
    } else {
        FitSet {
            points,
            successes,
            insufficient: false,
        }
    }
}
