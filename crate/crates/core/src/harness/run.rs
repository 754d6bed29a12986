use std::collections::BTreeMap;
use std::io;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use thiserror::Error;

use super::{Component, ResultsSink, RunRecord, RunStatus, SolverSpec, SCHEMA_VERSION};
use crate::gen::{generate, size_estimate, FamilyParams, GenError, LadderSpec};
use crate::lpfile::{write_lp, LpFileName};
use crate::par::{self, Parallelism};
use crate::pdhg::{solve_pdhg, SolveStatus};
use crate::presolve::{presolve, PresolveError};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub time_limit_seconds: f64,
    /// Where instance files are written.
    pub instance_dir: PathBuf,
    pub host: String,
    /// Rungs solved at once; above 1 the records carry the parallel-timing
    /// caveat.
    pub jobs: usize,
}

impl RunOptions {
    pub fn new(instance_dir: impl Into<PathBuf>) -> Self {
        Self {
            time_limit_seconds: 3600.0,
            instance_dir: instance_dir.into(),
            host: host_tag(),
            jobs: 1,
        }
    }
}

/// `$HOSTNAME`, else `/etc/hostname`, else `unknown`.
pub fn host_tag() -> String {
    std::env::var("HOSTNAME")
        .ok()
        .or_else(|| std::fs::read_to_string("/etc/hostname").ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".into())
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid ladder: {0}")]
    Ladder(#[from] GenError),
    #[error("cannot create instance directory {path}: {source}")]
    InstanceDir { path: PathBuf, source: io::Error },
    #[error("cannot append to results file {path}: {source}")]
    Sink { path: PathBuf, source: io::Error },
}

/// Generates, writes, presolves and solves every rung, appending one record
/// per rung to `sink` in rung order. Per-rung failures become records; only
/// an unusable instance directory or results file aborts.
pub fn run_ladder(
    spec: &LadderSpec,
    solver: &SolverSpec,
    opts: &RunOptions,
    sink: &mut ResultsSink,
) -> Result<Vec<RunRecord>, HarnessError> {
    std::fs::create_dir_all(&opts.instance_dir).map_err(|source| HarnessError::InstanceDir {
        path: opts.instance_dir.clone(),
        source,
    })?;
    let params = spec.all_params()?;
    let mut append = |r: &RunRecord| {
        sink.append(r).map_err(|source| HarnessError::Sink {
            path: sink.path().to_path_buf(),
            source,
        })
    };
    if opts.jobs > 1 {
        let indexed: Vec<(usize, FamilyParams)> = params.into_iter().enumerate().collect();
        let records = par::map_collect(&indexed, Parallelism::Parallel, |(k, p)| {
            run_rung(*k + 1, p, solver, opts, true)
        });
        for r in &records {
            append(r)?;
        }
        return Ok(records);
    }
    let mut records = Vec::with_capacity(params.len());
    for (k, p) in params.iter().enumerate() {
        let r = run_rung(k + 1, p, solver, opts, false);
        log::info!("{} rung {}: {}", r.family, r.rung, r.status);
        append(&r)?;
        records.push(r);
    }
    Ok(records)
}

fn run_rung(
    rung: usize,
    params: &FamilyParams,
    solver: &SolverSpec,
    opts: &RunOptions,
    parallel_timing: bool,
) -> RunRecord {
    let est = size_estimate(params);
    let mut rec = RunRecord {
        schema_version: SCHEMA_VERSION,
        family: params.family(),
        rung,
        knobs: params.knobs().map(|(k, v)| (k.to_string(), v)).collect(),
        seed: params.seed(),
        rows_pre: est.rows,
        cols_pre: est.cols,
        nnz_pre: est.nnz,
        rows_post: est.rows,
        cols_post: est.cols,
        nnz_post: est.nnz,
        solver: solver.id().to_string(),
        status: RunStatus::Error,
        detail: None,
        component_seconds: BTreeMap::new(),
        residuals: None,
        iterations: None,
        objective: None,
        timestamp: 0,
        host: opts.host.clone(),
        parallel_timing,
    };
    solve_rung(&mut rec, params, solver, opts);
    rec.timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    rec
}

fn solve_rung(rec: &mut RunRecord, params: &FamilyParams, solver: &SolverSpec, opts: &RunOptions) {
    let p = match generate(params) {
        Ok((p, _)) => p,
        Err(e) => {
            rec.detail = Some(format!("generation failed: {e}"));
            return;
        }
    };
    let name = LpFileName::new(params.clone());
    let path = opts.instance_dir.join(name.to_string());
    if let Err(e) = std::fs::write(&path, write_lp(&p, Some(&name))) {
        rec.detail = Some(format!("cannot write {}: {e}", path.display()));
        return;
    }
    (rec.rows_pre, rec.cols_pre, rec.nnz_pre) = (p.n_rows(), p.n_cols(), p.nnz());
    let start = Instant::now();
    let reduced = presolve(&p);
    let presolve_seconds = start.elapsed().as_secs_f64();
    let reduced = match reduced {
        Ok((r, _)) => r,
        Err(e) => {
            rec.status = match e {
                PresolveError::ProvenInfeasible(_) => RunStatus::Infeasible,
                PresolveError::ProvenUnbounded(_) => RunStatus::Unbounded,
            };
            rec.detail = Some(e.to_string());
            return;
        }
    };
    (rec.rows_post, rec.cols_post, rec.nnz_post) =
        (reduced.n_rows(), reduced.n_cols(), reduced.nnz());
    match solver {
        SolverSpec::BuiltinPdhg(cfg) => {
            rec.component_seconds
                .insert(Component::Presolve, presolve_seconds);
            let cfg = crate::pdhg::PdhgConfig {
                time_limit_seconds: opts.time_limit_seconds,
                ..*cfg
            };
            match solve_pdhg(&reduced, &cfg) {
                Ok(r) => {
                    rec.status = match r.status {
                        SolveStatus::Optimal => RunStatus::Optimal,
                        SolveStatus::IterationLimit => RunStatus::IterationLimit,
                        SolveStatus::TimeLimit => RunStatus::TimeLimit,
                        SolveStatus::NumericalTrouble { iteration } => {
                            rec.detail =
                                Some(format!("non-finite iterate at iteration {iteration}"));
                            RunStatus::NumericalTrouble
                        }
                    };
                    rec.component_seconds
                        .insert(Component::Iterations, r.stats.wall_seconds_iterations);
                    rec.iterations = Some(r.stats.iterations);
                    let res = r.stats.residuals;
                    let finite = [
                        res.rp_inf,
                        res.rp_2,
                        res.rd_inf,
                        res.rd_2,
                        res.complementarity,
                    ]
                    .iter()
                    .chain(&[
                        res.abs_gap,
                        res.rel_gap,
                        res.primal_objective,
                        res.dual_objective,
                    ])
                    .all(|v| v.is_finite());
                    if finite {
                        rec.residuals = Some(res);
                    }
                    if r.objective.is_finite() {
                        rec.objective = Some(r.objective);
                    }
                }
                Err(e) => rec.detail = Some(e.to_string()),
            }
            rec.component_seconds
                .insert(Component::Total, start.elapsed().as_secs_f64());
        }
        SolverSpec::External(ext) => {
            let out = ext.run(&path, opts.time_limit_seconds);
            rec.status = out.status;
            rec.detail = out.detail;
            rec.component_seconds = out.components;
        }
    }
}
