//! Restarted, averaged primal-dual hybrid gradient (PDHG) for LPs in bounded
//! general form.
//!
//! Each iteration costs one product with `A` and one with `Aᵀ`:
//!
//! ```text
//! x⁺ = Π_[l,u](x − τ(c − Aᵀy))
//! a  = A(2x⁺ − x)
//! y⁺ = max(0, y + σ(L − a)) + min(0, y + σ(U − a))     (per row)
//! ```
//!
//! The dual update is the proximal step for a single multiplier per row whose
//! sign tracks which side of `[L, U]` is active, so range rows need no
//! splitting. Steps are constant, `τ = 1/(ω‖A‖)` and `σ = ω/‖A‖`, with
//! `‖A‖` from a power method inflated by 5%. Iterates are averaged since the
//! last restart; every `check_interval` iterations both the current and the
//! averaged point are measured on the original problem in standard form, and
//! the average becomes the new starting point once its combined relative
//! residual has dropped to `restart_beta` times the value at the last restart.

mod norm;
mod scaling;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{
    check_termination, residuals, Algorithm, LpError, LpProblem, NormPair, PrimalDualIterate,
    ResidualReport, SparseMatrix, StandardFormOptions, StandardLp, ToleranceProfile,
};
use crate::par::{fill_indexed, Parallelism};

pub use norm::estimate_operator_norm;
pub use scaling::{diagonal_scale, ruiz_scales, scale_problem, ScaledProblem, RUIZ_SWEEPS};

/// Power-method rounds used for the step size.
pub const POWER_ITERATIONS: usize = 30;
/// Safety factor applied to the norm estimate.
pub const NORM_SAFETY: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PdhgConfig {
    pub epsilon: f64,
    pub max_iterations: u64,
    pub time_limit_seconds: f64,
    pub check_interval: u64,
    pub restart_beta: f64,
    /// Also restart when the average is below this fraction of the value at
    /// the last restart and got worse since the previous check.
    pub restart_necessary: f64,
    /// Also restart once the iterations since the last restart reach this
    /// fraction of all iterations so far.
    pub restart_artificial: f64,
    pub restarts_enabled: bool,
    pub scaling_enabled: bool,
    /// Follow Ruiz scaling with one Pock-Chambolle pass.
    pub pock_chambolle: bool,
    pub primal_weight_init: f64,
    /// Rebalance the primal weight at each restart from the distance moved
    /// in `x` and `y` since the previous one.
    pub adaptive_primal_weight: bool,
    pub power_seed: u64,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

impl Default for PdhgConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            max_iterations: 1_000_000,
            time_limit_seconds: 3600.0,
            check_interval: 64,
            restart_beta: 0.2,
            restart_necessary: 0.8,
            restart_artificial: 0.36,
            restarts_enabled: true,
            scaling_enabled: true,
            pock_chambolle: true,
            primal_weight_init: 1.0,
            adaptive_primal_weight: true,
            power_seed: 0,
            parallelism: Parallelism::Sequential,
        }
    }
}

impl PdhgConfig {
    pub fn validate(&self) -> Result<(), PdhgError> {
        let bad = |what: &str| Err(PdhgError::Config(what.to_string()));
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon must be positive and finite");
        }
        if self.time_limit_seconds.is_nan() || self.time_limit_seconds < 0.0 {
            return bad("time_limit_seconds must be nonnegative");
        }
        if self.check_interval == 0 {
            return bad("check_interval must be at least 1");
        }
        if !(self.restart_beta > 0.0 && self.restart_beta < 1.0) {
            return bad("restart_beta must lie in (0, 1)");
        }
        if !(self.restart_beta..1.0).contains(&self.restart_necessary) {
            return bad("restart_necessary must lie in [restart_beta, 1)");
        }
        if !(self.restart_artificial > 0.0 && self.restart_artificial <= 1.0) {
            return bad("restart_artificial must lie in (0, 1]");
        }
        if !(self.primal_weight_init > 0.0 && self.primal_weight_init.is_finite()) {
            return bad("primal_weight_init must be positive and finite");
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PdhgError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    IterationLimit,
    TimeLimit,
    /// A non-finite value appeared in the iterate at this iteration.
    NumericalTrouble {
        iteration: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdhgStats {
    pub iterations: u64,
    /// Products with `A` or `Aᵀ` made by the iteration and the power method.
    /// Residual evaluations at check points are not counted.
    pub matvec_count: u64,
    pub restarts: u64,
    pub wall_seconds_iterations: f64,
    pub wall_seconds_total: f64,
    pub residuals: ResidualReport,
    pub step_primal: f64,
    pub step_dual: f64,
    pub final_primal_weight: f64,
}

#[derive(Debug, Clone)]
pub struct PdhgResult {
    pub status: SolveStatus,
    /// Primal point in the original variables.
    pub x: Vec<f64>,
    /// One multiplier per original row.
    pub y: Vec<f64>,
    /// The same point lifted to standard form, as measured.
    pub iterate: PrimalDualIterate,
    pub objective: f64,
    pub stats: PdhgStats,
}

/// An original-space point and its measurements.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub iterate: PrimalDualIterate,
    pub report: ResidualReport,
    pub combined: f64,
}

/// The iteration state, exposed so tests and tools can step it by hand.
pub struct PdhgState<'a> {
    original: &'a LpProblem,
    standard: StandardLp,
    norms: NormPair,
    scaled: ScaledProblem,
    at: SparseMatrix,
    eta: f64,
    omega: f64,
    tau: f64,
    sigma: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    aty: Vec<f64>,
    x_next: Vec<f64>,
    y_next: Vec<f64>,
    x_bar: Vec<f64>,
    ax_bar: Vec<f64>,
    x_sum: Vec<f64>,
    y_sum: Vec<f64>,
    aty_sum: Vec<f64>,
    n_avg: u64,
    x_restart: Vec<f64>,
    y_restart: Vec<f64>,
    restart_metric: f64,
    iterations: u64,
    matvecs: u64,
    restarts: u64,
    mode: Parallelism,
}

impl<'a> PdhgState<'a> {
    /// Scales `p`, estimates the step size and places the start at the
    /// projection of the origin onto the variable bounds with zero duals.
    pub fn new(p: &'a LpProblem, cfg: &PdhgConfig) -> Result<Self, PdhgError> {
        cfg.validate()?;
        let standard = StandardLp::from_problem(
            p,
            StandardFormOptions {
                drop_free_rows: true,
            },
        )?;
        let norms = standard.norms();
        let scaled = if cfg.scaling_enabled {
            scale_problem(p, RUIZ_SWEEPS, cfg.pock_chambolle)
        } else {
            ScaledProblem::identity(p)
        };
        let mode = cfg.parallelism;
        let sp = &scaled.problem;
        let at = sp.matrix().transpose();
        let (est, matvecs) =
            norm::estimate_with(sp.matrix(), &at, POWER_ITERATIONS, cfg.power_seed, mode);
        let eta = if est > 0.0 {
            1.0 / (NORM_SAFETY * est)
        } else {
            1.0
        };
        let omega = cfg.primal_weight_init;
        let (m, n) = (sp.n_rows(), sp.n_cols());
        let x: Vec<f64> = (0..n)
            .map(|j| 0.0f64.clamp(sp.var_lower()[j], sp.var_upper()[j]))
            .collect();
        let mut st = Self {
            original: p,
            standard,
            norms,
            at,
            eta,
            omega,
            tau: eta / omega,
            sigma: eta * omega,
            x_next: vec![0.0; n],
            y_next: vec![0.0; m],
            x_bar: vec![0.0; n],
            ax_bar: vec![0.0; m],
            x_sum: vec![0.0; n],
            y_sum: vec![0.0; m],
            aty_sum: vec![0.0; n],
            n_avg: 0,
            x_restart: x.clone(),
            y_restart: vec![0.0; m],
            restart_metric: f64::INFINITY,
            x,
            y: vec![0.0; m],
            aty: vec![0.0; n],
            iterations: 0,
            matvecs,
            restarts: 0,
            mode,
            scaled,
        };
        st.restart_metric = st.evaluate_current()?.combined;
        Ok(st)
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn matvecs(&self) -> u64 {
        self.matvecs
    }

    pub fn restarts(&self) -> u64 {
        self.restarts
    }

    pub fn step_sizes(&self) -> (f64, f64) {
        (self.tau, self.sigma)
    }

    pub fn primal_weight(&self) -> f64 {
        self.omega
    }

    pub fn scaling(&self) -> &ScaledProblem {
        &self.scaled
    }

    /// Overrides the primal weight and recomputes both steps.
    pub fn set_primal_weight(&mut self, omega: f64) {
        self.omega = omega;
        self.tau = self.eta / omega;
        self.sigma = self.eta * omega;
    }

    /// One PDHG iteration. Returns `false` if the new iterate is not finite,
    /// in which case the state is left at the offending iterate.
    pub fn step(&mut self) -> bool {
        let sp = &self.scaled.problem;
        let (c, vl, vu) = (sp.objective(), sp.var_lower(), sp.var_upper());
        let (x, aty, tau) = (&self.x, &self.aty, self.tau);
        fill_indexed(&mut self.x_next, self.mode, |j| {
            (x[j] - tau * (c[j] - aty[j])).clamp(vl[j], vu[j])
        });
        let xn = &self.x_next;
        fill_indexed(&mut self.x_bar, self.mode, |j| 2.0 * xn[j] - x[j]);
        sp.matrix()
            .matvec_into(&self.x_bar, &mut self.ax_bar, self.mode)
            .expect("dimensions fixed at setup");
        let (rl, ru, y, a, sigma) = (
            sp.row_lower(),
            sp.row_upper(),
            &self.y,
            &self.ax_bar,
            self.sigma,
        );
        fill_indexed(&mut self.y_next, self.mode, |i| {
            let lo = if rl[i] == f64::NEG_INFINITY {
                0.0
            } else {
                (y[i] + sigma * (rl[i] - a[i])).max(0.0)
            };
            let hi = if ru[i] == f64::INFINITY {
                0.0
            } else {
                (y[i] + sigma * (ru[i] - a[i])).min(0.0)
            };
            lo + hi
        });
        self.at
            .matvec_into(&self.y_next, &mut self.aty, self.mode)
            .expect("dimensions fixed at setup");
        self.matvecs += 2;
        self.iterations += 1;
        std::mem::swap(&mut self.x, &mut self.x_next);
        std::mem::swap(&mut self.y, &mut self.y_next);
        let finite = self.x.iter().chain(&self.y).all(|v| v.is_finite());
        for (s, v) in self.x_sum.iter_mut().zip(&self.x) {
            *s += v;
        }
        for (s, v) in self.y_sum.iter_mut().zip(&self.y) {
            *s += v;
        }
        for (s, v) in self.aty_sum.iter_mut().zip(&self.aty) {
            *s += v;
        }
        self.n_avg += 1;
        finite
    }

    fn average(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.n_avg == 0 {
            return None;
        }
        let k = self.n_avg as f64;
        Some((
            self.x_sum.iter().map(|v| v / k).collect(),
            self.y_sum.iter().map(|v| v / k).collect(),
        ))
    }

    /// Measures a scaled-space point on the original problem.
    pub fn evaluate(&self, x_scaled: &[f64], y_scaled: &[f64]) -> Result<Evaluation, LpError> {
        let x = self.scaled.unscale_primal(x_scaled);
        let y = self.scaled.unscale_dual(y_scaled);
        let iterate = self.standard.lift_iterate(self.original, &x, &y)?;
        let report = residuals(&self.standard, &iterate)?;
        let combined = report.combined_relative(self.norms);
        Ok(Evaluation {
            x,
            y,
            iterate,
            report,
            combined: if combined.is_nan() {
                f64::INFINITY
            } else {
                combined
            },
        })
    }

    pub fn evaluate_current(&self) -> Result<Evaluation, LpError> {
        self.evaluate(&self.x, &self.y)
    }

    /// The average since the last restart, or the current point if no step
    /// has been taken since.
    pub fn evaluate_average(&self) -> Result<Evaluation, LpError> {
        match self.average() {
            Some((x, y)) => self.evaluate(&x, &y),
            None => self.evaluate_current(),
        }
    }

    /// Restarts from the running average.
    pub fn restart_to_average(&mut self, metric: f64, adapt_weight: bool) {
        let Some((x, y)) = self.average() else {
            return;
        };
        let k = self.n_avg as f64;
        self.aty = self.aty_sum.iter().map(|v| v / k).collect();
        if adapt_weight {
            let dx = dist(&x, &self.x_restart);
            let dy = dist(&y, &self.y_restart);
            if dx > 1e-10 && dy > 1e-10 {
                let w = (0.5 * (dy / dx).ln() + 0.5 * self.omega.ln()).exp();
                if w.is_finite() && w > 0.0 {
                    self.set_primal_weight(w);
                }
            }
        }
        self.x_restart.clone_from(&x);
        self.y_restart.clone_from(&y);
        self.x = x;
        self.y = y;
        self.x_sum.fill(0.0);
        self.y_sum.fill(0.0);
        self.aty_sum.fill(0.0);
        self.n_avg = 0;
        self.restart_metric = metric;
        self.restarts += 1;
    }

    pub fn norms(&self) -> NormPair {
        self.norms
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v) * (u - v))
        .sum::<f64>()
        .sqrt()
}

/// Solves `p` with restarted, averaged PDHG. Infeasible or unbounded
/// problems end at a limit.
pub fn solve_pdhg(p: &LpProblem, cfg: &PdhgConfig) -> Result<PdhgResult, PdhgError> {
    let t0 = Instant::now();
    let mut st = PdhgState::new(p, cfg)?;
    let profile = ToleranceProfile::new(Algorithm::Pdhg, cfg.epsilon)
        .ok_or_else(|| PdhgError::Config("epsilon".into()))?;
    let t_iter = Instant::now();
    let over_time = || t0.elapsed().as_secs_f64() > cfg.time_limit_seconds;

    let mut status = None;
    if over_time() {
        status = Some(SolveStatus::TimeLimit);
    }
    let mut best: Option<Evaluation> = None;
    let mut last_restart_iter = 0u64;
    let mut prev_avg = f64::INFINITY;
    while status.is_none() {
        if st.iterations() >= cfg.max_iterations {
            status = Some(SolveStatus::IterationLimit);
            break;
        }
        if !st.step() {
            status = Some(SolveStatus::NumericalTrouble {
                iteration: st.iterations(),
            });
            break;
        }
        if st.iterations() % cfg.check_interval == 0 {
            let cur = st.evaluate_current()?;
            let avg = st.evaluate_average()?;
            let avg_metric = avg.combined;
            let pick = if avg.combined < cur.combined {
                avg
            } else {
                cur
            };
            if check_termination(&pick.report, profile, st.norms()) {
                best = Some(pick);
                status = Some(SolveStatus::Optimal);
                break;
            }
            let since = st.iterations() - last_restart_iter;
            let fire = avg_metric <= cfg.restart_beta * st.restart_metric
                || (avg_metric <= cfg.restart_necessary * st.restart_metric
                    && avg_metric > prev_avg)
                || since as f64 >= cfg.restart_artificial * st.iterations() as f64;
            prev_avg = avg_metric;
            if cfg.restarts_enabled && fire {
                st.restart_to_average(avg_metric, cfg.adaptive_primal_weight);
                last_restart_iter = st.iterations();
                prev_avg = f64::INFINITY;
            }
        }
        if over_time() {
            status = Some(SolveStatus::TimeLimit);
        }
    }
    let wall_iter = t_iter.elapsed().as_secs_f64();
    let status = status.expect("loop exits with a status");

    let best = match best {
        Some(b) => b,
        None => {
            let cur = st.evaluate_current()?;
            let avg = st.evaluate_average()?;
            if avg.combined < cur.combined {
                avg
            } else {
                cur
            }
        }
    };
    let (tau, sigma) = st.step_sizes();
    let stats = PdhgStats {
        iterations: st.iterations(),
        matvec_count: st.matvecs(),
        restarts: st.restarts(),
        wall_seconds_iterations: wall_iter,
        wall_seconds_total: t0.elapsed().as_secs_f64(),
        residuals: best.report,
        step_primal: tau,
        step_dual: sigma,
        final_primal_weight: st.primal_weight(),
    };
    Ok(PdhgResult {
        status,
        objective: p.objective_value(&best.x),
        x: best.x,
        y: best.y,
        iterate: best.iterate,
        stats,
    })
}
