use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use lp_asympt_core::gen::{size_estimate, FamilyId, FamilyParams, LadderSpec};
use lp_asympt_core::harness::{
    load_results, results_dir, run_ladder, Component, ExternalSolver, HarnessError, LoadedResults,
    ResultsSink, RunOptions, SolverSpec,
};
use lp_asympt_core::lpfile::{write_lp, LpFileName};
use lp_asympt_core::par::Parallelism;
use lp_asympt_core::pdhg::PdhgConfig;
use lp_asympt_core::report::{fit_rows, format_fit_line, write_report};

const EXIT_INVALID: u8 = 2;
const EXIT_SINK: u8 = 3;
const EXIT_RESULTS: u8 = 4;

/// A failure with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn fail(code: u8) -> impl FnOnce(anyhow::Error) -> Failure {
    move |error| Failure { code, error }
}

#[derive(Parser)]
#[command(
    name = "lp-asympt",
    version,
    about = "Benchmark ladders, PDHG solves and runtime scaling fits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one LP file per rung of a ladder.
    Generate {
        #[command(flatten)]
        ladder: LadderArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Solve every rung of a ladder and append run records.
    Solve {
        #[command(flatten)]
        ladder: LadderArgs,
        /// `builtin`, or `ext:<config.toml>` for an external solver.
        #[arg(long, default_value = "builtin")]
        solver: String,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = 3600.0)]
        time_limit: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Defaults to results.jsonl in the results directory.
        #[arg(long)]
        results: Option<PathBuf>,
        /// Where instance files go; defaults to instances/ in the results directory.
        #[arg(long)]
        instances_dir: Option<PathBuf>,
    },
    /// Print one power-law fit per family, solver and component.
    Fit {
        #[arg(long)]
        results: Option<PathBuf>,
        #[arg(long)]
        component: Option<Component>,
        #[arg(long)]
        family: Option<FamilyId>,
        #[arg(long)]
        solver: Option<String>,
    },
    /// Write report.md, points.csv and log-log plots.
    Report {
        #[arg(long)]
        results: Option<PathBuf>,
        #[arg(long, default_value = "report.md")]
        out: PathBuf,
        #[arg(long, default_value = "plots")]
        plots_dir: PathBuf,
    },
}

#[derive(Args)]
struct LadderArgs {
    #[arg(long)]
    family: FamilyId,
    #[arg(long, default_value_t = 10)]
    rungs: usize,
    /// Smallest rung as `knob=value,...` or values in schema order; both
    /// ends default to the family's desk-scale ladder.
    #[arg(long)]
    params_min: Option<String>,
    #[arg(long)]
    params_max: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_knobs(family: FamilyId, text: &str, seed: u64) -> anyhow::Result<FamilyParams> {
    let parts: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if parts.iter().all(|p| p.contains('=')) {
        let mut knobs = Vec::new();
        for p in &parts {
            let (k, v) = p.split_once('=').expect("checked above");
            let v: u64 = v.trim().parse().with_context(|| {
                format!("knob {}: {v:?} is not a nonnegative integer", k.trim())
            })?;
            knobs.push((k.trim(), v));
        }
        Ok(FamilyParams::from_named(family, &knobs, seed)?)
    } else {
        let values = parts
            .iter()
            .zip(family.schema())
            .map(|(p, k)| {
                p.parse::<u64>()
                    .with_context(|| format!("knob {}: {p:?} is not a nonnegative integer", k.name))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        if values.len() != parts.len() {
            return Err(anyhow!(
                "{family}: expected {} knob values, got {}",
                family.schema().len(),
                parts.len()
            ));
        }
        Ok(FamilyParams::from_values(family, values, seed)?)
    }
}

impl LadderArgs {
    fn spec(&self) -> anyhow::Result<LadderSpec> {
        let desk = LadderSpec::desk(self.family, self.rungs, self.seed)?;
        let lo = match &self.params_min {
            Some(t) => parse_knobs(self.family, t, self.seed)?,
            None => desk.params_min().clone(),
        };
        let hi = match &self.params_max {
            Some(t) => parse_knobs(self.family, t, self.seed)?,
            None => desk.params_max().clone(),
        };
        Ok(LadderSpec::new(lo, hi, self.rungs, self.seed)?)
    }
}

fn default_results(p: Option<PathBuf>) -> PathBuf {
    p.unwrap_or_else(|| results_dir().join("results.jsonl"))
}

fn load(path: &Path) -> Result<LoadedResults, Failure> {
    let loaded = load_results(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(fail(EXIT_RESULTS))?;
    for s in &loaded.skipped {
        log::warn!("{}: skipped line {}: {}", path.display(), s.line, s.reason);
    }
    if loaded.records.is_empty() && !loaded.skipped.is_empty() {
        return Err(Failure {
            code: EXIT_RESULTS,
            error: anyhow!("{}: no readable records", path.display()),
        });
    }
    Ok(loaded)
}

fn generate(ladder: &LadderArgs, out_dir: &Path) -> Result<(), Failure> {
    let spec = ladder.spec().map_err(fail(EXIT_INVALID))?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))
        .map_err(fail(1))?;
    let rungs = lp_asympt_core::gen::generate_ladder(&spec, Parallelism::Sequential)
        .map_err(|e| fail(1)(e.into()))?;
    println!("rung\trows\tcols\tnnz\tfile");
    for (k, (params, p, _)) in rungs.iter().enumerate() {
        let name = LpFileName::new(params.clone());
        let path = out_dir.join(name.to_string());
        std::fs::write(&path, write_lp(p, Some(&name)))
            .with_context(|| format!("writing {}", path.display()))
            .map_err(fail(1))?;
        let est = size_estimate(params);
        println!(
            "{}\t{}\t{}\t{}\t{}",
            k + 1,
            est.rows,
            est.cols,
            est.nnz,
            name
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn solve(
    ladder: &LadderArgs,
    solver: &str,
    eps: f64,
    time_limit: f64,
    jobs: usize,
    results: Option<PathBuf>,
    instances_dir: Option<PathBuf>,
) -> Result<(), Failure> {
    let spec = ladder.spec().map_err(fail(EXIT_INVALID))?;
    let solver = if solver == "builtin" {
        let cfg = PdhgConfig {
            epsilon: eps,
            time_limit_seconds: time_limit,
            ..Default::default()
        };
        cfg.validate().map_err(|e| fail(EXIT_INVALID)(e.into()))?;
        SolverSpec::BuiltinPdhg(cfg)
    } else if let Some(path) = solver.strip_prefix("ext:") {
        let ext = ExternalSolver::load(path)
            .with_context(|| format!("loading {path}"))
            .map_err(fail(EXIT_INVALID))?;
        SolverSpec::External(ext)
    } else {
        return Err(Failure {
            code: EXIT_INVALID,
            error: anyhow!("--solver must be builtin or ext:<config>, got {solver:?}"),
        });
    };
    if !(time_limit >= 0.0) || jobs == 0 {
        return Err(Failure {
            code: EXIT_INVALID,
            error: anyhow!("--time-limit must be nonnegative and --jobs at least 1"),
        });
    }
    let results = default_results(results);
    let mut sink = ResultsSink::open(&results)
        .with_context(|| format!("opening results file {}", results.display()))
        .map_err(fail(EXIT_SINK))?;
    let opts = RunOptions {
        time_limit_seconds: time_limit,
        jobs,
        ..RunOptions::new(instances_dir.unwrap_or_else(|| results_dir().join("instances")))
    };
    let records = run_ladder(&spec, &solver, &opts, &mut sink).map_err(|e| match e {
        HarnessError::Sink { .. } => fail(EXIT_SINK)(e.into()),
        HarnessError::Ladder(_) => fail(EXIT_INVALID)(e.into()),
        HarnessError::InstanceDir { .. } => fail(1)(e.into()),
    })?;
    for r in &records {
        let secs = r
            .seconds(Component::Total)
            .map(|s| format!("{s:.3}s"))
            .unwrap_or_else(|| "-".into());
        let detail = r
            .detail
            .as_deref()
            .map(|d| format!(" ({d})"))
            .unwrap_or_default();
        println!(
            "{} rung {:>2}: {} nnz {} -> {} in {}{}",
            r.family, r.rung, r.status, r.nnz_pre, r.nnz_post, secs, detail
        );
    }
    Ok(())
}

fn fit(
    results: Option<PathBuf>,
    component: Option<Component>,
    family: Option<FamilyId>,
    solver: Option<String>,
) -> Result<(), Failure> {
    let loaded = load(&default_results(results))?;
    for row in fit_rows(&loaded.records) {
        if component.is_some_and(|c| c != row.component)
            || family.is_some_and(|f| f != row.family)
            || solver.as_deref().is_some_and(|s| s != row.solver)
        {
            continue;
        }
        println!("{}", format_fit_line(&row));
    }
    Ok(())
}

fn report(results: Option<PathBuf>, out: &Path, plots_dir: &Path) -> Result<(), Failure> {
    let loaded = load(&default_results(results))?;
    let files = write_report(&loaded, out, plots_dir)
        .context("writing report")
        .map_err(fail(1))?;
    println!(
        "wrote {}, {} and {} plots",
        files.markdown.display(),
        files.csv.display(),
        files.plots.len()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate { ladder, out_dir } => generate(&ladder, &out_dir),
        Command::Solve {
            ladder,
            solver,
            eps,
            time_limit,
            jobs,
            results,
            instances_dir,
        } => solve(
            &ladder,
            &solver,
            eps,
            time_limit,
            jobs,
            results,
            instances_dir,
        ),
        Command::Fit {
            results,
            component,
            family,
            solver,
        } => fit(results, component, family, solver),
        Command::Report {
            results,
            out,
            plots_dir,
        } => report(results, &out, &plots_dir),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", describe(&f.error));
            ExitCode::from(f.code)
        }
    }
}

/// The error chain joined by `: `, skipping causes the previous message
/// already ends with.
fn describe(err: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in err.chain() {
        let text = cause.to_string();
        if out.ends_with(&text) {
            continue;
        }
        if !out.is_empty() {
            out.push_str(": ");
        }
        out.push_str(&text);
    }
    out
}
