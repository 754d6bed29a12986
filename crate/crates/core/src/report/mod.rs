//! Markdown tables, CSV point dumps and log-log SVG plots from a results
//! file. Rendering is a pure function of the loaded records.

mod svg;

pub use svg::render_svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use crate::fit::{
    classify_fit, fit_alternatives, fit_power_law, FitPoint, FitQuality, PowerLawFit,
};
use crate::gen::FamilyId;
use crate::harness::{filter_fit_set, Component, LoadedResults, RunRecord, MIN_FIT_POINTS};

/// Placeholder for a cell without a fit.
pub const MISSING: &str = "-";

/// The power-law fit of one component for one family and solver.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub family: FamilyId,
    pub solver: String,
    pub component: Component,
    /// Runs in which the component succeeded.
    pub successes: usize,
    pub fit: Option<PowerLawFit>,
}

impl FitRow {
    pub fn quality(&self) -> Option<FitQuality> {
        self.fit.as_ref().map(classify_fit)
    }

    /// `[lo,hi]` to two decimals, or `-`.
    pub fn ci_cell(&self) -> String {
        self.fit
            .as_ref()
            .map(|f| format!("[{:.2},{:.2}]", f.b_ci.0, f.b_ci.1))
            .unwrap_or_else(|| MISSING.into())
    }

    /// Log-space R² to two decimals, or `-`.
    pub fn r2_cell(&self) -> String {
        self.fit
            .as_ref()
            .map(|f| format!("{:.2}", f.r2_log))
            .unwrap_or_else(|| MISSING.into())
    }
}

/// Records grouped by family and solver, in file order within a group.
pub fn group_records(records: &[RunRecord]) -> BTreeMap<(FamilyId, String), Vec<RunRecord>> {
    let mut groups: BTreeMap<(FamilyId, String), Vec<RunRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.family, r.solver.clone()))
            .or_default()
            .push(r.clone());
    }
    groups
}

/// Components timed in at least one record.
fn components_present(records: &[RunRecord]) -> Vec<Component> {
    Component::ALL
        .into_iter()
        .filter(|c| records.iter().any(|r| r.component_seconds.contains_key(c)))
        .collect()
}

/// Fits every (family, solver, component) that has timings.
pub fn fit_rows(records: &[RunRecord]) -> Vec<FitRow> {
    let mut rows = Vec::new();
    for ((family, solver), recs) in group_records(records) {
        for component in components_present(&recs) {
            let set = filter_fit_set(&recs, component);
            let fit = if set.insufficient {
                None
            } else {
                fit_power_law(&set.points).ok()
            };
            rows.push(FitRow {
                family,
                solver: solver.clone(),
                component,
                successes: set.successes,
                fit,
            });
        }
    }
    rows
}

/// One line per row, for terminal output.
pub fn format_fit_line(row: &FitRow) -> String {
    let quality = row
        .quality()
        .map(|q| q.label())
        .unwrap_or("insufficient data");
    format!(
        "{:<10} {:<12} {:<10} {:>13} {:>5}  n={:<4} {}",
        row.family.name(),
        row.solver,
        row.component.name(),
        row.ci_cell(),
        row.r2_cell(),
        row.successes,
        quality
    )
}

/// The markdown report: one table per solver with a column group per
/// component, then the weak fits with alternative fits beside them.
pub fn render_markdown(results: &LoadedResults) -> String {
    let rows = fit_rows(&results.records);
    let mut md = String::new();
    md.push_str("# Runtime scaling report\n\n");
    let _ = writeln!(
        md,
        "Fits of `seconds = a · nnz^b` by ordinary least squares on (ln nnz, ln seconds). \
         Exponent intervals are 95% confidence intervals; R² is computed in log space. \
         A cell shows `{MISSING}` when fewer than {MIN_FIT_POINTS} runs succeeded; the `n` column \
         counts the successful runs behind each fit. Presolve is fitted against nonzeros before \
         presolve, every other component against nonzeros after presolve.\n"
    );
    let _ = writeln!(
        md,
        "Records: {}. Skipped lines: {}.\n",
        results.records.len(),
        results.skipped.len()
    );
    let mut solvers: Vec<&str> = rows.iter().map(|r| r.solver.as_str()).collect();
    solvers.sort_unstable();
    solvers.dedup();
    for solver in solvers {
        let mine: Vec<&FitRow> = rows.iter().filter(|r| r.solver == solver).collect();
        let comps: Vec<Component> = Component::ALL
            .into_iter()
            .filter(|c| mine.iter().any(|r| r.component == *c))
            .collect();
        let _ = writeln!(md, "## Solver `{solver}`\n");
        let mut header = String::from("| Family |");
        let mut rule = String::from("|---|");
        for c in &comps {
            let _ = write!(header, " {c} b (95% CI) | {c} R² | {c} n |");
            rule.push_str("---|---:|---:|");
        }
        let _ = writeln!(md, "{header}\n{rule}");
        let mut families: Vec<FamilyId> = mine.iter().map(|r| r.family).collect();
        families.dedup();
        for family in families {
            let mut line = format!("| {} |", family.name());
            for c in &comps {
                match mine
                    .iter()
                    .find(|r| r.family == family && r.component == *c)
                {
                    Some(r) => {
                        let _ = write!(
                            line,
                            " {} | {} | {} |",
                            r.ci_cell(),
                            r.r2_cell(),
                            r.successes
                        );
                    }
                    None => {
                        let _ = write!(line, " {MISSING} | {MISSING} | 0 |");
                    }
                }
            }
            let _ = writeln!(md, "{line}");
        }
        md.push('\n');
    }
    let weak: Vec<&FitRow> = rows
        .iter()
        .filter(|r| r.quality() == Some(FitQuality::Weak))
        .collect();
    md.push_str("## Fit quality\n\n");
    if weak.is_empty() {
        md.push_str("Every fitted cell has log-space R² above 0.7.\n");
    }
    for r in weak {
        let fit = r.fit.as_ref().expect("weak rows carry a fit");
        let _ = writeln!(
            md,
            "- {} / `{}` / {}: {} (R² {:.2}, b = {:.2})",
            r.family.name(),
            r.solver,
            r.component,
            FitQuality::Weak.label(),
            fit.r2_log,
            fit.b
        );
        let recs: Vec<RunRecord> = results
            .records
            .iter()
            .filter(|x| x.family == r.family && x.solver == r.solver)
            .cloned()
            .collect();
        let points = filter_fit_set(&recs, r.component).points;
        if let Ok(alts) = fit_alternatives(&points) {
            let _ = writeln!(md, "  - power law: R² {:.2} native", fit.r2_native);
            for a in alts {
                let log = a
                    .r2_log
                    .map(|v| format!("{v:.2}"))
                    .unwrap_or_else(|| MISSING.into());
                let flag = if a.ill_conditioned() {
                    ", ill-conditioned"
                } else {
                    ""
                };
                let _ = writeln!(
                    md,
                    "  - {}: R² {:.2} native, {log} log{flag}",
                    a.kind.name(),
                    a.r2
                );
            }
        }
    }
    md
}

/// Every timed, successful component measurement, at full precision. The
/// `in_fit` column tells whether the point entered a fit.
pub fn render_points_csv(records: &[RunRecord]) -> String {
    let mut csv = String::from("family,solver,component,rung,seed,nnz,seconds,in_fit\n");
    for ((family, solver), recs) in group_records(records) {
        for component in components_present(&recs) {
            let in_fit = !filter_fit_set(&recs, component).insufficient;
            for r in recs.iter().filter(|r| r.component_succeeded(component)) {
                let nnz = if component == Component::Presolve {
                    r.nnz_pre
                } else {
                    r.nnz_post
                };
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{}",
                    family.name(),
                    solver,
                    component,
                    r.rung,
                    r.seed,
                    nnz,
                    r.seconds(component).unwrap_or_default(),
                    in_fit
                );
            }
        }
    }
    csv
}

/// File-name safe version of a solver id.
fn slug(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Paths written by [`write_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReportFiles {
    pub markdown: PathBuf,
    pub csv: PathBuf,
    pub plots: Vec<PathBuf>,
}

/// Writes `out` (markdown), `points.csv` beside it and one SVG per
/// (family, solver, component) with points into `plots_dir`.
pub fn write_report(
    results: &LoadedResults,
    out: &Path,
    plots_dir: &Path,
) -> io::Result<ReportFiles> {
    let dir = out
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    std::fs::create_dir_all(plots_dir)?;
    std::fs::write(out, render_markdown(results))?;
    let csv = dir.join("points.csv");
    std::fs::write(&csv, render_points_csv(&results.records))?;
    let mut plots = Vec::new();
    for ((family, solver), recs) in group_records(&results.records) {
        for component in components_present(&recs) {
            let points: Vec<FitPoint> = recs
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
            if points.is_empty() {
                continue;
            }
            let set = filter_fit_set(&recs, component);
            let fit = if set.insufficient {
                None
            } else {
                fit_power_law(&set.points).ok()
            };
            let title = format!("{} / {} / {}", family.name(), solver, component);
            let path = plots_dir.join(format!(
                "{}_{}_{}.svg",
                family.tag(),
                slug(&solver),
                component
            ));
            std::fs::write(&path, render_svg(&title, &points, fit.as_ref()))?;
            plots.push(path);
        }
    }
    Ok(ReportFiles {
        markdown: out.to_path_buf(),
        csv,
        plots,
    })
}
