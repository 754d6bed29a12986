//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! hard criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use lp_asympt_core::fit::{fit_power_law, FitPoint, FitQuality};
use lp_asympt_core::gen::{generate_ladder, FamilyId, LadderSpec};
use lp_asympt_core::harness::{
    filter_fit_set, load_results, run_ladder, Component, ResultsSink, RunOptions, RunRecord,
    RunStatus, SolverSpec, MIN_FIT_POINTS, SCHEMA_VERSION,
};
use lp_asympt_core::lp::{
    check_termination, residuals, Algorithm, LpProblem, PrimalDualIterate, SparseMatrix,
    StandardFormOptions, StandardLp, ToleranceProfile,
};
use lp_asympt_core::lpfile::{parse_lp, write_lp, LpFileName};
use lp_asympt_core::par::Parallelism;
use lp_asympt_core::pdhg::{solve_pdhg, PdhgConfig, SolveStatus};
use lp_asympt_core::presolve::{postsolve, presolve, PresolveError};
use lp_asympt_core::report::{fit_rows, render_markdown, write_report};
use lp_asympt_core::simplex::{solve_dense_simplex, SimplexStatus, MAX_STANDARD_COLS};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use regex::Regex;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Largest violation of row ranges and bounds at `x`, from a dense pass.
fn certificate_violation(p: &LpProblem, x: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..p.n_rows() {
        let (cols, vals) = p.matrix().row(i);
        let act: f64 = cols.iter().zip(vals).map(|(&j, v)| v * x[j]).sum();
        worst = worst
            .max(p.row_lower()[i] - act)
            .max(act - p.row_upper()[i]);
    }
    for (j, &v) in x.iter().enumerate() {
        worst = worst.max(p.var_lower()[j] - v).max(v - p.var_upper()[j]);
    }
    worst
}

fn desk_ladders() -> Vec<(
    FamilyId,
    Vec<(lp_asympt_core::gen::FamilyParams, LpProblem, Vec<f64>)>,
)> {
    FamilyId::ALL
        .iter()
        .map(|&f| {
            let spec = LadderSpec::desk(f, 10, 1).unwrap();
            let rungs = generate_ladder(&spec, Parallelism::Parallel)
                .unwrap()
                .into_iter()
                .map(|(params, p, cert)| (params, p, cert.x_ref))
                .collect();
            (f, rungs)
        })
        .collect()
}

fn criterion_1(
    ladders: &mut Option<
        Vec<(
            FamilyId,
            Vec<(lp_asympt_core::gen::FamilyParams, LpProblem, Vec<f64>)>,
        )>,
    >,
) -> Outcome {
    let start = Instant::now();
    let generated = desk_ladders();
    let mut worst = 0.0f64;
    let mut largest = 0;
    for (family, rungs) in &generated {
        ensure(
            rungs.len() == 10,
            format!("{family}: {} rungs", rungs.len()),
        )?;
        for (_, p, x) in rungs {
            let v = certificate_violation(p, x);
            ensure(v <= 1e-9, format!("{family}: violation {v:e}"))?;
            worst = worst.max(v);
            largest = largest.max(p.nnz());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, format!("took {secs:.1}s"))?;
    *ladders = Some(generated);
    Ok(format!(
        "6 families x 10 rungs, worst violation {worst:.1e}, largest rung {largest} nnz, {secs:.1}s"
    ))
}

fn criterion_2() -> Outcome {
    let mut worst_rel = 0.0f64;
    for family in FamilyId::ALL {
        let spec = LadderSpec::desk(family, 10, 1).unwrap();
        let (_, p, _) = generate_ladder(&spec, Parallelism::Sequential)
            .unwrap()
            .swap_remove(0);
        let std_cols = StandardLp::from_problem(&p, StandardFormOptions::default())
            .unwrap()
            .n_cols();
        ensure(
            std_cols <= MAX_STANDARD_COLS,
            format!("{family}: {std_cols} standard columns"),
        )?;
        let oracle = solve_dense_simplex(&p, 1_000_000).map_err(|e| e.to_string())?;
        ensure(
            oracle.status == SimplexStatus::Optimal,
            format!("{family}: simplex {:?}", oracle.status),
        )?;
        let r = solve_pdhg(&p, &PdhgConfig::default()).map_err(|e| e.to_string())?;
        ensure(
            r.status == SolveStatus::Optimal,
            format!("{family}: pdhg {:?}", r.status),
        )?;
        let rel = (r.objective - oracle.objective).abs() / oracle.objective.abs().max(1.0);
        ensure(
            rel <= 1e-4,
            format!("{family}: relative objective gap {rel:e}"),
        )?;
        worst_rel = worst_rel.max(rel);
    }
    let mut rng = common::rng(2);
    let mut optimal = 0;
    for k in 0..200 {
        let p = common::random_boxed_lp(&mut rng, 8, 8, k % 4 != 0);
        let r = solve_dense_simplex(&p, 10_000).map_err(|e| e.to_string())?;
        match common::vertex_enumeration(&p) {
            Some(best) => {
                ensure(
                    r.status == SimplexStatus::Optimal,
                    format!("case {k}: {:?}", r.status),
                )?;
                ensure(
                    (r.objective - best).abs() <= 1e-9 * (1.0 + best.abs()),
                    format!("case {k}: simplex {} vs vertices {best}", r.objective),
                )?;
                optimal += 1;
            }
            None => ensure(
                r.status == SimplexStatus::Infeasible,
                format!("case {k}: {:?}", r.status),
            )?,
        }
    }
    Ok(format!(
        "smallest rungs: worst relative gap {worst_rel:.1e}; vertex enumeration: 200/200 agree ({optimal} optimal)"
    ))
}

struct DenseResiduals {
    rp: Vec<f64>,
    rd: Vec<f64>,
    comp: f64,
    pobj: f64,
    dobj: f64,
}

fn dense_residuals(
    a: &[f64],
    m: usize,
    n: usize,
    b: &[f64],
    c: &[f64],
    it: &PrimalDualIterate,
) -> DenseResiduals {
    let rp = (0..m)
        .map(|i| b[i] - (0..n).map(|j| a[i * n + j] * it.x[j]).sum::<f64>())
        .collect();
    let rd = (0..n)
        .map(|j| c[j] - (0..m).map(|i| a[i * n + j] * it.y[i]).sum::<f64>() - it.z[j])
        .collect();
    DenseResiduals {
        rp,
        rd,
        comp: (0..n).map(|j| it.x[j] * it.z[j]).sum::<f64>() / n as f64,
        pobj: (0..n).map(|j| c[j] * it.x[j]).sum(),
        dobj: (0..m).map(|i| b[i] * it.y[i]).sum(),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = common::rng(3);
    let mut decisions = [[0usize; 2]; 3];
    let mut worst = 0.0f64;
    for case in 0..100 {
        let m = rng.random_range(1..=12);
        let n = rng.random_range(m..=20);
        let a: Vec<f64> = (0..m * n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    rng.random_range(-4.0..4.0)
                } else {
                    0.0
                }
            })
            .collect();
        // complementary pair: each column is either basic-like (x > 0, z = 0)
        // or at its bound (x = 0, z > 0)
        let basic: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let x0: Vec<f64> = basic
            .iter()
            .map(|&on| if on { rng.random_range(0.1..3.0) } else { 0.0 })
            .collect();
        let b: Vec<f64> = (0..m)
            .map(|i| (0..n).map(|j| a[i * n + j] * x0[j]).sum())
            .collect();
        let y0: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
        let z0: Vec<f64> = basic
            .iter()
            .map(|&on| if on { 0.0 } else { rng.random_range(0.1..1.0) })
            .collect();
        let c: Vec<f64> = (0..n)
            .map(|j| (0..m).map(|i| a[i * n + j] * y0[i]).sum::<f64>() + z0[j])
            .collect();
        // perturbations from 1e-12 to 1e-4 straddle every threshold
        let scale = 10f64.powf(rng.random_range(-12.0..-4.0));
        let mut jitter = |v: &[f64]| -> Vec<f64> {
            v.iter()
                .map(|t| t + scale * rng.random_range(-1.0..1.0))
                .collect()
        };
        let it = PrimalDualIterate {
            x: jitter(&x0).into_iter().map(|v| v.max(0.0)).collect(),
            y: jitter(&y0),
            z: jitter(&z0).into_iter().map(|v| v.max(0.0)).collect(),
        };
        let s = StandardLp::new(
            SparseMatrix::from_dense(m, n, &a).unwrap(),
            b.clone(),
            c.clone(),
        )
        .unwrap();
        let rep = residuals(&s, &it).map_err(|e| e.to_string())?;
        let d = dense_residuals(&a, m, n, &b, &c, &it);
        let norm2 = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>().sqrt();
        let inf = |v: &[f64]| v.iter().fold(0.0f64, |acc, t| acc.max(t.abs()));
        let gap = (d.pobj - d.dobj).abs();
        let rel_gap = gap / (1.0 + d.pobj.abs() + d.dobj.abs());
        let pairs = [
            (rep.rp_2, norm2(&d.rp)),
            (rep.rp_inf, inf(&d.rp)),
            (rep.rd_2, norm2(&d.rd)),
            (rep.rd_inf, inf(&d.rd)),
            (rep.complementarity, d.comp),
            (rep.rel_gap, rel_gap),
        ];
        for (got, want) in pairs {
            let diff = (got - want).abs() / (1.0 + want.abs());
            worst = worst.max(diff);
            ensure(diff <= 1e-12, format!("case {case}: {got} vs {want}"))?;
        }
        let nb = norm2(&b);
        let nc = norm2(&c);
        for (k, alg) in [
            Algorithm::Simplex,
            Algorithm::InteriorPoint,
            Algorithm::Pdhg,
        ]
        .into_iter()
        .enumerate()
        {
            let prof = ToleranceProfile::default_for(alg);
            let eps = prof.epsilon();
            let hand = match alg {
                Algorithm::Simplex => inf(&d.rp) <= eps && inf(&d.rd) <= eps,
                Algorithm::InteriorPoint => {
                    norm2(&d.rp) <= eps * (1.0 + nb)
                        && norm2(&d.rd) <= eps * (1.0 + nc)
                        && d.comp <= eps
                }
                Algorithm::Pdhg => {
                    norm2(&d.rp) <= eps * (1.0 + nb)
                        && norm2(&d.rd) <= eps * (1.0 + nc)
                        && rel_gap <= eps
                }
            };
            let got = check_termination(&rep, prof, s.norms());
            ensure(
                got == hand,
                format!("case {case}: {alg:?} says {got}, hand says {hand}"),
            )?;
            decisions[k][got as usize] += 1;
        }
    }
    let both = decisions.iter().all(|d| d[0] > 0 && d[1] > 0);
    ensure(both, format!("some profile never flips: {decisions:?}"))?;
    Ok(format!(
        "100 pairs x 3 profiles agree (accept/reject per profile {:?}), worst norm difference {worst:.1e}",
        decisions.map(|d| (d[1], d[0]))
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(4);
    let noise: Normal<f64> = Normal::new(0.0, 0.05).unwrap();
    let mut summary = Vec::new();
    for b in [1.0, 1.5, 2.7] {
        let mut covered = 0;
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let pts: Vec<FitPoint> = (0..100)
                .map(|_| {
                    let nnz = 10f64.powf(rng.random_range(3.0..6.0)).round();
                    FitPoint::new(nnz, 1e-6 * nnz.powf(b) * noise.sample(&mut rng).exp())
                })
                .collect();
            let f = fit_power_law(&pts).map_err(|e| e.to_string())?;
            worst = worst.max((f.b - b).abs());
            if f.b_ci.0 <= b && b <= f.b_ci.1 {
                covered += 1;
            }
        }
        ensure(worst <= 0.05, format!("b={b}: estimate off by {worst}"))?;
        ensure(covered >= 180, format!("b={b}: coverage {covered}/200"))?;
        summary.push(format!("b={b}: |err|<={worst:.4}, coverage {covered}/200"));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, format!("took {secs:.1}s"))?;
    Ok(format!("{} in {secs:.2}s", summary.join("; ")))
}

fn criterion_5_safety() -> Outcome {
    let mut rng = common::rng(5);
    let mut reduced = 0;
    let mut worst = 0.0f64;
    for k in 0..50 {
        let p = common::random_presolvable_lp(&mut rng);
        let full = solve_dense_simplex(&p, 10_000).map_err(|e| e.to_string())?;
        match presolve(&p) {
            Ok((r, stack)) => {
                reduced += !stack.is_empty() as usize;
                let red = solve_dense_simplex(&r, 10_000).map_err(|e| e.to_string())?;
                ensure(
                    red.status == full.status,
                    format!("case {k}: {:?} vs {:?}", red.status, full.status),
                )?;
                if full.status == SimplexStatus::Optimal {
                    let x = postsolve(&red.x, &stack).map_err(|e| e.to_string())?;
                    let obj = p.objective_value(&x);
                    let diff = (obj - full.objective).abs() / (1.0 + full.objective.abs());
                    worst = worst.max(diff);
                    ensure(
                        diff <= 1e-8,
                        format!("case {k}: {obj} vs {}", full.objective),
                    )?;
                    ensure(
                        certificate_violation(&p, &x) <= 1e-8,
                        format!("case {k}: postsolved point infeasible"),
                    )?;
                }
            }
            Err(PresolveError::ProvenInfeasible(_)) => ensure(
                full.status == SimplexStatus::Infeasible,
                format!("case {k}: presolve says infeasible"),
            )?,
            Err(e) => return Err(format!("case {k}: {e}")),
        }
    }
    Ok(format!(
        "50 LPs ({reduced} reduced), worst relative objective difference {worst:.1e}"
    ))
}

fn criterion_5_exponent(records: &[RunRecord]) -> Outcome {
    let set = filter_fit_set(records, Component::Presolve);
    ensure(!set.insufficient, "too few presolve timings")?;
    let f = fit_power_law(&set.points).map_err(|e| e.to_string())?;
    let msg = format!(
        "presolve exponent {:.2} [{:.2},{:.2}], R² {:.2}, n={}",
        f.b, f.b_ci.0, f.b_ci.1, f.r2_log, f.n_points
    );
    if (0.8..=1.3).contains(&f.b) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

struct Pipeline {
    records: Vec<RunRecord>,
    instance_dir: std::path::PathBuf,
    _dir: tempfile::TempDir,
}

fn criterion_7(out: &mut Option<Pipeline>) -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = LadderSpec::desk(FamilyId::ProdPlan, 25, 7).map_err(|e| e.to_string())?;
    let opts = RunOptions {
        time_limit_seconds: 600.0,
        ..RunOptions::new(dir.path().join("instances"))
    };
    let results = dir.path().join("results.jsonl");
    let mut sink = ResultsSink::open(&results).map_err(|e| e.to_string())?;
    let solver = SolverSpec::BuiltinPdhg(PdhgConfig::default());
    run_ladder(&spec, &solver, &opts, &mut sink).map_err(|e| e.to_string())?;
    let loaded = load_results(&results).map_err(|e| e.to_string())?;
    ensure(
        loaded.records.len() == 25 && loaded.skipped.is_empty(),
        "results file incomplete",
    )?;
    let report = dir.path().join("report/report.md");
    let files = write_report(&loaded, &report, &dir.path().join("report/plots"))
        .map_err(|e| e.to_string())?;
    let md = std::fs::read_to_string(&files.markdown).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1800.0, format!("took {secs:.0}s"))?;

    ensure(
        md.contains("## Solver `pdhg`") && md.contains("| ProdPlan |"),
        "report lacks the ProdPlan table",
    )?;
    let optimal = loaded
        .records
        .iter()
        .filter(|r| r.status == RunStatus::Optimal)
        .count();
    let rows = fit_rows(&loaded.records);
    for row in &rows {
        let expected = if row.component == Component::Presolve {
            25
        } else {
            optimal
        };
        ensure(
            row.successes == expected,
            format!(
                "{}: {} successes, expected {expected}",
                row.component, row.successes
            ),
        )?;
        ensure(
            row.fit.is_some() == (row.successes >= MIN_FIT_POINTS),
            format!("{}: filter rule misapplied", row.component),
        )?;
        if let Some(f) = &row.fit {
            let weak = f.r2_log <= 0.7;
            ensure(
                weak == (row.quality() == Some(FitQuality::Weak)),
                "quality tag mismatch",
            )?;
            let flagged = md.contains(&format!("ProdPlan / `pdhg` / {}: weak", row.component));
            ensure(
                weak == flagged,
                format!("{}: R² {:.2} flagged={flagged}", row.component, f.r2_log),
            )?;
        }
    }
    ensure(boundary_19_20(), "19/20 boundary")?;
    let iters = rows.iter().find(|r| r.component == Component::Iterations);
    let desc = iters
        .map(|r| {
            format!(
                "iterations {} R² {} (n={})",
                r.ci_cell(),
                r.r2_cell(),
                r.successes
            )
        })
        .unwrap_or_default();
    *out = Some(Pipeline {
        records: loaded.records,
        instance_dir: opts.instance_dir.clone(),
        _dir: dir,
    });
    Ok(format!(
        "25 rungs, {optimal} optimal, {desc}, {} plots, {secs:.1}s; 19->insufficient, 20->fit",
        files.plots.len()
    ))
}

fn fabricated(n: usize, seconds: impl Fn(f64) -> f64) -> Vec<RunRecord> {
    (1..=n)
        .map(|k| RunRecord {
            schema_version: SCHEMA_VERSION,
            family: FamilyId::TelecomNd,
            rung: k,
            knobs: BTreeMap::new(),
            seed: k as u64,
            rows_pre: k,
            cols_pre: k,
            nnz_pre: 50 * k,
            rows_post: k,
            cols_post: k,
            nnz_post: 50 * k,
            solver: "pdhg".into(),
            status: RunStatus::Optimal,
            detail: None,
            component_seconds: BTreeMap::from([(Component::Iterations, seconds((50 * k) as f64))]),
            residuals: None,
            iterations: None,
            objective: None,
            timestamp: 0,
            host: "acceptance".into(),
            parallel_timing: false,
        })
        .collect()
}

fn boundary_19_20() -> bool {
    let s19 = filter_fit_set(&fabricated(19, |n| n), Component::Iterations);
    let s20 = filter_fit_set(&fabricated(20, |n| n), Component::Iterations);
    s19.insufficient && s19.points.is_empty() && !s20.insufficient && s20.points.len() == 20
}

fn criterion_6(
    ladders: &Option<
        Vec<(
            FamilyId,
            Vec<(lp_asympt_core::gen::FamilyParams, LpProblem, Vec<f64>)>,
        )>,
    >,
    pipeline: &Option<Pipeline>,
) -> Outcome {
    let mut count = 0;
    let check =
        |text: &str, p: Option<&LpProblem>, name: Option<&LpFileName>| -> Result<(), String> {
            let q = parse_lp(text).map_err(|e| e.to_string())?;
            if let Some(p) = p {
                ensure(&q == p, "parse(write(p)) differs from p")?;
            }
            ensure(
                write_lp(&q, name) == text,
                "write(parse(text)) differs from text",
            )
        };
    let ladders = ladders.as_ref().ok_or("ladders unavailable")?;
    for (family, rungs) in ladders {
        for (params, p, _) in rungs {
            let name = LpFileName::new(params.clone());
            check(&write_lp(p, Some(&name)), Some(p), Some(&name))
                .map_err(|e| format!("{family}: {e}"))?;
            count += 1;
        }
    }
    if let Some(pl) = pipeline {
        for entry in std::fs::read_dir(&pl.instance_dir).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            let file = path.file_name().unwrap().to_string_lossy().into_owned();
            let name = LpFileName::parse(&file).map_err(|e| e.to_string())?;
            let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
            check(&text, None, Some(&name)).map_err(|e| format!("{file}: {e}"))?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} instances byte-identical and structurally exact"
    ))
}

fn criterion_8(pipeline: &Option<Pipeline>) -> Outcome {
    let exact = fit_rows(&fabricated(20, |n| 2.0 * n.powf(1.5)));
    let cell = format!("{} {}", exact[0].ci_cell(), exact[0].r2_cell());
    ensure(
        cell == "[1.50,1.50] 1.00",
        format!("exact fit renders as {cell:?}"),
    )?;
    let short = fit_rows(&fabricated(19, |n| 2.0 * n.powf(1.5)));
    ensure(
        short[0].ci_cell() == "-" && short[0].r2_cell() == "-",
        "19 points not rendered as -",
    )?;
    let md = render_markdown(&lp_asympt_core::harness::LoadedResults {
        records: fabricated(19, |n| n),
        skipped: vec![],
    });
    ensure(
        md.contains("| TelecomND | - | - | 19 |"),
        "report row for 19 points lacks dashes",
    )?;
    let ci = Regex::new(r"^\[-?\d+\.\d{2},-?\d+\.\d{2}\]$").unwrap();
    let r2 = Regex::new(r"^-?\d+\.\d{2}$").unwrap();
    let mut cells = 0;
    if let Some(pl) = pipeline {
        for row in fit_rows(&pl.records) {
            let (c, r) = (row.ci_cell(), row.r2_cell());
            ensure(c == "-" || ci.is_match(&c), format!("bad CI cell {c:?}"))?;
            ensure(r == "-" || r2.is_match(&r), format!("bad R² cell {r:?}"))?;
            cells += 1;
        }
    }
    Ok(format!(
        "exact fit -> {cell:?}, 19 points -> \"-\", {cells} pipeline cells well-formed"
    ))
}

fn main() {
    // `cargo test` passes harness flags such as --nocapture; a filter
    // argument that names no criterion skips the suite
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    if !filter.is_empty() && !filter.iter().any(|f| "acceptance".contains(f.as_str())) {
        return;
    }
    let start = Instant::now();
    let mut ladders = None;
    let mut pipeline = None;
    let mut lines: Vec<(String, bool, Outcome)> = Vec::new();
    let mut record = |id: &str, soft: bool, o: Outcome| {
        let (tag, text) = match &o {
            Ok(m) => ("PASS", m.clone()),
            Err(m) if soft => ("SOFT-FAIL", m.clone()),
            Err(m) => ("FAIL", m.clone()),
        };
        println!("criterion {id}: {tag}: {text}");
        lines.push((id.to_string(), soft, o));
    };
    record("1", false, criterion_1(&mut ladders));
    record("2", false, criterion_2());
    record("3", false, criterion_3());
    record("4", false, criterion_4());
    record("5", false, criterion_5_safety());
    let c7 = criterion_7(&mut pipeline);
    let exponent = match &pipeline {
        Some(p) => criterion_5_exponent(&p.records),
        None => Err("pipeline did not run".into()),
    };
    record("5 (soft)", true, exponent);
    record("6", false, criterion_6(&ladders, &pipeline));
    record("7", false, c7);
    record("8", false, criterion_8(&pipeline));
    let failed: Vec<&str> = lines
        .iter()
        .filter(|(_, soft, o)| !soft && o.is_err())
        .map(|(id, _, _)| id.as_str())
        .collect();
    println!(
        "acceptance: {} of {} hard criteria passed in {:.1}s",
        lines
            .iter()
            .filter(|(_, soft, o)| !soft && o.is_ok())
            .count(),
        lines.iter().filter(|(_, soft, _)| !soft).count(),
        start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
