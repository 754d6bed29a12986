use std::path::Path;

use lp_asympt_core::harness::load_results;
use lp_asympt_core::report::{fit_rows, render_markdown, render_points_csv, write_report};

fn data(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

#[test]
fn report_matches_golden_files() {
    let loaded = load_results(data("golden_results.jsonl")).unwrap();
    assert_eq!(loaded.skipped.len(), 1);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.md");
    let files = write_report(&loaded, &out, &dir.path().join("plots")).unwrap();
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        golden("golden_report.md")
    );
    assert_eq!(
        std::fs::read_to_string(&files.csv).unwrap(),
        golden("golden_points.csv")
    );
    assert_eq!(
        std::fs::read_to_string(dir.path().join("plots/prodplan_pdhg_iterations.svg")).unwrap(),
        golden("golden_prodplan_pdhg_iterations.svg")
    );
    assert_eq!(files.plots.len(), 9);
}

#[test]
fn rendering_is_a_function_of_the_file() {
    let a = load_results(data("golden_results.jsonl")).unwrap();
    let b = load_results(data("golden_results.jsonl")).unwrap();
    assert_eq!(render_markdown(&a), render_markdown(&b));
    assert_eq!(render_points_csv(&a.records), render_points_csv(&b.records));
}

#[test]
fn golden_rows_follow_the_rules() {
    let loaded = load_results(data("golden_results.jsonl")).unwrap();
    let rows = fit_rows(&loaded.records);
    let find = |fam: &str, comp: &str| {
        rows.iter()
            .find(|r| r.family.name() == fam && r.component.name() == comp)
            .unwrap()
    };
    // three time-limited runs drop out of the iteration fit, not the presolve fit
    assert_eq!(find("ProdPlan", "iterations").successes, 22);
    assert_eq!(find("ProdPlan", "presolve").successes, 25);
    assert_eq!(find("Fleet", "total").ci_cell(), "-");
    assert_eq!(find("Fleet", "total").successes, 19);
    let md = render_markdown(&loaded);
    assert!(md.contains("GasNet / `pdhg` / iterations: weak — exponent unreliable"));
    assert!(!md.contains("ProdPlan / `pdhg` / iterations: weak"));
}
