mod common;

use lp_asympt_core::fit::{
    classify_fit, fit_alternatives, fit_power_law, student_t_cdf, student_t_quantile, FitPoint,
    FitQuality,
};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::erf::erf_inv;
use statrs::function::gamma::ln_gamma;

/// Textbook two-pass OLS: means first, then centered sums.
struct Naive {
    a: f64,
    b: f64,
    ci: (f64, f64),
    r2: f64,
}

fn naive_ols(points: &[FitPoint]) -> Naive {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.nnz.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.seconds.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let ln_a = my - b * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - ln_a - b * x).powi(2))
        .sum();
    let sst: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let se = (sse / ((n - 2.0) * sxx)).sqrt();
    let t = StudentsT::new(0.0, 1.0, n - 2.0)
        .unwrap()
        .inverse_cdf(0.975);
    Naive {
        a: ln_a.exp(),
        b,
        ci: (b - t * se, b + t * se),
        r2: 1.0 - sse / sst,
    }
}

/// `n` points over three decades of nnz from `a · nnz^b` with multiplicative
/// lognormal noise of log-sd `sigma`.
fn synthetic(rng: &mut impl Rng, n: usize, a: f64, b: f64, sigma: f64) -> Vec<FitPoint> {
    let noise = Normal::new(0.0, sigma).unwrap();
    (0..n)
        .map(|_| {
            let nnz = 10f64.powf(rng.random_range(3.0..6.0)).round();
            FitPoint::new(nnz, a * nnz.powf(b) * noise.sample(rng).exp())
        })
        .collect()
}

#[test]
fn t_quantile_large_df_is_normal() {
    let oracle = 2f64.sqrt() * erf_inv(2.0 * 0.975 - 1.0);
    let q = student_t_quantile(10_000_000, 0.975);
    assert!((q - 1.959_964_0).abs() < 1e-6, "{q}");
    assert!((q - oracle).abs() < 1e-6, "{q} vs {oracle}");
}

#[test]
fn t_quantile_cauchy() {
    let q = student_t_quantile(1, 0.975);
    let exact = (std::f64::consts::PI * 0.475).tan();
    assert!((q - exact).abs() < 1e-8);
    assert!((q - 12.706_204_7).abs() < 1e-7);
}

/// CDF of t(ν) at `t` by composite Simpson on the density from 0.
fn quadrature_cdf(nu: f64, t: f64) -> f64 {
    let ln_c =
        ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * (nu * std::f64::consts::PI).ln();
    let pdf = |s: f64| (ln_c - 0.5 * (nu + 1.0) * (1.0 + s * s / nu).ln()).exp();
    let n = 20_000;
    let h = t / n as f64;
    let mut acc = pdf(0.0) + pdf(t);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * pdf(k as f64 * h);
    }
    0.5 + acc * h / 3.0
}

#[test]
fn t_quantile_df10_matches_quadrature() {
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if quadrature_cdf(10.0, mid) < 0.975 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = student_t_quantile(10, 0.975);
    assert!((q - lo).abs() < 1e-6, "{q} vs {lo}");
}

#[test]
fn t_quantile_agrees_with_statrs() {
    for df in [2u64, 3, 5, 18, 98, 1000] {
        let oracle = StudentsT::new(0.0, 1.0, df as f64).unwrap();
        for p in [0.6, 0.9, 0.975, 0.995] {
            let q = student_t_quantile(df, p);
            assert!((q - oracle.inverse_cdf(p)).abs() < 1e-8, "df {df} p {p}");
        }
    }
}

proptest! {
    #[test]
    fn quantile_inverts_cdf(df in 1u64..300, p in 0.001f64..0.999) {
        let q = student_t_quantile(df, p);
        prop_assert!((student_t_cdf(df as f64, q) - p).abs() < 1e-10);
    }

    #[test]
    fn scale_equivariance(seed in 0u64..1000, k in 0.001f64..1000.0) {
        let mut rng = common::rng(seed);
        let pts = synthetic(&mut rng, 30, 0.5, 1.3, 0.2);
        let scaled: Vec<FitPoint> = pts.iter().map(|p| FitPoint::new(p.nnz, k * p.seconds)).collect();
        let f = fit_power_law(&pts).unwrap();
        let g = fit_power_law(&scaled).unwrap();
        prop_assert!((f.b - g.b).abs() < 1e-10);
        prop_assert!((f.b_ci.0 - g.b_ci.0).abs() < 1e-10 && (f.b_ci.1 - g.b_ci.1).abs() < 1e-10);
        prop_assert!((f.r2_log - g.r2_log).abs() < 1e-10);
        prop_assert!((g.a / (k * f.a) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn squared_abscissa_halves_exponent(seed in 0u64..1000) {
        let mut rng = common::rng(seed);
        let pts = synthetic(&mut rng, 25, 2.0, 1.7, 0.3);
        let sq: Vec<FitPoint> = pts.iter().map(|p| FitPoint::new(p.nnz * p.nnz, p.seconds)).collect();
        let f = fit_power_law(&pts).unwrap();
        let g = fit_power_law(&sq).unwrap();
        prop_assert!((g.b - 0.5 * f.b).abs() < 1e-12 * f.b.abs().max(1.0));
    }

    #[test]
    fn ci_brackets_estimate(seed in 0u64..1000, n in 3usize..40) {
        let mut rng = common::rng(seed);
        let f = fit_power_law(&synthetic(&mut rng, n, 1.0, 1.0, 0.5)).unwrap();
        prop_assert!(f.b_ci.0 <= f.b && f.b <= f.b_ci.1);
        prop_assert!(f.r2_log <= 1.0);
    }
}

#[test]
fn agrees_with_naive_ols() {
    let mut rng = common::rng(41);
    let mut sets = vec![synthetic(&mut rng, 100, 0.5, 1.7, 0.05)];
    for k in 0..20 {
        let n = 3 + k * 5;
        let a = rng.random_range(0.01..10.0);
        let b = rng.random_range(0.5..3.0);
        sets.push(synthetic(&mut rng, n, a, b, 0.4));
    }
    for pts in &sets {
        let f = fit_power_law(pts).unwrap();
        let o = naive_ols(pts);
        assert!((f.b - o.b).abs() < 1e-10, "{} vs {}", f.b, o.b);
        assert!((f.a / o.a - 1.0).abs() < 1e-10);
        assert!((f.b_ci.0 - o.ci.0).abs() < 1e-10 && (f.b_ci.1 - o.ci.1).abs() < 1e-10);
        assert!((f.r2_log - o.r2).abs() < 1e-10);
    }
}

#[test]
fn ci_coverage_over_seeded_trials() {
    let mut rng = common::rng(42);
    let mut covered = 0;
    for _ in 0..200 {
        let f = fit_power_law(&synthetic(&mut rng, 100, 0.5, 1.7, 0.05)).unwrap();
        if f.b_ci.0 <= 1.7 && 1.7 <= f.b_ci.1 {
            covered += 1;
        }
    }
    assert!(covered >= 180, "{covered}/200");
}

/// Pure multiplicative noise around a power law, heavy enough that the
/// log-space fit is weak. No alternative family should look much better.
#[test]
fn noisy_scatter_alternatives_do_not_help() {
    let mut rng = common::rng(43);
    let pts = synthetic(&mut rng, 60, 1e-4, 1.2, 3.5);
    let pl = fit_power_law(&pts).unwrap();
    assert_eq!(classify_fit(&pl), FitQuality::Weak, "r2 {}", pl.r2_log);
    for alt in fit_alternatives(&pts).unwrap() {
        if let Some(r2) = alt.r2_log {
            assert!(
                r2 <= pl.r2_log + 0.05,
                "{:?}: {r2} vs {}",
                alt.kind,
                pl.r2_log
            );
        }
    }
}
