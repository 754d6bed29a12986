mod common;

use lp_asympt_core::gen::{generate_ladder, FamilyId, LadderSpec};
use lp_asympt_core::par::Parallelism;
use lp_asympt_core::presolve::{postsolve, presolve, PresolveError};
use lp_asympt_core::simplex::{solve_dense_simplex, SimplexStatus};
use proptest::prelude::*;

#[test]
fn objective_preserved_against_oracle() {
    let mut rng = common::rng(21);
    let mut reduced_any = 0;
    for k in 0..50 {
        let p = common::random_presolvable_lp(&mut rng);
        let full = solve_dense_simplex(&p, 10_000).unwrap();
        match presolve(&p) {
            Ok((r, stack)) => {
                if !stack.is_empty() {
                    reduced_any += 1;
                }
                let red = solve_dense_simplex(&r, 10_000).unwrap();
                assert_eq!(red.status, full.status, "case {k}");
                if full.status == SimplexStatus::Optimal {
                    let x = postsolve(&red.x, &stack).unwrap();
                    assert!(p.max_violation(&x).unwrap() <= 1e-8, "case {k}");
                    let obj = p.objective_value(&x);
                    assert!(
                        (obj - full.objective).abs() <= 1e-8 * (1.0 + full.objective.abs()),
                        "case {k}: {obj} vs {}",
                        full.objective
                    );
                    assert_eq!(obj, r.objective_value(&red.x), "case {k}");
                }
            }
            Err(PresolveError::ProvenInfeasible(_)) => {
                assert_eq!(full.status, SimplexStatus::Infeasible, "case {k}")
            }
            Err(e) => panic!("case {k}: {e}"),
        }
    }
    assert!(reduced_any >= 25, "{reduced_any}");
}

#[test]
fn idempotent_and_never_larger_on_ladders() {
    for family in FamilyId::ALL {
        let spec = LadderSpec::desk(family, 3, 9).unwrap();
        for (_, p, _) in generate_ladder(&spec, Parallelism::Sequential).unwrap() {
            let (r, _) = presolve(&p).unwrap();
            assert!(r.n_rows() <= p.n_rows() && r.n_cols() <= p.n_cols() && r.nnz() <= p.nnz());
            let (r2, again) = presolve(&r).unwrap();
            assert!(again.is_empty(), "{family:?}: {:?}", again.records());
            assert_eq!(r2, r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn second_pass_is_a_no_op(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let p = common::random_presolvable_lp(&mut rng);
        if let Ok((r, _)) = presolve(&p) {
            prop_assert!(r.n_rows() <= p.n_rows());
            prop_assert!(r.n_cols() <= p.n_cols());
            prop_assert!(r.nnz() <= p.nnz());
            let (r2, again) = presolve(&r).unwrap();
            prop_assert!(again.is_empty());
            prop_assert_eq!(r2, r);
        }
    }
}
