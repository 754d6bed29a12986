use lp_asympt_core::gen::{
    generate, ladder_params, size_estimate, FamilyId, FamilyParams, LadderSpec, SizeEstimate,
};
use lp_asympt_core::par::Parallelism;
use rand::{Rng, SeedableRng};

fn counts(lp: &lp_asympt_core::lp::LpProblem) -> SizeEstimate {
    SizeEstimate {
        rows: lp.n_rows(),
        cols: lp.n_cols(),
        nnz: lp.nnz(),
    }
}

/// Random schema-conformant parameters, kept small enough to build quickly.
fn random_params(family: FamilyId, rng: &mut rand::rngs::StdRng) -> FamilyParams {
    let mut v: Vec<u64> = family
        .schema()
        .iter()
        .map(|k| rng.random_range(k.min..=k.min.max(6).min(k.max)))
        .collect();
    match family {
        FamilyId::Fleet => v[3] = v[3].min(v[1]),
        FamilyId::ProdPlan => v[3] = v[3].min(v[2]),
        FamilyId::Scnd => v[3] = v[3].min(v[1]),
        FamilyId::TelecomNd => {
            v[0] = v[0].min(v[1]);
            v[2] = v[2].max(v[1] - 1);
        }
        _ => {}
    }
    FamilyParams::from_values(family, v, rng.random()).unwrap()
}

fn schema_minimum(family: FamilyId, seed: u64) -> FamilyParams {
    let v = family.schema().iter().map(|k| k.min).collect();
    let v = match family {
        // the tree backbone needs n_nodes - 1 links
        FamilyId::TelecomNd => {
            let mut v: Vec<u64> = v;
            v[2] = v[1] - 1;
            v
        }
        _ => v,
    };
    FamilyParams::from_values(family, v, seed).unwrap()
}

#[test]
fn size_estimate_matches_generated_counts() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    for family in FamilyId::ALL {
        for _ in 0..10 {
            let p = random_params(family, &mut rng);
            let (lp, _) = generate(&p).unwrap();
            assert_eq!(counts(&lp), size_estimate(&p), "{family} {:?}", p.values());
        }
    }
}

#[test]
fn certificates_are_feasible_for_random_draws_and_minimums() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(99);
    for family in FamilyId::ALL {
        let mut all = vec![schema_minimum(family, 1)];
        all.extend((0..10).map(|_| random_params(family, &mut rng)));
        for p in all {
            let (lp, cert) = generate(&p).unwrap();
            let viol = lp.max_violation(&cert.x_ref).unwrap();
            assert!(viol <= 1e-9, "{family} {:?}: violation {viol}", p.values());
            assert!(lp.objective().iter().all(|&c| c >= 0.0));
            assert!(lp.var_lower().iter().all(|l| l.is_finite()));
        }
    }
}

#[test]
fn certificates_hold_on_every_desk_ladder_rung() {
    for family in FamilyId::ALL {
        let spec = LadderSpec::desk(family, 4, 11).unwrap();
        for i in 1..=4 {
            let p = ladder_params(&spec, i).unwrap();
            let (lp, cert) = generate(&p).unwrap();
            let viol = lp.max_violation(&cert.x_ref).unwrap();
            assert!(viol <= 1e-9, "{family} rung {i}: violation {viol}");
        }
    }
}

#[test]
fn generation_is_deterministic() {
    for family in FamilyId::ALL {
        let p = schema_minimum(family, 5);
        let p = FamilyParams::from_values(family, p.values().iter().map(|v| v + 1).collect(), 5)
            .unwrap_or(p);
        let (a, ca) = generate(&p).unwrap();
        let (b, cb) = generate(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(ca, cb);
        let (c, _) = generate(&p.clone().with_seed(6)).unwrap();
        assert_ne!(a, c, "{family}: seed has no effect");
    }
}

#[test]
fn nnz_nondecreasing_in_each_knob() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for family in FamilyId::ALL {
        for _ in 0..10 {
            let p = random_params(family, &mut rng);
            let base = size_estimate(&p).nnz;
            for (i, k) in family.schema().iter().enumerate() {
                let mut v = p.values().to_vec();
                if v[i] == k.max {
                    continue;
                }
                v[i] += 1;
                if let Ok(q) = FamilyParams::from_values(family, v, p.seed()) {
                    assert!(size_estimate(&q).nnz >= base, "{family} knob {}", k.name);
                }
            }
        }
    }
}

#[test]
fn nnz_nondecreasing_along_desk_ladders() {
    for family in FamilyId::ALL {
        let spec = LadderSpec::desk(family, 8, 0).unwrap();
        let nnz: Vec<usize> = spec
            .all_params()
            .unwrap()
            .iter()
            .map(|p| size_estimate(p).nnz)
            .collect();
        assert!(nnz.windows(2).all(|w| w[0] <= w[1]), "{family}: {nnz:?}");
    }
}

/// Block-by-block census of the unit commitment model, written out loop by
/// loop instead of in closed form.
fn unitcommit_census(g: usize, t: usize, s: usize) -> SizeEstimate {
    let (mut rows, mut nnz) = (0, 0);
    for _gen in 0..g {
        for h in 0..t {
            rows += 2;
            nnz += 4; // p vs Pmax u, p vs Pmin u
            rows += 1;
            nnz += if h == 0 { 3 } else { 4 }; // commitment transition
            let window = (0..=h).rev().take(3).count();
            rows += 2;
            nnz += 2 * (window + 1); // min up, min down
        }
    }
    for _h in 0..t {
        rows += 1;
        nnz += g + 1 + 2 * s; // demand balance
        rows += 1;
        nnz += 2 * g; // reserve
    }
    for _st in 0..s {
        for h in 0..t {
            rows += 1;
            nnz += if h == 0 { 3 } else { 4 };
        }
    }
    SizeEstimate {
        rows,
        cols: 4 * g * t + t + 3 * s * t,
        nnz,
    }
}

#[test]
fn unitcommit_sizes_match_block_census() {
    let p = FamilyParams::from_values(FamilyId::UnitCommit, vec![3, 24, 1], 7).unwrap();
    let (lp, _) = generate(&p).unwrap();
    assert_eq!(size_estimate(&p), unitcommit_census(3, 24, 1));
    assert_eq!(counts(&lp), unitcommit_census(3, 24, 1));

    // one generator, one hour, no storage: u, p, start, stop, renewable;
    // five generator rows, demand, reserve
    let p = FamilyParams::from_values(FamilyId::UnitCommit, vec![1, 1, 0], 0).unwrap();
    assert_eq!(
        size_estimate(&p),
        SizeEstimate {
            rows: 7,
            cols: 5,
            nnz: 15
        }
    );
    assert_eq!(unitcommit_census(1, 1, 0), size_estimate(&p));
}

#[test]
fn parallel_ladder_generation_matches_sequential() {
    let spec = LadderSpec::desk(FamilyId::Scnd, 4, 3).unwrap();
    let seq = lp_asympt_core::gen::generate_ladder(&spec, Parallelism::Sequential).unwrap();
    let par = lp_asympt_core::gen::generate_ladder(&spec, Parallelism::Parallel).unwrap();
    assert_eq!(seq.len(), 4);
    for (a, b) in seq.iter().zip(&par) {
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}
