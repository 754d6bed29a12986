//! Two-echelon production and distribution planning.
//!
//! Columns: `prod[p,k,t]`, `ship[p,d,k,t]`, plant inventory `inv_p[p,k,t]`,
//! DC inventory `inv_d[d,k,t]`, and `backlog[d,k,t]`.
//!
//! Rows: plant capacity `Σ_k rate_k prod ≤ cap` per (p,t); family capacity
//! per (p, family, t) where product k belongs to family `k mod n_families`;
//! plant inventory balance per (p,k,t); DC balance per (d,k,t)
//! `Σ_p ship + inv_{t-1} - inv_t + backlog_t - backlog_{t-1} = demand`;
//! DC storage `Σ_k inv_d ≤ space` per (d,t).
//!
//! Data ranges: capacity rate U[0.5,2), production cost U[5,20), plant and DC
//! sites on U[0,100)² with shipping cost 1 + 0.05·distance, plant holding
//! U[0.2,0.5), DC holding U[0.3,0.8), backlog penalty U[50,100). Reference
//! production U[10,100) per (p,k,t), shipped fraction U[0.6,1), DC keep
//! fraction U[0,0.3).

use crate::gen::builder::{ModelBuilder, RowKind};
use crate::gen::rng::Stream;
use crate::gen::{FamilyParams, FeasibilityCertificate, GenError, KnobSpec, SizeEstimate};
use crate::lp::LpProblem;

pub(super) const SCHEMA: &[KnobSpec] = &[
    KnobSpec {
        name: "n_plants",
        min: 1,
        max: 100,
    },
    KnobSpec {
        name: "n_dcs",
        min: 1,
        max: 500,
    },
    KnobSpec {
        name: "n_products",
        min: 1,
        max: 5000,
    },
    KnobSpec {
        name: "n_families",
        min: 1,
        max: 500,
    },
    KnobSpec {
        name: "n_periods",
        min: 1,
        max: 104,
    },
];

struct Knobs {
    p: usize,
    d: usize,
    k: usize,
    f: usize,
    t: usize,
}

fn knobs(p: &FamilyParams) -> Knobs {
    Knobs {
        p: p.get("n_plants") as usize,
        d: p.get("n_dcs") as usize,
        k: p.get("n_products") as usize,
        f: p.get("n_families") as usize,
        t: p.get("n_periods") as usize,
    }
}

pub(super) fn size(p: &FamilyParams) -> SizeEstimate {
    let Knobs { p, d, k, f, t } = knobs(p);
    SizeEstimate {
        rows: p * t + p * f * t + p * k * t + d * k * t + d * t,
        cols: 2 * p * k * t + p * d * k * t + 2 * d * k * t,
        nnz: 5 * p * k * t + 2 * p * d * k * t + 5 * d * k * t - p * k - 2 * d * k,
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0) * (a.0 - b.0) + (a.1 - b.1) * (a.1 - b.1)).sqrt()
}

pub(super) fn build(
    params: &FamilyParams,
) -> Result<(LpProblem, FeasibilityCertificate), GenError> {
    let Knobs {
        p: np,
        d: nd,
        k: nk,
        f: nf,
        t: nt,
    } = knobs(params);
    let seed = params.seed();
    let sz = size(params);
    let mut b = ModelBuilder::with_capacity(sz.rows, sz.cols, sz.nnz);
    let inf = f64::INFINITY;

    let mut data = Stream::new(seed, 1);
    let rate: Vec<f64> = (0..nk).map(|_| data.uniform(0.5, 2.0)).collect();
    let prod_cost: Vec<f64> = (0..nk).map(|_| data.uniform(5.0, 20.0)).collect();
    let mut site = || (data.uniform(0.0, 100.0), data.uniform(0.0, 100.0));
    let plants: Vec<_> = (0..np).map(|_| site()).collect();
    let dcs: Vec<_> = (0..nd).map(|_| site()).collect();
    let hold_p: Vec<f64> = (0..np).map(|_| data.uniform(0.2, 0.5)).collect();
    let hold_d: Vec<f64> = (0..nd).map(|_| data.uniform(0.3, 0.8)).collect();
    let penalty: Vec<f64> = (0..nk).map(|_| data.uniform(50.0, 100.0)).collect();

    // Reference plan: produce, ship most of what is on hand, keep the rest.
    let mut plan = Stream::new(seed, 2);
    let idx_pkt = |p: usize, k: usize, t: usize| (p * nk + k) * nt + t;
    let idx_pdkt = |p: usize, d: usize, k: usize, t: usize| ((p * nd + d) * nk + k) * nt + t;
    let idx_dkt = |d: usize, k: usize, t: usize| (d * nk + k) * nt + t;
    let mut prod = vec![0.0; np * nk * nt];
    let mut ship = vec![0.0; np * nd * nk * nt];
    let mut inv_p = vec![0.0; np * nk * nt];
    for p in 0..np {
        for k in 0..nk {
            let mut on_hand = plan.uniform(0.0, 20.0);
            for t in 0..nt {
                let made = plan.uniform(10.0, 100.0);
                prod[idx_pkt(p, k, t)] = made;
                let avail = on_hand + made;
                let out = avail * plan.uniform(0.6, 1.0);
                let w: Vec<f64> = (0..nd).map(|_| plan.uniform(0.1, 1.0)).collect();
                let wsum: f64 = w.iter().sum();
                let mut sent = 0.0;
                for d in 0..nd {
                    let q = out * w[d] / wsum;
                    ship[idx_pdkt(p, d, k, t)] = q;
                    sent += q;
                }
                on_hand = (avail - sent).max(0.0);
                inv_p[idx_pkt(p, k, t)] = on_hand;
            }
        }
    }
    let mut inv_d = vec![0.0; nd * nk * nt];
    for d in 0..nd {
        for k in 0..nk {
            let mut stock = plan.uniform(0.0, 10.0);
            for t in 0..nt {
                let inflow: f64 = (0..np).map(|p| ship[idx_pdkt(p, d, k, t)]).sum();
                stock = (stock + inflow) * plan.uniform(0.0, 0.3);
                inv_d[idx_dkt(d, k, t)] = stock;
            }
        }
    }

    let prod0 = b.n_cols();
    for p in 0..np {
        for k in 0..nk {
            for t in 0..nt {
                b.add_col(prod_cost[k], 0.0, inf, prod[idx_pkt(p, k, t)]);
            }
        }
    }
    let ship0 = b.n_cols();
    for p in 0..np {
        for d in 0..nd {
            let cost = 1.0 + 0.05 * dist(plants[p], dcs[d]);
            for k in 0..nk {
                for t in 0..nt {
                    b.add_col(cost, 0.0, inf, ship[idx_pdkt(p, d, k, t)]);
                }
            }
        }
    }
    let invp0 = b.n_cols();
    for p in 0..np {
        for k in 0..nk {
            for t in 0..nt {
                let v = inv_p[idx_pkt(p, k, t)];
                b.add_col(hold_p[p], 0.0, 1.2 * v + 5.0, v);
            }
        }
    }
    let invd0 = b.n_cols();
    for d in 0..nd {
        for k in 0..nk {
            for t in 0..nt {
                b.add_col(hold_d[d], 0.0, inf, inv_d[idx_dkt(d, k, t)]);
            }
        }
    }
    let back0 = b.n_cols();
    for _d in 0..nd {
        for k in 0..nk {
            for _t in 0..nt {
                b.add_col(penalty[k], 0.0, inf, 0.0);
            }
        }
    }
    let cap = RowKind::UpperRef {
        margin: 0.2,
        plus: 0.0,
    };

    for p in 0..np {
        for t in 0..nt {
            b.add_row((0..nk).map(|k| (prod0 + idx_pkt(p, k, t), rate[k])), cap);
        }
    }
    for p in 0..np {
        for fam in 0..nf {
            for t in 0..nt {
                b.add_row(
                    (fam..nk)
                        .step_by(nf)
                        .map(|k| (prod0 + idx_pkt(p, k, t), 1.0)),
                    cap,
                );
            }
        }
    }
    for p in 0..np {
        for k in 0..nk {
            for t in 0..nt {
                let mut terms = vec![
                    (invp0 + idx_pkt(p, k, t), 1.0),
                    (prod0 + idx_pkt(p, k, t), -1.0),
                ];
                terms.extend((0..nd).map(|d| (ship0 + idx_pdkt(p, d, k, t), 1.0)));
                if t == 0 {
                    b.add_row(terms, RowKind::EqualRef);
                } else {
                    terms.push((invp0 + idx_pkt(p, k, t - 1), -1.0));
                    b.add_row(terms, RowKind::EQ0);
                }
            }
        }
    }
    for d in 0..nd {
        for k in 0..nk {
            for t in 0..nt {
                let mut terms: Vec<(usize, f64)> = (0..np)
                    .map(|p| (ship0 + idx_pdkt(p, d, k, t), 1.0))
                    .collect();
                terms.push((invd0 + idx_dkt(d, k, t), -1.0));
                terms.push((back0 + idx_dkt(d, k, t), 1.0));
                if t > 0 {
                    terms.push((invd0 + idx_dkt(d, k, t - 1), 1.0));
                    terms.push((back0 + idx_dkt(d, k, t - 1), -1.0));
                }
                b.add_row(terms, RowKind::EqualRef);
            }
        }
    }
    for d in 0..nd {
        for t in 0..nt {
            b.add_row(
                (0..nk).map(|k| (invd0 + idx_dkt(d, k, t), 1.0)),
                RowKind::UpperRef {
                    margin: 0.2,
                    plus: 1.0,
                },
            );
        }
    }
    debug_assert_eq!(b.n_cols(), sz.cols);
    b.finish()
}
