//! Supply chain network design with a carbon budget.
//!
//! Columns: fractional `open[d]` in [0,1], `inflow[s,d]` supplier to DC,
//! `outflow[c,l]` on the l-th lane of customer c (each customer is served by
//! `lanes_per_node` distinct DCs), and `late[c]`.
//!
//! Rows: supplier capacity per s; DC flow balance `Σ inflow - Σ outflow = 0`
//! per d; DC throughput `Σ outflow - cap_d·open_d ≤ 0` per d; customer demand
//! `Σ outflow + late = demand` per c; one CO2 row over all flows.
//!
//! Data ranges: sites on U[0,100)², transport cost 1 + 0.05·distance, emission
//! factor 0.1 + 0.01·distance, opening cost U[500,2000), lateness penalty
//! U[80,120). Reference lane flow U[5,50), late U[0,2), open U[0.5,1).

use crate::gen::builder::{ModelBuilder, RowKind};
use crate::gen::rng::Stream;
use crate::gen::{FamilyParams, FeasibilityCertificate, GenError, KnobSpec, SizeEstimate};
use crate::lp::LpProblem;

pub(super) const SCHEMA: &[KnobSpec] = &[
    KnobSpec {
        name: "n_suppliers",
        min: 1,
        max: 2000,
    },
    KnobSpec {
        name: "n_dcs",
        min: 1,
        max: 1000,
    },
    KnobSpec {
        name: "n_customers",
        min: 1,
        max: 100_000,
    },
    KnobSpec {
        name: "lanes_per_node",
        min: 1,
        max: 50,
    },
];

struct Knobs {
    s: usize,
    d: usize,
    c: usize,
    l: usize,
}

fn knobs(p: &FamilyParams) -> Knobs {
    Knobs {
        s: p.get("n_suppliers") as usize,
        d: p.get("n_dcs") as usize,
        c: p.get("n_customers") as usize,
        l: p.get("lanes_per_node") as usize,
    }
}

pub(super) fn size(p: &FamilyParams) -> SizeEstimate {
    let Knobs { s, d, c, l } = knobs(p);
    SizeEstimate {
        rows: s + 2 * d + c + 1,
        cols: d + s * d + c * l + c,
        nnz: 3 * s * d + 4 * c * l + d + c,
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0) * (a.0 - b.0) + (a.1 - b.1) * (a.1 - b.1)).sqrt()
}

pub(super) fn build(
    params: &FamilyParams,
) -> Result<(LpProblem, FeasibilityCertificate), GenError> {
    let Knobs {
        s: ns,
        d: nd,
        c: nc,
        l: nl,
    } = knobs(params);
    let seed = params.seed();
    let sz = size(params);
    let mut b = ModelBuilder::with_capacity(sz.rows, sz.cols, sz.nnz);
    let inf = f64::INFINITY;

    let mut geo = Stream::new(seed, 1);
    let mut site = || (geo.uniform(0.0, 100.0), geo.uniform(0.0, 100.0));
    let sup: Vec<_> = (0..ns).map(|_| site()).collect();
    let dcs: Vec<_> = (0..nd).map(|_| site()).collect();
    let cust: Vec<_> = (0..nc).map(|_| site()).collect();

    let mut lanes_rng = Stream::new(seed, 2);
    let lanes: Vec<Vec<usize>> = (0..nc).map(|_| lanes_rng.distinct_sorted(nd, nl)).collect();

    let mut cost = Stream::new(seed, 3);
    let open_cost: Vec<f64> = (0..nd).map(|_| cost.uniform(500.0, 2000.0)).collect();
    let late_pen: Vec<f64> = (0..nc).map(|_| cost.uniform(80.0, 120.0)).collect();

    let mut flow = Stream::new(seed, 4);
    let out_ref: Vec<Vec<f64>> = lanes
        .iter()
        .map(|l| l.iter().map(|_| flow.uniform(5.0, 50.0)).collect())
        .collect();
    let late_ref: Vec<f64> = (0..nc).map(|_| flow.uniform(0.0, 2.0)).collect();
    let mut dc_out = vec![0.0; nd];
    for (l, q) in lanes.iter().zip(&out_ref) {
        for (&d, &v) in l.iter().zip(q) {
            dc_out[d] += v;
        }
    }
    let open_ref: Vec<f64> = (0..nd).map(|_| flow.uniform(0.5, 1.0)).collect();
    let dc_cap: Vec<f64> = (0..nd)
        .map(|d| 1.2 * dc_out[d] / open_ref[d] + 10.0)
        .collect();
    let weights: Vec<f64> = (0..ns).map(|_| flow.uniform(0.1, 1.0)).collect();
    let wsum: f64 = weights.iter().sum();
    let mut in_ref = vec![0.0; ns * nd];
    for d in 0..nd {
        let mut rest = dc_out[d];
        for s in 0..ns {
            let q = if s + 1 == ns {
                rest.max(0.0)
            } else {
                (dc_out[d] * weights[s] / wsum).min(rest)
            };
            in_ref[s * nd + d] = q;
            rest -= q;
        }
    }

    let open0 = b.n_cols();
    for d in 0..nd {
        b.add_col(open_cost[d], 0.0, 1.0, open_ref[d]);
    }
    let in0 = b.n_cols();
    for s in 0..ns {
        for d in 0..nd {
            let c = 1.0 + 0.05 * dist(sup[s], dcs[d]);
            b.add_col(c, 0.0, inf, in_ref[s * nd + d]);
        }
    }
    let out0 = b.n_cols();
    for c in 0..nc {
        for (&d, &q) in lanes[c].iter().zip(&out_ref[c]) {
            let tc = 1.0 + 0.05 * dist(dcs[d], cust[c]);
            b.add_col(tc, 0.0, 1.2 * q + 5.0, q);
        }
    }
    let late0 = b.n_cols();
    for c in 0..nc {
        b.add_col(late_pen[c], 0.0, inf, late_ref[c]);
    }

    for s in 0..ns {
        b.add_row(
            (0..nd).map(|d| (in0 + s * nd + d, 1.0)),
            RowKind::UpperRef {
                margin: 0.2,
                plus: 0.0,
            },
        );
    }
    // outflow columns touching each DC
    let mut by_dc: Vec<Vec<usize>> = vec![Vec::new(); nd];
    for c in 0..nc {
        for (l, &d) in lanes[c].iter().enumerate() {
            by_dc[d].push(out0 + c * nl + l);
        }
    }
    for d in 0..nd {
        b.add_row(
            (0..ns)
                .map(|s| (in0 + s * nd + d, 1.0))
                .chain(by_dc[d].iter().map(|&j| (j, -1.0))),
            RowKind::EQ0,
        );
    }
    for d in 0..nd {
        b.add_row(
            by_dc[d]
                .iter()
                .map(|&j| (j, 1.0))
                .chain([(open0 + d, -dc_cap[d])]),
            RowKind::LE0,
        );
    }
    for c in 0..nc {
        b.add_row(
            (0..nl)
                .map(|l| (out0 + c * nl + l, 1.0))
                .chain([(late0 + c, 1.0)]),
            RowKind::EqualRef,
        );
    }
    let inbound = (0..ns).flat_map(|s| {
        let sup = &sup;
        let dcs = &dcs;
        (0..nd).map(move |d| (in0 + s * nd + d, 0.1 + 0.01 * dist(sup[s], dcs[d])))
    });
    let outbound = (0..nc).flat_map(|c| {
        let lanes = &lanes;
        let dcs = &dcs;
        let cust = &cust;
        (0..nl).map(move |l| {
            (
                out0 + c * nl + l,
                0.1 + 0.01 * dist(dcs[lanes[c][l]], cust[c]),
            )
        })
    });
    b.add_row(
        inbound.chain(outbound),
        RowKind::UpperRef {
            margin: 0.05,
            plus: 0.0,
        },
    );
    debug_assert_eq!(b.n_cols(), sz.cols);
    b.finish()
}
