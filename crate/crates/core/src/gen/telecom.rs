//! Multi-period, multicommodity telecom network design.
//!
//! Topology: node i belongs to POP cluster `i mod n_pops`. Links
//! `0..n_nodes-1` form a spanning tree (node i+1 attaches to an earlier node,
//! preferring its own cluster); the remaining links join random node pairs.
//! Each link carries two directed arcs.
//!
//! Columns: `flow[k,t,a]` for commodity k, period t, arc a, then one
//! continuous `install[e]` module count per link.
//!
//! Rows: conservation per (k, node, t); link capacity per (e,t)
//! `Σ_k flow on both arcs - module·install ≤ base`; latency budget per (k,t)
//! `Σ_a latency_a flow ≤ SLA`.
//!
//! Data ranges: latency U[1,10) per link, module size U[10,40), module cost
//! U[50,200), routing cost 0.1·latency, demand U[1,10)·(1 + 0.02 t). The
//! reference routes every commodity along its tree path and installs
//! U[0.2,0.6) of the peak tree load in modules.

use crate::gen::builder::{ModelBuilder, RowKind};
use crate::gen::rng::Stream;
use crate::gen::{FamilyParams, FeasibilityCertificate, GenError, KnobSpec, SizeEstimate};
use crate::lp::LpProblem;

pub(super) const SCHEMA: &[KnobSpec] = &[
    KnobSpec {
        name: "n_pops",
        min: 1,
        max: 500,
    },
    KnobSpec {
        name: "n_nodes",
        min: 2,
        max: 5000,
    },
    KnobSpec {
        name: "n_links",
        min: 1,
        max: 50_000,
    },
    KnobSpec {
        name: "n_commodities",
        min: 1,
        max: 20_000,
    },
    KnobSpec {
        name: "n_periods",
        min: 1,
        max: 60,
    },
];

struct Knobs {
    pops: usize,
    n: usize,
    e: usize,
    k: usize,
    t: usize,
}

fn knobs(p: &FamilyParams) -> Knobs {
    Knobs {
        pops: p.get("n_pops") as usize,
        n: p.get("n_nodes") as usize,
        e: p.get("n_links") as usize,
        k: p.get("n_commodities") as usize,
        t: p.get("n_periods") as usize,
    }
}

pub(super) fn size(p: &FamilyParams) -> SizeEstimate {
    let Knobs { n, e, k, t, .. } = knobs(p);
    SizeEstimate {
        rows: k * n * t + e * t + k * t,
        cols: 2 * e * k * t + e,
        nnz: 8 * e * k * t + e * t,
    }
}

pub(super) fn build(
    params: &FamilyParams,
) -> Result<(LpProblem, FeasibilityCertificate), GenError> {
    let Knobs {
        pops,
        n,
        e,
        k: nk,
        t: nt,
    } = knobs(params);
    let seed = params.seed();
    let sz = size(params);
    let mut b = ModelBuilder::with_capacity(sz.rows, sz.cols, sz.nnz);
    let inf = f64::INFINITY;
    let na = 2 * e;

    // links as (tail, head); link i-1 joins node i to its tree parent
    let mut topo = Stream::new(seed, 1);
    let mut parent = vec![usize::MAX; n];
    let mut links = Vec::with_capacity(e);
    for i in 1..n {
        let c = i % pops;
        let earlier_in_cluster = (i - c).div_ceil(pops);
        let par = if earlier_in_cluster > 0 && topo.bernoulli(0.7) {
            c + pops * topo.index(earlier_in_cluster)
        } else {
            topo.index(i)
        };
        parent[i] = par;
        links.push((i, par));
    }
    while links.len() < e {
        let a = topo.index(n);
        let mut z = topo.index(n - 1);
        if z >= a {
            z += 1;
        }
        links.push((a, z));
    }
    let mut depth = vec![0usize; n];
    for i in 1..n {
        depth[i] = depth[parent[i]] + 1;
    }
    // arc 2e runs tail -> head, arc 2e+1 head -> tail
    let arc_ends = |a: usize| {
        let (u, v) = links[a / 2];
        if a % 2 == 0 {
            (u, v)
        } else {
            (v, u)
        }
    };

    let mut data = Stream::new(seed, 2);
    let latency: Vec<f64> = (0..e).map(|_| data.uniform(1.0, 10.0)).collect();
    let module: Vec<f64> = (0..e).map(|_| data.uniform(10.0, 40.0)).collect();
    let module_cost: Vec<f64> = (0..e).map(|_| data.uniform(50.0, 200.0)).collect();

    let mut dem = Stream::new(seed, 3);
    let pairs: Vec<(usize, usize)> = (0..nk)
        .map(|_| {
            let o = dem.index(n);
            let mut d = dem.index(n - 1);
            if d >= o {
                d += 1;
            }
            (o, d)
        })
        .collect();
    let demand: Vec<f64> = (0..nk * nt)
        .map(|i| dem.uniform(1.0, 10.0) * (1.0 + 0.02 * (i % nt) as f64))
        .collect();

    // tree path o -> d as arcs
    let path = |o: usize, d: usize| {
        let (mut a, mut z) = (o, d);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while a != z {
            if depth[a] >= depth[z] {
                up.push(2 * (a - 1)); // child -> parent
                a = parent[a];
            } else {
                down.push(2 * (z - 1) + 1); // parent -> child
                z = parent[z];
            }
        }
        down.reverse();
        up.extend(down);
        up
    };
    let paths: Vec<Vec<usize>> = pairs.iter().map(|&(o, d)| path(o, d)).collect();

    let fcol = |k: usize, t: usize, a: usize| (k * nt + t) * na + a;
    let mut flow_ref = vec![0.0; nk * nt * na];
    let mut load = vec![0.0; e * nt];
    for k in 0..nk {
        for t in 0..nt {
            let q = demand[k * nt + t];
            for &a in &paths[k] {
                flow_ref[fcol(k, t, a)] = q;
                load[(a / 2) * nt + t] += q;
            }
        }
    }
    let mut frac = Stream::new(seed, 4);
    for k in 0..nk {
        for t in 0..nt {
            for a in 0..na {
                b.add_col(0.1 * latency[a / 2], 0.0, inf, flow_ref[fcol(k, t, a)]);
            }
        }
    }
    let inst0 = b.n_cols();
    let mut peak = vec![0.0f64; e];
    for l in 0..e {
        peak[l] = (0..nt).map(|t| load[l * nt + t]).fold(0.0, f64::max);
        let install = frac.uniform(0.2, 0.6) * peak[l] / module[l];
        b.add_col(module_cost[l], 0.0, inf, install);
    }

    let mut out_arcs = vec![Vec::new(); n];
    let mut in_arcs = vec![Vec::new(); n];
    for a in 0..na {
        let (u, v) = arc_ends(a);
        out_arcs[u].push(a);
        in_arcs[v].push(a);
    }
    for k in 0..nk {
        for node in 0..n {
            for t in 0..nt {
                b.add_row(
                    out_arcs[node]
                        .iter()
                        .map(|&a| (fcol(k, t, a), 1.0))
                        .chain(in_arcs[node].iter().map(|&a| (fcol(k, t, a), -1.0))),
                    RowKind::EqualRef,
                );
            }
        }
    }
    for l in 0..e {
        for t in 0..nt {
            b.add_row(
                (0..nk)
                    .flat_map(|k| [(fcol(k, t, 2 * l), 1.0), (fcol(k, t, 2 * l + 1), 1.0)])
                    .chain([(inst0 + l, -module[l])]),
                RowKind::UpperRef {
                    margin: 0.2,
                    plus: 0.5 * peak[l] + 1.0,
                },
            );
        }
    }
    for k in 0..nk {
        for t in 0..nt {
            b.add_row(
                (0..na).map(|a| (fcol(k, t, a), latency[a / 2])),
                RowKind::UpperRef {
                    margin: 0.2,
                    plus: 0.0,
                },
            );
        }
    }
    debug_assert_eq!(b.n_cols(), sz.cols);
    b.finish()
}
