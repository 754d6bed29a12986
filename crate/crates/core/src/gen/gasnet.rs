//! Time-expanded gas transmission with linearized pressure drop.
//!
//! Nodes are supply `0..S`, then demand, then transit nodes. Pipes form a
//! random recursive tree (pipe i-1 joins node i to an earlier node) and
//! compressor c sits on pipe `c mod n_pipes`. Each period has its own flow
//! orientation, taken from the reference flows.
//!
//! Columns per period t: `inj[s]`, `qin[p]` and `qout[p]` (flow entering and
//! leaving each pipe), `pi[n]` squared pressure, `w[c]` compressor boost and
//! `lp[p]` linepack.
//!
//! Rows per period: node balance; `n_pwl_segments` outer-approximation cuts
//! per pipe of the Weymouth relation `q = sqrt((pi_tail - pi_head + boost)/K)`
//! written as `(qin+qout)/2 - α_s (pi_tail - pi_head + Σ w) ≤ β_s`; linepack
//! dynamics `lp_t - lp_{t-1} - qin + qout = 0` (initial linepack on the right
//! at t = 0); linepack capacity `lp - κ/2 (pi_i + pi_j) ≤ 0`.
//!
//! Data ranges: base demand U[5,20) times a daily piecewise-linear profile
//! between 0.8 and 1.2, Weymouth constant U[0.5,2)·10/Q² with Q the total
//! demand of the period, boost capacity U[20,60), compressor energy cost
//! U[1,5), supply cost U[1,3), linepack factor U[0.05,0.2).

use crate::gen::builder::{ModelBuilder, RowKind};
use crate::gen::rng::Stream;
use crate::gen::{FamilyParams, FeasibilityCertificate, GenError, KnobSpec, SizeEstimate};
use crate::lp::LpProblem;

pub(super) const SCHEMA: &[KnobSpec] = &[
    KnobSpec {
        name: "n_supply",
        min: 1,
        max: 200,
    },
    KnobSpec {
        name: "n_demand",
        min: 1,
        max: 2000,
    },
    KnobSpec {
        name: "n_transit",
        min: 0,
        max: 5000,
    },
    KnobSpec {
        name: "n_compressors",
        min: 0,
        max: 500,
    },
    KnobSpec {
        name: "n_periods",
        min: 1,
        max: 168,
    },
    KnobSpec {
        name: "n_pwl_segments",
        min: 1,
        max: 20,
    },
];

struct Knobs {
    s: usize,
    d: usize,
    r: usize,
    c: usize,
    t: usize,
    g: usize,
}

fn knobs(p: &FamilyParams) -> Knobs {
    Knobs {
        s: p.get("n_supply") as usize,
        d: p.get("n_demand") as usize,
        r: p.get("n_transit") as usize,
        c: p.get("n_compressors") as usize,
        t: p.get("n_periods") as usize,
        g: p.get("n_pwl_segments") as usize,
    }
}

pub(super) fn size(p: &FamilyParams) -> SizeEstimate {
    let Knobs { s, d, r, c, t, g } = knobs(p);
    let n = s + d + r;
    let np = n - 1;
    SizeEstimate {
        rows: t * (n + np * g + 2 * np),
        cols: t * (s + 3 * np + n + c),
        nnz: t * (s + 9 * np + g * (4 * np + c)) - np,
    }
}

fn profile(t: usize) -> f64 {
    // 0.8 at 04:00 rising to 1.2 at 16:00 and back
    let h = ((t + 20) % 24) as f64;
    0.8 + 0.4 * (1.0 - (h - 12.0).abs() / 12.0)
}

pub(super) fn build(
    params: &FamilyParams,
) -> Result<(LpProblem, FeasibilityCertificate), GenError> {
    let Knobs {
        s: ns,
        d: nd,
        r: nr,
        c: nc,
        t: nt,
        g: ng,
    } = knobs(params);
    let seed = params.seed();
    let sz = size(params);
    let mut b = ModelBuilder::with_capacity(sz.rows, sz.cols, sz.nnz);
    let n = ns + nd + nr;
    let np = n - 1;
    let inf = f64::INFINITY;

    let mut topo = Stream::new(seed, 1);
    let mut parent = vec![usize::MAX; n];
    for i in 1..n {
        parent[i] = topo.index(i);
    }
    let mut depth = vec![0usize; n];
    for i in 1..n {
        depth[i] = depth[parent[i]] + 1;
    }
    let source: Vec<usize> = (0..nd).map(|_| topo.index(ns)).collect();

    let mut data = Stream::new(seed, 2);
    let base_demand: Vec<f64> = (0..nd).map(|_| data.uniform(5.0, 20.0)).collect();
    let k_raw: Vec<f64> = (0..np).map(|_| data.uniform(0.5, 2.0)).collect();
    let boost_cap: Vec<f64> = (0..nc).map(|_| data.uniform(20.0, 60.0)).collect();
    let energy_cost: Vec<f64> = (0..nc).map(|_| data.uniform(1.0, 5.0)).collect();
    let supply_cost: Vec<f64> = (0..ns).map(|_| data.uniform(1.0, 3.0)).collect();
    let kappa: Vec<f64> = (0..np).map(|_| data.uniform(0.05, 0.2)).collect();
    let total_base: f64 = base_demand.iter().sum();
    let qscale = 1.2 * total_base;
    let weymouth: Vec<f64> = k_raw.iter().map(|k| k * 10.0 / (qscale * qscale)).collect();
    let comps_on: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new(); np];
        for c in 0..nc {
            v[c % np].push(c);
        }
        v
    };

    // Reference flows per period, signed in the parent -> child direction.
    let mut ref_rng = Stream::new(seed, 3);
    let mut flow = vec![0.0; nt * np];
    for t in 0..nt {
        for dn in 0..nd {
            let q = base_demand[dn] * profile(t);
            let (mut a, mut z) = (source[dn], ns + dn);
            while a != z {
                if depth[a] >= depth[z] {
                    flow[t * np + a - 1] -= q; // a -> parent
                    a = parent[a];
                } else {
                    flow[t * np + z - 1] += q; // parent -> z
                    z = parent[z];
                }
            }
        }
    }
    // orientation: tail, head per (t, pipe)
    let ends = |t: usize, p: usize| {
        let child = p + 1;
        if flow[t * np + p] >= 0.0 {
            (parent[child], child)
        } else {
            (child, parent[child])
        }
    };
    let q_at = |s: usize, g: usize| qscale * (s + 1) as f64 / g as f64;

    let mut boost = vec![0.0; nt * nc];
    for (i, v) in boost.iter_mut().enumerate() {
        *v = ref_rng.uniform(0.0, 0.5) * boost_cap[i % nc];
    }
    let mut pi = vec![0.0; nt * n];
    for t in 0..nt {
        // required drop along each pipe, then potentials down the tree
        let pt = &mut pi[t * n..(t + 1) * n];
        for i in 1..n {
            let p = i - 1;
            let q = flow[t * np + p].abs();
            let k = weymouth[p];
            let need = (0..ng)
                .map(|s| k * q_at(s, ng) * (2.0 * q - q_at(s, ng)))
                .fold(k * q * q, f64::max);
            let w: f64 = comps_on[p].iter().map(|&c| boost[t * nc + c]).sum();
            let drop = need + 0.01 - w;
            let (tail, _) = ends(t, p);
            pt[i] = if tail == parent[i] {
                pt[parent[i]] - drop
            } else {
                pt[parent[i]] + drop
            };
        }
        let lo = pt.iter().cloned().fold(inf, f64::min);
        for v in pt.iter_mut() {
            *v += 100.0 - lo;
        }
    }
    let pi_lo: Vec<f64> = (0..n)
        .map(|i| 0.8 * (0..nt).map(|t| pi[t * n + i]).fold(inf, f64::min))
        .collect();
    let pi_hi: Vec<f64> = (0..n)
        .map(|i| 1.2 * (0..nt).map(|t| pi[t * n + i]).fold(0.0, f64::max))
        .collect();
    let lp_ref: Vec<f64> = (0..np)
        .map(|p| {
            let (i, j) = (p + 1, parent[p + 1]);
            let least = (0..nt)
                .map(|t| pi[t * n + i] + pi[t * n + j])
                .fold(inf, f64::min);
            0.25 * kappa[p] * least
        })
        .collect();

    // injection = net outflow of each supply node
    let mut inj = vec![0.0; nt * ns];
    for t in 0..nt {
        for p in 0..np {
            let (tail, head) = ends(t, p);
            let q = flow[t * np + p].abs();
            if tail < ns {
                inj[t * ns + tail] += q;
            }
            if head < ns {
                inj[t * ns + head] -= q;
            }
        }
    }
    let inj_cap: Vec<f64> = (0..ns)
        .map(|s| 1.2 * (0..nt).map(|t| inj[t * ns + s]).fold(0.0, f64::max) + 1.0)
        .collect();

    // columns per period
    let per_t = ns + 3 * np + n + nc;
    let inj_col = |t: usize, s: usize| t * per_t + s;
    let qin_col = |t: usize, p: usize| t * per_t + ns + p;
    let qout_col = |t: usize, p: usize| t * per_t + ns + np + p;
    let pi_col = |t: usize, i: usize| t * per_t + ns + 2 * np + i;
    let w_col = |t: usize, c: usize| t * per_t + ns + 2 * np + n + c;
    let lp_col = |t: usize, p: usize| t * per_t + ns + 2 * np + n + nc + p;
    for t in 0..nt {
        for s in 0..ns {
            b.add_col(supply_cost[s], 0.0, inj_cap[s], inj[t * ns + s].max(0.0));
        }
        for _ in 0..2 {
            for p in 0..np {
                b.add_col(0.0, 0.0, inf, flow[t * np + p].abs());
            }
        }
        for i in 0..n {
            b.add_col(0.0, pi_lo[i], pi_hi[i], pi[t * n + i]);
        }
        for c in 0..nc {
            b.add_col(energy_cost[c], 0.0, boost_cap[c], boost[t * nc + c]);
        }
        for p in 0..np {
            b.add_col(0.0, 0.0, inf, lp_ref[p]);
        }
    }

    for t in 0..nt {
        let mut terms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for s in 0..ns {
            terms[s].push((inj_col(t, s), 1.0));
        }
        for p in 0..np {
            let (tail, head) = ends(t, p);
            terms[tail].push((qin_col(t, p), -1.0));
            terms[head].push((qout_col(t, p), 1.0));
        }
        for (i, row) in terms.into_iter().enumerate() {
            let kind = if (ns..ns + nd).contains(&i) {
                RowKind::EqualRef
            } else {
                RowKind::EQ0
            };
            b.add_row(row, kind);
        }
        for p in 0..np {
            let (tail, head) = ends(t, p);
            let k = weymouth[p];
            for s in 0..ng {
                let qs = q_at(s, ng);
                let alpha = 1.0 / (2.0 * k * qs);
                let terms = [
                    (qin_col(t, p), 0.5),
                    (qout_col(t, p), 0.5),
                    (pi_col(t, tail), -alpha),
                    (pi_col(t, head), alpha),
                ]
                .into_iter()
                .chain(comps_on[p].iter().map(|&c| (w_col(t, c), -alpha)));
                b.add_row(terms, RowKind::Fixed(-inf, 0.5 * qs));
            }
        }
        for p in 0..np {
            let mut terms = vec![
                (lp_col(t, p), 1.0),
                (qin_col(t, p), -1.0),
                (qout_col(t, p), 1.0),
            ];
            if t == 0 {
                b.add_row(terms, RowKind::EqualRef);
            } else {
                terms.push((lp_col(t - 1, p), -1.0));
                b.add_row(terms, RowKind::EQ0);
            }
        }
        for p in 0..np {
            let half = 0.5 * kappa[p];
            b.add_row(
                [
                    (lp_col(t, p), 1.0),
                    (pi_col(t, p + 1), -half),
                    (pi_col(t, parent[p + 1]), -half),
                ],
                RowKind::LE0,
            );
        }
    }
    debug_assert_eq!(b.n_cols(), sz.cols);
    b.finish()
}
