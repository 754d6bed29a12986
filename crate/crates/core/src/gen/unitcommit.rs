//! Relaxed unit commitment with renewables and storage.
//!
//! Columns, per generator g and hour t: `u` commitment in [0,1], `p` output,
//! `start`, `stop` in [0,1]; per hour: `r` renewable dispatch; per storage
//! unit s and hour: `ch`, `dis`, `soc`.
//!
//! Rows, per (g,t): `p - Pmax u ≤ 0`, `p - Pmin u ≥ 0`, the transition
//! `u_t - u_{t-1} - start_t + stop_t = 0` (initial state on the right at
//! t = 0), minimum up time `Σ start over the last 3 hours - u_t ≤ 0` and
//! minimum down time `Σ stop over the last 3 hours + u_t ≤ 1`. Per hour:
//! demand balance and spinning reserve `Σ (Pmax u - p) ≥ reserve`. Per (s,t):
//! state of charge with 0.95 charge and discharge efficiency.
//!
//! Data ranges: Pmax U[50,400), Pmin/Pmax U[0.2,0.4), fuel cost U[10,60),
//! startup cost U[50,500)·Pmax/100, no-load cost U[0,5); renewable capacity
//! U[0.1,0.4)·ΣPmax with a triangular solar shape and U[0.2,1) wind factor;
//! storage energy U[50,300), power energy/4, initial charge energy/2.

use crate::gen::builder::{ModelBuilder, RowKind};
use crate::gen::rng::Stream;
use crate::gen::{FamilyParams, FeasibilityCertificate, GenError, KnobSpec, SizeEstimate};
use crate::lp::LpProblem;

pub(super) const SCHEMA: &[KnobSpec] = &[
    KnobSpec {
        name: "n_generators",
        min: 1,
        max: 2000,
    },
    KnobSpec {
        name: "n_hours",
        min: 1,
        max: 8784,
    },
    KnobSpec {
        name: "n_storage",
        min: 0,
        max: 500,
    },
];

const MIN_UP: usize = 3;
const EFF: f64 = 0.95;

struct Knobs {
    g: usize,
    t: usize,
    s: usize,
}

fn knobs(p: &FamilyParams) -> Knobs {
    Knobs {
        g: p.get("n_generators") as usize,
        t: p.get("n_hours") as usize,
        s: p.get("n_storage") as usize,
    }
}

/// Total window length of the min-up (or min-down) sums over `t` hours.
fn window_terms(t: usize) -> usize {
    (0..t).map(|h| (h + 1).min(MIN_UP)).sum()
}

pub(super) fn size(p: &FamilyParams) -> SizeEstimate {
    let Knobs { g, t, s } = knobs(p);
    SizeEstimate {
        rows: 5 * g * t + 2 * t + s * t,
        cols: 4 * g * t + t + 3 * s * t,
        nnz: 13 * g * t - g + 2 * g * window_terms(t) + t + 6 * s * t - s,
    }
}

fn solar(hour: usize) -> f64 {
    let h = (hour % 24) as f64;
    if !(6.0..18.0).contains(&h) {
        0.0
    } else {
        1.0 - (h - 12.0).abs() / 6.0
    }
}

pub(super) fn build(
    params: &FamilyParams,
) -> Result<(LpProblem, FeasibilityCertificate), GenError> {
    let Knobs {
        g: ng,
        t: nt,
        s: ns,
    } = knobs(params);
    let seed = params.seed();
    let sz = size(params);
    let mut b = ModelBuilder::with_capacity(sz.rows, sz.cols, sz.nnz);
    let inf = f64::INFINITY;

    let mut data = Stream::new(seed, 1);
    let mut dispatch = Stream::new(seed, 4);
    struct Unit {
        pmax: f64,
        pmin: f64,
        fuel: f64,
        startup: f64,
        noload: f64,
        u_ref: f64,
    }
    let units: Vec<Unit> = (0..ng)
        .map(|_| {
            let pmax = data.uniform(50.0, 400.0);
            let pmin = pmax * data.uniform(0.2, 0.4);
            Unit {
                pmax,
                pmin,
                fuel: data.uniform(10.0, 60.0),
                startup: data.uniform(50.0, 500.0) * pmax / 100.0,
                noload: data.uniform(0.0, 5.0),
                u_ref: data.uniform(0.5, 1.0),
            }
        })
        .collect();

    // columns [u, p, start, stop] for (g, t) at 4 * (g * nt + t)
    for unit in &units {
        for _ in 0..nt {
            let load = dispatch.uniform(0.05, 0.95);
            let p_ref = unit.u_ref * (unit.pmin + load * (unit.pmax - unit.pmin));
            b.add_col(unit.noload, 0.0, 1.0, unit.u_ref);
            b.add_col(unit.fuel, 0.0, inf, p_ref);
            b.add_col(unit.startup, 0.0, 1.0, 0.0);
            b.add_col(0.0, 0.0, 1.0, 0.0);
        }
    }
    let ucol = |g: usize, t: usize| 4 * (g * nt + t);

    let mut weather = Stream::new(seed, 2);
    let total_pmax: f64 = units.iter().map(|u| u.pmax).sum();
    let ren_cap = weather.uniform(0.1, 0.4) * total_pmax;
    let r0 = b.n_cols();
    for t in 0..nt {
        let avail = ren_cap * (0.5 * solar(t) + 0.5 * weather.uniform(0.2, 1.0));
        let used = avail * weather.uniform(0.3, 1.0);
        b.add_col(0.0, 0.0, avail, used);
    }

    let mut store = Stream::new(seed, 3);
    let s0 = b.n_cols();
    for _ in 0..ns {
        let emax = store.uniform(50.0, 300.0);
        let rate = emax / 4.0;
        let mut soc = emax / 2.0;
        for _ in 0..nt {
            let (ch, dis) = if store.bernoulli(0.5) {
                let room = ((emax - soc) / EFF).min(rate);
                (store.uniform(0.0, 0.9) * room, 0.0)
            } else {
                let room = (soc * EFF).min(rate);
                (0.0, store.uniform(0.0, 0.9) * room)
            };
            soc = soc + EFF * ch - dis / EFF;
            b.add_col(0.0, 0.0, rate, ch);
            b.add_col(0.5, 0.0, rate, dis);
            b.add_col(0.0, 0.0, emax, soc.clamp(0.0, emax));
        }
    }
    let scol = |s: usize, t: usize| s0 + 3 * (s * nt + t);

    for (g, unit) in units.iter().enumerate() {
        for t in 0..nt {
            let (u, p, start, stop) = (ucol(g, t), ucol(g, t) + 1, ucol(g, t) + 2, ucol(g, t) + 3);
            b.add_row([(p, 1.0), (u, -unit.pmax)], RowKind::LE0);
            b.add_row([(p, 1.0), (u, -unit.pmin)], RowKind::GE0);
            if t == 0 {
                b.add_row([(u, 1.0), (start, -1.0), (stop, 1.0)], RowKind::EqualRef);
            } else {
                let prev = ucol(g, t - 1);
                b.add_row(
                    [(u, 1.0), (prev, -1.0), (start, -1.0), (stop, 1.0)],
                    RowKind::EQ0,
                );
            }
            let window = t + 1 - (t + 1).min(MIN_UP)..=t;
            b.add_row(
                window
                    .clone()
                    .map(|h| (ucol(g, h) + 2, 1.0))
                    .chain([(u, -1.0)]),
                RowKind::LE0,
            );
            b.add_row(
                window.map(|h| (ucol(g, h) + 3, 1.0)).chain([(u, 1.0)]),
                RowKind::Fixed(-inf, 1.0),
            );
        }
    }
    for t in 0..nt {
        let storage_terms = (0..ns).flat_map(|s| [(scol(s, t), -1.0), (scol(s, t) + 1, 1.0)]);
        b.add_row(
            (0..ng)
                .map(|g| (ucol(g, t) + 1, 1.0))
                .chain([(r0 + t, 1.0)])
                .chain(storage_terms),
            RowKind::EqualRef,
        );
        b.add_row(
            (0..ng).flat_map(|g| [(ucol(g, t), units[g].pmax), (ucol(g, t) + 1, -1.0)]),
            RowKind::LowerRef { margin: 0.2 },
        );
    }
    for s in 0..ns {
        for t in 0..nt {
            let c = scol(s, t);
            let flows = [(c, -EFF), (c + 1, 1.0 / EFF), (c + 2, 1.0)];
            if t == 0 {
                b.add_row(flows, RowKind::EqualRef);
            } else {
                b.add_row(
                    flows.into_iter().chain([(scol(s, t - 1) + 2, -1.0)]),
                    RowKind::EQ0,
                );
            }
        }
    }
    debug_assert_eq!(b.n_cols(), sz.cols);
    b.finish()
}
