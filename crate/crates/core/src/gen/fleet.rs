//! Fleet assignment on a daily time-space network.
//!
//! Time is split into 24 hourly slots per day over `horizon_days`; slot
//! `S-1` wraps around to slot 0. Airports `0..n_maint_stations` are
//! maintenance stations. `n_flights` legs are flown every day, grouped into
//! out-and-back rotations of two or three legs that start and end at a
//! station.
//!
//! Columns, per fleet f: `x[f,leg]` in [0,1] for every leg of every day,
//! ground arcs `g[f,a,s]` from slot s to s+1 at airport a, and overnight
//! maintenance arcs `m[f,station,day]` from slot 2 to slot 3 of each day.
//!
//! Rows: flow balance per (f, a, slot); cover `Σ_f x[f,leg] = 1` per leg;
//! fleet size `Σ_a g[f,a,S-1] ≤ aircraft_f` per f; maintenance per fleet and
//! rolling window of `min(3, horizon_days)` days
//! `Σ m - 0.25 Σ x ≥ 0`.
//!
//! Data ranges: seats per fleet U[100,300), seat demand per leg U[80,300),
//! block time 1 to 4 hours, turnaround 0 or 1 hour, first departure at slot
//! 3 to 5, maintenance arc cost 0.5. Leg cost is
//! `0.1·|seats - demand| + duration·seats/100`.

use crate::gen::builder::{ModelBuilder, RowKind};
use crate::gen::rng::Stream;
use crate::gen::{FamilyParams, FeasibilityCertificate, GenError, KnobSpec, SizeEstimate};
use crate::lp::LpProblem;

pub(super) const SCHEMA: &[KnobSpec] = &[
    KnobSpec {
        name: "n_fleets",
        min: 1,
        max: 50,
    },
    KnobSpec {
        name: "n_airports",
        min: 3,
        max: 400,
    },
    KnobSpec {
        name: "n_flights",
        min: 2,
        max: 6000,
    },
    KnobSpec {
        name: "n_maint_stations",
        min: 1,
        max: 400,
    },
    KnobSpec {
        name: "horizon_days",
        min: 1,
        max: 14,
    },
];

const SLOTS_PER_DAY: usize = 24;
const MAINT_SLOT: usize = 2;
const DUTY_RATIO: f64 = 0.25;

struct Knobs {
    f: usize,
    a: usize,
    l: usize,
    m: usize,
    h: usize,
}

fn knobs(p: &FamilyParams) -> Knobs {
    Knobs {
        f: p.get("n_fleets") as usize,
        a: p.get("n_airports") as usize,
        l: p.get("n_flights") as usize,
        m: p.get("n_maint_stations") as usize,
        h: p.get("horizon_days") as usize,
    }
}

fn window(h: usize) -> usize {
    h.min(3)
}

pub(super) fn size(p: &FamilyParams) -> SizeEstimate {
    let Knobs { f, a, l, m, h } = knobs(p);
    let s = SLOTS_PER_DAY * h;
    let w = window(h);
    let nw = h - w + 1;
    SizeEstimate {
        rows: f * a * s + l * h + f + f * nw,
        cols: f * l * h + f * a * s + f * m * h,
        nnz: f * (2 * a * s + 2 * l * h + 2 * m * h) + f * l * h + f * a + f * nw * w * (m + l),
    }
}

struct Leg {
    from: usize,
    to: usize,
    dep: usize,
    arr: usize,
    fleet: usize,
    demand: f64,
}

pub(super) fn build(
    params: &FamilyParams,
) -> Result<(LpProblem, FeasibilityCertificate), GenError> {
    let Knobs {
        f: nf,
        a: na,
        l: nl,
        m: nm,
        h: nh,
    } = knobs(params);
    let seed = params.seed();
    let sz = size(params);
    let mut b = ModelBuilder::with_capacity(sz.rows, sz.cols, sz.nnz);
    let ns = SLOTS_PER_DAY * nh;
    let w = window(nh);
    let nwin = nh - w + 1;

    let mut fleet_rng = Stream::new(seed, 1);
    let seats: Vec<f64> = (0..nf).map(|_| fleet_rng.uniform(100.0, 300.0)).collect();

    // Daily schedule: rotations of two legs, plus one of three when odd.
    let mut sched = Stream::new(seed, 2);
    let mut legs: Vec<Leg> = Vec::with_capacity(nl * nh);
    // (fleet, base, first departure slot, return slot, first leg) per rotation
    let mut rotations: Vec<(usize, usize, usize, usize, usize)> = Vec::new();
    for day in 0..nh {
        let mut left = nl;
        while left > 0 {
            let len = if left == 3 { 3 } else { 2 };
            left -= len;
            let fleet = sched.index(nf);
            let base = sched.index(nm);
            let mut stops = vec![base];
            for _ in 1..len {
                loop {
                    let c = sched.index(na);
                    if !stops.contains(&c) {
                        stops.push(c);
                        break;
                    }
                }
            }
            stops.push(base);
            let first_leg = legs.len();
            let mut clock = day * SLOTS_PER_DAY + 3 + sched.index(3);
            let first = clock;
            for pair in stops.windows(2) {
                let dur = 1 + sched.index(4);
                legs.push(Leg {
                    from: pair[0],
                    to: pair[1],
                    dep: clock,
                    arr: clock + dur,
                    fleet,
                    demand: sched.uniform(80.0, 300.0),
                });
                clock += dur + sched.index(2);
            }
            let back = legs.last().map(|l| l.arr).unwrap_or(first);
            rotations.push((fleet, base, first, back, first_leg));
        }
    }
    debug_assert_eq!(legs.len(), nl * nh);

    // Reference ground flows: an aircraft sits at its base except while on
    // its rotation, and waits between legs at outstations.
    let gidx = |f: usize, a: usize, s: usize| (f * na + a) * ns + s;
    let mut ground = vec![0.0; nf * na * ns];
    let rotation_end = |r: usize| rotations.get(r + 1).map_or(legs.len(), |n| n.4);
    for (r, &(f, base, first, back, first_leg)) in rotations.iter().enumerate() {
        for s in 0..ns {
            if s < first || s >= back {
                ground[gidx(f, base, s)] += 1.0;
            }
        }
        for pair in legs[first_leg..rotation_end(r)].windows(2) {
            for s in pair[0].arr..pair[1].dep {
                ground[gidx(f, pair[0].to, s)] += 1.0;
            }
        }
    }
    let mut maint = vec![0.0; nf * nm * nh];
    for f in 0..nf {
        for st in 0..nm {
            for day in 0..nh {
                let s = day * SLOTS_PER_DAY + MAINT_SLOT;
                maint[(f * nm + st) * nh + day] = ground[gidx(f, st, s)];
                ground[gidx(f, st, s)] = 0.0;
            }
        }
    }

    // Column layout per fleet: legs, then ground arcs, then maintenance arcs.
    let per_fleet = nl * nh + na * ns + nm * nh;
    let xcol = |f: usize, leg: usize| f * per_fleet + leg;
    let gcol = |f: usize, a: usize, s: usize| f * per_fleet + nl * nh + a * ns + s;
    let mcol = |f: usize, st: usize, day: usize| f * per_fleet + nl * nh + na * ns + st * nh + day;
    for f in 0..nf {
        for leg in &legs {
            let dur = (leg.arr - leg.dep) as f64;
            let cost = 0.1 * (seats[f] - leg.demand).abs() + dur * seats[f] / 100.0;
            b.add_col(cost, 0.0, 1.0, if leg.fleet == f { 1.0 } else { 0.0 });
        }
        for a in 0..na {
            for s in 0..ns {
                b.add_col(0.0, 0.0, f64::INFINITY, ground[gidx(f, a, s)]);
            }
        }
        for st in 0..nm {
            for day in 0..nh {
                b.add_col(0.5, 0.0, f64::INFINITY, maint[(f * nm + st) * nh + day]);
            }
        }
    }

    // arcs leaving and entering each (airport, slot)
    let mut dep_at = vec![Vec::new(); na * ns];
    let mut arr_at = vec![Vec::new(); na * ns];
    for (i, leg) in legs.iter().enumerate() {
        dep_at[leg.from * ns + leg.dep].push(i);
        arr_at[leg.to * ns + leg.arr % ns].push(i);
    }
    for f in 0..nf {
        for a in 0..na {
            for s in 0..ns {
                let mut terms = vec![(gcol(f, a, (s + ns - 1) % ns), 1.0), (gcol(f, a, s), -1.0)];
                if a < nm {
                    let (day, slot) = (s / SLOTS_PER_DAY, s % SLOTS_PER_DAY);
                    if slot == MAINT_SLOT {
                        terms.push((mcol(f, a, day), -1.0));
                    } else if slot == MAINT_SLOT + 1 {
                        terms.push((mcol(f, a, day), 1.0));
                    }
                }
                terms.extend(arr_at[a * ns + s].iter().map(|&i| (xcol(f, i), 1.0)));
                terms.extend(dep_at[a * ns + s].iter().map(|&i| (xcol(f, i), -1.0)));
                b.add_row(terms, RowKind::EQ0);
            }
        }
    }
    for i in 0..legs.len() {
        b.add_row((0..nf).map(|f| (xcol(f, i), 1.0)), RowKind::Fixed(1.0, 1.0));
    }
    for f in 0..nf {
        let aircraft = rotations.iter().filter(|r| r.0 == f).count() as f64;
        b.add_row(
            (0..na).map(|a| (gcol(f, a, ns - 1), 1.0)),
            RowKind::Fixed(f64::NEG_INFINITY, (1.2 * aircraft).ceil() + 1.0),
        );
    }
    for f in 0..nf {
        for start in 0..nwin {
            let days = start..start + w;
            let mut terms: Vec<(usize, f64)> = Vec::with_capacity(w * (nm + nl));
            for st in 0..nm {
                terms.extend(days.clone().map(|d| (mcol(f, st, d), 1.0)));
            }
            for d in days {
                terms.extend((d * nl..(d + 1) * nl).map(|i| (xcol(f, i), -DUTY_RATIO)));
            }
            b.add_row(terms, RowKind::GE0);
        }
    }
    debug_assert_eq!(b.n_cols(), sz.cols);
    b.finish()
}
