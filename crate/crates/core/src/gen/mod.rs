//! Seeded, feasible-by-construction LP instance families and benchmark
//! ladders.
//!
//! Every generator samples a reference activity pattern first (flows,
//! production, commitments, ...) and derives demands and capacities from it,
//! so the emitted problem always contains the reference point. That point is
//! returned as a [`FeasibilityCertificate`]. All costs are nonnegative and all
//! variables are bounded below, so every instance is bounded.
//!
//! Real-valued data is drawn from uniform ranges documented in each family
//! module, using ChaCha8 streams keyed by `(seed, block id)`; only IEEE basic
//! arithmetic and `sqrt` are applied afterwards, so output is identical on
//! every platform.

mod builder;
mod fleet;
mod gasnet;
mod prodplan;
pub(crate) mod rng;
mod scnd;
mod telecom;
mod unitcommit;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::LpProblem;
use crate::par::{self, Parallelism};

/// The six application families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    Fleet,
    GasNet,
    ProdPlan,
    #[serde(rename = "SCND")]
    Scnd,
    #[serde(rename = "TelecomND")]
    TelecomNd,
    UnitCommit,
}

impl FamilyId {
    pub const ALL: [FamilyId; 6] = [
        FamilyId::Fleet,
        FamilyId::GasNet,
        FamilyId::ProdPlan,
        FamilyId::Scnd,
        FamilyId::TelecomNd,
        FamilyId::UnitCommit,
    ];

    /// Display name used in reports (`GasNet`, `SCND`, ...).
    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Fleet => "Fleet",
            FamilyId::GasNet => "GasNet",
            FamilyId::ProdPlan => "ProdPlan",
            FamilyId::Scnd => "SCND",
            FamilyId::TelecomNd => "TelecomND",
            FamilyId::UnitCommit => "UnitCommit",
        }
    }

    /// Lowercase tag used in file names and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            FamilyId::Fleet => "fleet",
            FamilyId::GasNet => "gasnet",
            FamilyId::ProdPlan => "prodplan",
            FamilyId::Scnd => "scnd",
            FamilyId::TelecomNd => "telecomnd",
            FamilyId::UnitCommit => "unitcommit",
        }
    }

    /// Knob schema in canonical order.
    pub fn schema(self) -> &'static [KnobSpec] {
        match self {
            FamilyId::Fleet => fleet::SCHEMA,
            FamilyId::GasNet => gasnet::SCHEMA,
            FamilyId::ProdPlan => prodplan::SCHEMA,
            FamilyId::Scnd => scnd::SCHEMA,
            FamilyId::TelecomNd => telecom::SCHEMA,
            FamilyId::UnitCommit => unitcommit::SCHEMA,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        FamilyId::ALL
            .into_iter()
            .find(|f| f.tag() == lower)
            .ok_or_else(|| GenError::UnknownFamily(s.to_string()))
    }
}

/// One knob of a family schema with its admissible range.
///
/// Minimums keep instances nondegenerate; maximums are realism caps (no
/// airline with thousands of fleet types, no decade-long horizons).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnobSpec {
    pub name: &'static str,
    pub min: u64,
    pub max: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family}: unknown knob {knob:?}")]
    UnknownKnob { family: FamilyId, knob: String },
    #[error("{family}: missing knob {knob}")]
    MissingKnob {
        family: FamilyId,
        knob: &'static str,
    },
    #[error("{family}: expected {expected} knob values, got {actual}")]
    KnobCount {
        family: FamilyId,
        expected: usize,
        actual: usize,
    },
    #[error("{family}: knob {knob} = {value} is below its minimum {min}")]
    BelowMinimum {
        family: FamilyId,
        knob: &'static str,
        value: u64,
        min: u64,
    },
    #[error("{family}: knob {knob} = {value} exceeds its realism cap {max}")]
    AboveMaximum {
        family: FamilyId,
        knob: &'static str,
        value: u64,
        max: u64,
    },
    #[error("{family}: knob {knob}: {reason}")]
    Inconsistent {
        family: FamilyId,
        knob: &'static str,
        reason: String,
    },
    #[error("ladder: knob {knob} has min {min} > max {max}")]
    LadderOrder {
        knob: &'static str,
        min: u64,
        max: u64,
    },
    #[error("ladder: {0}")]
    Ladder(String),
    #[error("internal generator error: {0}")]
    Internal(String),
}

/// A concrete, validated parameter set for one family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    family: FamilyId,
    values: Vec<u64>,
    seed: u64,
}

impl FamilyParams {
    /// Builds parameters from knob values in schema order.
    pub fn from_values(family: FamilyId, values: Vec<u64>, seed: u64) -> Result<Self, GenError> {
        let schema = family.schema();
        if values.len() != schema.len() {
            return Err(GenError::KnobCount {
                family,
                expected: schema.len(),
                actual: values.len(),
            });
        }
        let p = Self {
            family,
            values,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters from `(name, value)` pairs in any order; every knob
    /// must be given exactly once.
    pub fn from_named(
        family: FamilyId,
        knobs: &[(&str, u64)],
        seed: u64,
    ) -> Result<Self, GenError> {
        let schema = family.schema();
        for (name, _) in knobs {
            if !schema.iter().any(|k| k.name == *name) {
                return Err(GenError::UnknownKnob {
                    family,
                    knob: name.to_string(),
                });
            }
        }
        let values = schema
            .iter()
            .map(|k| {
                knobs
                    .iter()
                    .find(|(n, _)| *n == k.name)
                    .map(|&(_, v)| v)
                    .ok_or(GenError::MissingKnob {
                        family,
                        knob: k.name,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_values(family, values, seed)
    }

    fn validate(&self) -> Result<(), GenError> {
        for (k, &v) in self.family.schema().iter().zip(&self.values) {
            if v < k.min {
                return Err(GenError::BelowMinimum {
                    family: self.family,
                    knob: k.name,
                    value: v,
                    min: k.min,
                });
            }
            if v > k.max {
                return Err(GenError::AboveMaximum {
                    family: self.family,
                    knob: k.name,
                    value: v,
                    max: k.max,
                });
            }
        }
        let check = |cond: bool, knob: &'static str, reason: &str| {
            if cond {
                Ok(())
            } else {
                Err(GenError::Inconsistent {
                    family: self.family,
                    knob,
                    reason: reason.to_string(),
                })
            }
        };
        match self.family {
            FamilyId::Fleet => check(
                self.get("n_maint_stations") <= self.get("n_airports"),
                "n_maint_stations",
                "must not exceed n_airports",
            ),
            FamilyId::ProdPlan => check(
                self.get("n_families") <= self.get("n_products"),
                "n_families",
                "must not exceed n_products",
            ),
            FamilyId::Scnd => check(
                self.get("lanes_per_node") <= self.get("n_dcs"),
                "lanes_per_node",
                "must not exceed n_dcs",
            ),
            FamilyId::TelecomNd => {
                check(
                    self.get("n_links") + 1 >= self.get("n_nodes"),
                    "n_links",
                    "must be at least n_nodes - 1 (the backbone must be connected)",
                )?;
                check(
                    self.get("n_pops") <= self.get("n_nodes"),
                    "n_pops",
                    "must not exceed n_nodes",
                )
            }
            FamilyId::GasNet | FamilyId::UnitCommit => Ok(()),
        }
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// `(name, value)` pairs in schema order.
    pub fn knobs(&self) -> impl Iterator<Item = (&'static str, u64)> + '_ {
        self.family
            .schema()
            .iter()
            .zip(&self.values)
            .map(|(k, &v)| (k.name, v))
    }

    /// Value of a knob by name. Panics on a name outside the schema.
    pub fn get(&self, name: &str) -> u64 {
        let idx = self
            .family
            .schema()
            .iter()
            .position(|k| k.name == name)
            .unwrap_or_else(|| panic!("{} has no knob {name}", self.family));
        self.values[idx]
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Linear interpolation between a small and a large configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderSpec {
    family: FamilyId,
    params_min: FamilyParams,
    params_max: FamilyParams,
    rungs: usize,
    base_seed: u64,
}

impl LadderSpec {
    pub fn new(
        params_min: FamilyParams,
        params_max: FamilyParams,
        rungs: usize,
        base_seed: u64,
    ) -> Result<Self, GenError> {
        let family = params_min.family();
        if params_max.family() != family {
            return Err(GenError::Ladder(format!(
                "endpoints belong to different families ({} and {})",
                family,
                params_max.family()
            )));
        }
        if rungs < 2 {
            return Err(GenError::Ladder(format!(
                "need at least 2 rungs, got {rungs}"
            )));
        }
        for ((k, &lo), &hi) in family
            .schema()
            .iter()
            .zip(params_min.values())
            .zip(params_max.values())
        {
            if lo > hi {
                return Err(GenError::LadderOrder {
                    knob: k.name,
                    min: lo,
                    max: hi,
                });
            }
        }
        Ok(Self {
            family,
            params_min,
            params_max,
            rungs,
            base_seed,
        })
    }

    /// A desk-scale ladder: the smallest rung standardizes to well under 2000
    /// variables and the largest stays around 200k nonzeros or below.
    pub fn desk(family: FamilyId, rungs: usize, base_seed: u64) -> Result<Self, GenError> {
        let (lo, hi): (&[u64], &[u64]) = match family {
            FamilyId::Fleet => (&[2, 3, 4, 2, 1], &[4, 12, 60, 4, 4]),
            FamilyId::GasNet => (&[1, 3, 2, 1, 2, 2], &[4, 40, 30, 8, 12, 4]),
            FamilyId::ProdPlan => (&[1, 2, 3, 1, 3], &[4, 10, 40, 6, 12]),
            FamilyId::Scnd => (&[2, 3, 10, 2], &[30, 40, 2500, 6]),
            FamilyId::TelecomNd => (&[2, 5, 6, 3, 2], &[5, 40, 80, 25, 6]),
            FamilyId::UnitCommit => (&[3, 12, 1], &[60, 168, 6]),
        };
        Self::new(
            FamilyParams::from_values(family, lo.to_vec(), base_seed)?,
            FamilyParams::from_values(family, hi.to_vec(), base_seed)?,
            rungs,
            base_seed,
        )
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn rungs(&self) -> usize {
        self.rungs
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed
    }

    pub fn params_min(&self) -> &FamilyParams {
        &self.params_min
    }

    pub fn params_max(&self) -> &FamilyParams {
        &self.params_max
    }

    /// Parameters of all rungs, in order.
    pub fn all_params(&self) -> Result<Vec<FamilyParams>, GenError> {
        (1..=self.rungs).map(|i| ladder_params(self, i)).collect()
    }
}

/// Parameters of rung `i` (1-based): each knob is
/// `round_half_up(min + (i-1)/(rungs-1) * (max-min))`, seed is `base_seed + i`.
pub fn ladder_params(spec: &LadderSpec, i: usize) -> Result<FamilyParams, GenError> {
    if i == 0 || i > spec.rungs {
        return Err(GenError::Ladder(format!(
            "rung {i} outside 1..={}",
            spec.rungs
        )));
    }
    let steps = (spec.rungs - 1) as u128;
    let pos = (i - 1) as u128;
    let values = spec
        .params_min
        .values()
        .iter()
        .zip(spec.params_max.values())
        .map(|(&lo, &hi)| {
            // Exact rational arithmetic: lo + pos*(hi-lo)/steps, rounded half up.
            let num = lo as u128 * steps + pos * (hi - lo) as u128;
            ((2 * num + steps) / (2 * steps)) as u64
        })
        .collect();
    FamilyParams::from_values(spec.family, values, spec.base_seed.wrapping_add(i as u64))
}

/// A point satisfying every row range and variable bound of a generated
/// problem (to within 1e-9).
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityCertificate {
    pub x_ref: Vec<f64>,
}

/// Exact row, column and nonzero counts of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeEstimate {
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
}

/// Builds the instance described by `params`.
pub fn generate(params: &FamilyParams) -> Result<(LpProblem, FeasibilityCertificate), GenError> {
    params.validate()?;
    let built = match params.family {
        FamilyId::Fleet => fleet::build(params),
        FamilyId::GasNet => gasnet::build(params),
        FamilyId::ProdPlan => prodplan::build(params),
        FamilyId::Scnd => scnd::build(params),
        FamilyId::TelecomNd => telecom::build(params),
        FamilyId::UnitCommit => unitcommit::build(params),
    }?;
    Ok(built)
}

/// Closed-form size of `generate(params)`, without building it.
pub fn size_estimate(params: &FamilyParams) -> SizeEstimate {
    match params.family {
        FamilyId::Fleet => fleet::size(params),
        FamilyId::GasNet => gasnet::size(params),
        FamilyId::ProdPlan => prodplan::size(params),
        FamilyId::Scnd => scnd::size(params),
        FamilyId::TelecomNd => telecom::size(params),
        FamilyId::UnitCommit => unitcommit::size(params),
    }
}

/// Generates every rung of a ladder; rungs are independent and may be built
/// in parallel. Output order is rung order regardless of `mode`.
pub fn generate_ladder(
    spec: &LadderSpec,
    mode: Parallelism,
) -> Result<Vec<(FamilyParams, LpProblem, FeasibilityCertificate)>, GenError> {
    let params = spec.all_params()?;
    par::map_collect(&params, mode, |p| {
        generate(p).map(|(lp, cert)| (p.clone(), lp, cert))
    })
    .into_iter()
    .collect()
}
