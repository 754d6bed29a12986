use std::fmt;

use thiserror::Error;

use crate::gen::{FamilyId, FamilyParams, GenError};

/// File name carrying the full parameter set of a generated instance:
/// `<family>__<knob>-<value>__...__s<seed>.lp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LpFileName {
    params: FamilyParams,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NameError {
    #[error("{0:?} does not end in .lp")]
    Extension(String),
    #[error("{name:?}: {reason}")]
    Malformed { name: String, reason: String },
    #[error("{name:?}: {source}")]
    Params { name: String, source: GenError },
}

impl LpFileName {
    pub fn new(params: FamilyParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn parse(name: &str) -> Result<Self, NameError> {
        let malformed = |reason: &str| NameError::Malformed {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        let stem = name
            .strip_suffix(".lp")
            .ok_or_else(|| NameError::Extension(name.to_string()))?;
        let parts: Vec<&str> = stem.split("__").collect();
        if parts.len() < 3 {
            return Err(malformed("expected family, knobs and seed"));
        }
        let family: FamilyId = parts[0].parse().map_err(|e| NameError::Params {
            name: name.to_string(),
            source: e,
        })?;
        if parts[0] != family.tag() {
            return Err(malformed("family tag must be lowercase"));
        }
        let seed = parts[parts.len() - 1]
            .strip_prefix('s')
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| malformed("last field must be s<seed>"))?;
        let mut knobs = Vec::with_capacity(parts.len() - 2);
        for part in &parts[1..parts.len() - 1] {
            let (k, v) = part
                .rsplit_once('-')
                .ok_or_else(|| malformed(&format!("knob field {part:?} lacks '-'")))?;
            let v: u64 = v
                .parse()
                .map_err(|_| malformed(&format!("knob value {v:?} is not an integer")))?;
            knobs.push((k, v));
        }
        let params =
            FamilyParams::from_named(family, &knobs, seed).map_err(|e| NameError::Params {
                name: name.to_string(),
                source: e,
            })?;
        let parsed = Self { params };
        if parsed.to_string() != name {
            return Err(malformed("knobs must appear once each, in schema order"));
        }
        Ok(parsed)
    }
}

impl fmt::Display for LpFileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.params.family().tag())?;
        for (k, v) in self.params.knobs() {
            write!(f, "__{k}-{v}")?;
        }
        write!(f, "__s{}.lp", self.params.seed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_parses_back() {
        let p = FamilyParams::from_values(FamilyId::UnitCommit, vec![3, 24, 1], 7).unwrap();
        let n = LpFileName::new(p.clone());
        assert_eq!(
            n.to_string(),
            "unitcommit__n_generators-3__n_hours-24__n_storage-1__s7.lp"
        );
        assert_eq!(LpFileName::parse(&n.to_string()).unwrap().params(), &p);
    }

    #[test]
    fn rejects_bad_names() {
        for bad in [
            "unitcommit__n_generators-3__n_hours-24__n_storage-1__s7",
            "unitcommit__n_generators-3__s7.lp",
            "unitcommit__n_hours-24__n_generators-3__n_storage-1__s7.lp",
            "unitcommit__n_generators-x__n_hours-24__n_storage-1__s7.lp",
            "plant__a-1__s0.lp",
        ] {
            assert!(LpFileName::parse(bad).is_err(), "{bad}");
        }
    }
}
