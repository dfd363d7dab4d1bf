//! Desk-scale resource limits shared by every enumeration routine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the environment variable that overrides [`Limits`].
pub const LIMITS_ENV: &str = "OLIGOREP_LIMITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest number of points in a relational structure (sets, orders, graphs).
    pub max_points: usize,
    /// Largest dimension of an enumerated vector space.
    pub max_dim: usize,
    /// Largest number of atoms of an enumerated Boolean algebra.
    pub max_atoms: usize,
    /// Largest tuple arity for orbit-type enumeration.
    pub max_arity: usize,
    /// Largest group order for subgroup enumeration.
    pub subgroup_limit: u128,
    /// Largest group order for conjugacy classes and character tables.
    pub chartab_limit: u128,
    /// Largest group order whose elements are listed explicitly.
    pub element_limit: u128,
    /// Seed from which every random sample is derived.
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_points: 6,
            max_dim: 4,
            max_atoms: 3,
            max_arity: 5,
            subgroup_limit: 2000,
            chartab_limit: 20160,
            element_limit: 50_000,
            seed: 20_260_101,
        }
    }
}

impl Limits {
    /// Reads overrides from `OLIGOREP_LIMITS` (`key=value` pairs separated by commas).
    pub fn from_env() -> Result<Self> {
        match std::env::var(LIMITS_ENV) {
            Ok(spec) => Limits::default().with_overrides(&spec),
            Err(_) => Ok(Limits::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got `{item}`")))?;
            let parsed: u128 = value
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad number in `{item}`")))?;
            if parsed == 0 {
                return Err(Error::Config(format!("limit `{key}` must be positive")));
            }
            let small = || -> Result<usize> {
                usize::try_from(parsed).map_err(|_| Error::Config(format!("`{item}` too large")))
            };
            match key.trim() {
                "max_points" | "max_base" => self.max_points = small()?,
                "max_dim" => self.max_dim = small()?,
                "max_atoms" => self.max_atoms = small()?,
                "max_arity" => self.max_arity = small()?,
                "subgroup_limit" => self.subgroup_limit = parsed,
                "chartab_limit" => self.chartab_limit = parsed,
                "element_limit" => self.element_limit = parsed,
                "seed" => {
                    self.seed = u64::try_from(parsed).map_err(|_| Error::Config(format!("`{item}` too large")))?
                }
                other => return Err(Error::Config(format!("unknown limit `{other}`"))),
            }
        }
        Ok(self)
    }

    pub(crate) fn check_arity(&self, n: usize) -> Result<()> {
        if n > self.max_arity {
            return Err(Error::limit("tuple arity", n as u128, self.max_arity as u128));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let l = Limits::default()
            .with_overrides("max_arity=7, subgroup_limit=100")
            .unwrap();
        assert_eq!(l.max_arity, 7);
        assert_eq!(l.subgroup_limit, 100);
        assert!(Limits::default().with_overrides("max_arity=0").is_err());
        assert!(Limits::default().with_overrides("bogus=3").is_err());
        assert!(Limits::default().with_overrides("max_arity").is_err());
    }
}
