//! Size caps and sweep policy, overridable through environment variables.

use crate::error::{Error, Result};

pub const ENV_MAX_GROUP_ORDER: &str = "TRIALGEBRA_MAX_GROUP_ORDER";
pub const ENV_MAX_DEGREE: &str = "TRIALGEBRA_MAX_DEGREE";
pub const ENV_PERM_BUDGET: &str = "TRIALGEBRA_PERM_BUDGET";
pub const ENV_SWEEP_LIMIT: &str = "TRIALGEBRA_SWEEP_LIMIT";
pub const ENV_ALGEBRA_ROUTE_LIMIT: &str = "TRIALGEBRA_ALGEBRA_ROUTE_LIMIT";

/// Largest order stored as an explicit Cayley table.
pub const DEFAULT_MAX_GROUP_ORDER: usize = 4096;
/// Largest order for structured (non-table) groups such as doublings.
pub const MAX_STRUCTURED_ORDER: usize = 1 << 22;
/// Free Malcev truncation degree.
pub const DEFAULT_MAX_DEGREE: usize = 6;
/// Largest `p^n` for which symmetrized `p^n`-fold operator sums are formed.
pub const DEFAULT_PERM_BUDGET: usize = 5;
/// Hard ceiling on the permutation budget regardless of overrides.
pub const HARD_PERM_BUDGET: usize = 7;
/// Triple sweeps above this many triples switch to seeded sampling.
pub const DEFAULT_SWEEP_LIMIT: u64 = 1_000_000;
/// Groups up to this order get their filtration from explicit powers of the
/// augmentation ideal; larger ones use the commutator/power recursion.
pub const DEFAULT_ALGEBRA_ROUTE_LIMIT: usize = 1024;
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0x5eed_1234;

fn env_usize(name: &str) -> Option<usize> {
    std::env::var(name).ok()?.trim().parse().ok()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_group_order: usize,
    pub max_degree: usize,
    pub perm_budget: usize,
    pub algebra_route_limit: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
            max_degree: DEFAULT_MAX_DEGREE,
            perm_budget: DEFAULT_PERM_BUDGET,
            algebra_route_limit: DEFAULT_ALGEBRA_ROUTE_LIMIT,
        }
    }
}

impl Caps {
    pub fn from_env() -> Self {
        let d = Caps::default();
        Caps {
            max_group_order: env_usize(ENV_MAX_GROUP_ORDER).unwrap_or(d.max_group_order),
            max_degree: env_usize(ENV_MAX_DEGREE).unwrap_or(d.max_degree),
            perm_budget: env_usize(ENV_PERM_BUDGET)
                .unwrap_or(d.perm_budget)
                .min(HARD_PERM_BUDGET),
            algebra_route_limit: env_usize(ENV_ALGEBRA_ROUTE_LIMIT).unwrap_or(d.algebra_route_limit),
        }
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.max_degree {
            return Err(Error::CapExceeded {
                what: "degree",
                value: degree,
                cap: self.max_degree,
                env: ENV_MAX_DEGREE,
            });
        }
        Ok(())
    }

    pub fn check_perm(&self, len: usize) -> Result<()> {
        if len > self.perm_budget.min(HARD_PERM_BUDGET) {
            return Err(Error::CapExceeded {
                what: "symmetrization length",
                value: len,
                cap: self.perm_budget.min(HARD_PERM_BUDGET),
                env: ENV_PERM_BUDGET,
            });
        }
        Ok(())
    }
}

/// How exhaustive an identity sweep over triples should be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepPolicy {
    /// Sweeps with at most this many triples run exhaustively.
    pub exhaustive_limit: u64,
    /// Number of random triples drawn otherwise.
    pub samples: u64,
    pub seed: u64,
}

impl Default for SweepPolicy {
    fn default() -> Self {
        SweepPolicy {
            exhaustive_limit: DEFAULT_SWEEP_LIMIT,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

impl SweepPolicy {
    pub fn from_env() -> Self {
        let mut s = SweepPolicy::default();
        if let Some(v) = env_usize(ENV_SWEEP_LIMIT) {
            s.exhaustive_limit = v as u64;
        }
        s
    }

    pub fn exhaustive() -> Self {
        SweepPolicy {
            exhaustive_limit: u64::MAX,
            ..SweepPolicy::default()
        }
    }

    pub fn sampled(samples: u64, seed: u64) -> Self {
        SweepPolicy {
            exhaustive_limit: 0,
            samples,
            seed,
        }
    }
}
