use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Declarative resource limits shared by the engines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Terms searched exactly for zeros.
    pub search_bound: u64,
    /// Largest prime tried by the modular tier.
    pub max_prime: u64,
    /// Primes up to this bound are tried before the dominant-root tier.
    pub quick_prime: u64,
    /// State-sequence steps explored per modulus.
    pub steps_per_modulus: usize,
    /// State-sequence steps explored over the whole modulus ladder.
    pub total_steps: usize,
    /// Largest index up to which a dominant-root cutoff is replayed exactly.
    pub max_cutoff: u64,
    /// Largest number of lifted coordinates.
    pub lift_cap: usize,
    /// Simplex pivots per linear program.
    pub lp_pivots: usize,
    /// Product states explored by automaton equivalence.
    pub product_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            search_bound: 10_000,
            max_prime: 10_000,
            quick_prime: 64,
            steps_per_modulus: 100_000,
            total_steps: 2_000_000,
            max_cutoff: 100_000,
            lift_cap: 2000,
            lp_pivots: 10_000,
            product_states: 12,
        }
    }
}

impl Budget {
    /// Applies `key=value` pairs separated by commas on top of `self`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("budget entry {part:?} is not key=value")))?;
            let n: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("budget value {v:?} is not a natural number")))?;
            let u = n as usize;
            match k.trim() {
                "search_bound" => self.search_bound = n,
                "max_prime" => self.max_prime = n,
                "quick_prime" => self.quick_prime = n,
                "steps_per_modulus" => self.steps_per_modulus = u,
                "total_steps" => self.total_steps = u,
                "max_cutoff" => self.max_cutoff = n,
                "lift_cap" => self.lift_cap = u,
                "lp_pivots" => self.lp_pivots = u,
                "product_states" => self.product_states = u,
                other => return Err(Error::Parse(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(self)
    }
}
