//! Zero sets of linear recurrence sequences: periodic degeneracy removal,
//! bounded search, and certificates that a sequence has no further zeros.

mod degeneracy;
mod dominant;
mod engine;
mod modular;
mod polynomial;

pub use degeneracy::{decompose_degeneracy, degeneracy_period, ClassKind, DegeneracyDecomposition};
pub use dominant::{certify_nonzero_dominant, dominant_root_radii, DominantCertificate};
pub use engine::{find_zeros_bounded, skolem};
pub use modular::{certify_nonzero_modular, ModularCertificate};
pub use polynomial::{
    cauchy_cutoff, certify_nonzero_polynomial, interpolate, PolynomialCertificate,
};

use serde::{Deserialize, Serialize};

/// `{a + b m : m >= 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArithmeticProgression {
    pub a: u64,
    pub b: u64,
}

impl ArithmeticProgression {
    pub fn contains(&self, n: u64) -> bool {
        n >= self.a && (n - self.a) % self.b == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Complete,
    SearchBounded,
}

/// Proof that a sequence is nonzero from some point on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum NonzeroCertificate {
    Modular(ModularCertificate),
    DominantRoot(DominantCertificate),
    Polynomial(PolynomialCertificate),
}

/// Certificate for the indices `offset + residue + period * m`.
///
/// `offset` is the number of leading terms split off because the recurrence
/// has trailing zero coefficients. Modular certificates speak about the tail
/// `t_j = u_{offset + j}` and the positions `j = residue (mod period)`;
/// dominant-root and polynomial certificates speak about the subsequence
/// `v_m = t_{residue + period * m}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCertificate {
    pub offset: u64,
    pub period: u64,
    pub residue: u64,
    #[serde(flatten)]
    pub proof: NonzeroCertificate,
}

/// Zero set of a sequence as progressions plus exceptional indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSetDecomposition {
    pub progressions: Vec<ArithmeticProgression>,
    pub exceptional: Vec<u64>,
    pub status: Status,
    pub search_bound: u64,
    #[serde(default)]
    pub certificates: Vec<ClassCertificate>,
}

impl ZeroSetDecomposition {
    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    /// Whether `n` is claimed to be a zero.
    pub fn contains(&self, n: u64) -> bool {
        self.exceptional.binary_search(&n).is_ok()
            || self.progressions.iter().any(|p| p.contains(n))
    }

    /// Least claimed zero, if any.
    pub fn first_zero(&self) -> Option<u64> {
        self.exceptional
            .iter()
            .copied()
            .chain(self.progressions.iter().map(|p| p.a))
            .min()
    }

    /// Claimed zeros up to and including `bound`.
    pub fn zeros_up_to(&self, bound: u64) -> Vec<u64> {
        (0..=bound).filter(|&n| self.contains(n)).collect()
    }
}
