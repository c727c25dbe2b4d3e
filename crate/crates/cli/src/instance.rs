use std::io::Read;

use lds_core::invariants::Polyhedron;
use lds_core::kernel::{GaussianRational, MultiPoly, Rational, Vector};
use lds_core::logic::{Ltl, MullerAutomaton};
use lds_core::lrs::Lrs;
use lds_core::orbit::{ConstructiblePredicate, Lds};
use lds_core::reductions::Steering;
use serde::{Deserialize, Serialize};

use crate::FORMAT;

/// Input document shared by every subcommand; each command reads the
/// sections it needs.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lrs: Option<Lrs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lds: Option<Lds>,
    /// Point for reachability queries.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "lds_core::kernel::serde_rational::option_vec"
    )]
    pub target: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperplane: Option<Hyperplane>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub predicates: Vec<ConstructiblePredicate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Ltl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automaton: Option<MullerAutomaton>,
    /// Second automaton for language comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<MullerAutomaton>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polyhedra: Option<Polyhedra>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Reduction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudo: Option<PseudoParams>,
}

/// `{z : normal . z = offset}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hyperplane {
    #[serde(with = "lds_core::kernel::serde_rational::vec")]
    pub normal: Vector,
    #[serde(with = "lds_core::kernel::serde_rational")]
    pub offset: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Polyhedra {
    pub invariant: Polyhedron,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Polyhedron>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Reduction {
    H10 {
        polynomial: MultiPoly,
        #[serde(with = "lds_core::kernel::serde_rational::vec")]
        witness: Vector,
    },
    Positivity {
        lambda: GaussianRational,
        #[serde(with = "lds_core::kernel::serde_rational")]
        r: Rational,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudoParams {
    #[serde(with = "lds_core::kernel::serde_rational")]
    pub epsilon: Rational,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_steering")]
    pub steering: Steering,
}

fn default_steps() -> usize {
    10
}

fn default_steering() -> Steering {
    Steering::None
}

/// Reads a file, or standard input for `-`.
pub fn read_source(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading standard input: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let inst: InstanceFile = serde_json::from_str(text).map_err(|e| format!("instance: {e}"))?;
        if let Some(f) = &inst.format {
            if f != FORMAT {
                return Err(format!("instance: unsupported format {f:?}, expected {FORMAT:?}"));
            }
        }
        Ok(inst)
    }

    pub fn load(path: &str) -> Result<Self, String> {
        Self::parse(&read_source(path)?)
    }

    pub fn require<'a, T>(section: &'a Option<T>, name: &str) -> Result<&'a T, String> {
        section
            .as_ref()
            .ok_or_else(|| format!("instance: missing section \"{name}\""))
    }
}
