//! Specifications over orbits: LTL on lasso words, model checking of
//! constructible predicates, and deterministic Müller automata.

mod ltl;
mod muller;

pub use ltl::{ltl_eval_lasso, ltl_eval_with, Ltl};
pub use muller::{
    muller_accepts_lasso, muller_equivalent, prefix_independent, Equivalence, MullerAutomaton,
    PrefixIndependence,
};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::orbit::{
    characteristic_word, AtomEvidence, CharacteristicWord, ConstructiblePredicate, LassoWord, Lds,
    Letter,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive { reason: String },
}

/// Verdict together with the characteristic word it was read from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelCheckReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub word: Option<LassoWord<Letter>>,
    pub evidence: Vec<AtomEvidence>,
}

/// Whether the orbit of `lds` satisfies `phi`, whose atoms name `preds`.
pub fn model_check(
    lds: &Lds,
    preds: &[ConstructiblePredicate],
    phi: &Ltl,
    budget: &Budget,
) -> Result<ModelCheckReport> {
    for a in phi.atoms() {
        if !preds.iter().any(|p| p.name == a) {
            return Err(Error::Domain(format!(
                "formula atom '{a}' names no predicate"
            )));
        }
    }
    match characteristic_word(lds, preds, budget)? {
        CharacteristicWord::Lasso { word, evidence } => {
            let verdict = if ltl_eval_lasso(phi, &word)? {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
            Ok(ModelCheckReport {
                verdict,
                word: Some(word),
                evidence,
            })
        }
        CharacteristicWord::Inconclusive {
            predicate,
            atom,
            search_bound,
        } => Ok(ModelCheckReport {
            verdict: Verdict::Inconclusive {
                reason: format!(
                    "zero set of atom {atom} of predicate {predicate} not certified beyond n = {search_bound}"
                ),
            },
            word: None,
            evidence: Vec::new(),
        }),
    }
}
