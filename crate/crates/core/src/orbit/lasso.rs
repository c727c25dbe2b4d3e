use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Letter of a characteristic word: the ids of the predicates that hold.
pub type Letter = BTreeSet<usize>;

/// Ultimately periodic word `stem . cycle^omega`.
///
/// `alphabet` names the letters' basis: predicate names for characteristic
/// words, symbols for automaton input.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord<L> {
    #[serde(default)]
    pub alphabet: Vec<String>,
    pub stem: Vec<L>,
    pub cycle: Vec<L>,
}

impl<L: Clone + Eq> LassoWord<L> {
    pub fn new(alphabet: Vec<String>, stem: Vec<L>, cycle: Vec<L>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Shape("lasso cycle must be nonempty".into()));
        }
        Ok(LassoWord {
            alphabet,
            stem,
            cycle,
        })
    }

    pub fn letter(&self, n: usize) -> &L {
        if n < self.stem.len() {
            &self.stem[n]
        } else {
            &self.cycle[(n - self.stem.len()) % self.cycle.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<L> {
        (0..n).map(|i| self.letter(i).clone()).collect()
    }

    /// Same word with one more copy of the cycle in the stem.
    pub fn unrolled(&self) -> Self {
        let mut stem = self.stem.clone();
        stem.extend(self.cycle.iter().cloned());
        LassoWord {
            alphabet: self.alphabet.clone(),
            stem,
            cycle: self.cycle.clone(),
        }
    }

    /// Same word with the first cycle letter moved into the stem.
    pub fn rotated(&self) -> Self {
        let mut stem = self.stem.clone();
        stem.push(self.cycle[0].clone());
        let mut cycle = self.cycle.clone();
        cycle.rotate_left(1);
        LassoWord {
            alphabet: self.alphabet.clone(),
            stem,
            cycle,
        }
    }

    /// Canonical form: primitive cycle, shortest stem.
    pub fn normalized(&self) -> Self {
        let n = self.cycle.len();
        let p = (1..=n)
            .find(|&p| n % p == 0 && (p..n).all(|i| self.cycle[i] == self.cycle[i - p]))
            .unwrap_or(n);
        let mut cycle = self.cycle[..p].to_vec();
        let mut stem = self.stem.clone();
        while stem.last().is_some_and(|l| Some(l) == cycle.last()) {
            stem.pop();
            cycle.rotate_right(1);
        }
        LassoWord {
            alphabet: self.alphabet.clone(),
            stem,
            cycle,
        }
    }

    /// Whether both lassos denote the same infinite word.
    pub fn same_word(&self, other: &Self) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        a.stem == b.stem && a.cycle == b.cycle
    }
}
