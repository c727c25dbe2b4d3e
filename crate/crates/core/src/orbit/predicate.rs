use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{MultiPoly, Rational};

/// Boolean combination of indexed atoms.
///
/// JSON: `{"atom": 0}`, `{"not": f}`, `{"and": [f, ...]}`, `{"or": [f, ...]}`,
/// `"true"`, `"false"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolFormula {
    True,
    False,
    Atom(usize),
    Not(Box<BoolFormula>),
    And(Vec<BoolFormula>),
    Or(Vec<BoolFormula>),
}

impl BoolFormula {
    pub fn eval(&self, atom: &mut impl FnMut(usize) -> bool) -> bool {
        match self {
            BoolFormula::True => true,
            BoolFormula::False => false,
            BoolFormula::Atom(i) => atom(*i),
            BoolFormula::Not(f) => !f.eval(atom),
            BoolFormula::And(fs) => fs.iter().all(|f| f.eval(atom)),
            BoolFormula::Or(fs) => fs.iter().any(|f| f.eval(atom)),
        }
    }

    /// Largest atom index referenced.
    pub fn max_atom(&self) -> Option<usize> {
        match self {
            BoolFormula::True | BoolFormula::False => None,
            BoolFormula::Atom(i) => Some(*i),
            BoolFormula::Not(f) => f.max_atom(),
            BoolFormula::And(fs) | BoolFormula::Or(fs) => {
                fs.iter().filter_map(|f| f.max_atom()).max()
            }
        }
    }
}

/// Sign condition `q(z) rel 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=", alias = "eq")]
    Eq,
    #[serde(rename = "!=", alias = "ne")]
    Ne,
    #[serde(rename = "<", alias = "lt")]
    Lt,
    #[serde(rename = "<=", alias = "le")]
    Le,
    #[serde(rename = ">", alias = "gt")]
    Gt,
    #[serde(rename = ">=", alias = "ge")]
    Ge,
}

impl Relation {
    pub fn holds(self, v: &Rational) -> bool {
        let s = v.cmp(&Rational::from_integer(0.into()));
        use std::cmp::Ordering::*;
        match self {
            Relation::Eq => s == Equal,
            Relation::Ne => s != Equal,
            Relation::Lt => s == Less,
            Relation::Le => s != Greater,
            Relation::Gt => s == Greater,
            Relation::Ge => s != Less,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignAtom {
    pub poly: MultiPoly,
    pub rel: Relation,
}

/// Boolean combination of polynomial equations `q_i(z) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructiblePredicate {
    pub name: String,
    pub atoms: Vec<MultiPoly>,
    pub formula: BoolFormula,
}

/// Boolean combination of sign conditions `q_i(z) rel_i 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemialgebraicPredicate {
    pub name: String,
    pub atoms: Vec<SignAtom>,
    pub formula: BoolFormula,
}

fn check_formula(name: &str, formula: &BoolFormula, atoms: usize) -> Result<()> {
    match formula.max_atom() {
        Some(i) if i >= atoms => Err(Error::Shape(format!(
            "predicate {name} references atom {i} but has {atoms}"
        ))),
        _ => Ok(()),
    }
}

impl ConstructiblePredicate {
    pub fn new(
        name: impl Into<String>,
        atoms: Vec<MultiPoly>,
        formula: BoolFormula,
    ) -> Result<Self> {
        let p = ConstructiblePredicate {
            name: name.into(),
            atoms,
            formula,
        };
        check_formula(&p.name, &p.formula, p.atoms.len())?;
        Ok(p)
    }

    /// The single atom `q = 0`.
    pub fn equation(name: impl Into<String>, q: MultiPoly) -> Self {
        ConstructiblePredicate {
            name: name.into(),
            atoms: vec![q],
            formula: BoolFormula::Atom(0),
        }
    }

    /// Checks atom indices and rebinds every atom to `dim` variables.
    pub fn bind(&self, dim: usize) -> Result<Self> {
        check_formula(&self.name, &self.formula, self.atoms.len())?;
        let atoms = self
            .atoms
            .iter()
            .map(|q| q.clone().with_nvars(dim))
            .collect::<Result<_>>()?;
        Ok(ConstructiblePredicate {
            name: self.name.clone(),
            atoms,
            formula: self.formula.clone(),
        })
    }

    /// Exact truth at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<bool> {
        let values: Vec<bool> = self
            .atoms
            .iter()
            .map(|q| Ok(q.eval(point)? == Rational::from_integer(0.into())))
            .collect::<Result<_>>()?;
        Ok(self.formula.eval(&mut |i| values[i]))
    }
}

impl SemialgebraicPredicate {
    pub fn bind(&self, dim: usize) -> Result<Self> {
        check_formula(&self.name, &self.formula, self.atoms.len())?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Ok(SignAtom {
                    poly: a.poly.clone().with_nvars(dim)?,
                    rel: a.rel,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SemialgebraicPredicate {
            name: self.name.clone(),
            atoms,
            formula: self.formula.clone(),
        })
    }
}

impl From<ConstructiblePredicate> for SemialgebraicPredicate {
    fn from(p: ConstructiblePredicate) -> Self {
        SemialgebraicPredicate {
            name: p.name,
            atoms: p
                .atoms
                .into_iter()
                .map(|poly| SignAtom {
                    poly,
                    rel: Relation::Eq,
                })
                .collect(),
            formula: p.formula,
        }
    }
}

/// Exact truth of the sign formula `p` at `point`.
pub fn eval_predicate(point: &[Rational], p: &SemialgebraicPredicate) -> Result<bool> {
    let p = p.bind(point.len())?;
    let values: Vec<bool> = p
        .atoms
        .iter()
        .map(|a| Ok(a.rel.holds(&a.poly.eval(point)?)))
        .collect::<Result<_>>()?;
    Ok(p.formula.eval(&mut |i| values[i]))
}
