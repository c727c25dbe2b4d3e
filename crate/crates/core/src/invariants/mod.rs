//! Polyhedral inductive invariants: stability under the system matrix,
//! disjointness from a target, and non-reachability certificates.

mod simplex;

pub use simplex::{feasible_point, maximize, LpOutcome};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::kernel::{Matrix, Rational, Vector};
use crate::orbit::Lds;

/// `{z : A z <= b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyhedronJson", into = "PolyhedronJson")]
pub struct Polyhedron {
    a: Matrix,
    b: Vector,
}

#[derive(Serialize, Deserialize)]
struct PolyhedronJson {
    #[serde(rename = "A")]
    a: Matrix,
    #[serde(with = "crate::kernel::serde_rational::vec")]
    b: Vector,
}

impl TryFrom<PolyhedronJson> for Polyhedron {
    type Error = Error;
    fn try_from(j: PolyhedronJson) -> Result<Self> {
        Polyhedron::new(j.a, j.b)
    }
}

impl From<Polyhedron> for PolyhedronJson {
    fn from(p: Polyhedron) -> Self {
        PolyhedronJson { a: p.a, b: p.b }
    }
}

impl Polyhedron {
    pub fn new(a: Matrix, b: Vector) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::Shape(format!(
                "{} constraint rows but {} bounds",
                a.rows(),
                b.len()
            )));
        }
        Ok(Polyhedron { a, b })
    }

    pub fn from_i64(a: &[&[i64]], b: &[i64]) -> Self {
        Polyhedron::new(
            Matrix::from_i64(a),
            b.iter().map(|&v| crate::kernel::rat(v)).collect(),
        )
        .expect("consistent literal polyhedron")
    }

    /// `[-r, r]^d`.
    pub fn cube(d: usize, r: Rational) -> Self {
        let mut rows = Vec::new();
        for i in 0..d {
            for s in [1, -1] {
                let mut row = vec![Rational::from_integer(0.into()); d];
                row[i] = Rational::from_integer(s.into());
                rows.push(row);
            }
        }
        let b = vec![r; 2 * d];
        Polyhedron::new(Matrix::from_rows(rows).expect("rectangular"), b).expect("consistent")
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn contains(&self, z: &[Rational]) -> Result<bool> {
        let az = self.a.mul_vec(z)?;
        Ok(az.iter().zip(&self.b).all(|(l, r)| l <= r))
    }

    /// Constraints of both polyhedra, `self` first.
    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!(
                "polyhedra in dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let mut rows = self.a.to_rows();
        rows.extend(other.a.to_rows());
        let mut b = self.b.clone();
        b.extend(other.b.iter().cloned());
        let a = if rows.is_empty() {
            Matrix::zeros(0, self.dim())
        } else {
            Matrix::from_rows(rows)?
        };
        Polyhedron::new(a, b)
    }
}

/// LP `max a_i . (M z)` over the invariant, for one row `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowTranscript {
    pub row: usize,
    #[serde(with = "crate::kernel::serde_rational")]
    pub bound: Rational,
    pub outcome: LpOutcome,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub contains_start: bool,
    /// The invariant is empty; stability then holds vacuously.
    pub empty: bool,
    pub stable: bool,
    pub rows: Vec<RowTranscript>,
    /// Farkas multipliers proving emptiness.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::kernel::serde_rational::option_vec"
    )]
    pub emptiness: Option<Vector>,
}

impl InvariantReport {
    pub fn is_inductive(&self) -> bool {
        self.contains_start && self.stable
    }
}

fn check_dims(lds: &Lds, p: &Polyhedron) -> Result<()> {
    if p.dim() != lds.dim() {
        return Err(Error::Shape(format!(
            "polyhedron in dimension {}, system in dimension {}",
            p.dim(),
            lds.dim()
        )));
    }
    Ok(())
}

/// Checks `x in I` and `M I ⊆ I`, one exact LP per constraint row.
pub fn is_inductive(lds: &Lds, inv: &Polyhedron, budget: &Budget) -> Result<InvariantReport> {
    check_dims(lds, inv)?;
    let contains_start = inv.contains(lds.start())?;
    if let Err(farkas) = feasible_point(&inv.a, &inv.b, budget.lp_pivots)? {
        return Ok(InvariantReport {
            contains_start,
            empty: true,
            stable: true,
            rows: Vec::new(),
            emptiness: Some(farkas),
        });
    }
    let mt = lds.matrix().transpose();
    let mut rows = Vec::new();
    let mut stable = true;
    for i in 0..inv.a.rows() {
        // a_i . (M z) = (M^T a_i) . z
        let objective = mt.mul_vec(inv.a.row(i))?;
        let outcome = maximize(&inv.a, &inv.b, &objective, budget.lp_pivots)?;
        let bound = inv.b[i].clone();
        let holds = match &outcome {
            LpOutcome::Optimal { value, .. } => *value <= bound,
            LpOutcome::Unbounded { .. } => false,
            LpOutcome::Infeasible { .. } => true,
        };
        stable &= holds;
        rows.push(RowTranscript {
            row: i,
            bound,
            outcome,
            holds,
        });
        if !holds {
            break;
        }
    }
    Ok(InvariantReport {
        contains_start,
        empty: false,
        stable,
        rows,
        emptiness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Disjointness {
    /// Nonnegative multipliers on the rows of `I` then `T` summing to
    /// `0 <= negative`.
    Disjoint {
        #[serde(with = "crate::kernel::serde_rational::vec")]
        farkas: Vector,
    },
    Intersecting {
        #[serde(with = "crate::kernel::serde_rational::vec")]
        point: Vector,
    },
}

pub fn disjoint(inv: &Polyhedron, target: &Polyhedron, budget: &Budget) -> Result<Disjointness> {
    let both = inv.intersect(target)?;
    Ok(match feasible_point(&both.a, &both.b, budget.lp_pivots)? {
        Ok(point) => Disjointness::Intersecting { point },
        Err(farkas) => Disjointness::Disjoint { farkas },
    })
}

/// Replayable proof that the orbit never enters the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantCertificate {
    pub invariant: Polyhedron,
    pub target: Polyhedron,
    /// For each invariant row `i`, multipliers `y >= 0` with
    /// `A^T y = M^T a_i` and `b . y <= b_i`.
    #[serde(with = "crate::kernel::serde_rational::vec_vec")]
    pub stability: Vec<Vector>,
    /// Multipliers on the stacked rows of invariant and target.
    #[serde(with = "crate::kernel::serde_rational::vec")]
    pub separation: Vector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    ContainsStart,
    Stability,
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Unreachability {
    Certified {
        certificate: InvariantCertificate,
        report: InvariantReport,
    },
    Failed {
        reason: FailureReason,
        report: InvariantReport,
        #[serde(
            default,
            skip_serializing_if = "Option::is_none",
            with = "crate::kernel::serde_rational::option_vec"
        )]
        common_point: Option<Vector>,
    },
}

/// Proves that the orbit of `lds` avoids `target` using the invariant `inv`.
pub fn prove_unreachable(
    lds: &Lds,
    inv: &Polyhedron,
    target: &Polyhedron,
    budget: &Budget,
) -> Result<Unreachability> {
    check_dims(lds, target)?;
    let report = is_inductive(lds, inv, budget)?;
    let failed = |reason, report, common_point| Unreachability::Failed {
        reason,
        report,
        common_point,
    };
    if !report.contains_start {
        return Ok(failed(FailureReason::ContainsStart, report, None));
    }
    if !report.stable {
        return Ok(failed(FailureReason::Stability, report, None));
    }
    let separation = match disjoint(inv, target, budget)? {
        Disjointness::Disjoint { farkas } => farkas,
        Disjointness::Intersecting { point } => {
            return Ok(failed(FailureReason::Intersection, report, Some(point)))
        }
    };
    let stability = report
        .rows
        .iter()
        .map(|r| match &r.outcome {
            LpOutcome::Optimal { dual, .. } => Ok(dual.clone()),
            _ => Err(Error::Domain("stable row without an optimum".into())),
        })
        .collect::<Result<_>>()?;
    Ok(Unreachability::Certified {
        certificate: InvariantCertificate {
            invariant: inv.clone(),
            target: target.clone(),
            stability,
            separation,
        },
        report,
    })
}
