//! Exact two-phase simplex for `max c.z  s.t.  A z <= b` with free `z`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Matrix, Rational, Vector};

/// Result of a linear program, each case with data that proves it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum LpOutcome {
    /// `point` attains `value`; `dual >= 0` has `A^T dual = c` and
    /// `b . dual = value`.
    Optimal {
        #[serde(with = "crate::kernel::serde_rational")]
        value: Rational,
        #[serde(with = "crate::kernel::serde_rational::vec")]
        point: Vector,
        #[serde(with = "crate::kernel::serde_rational::vec")]
        dual: Vector,
    },
    /// `point` is feasible, `A ray <= 0` and `c . ray > 0`.
    Unbounded {
        #[serde(with = "crate::kernel::serde_rational::vec")]
        point: Vector,
        #[serde(with = "crate::kernel::serde_rational::vec")]
        ray: Vector,
    },
    /// `farkas >= 0` has `A^T farkas = 0` and `b . farkas < 0`.
    Infeasible {
        #[serde(with = "crate::kernel::serde_rational::vec")]
        farkas: Vector,
    },
}

struct Tableau {
    /// `rows[i]` holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
    pivots: usize,
    max_pivots: usize,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.max_pivots {
            return Err(Error::Resource(format!(
                "simplex exceeded {} pivots",
                self.max_pivots
            )));
        }
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Reduced costs `cost_j - cost_B B^{-1} A_j` of a maximization.
    fn reduced(&self, cost: &[Rational], j: usize) -> Rational {
        let mut r = cost[j].clone();
        for (i, &bi) in self.basis.iter().enumerate() {
            if !cost[bi].is_zero() && !self.rows[i][j].is_zero() {
                r -= &cost[bi] * &self.rows[i][j];
            }
        }
        r
    }

    /// Maximizes `cost . x` with Bland's rule over the columns in `allowed`.
    fn run(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> Result<Phase> {
        loop {
            let entering = (0..self.cols).find(|&j| {
                allowed(j) && !self.basis.contains(&j) && self.reduced(cost, j).is_positive()
            });
            let Some(j) = entering else {
                return Ok(Phase::Optimal);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j)?,
                None => return Ok(Phase::Unbounded(j)),
            }
        }
    }

    fn values(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(i).clone();
        }
        x
    }

    /// `y` with `y^T B = cost_B`, for the equality rows.
    fn duals(&self, original: &[Vec<Rational>], cost: &[Rational]) -> Result<Vector> {
        let m = self.basis.len();
        if m == 0 {
            return Ok(Vec::new());
        }
        let bt = Matrix::from_rows(
            self.basis
                .iter()
                .map(|&j| (0..m).map(|i| original[i][j].clone()).collect())
                .collect(),
        )?;
        let cb: Vector = self.basis.iter().map(|&j| cost[j].clone()).collect();
        bt.solve(&cb)?
            .ok_or_else(|| Error::Domain("singular simplex basis".into()))
    }
}

/// Solves `max c.z` over `{z : A z <= b}` exactly.
pub fn maximize(
    a: &Matrix,
    b: &[Rational],
    c: &[Rational],
    max_pivots: usize,
) -> Result<LpOutcome> {
    let (m, d) = (a.rows(), a.cols());
    if b.len() != m || c.len() != d {
        return Err(Error::Shape(format!(
            "LP with {m}x{d} constraints, {} bounds and {} objective entries",
            b.len(),
            c.len()
        )));
    }
    // columns: z+ (d), z- (d), slacks (m), artificials (m)
    let n = 2 * d + 2 * m;
    let art = 2 * d + m;
    let signs: Vec<Rational> = b
        .iter()
        .map(|v| {
            if v.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rational::zero(); n + 1];
        for j in 0..d {
            row[j] = &signs[i] * &a[(i, j)];
            row[d + j] = -&row[j];
        }
        row[2 * d + i] = signs[i].clone();
        row[art + i] = Rational::one();
        row[n] = &signs[i] * &b[i];
        rows.push(row);
    }
    let original = rows.clone();
    let mut t = Tableau {
        rows,
        basis: (art..art + m).collect(),
        cols: n,
        pivots: 0,
        max_pivots,
    };

    let mut phase1 = vec![Rational::zero(); n];
    for v in &mut phase1[art..] {
        *v = -Rational::one();
    }
    t.run(&phase1, &|_| true)?;
    let infeasibility: Rational = (0..m)
        .filter(|&i| t.basis[i] >= art)
        .map(|i| t.rhs(i).clone())
        .sum();
    if infeasibility.is_positive() {
        let w = t.duals(&original, &phase1)?;
        let farkas = (0..m).map(|i| &w[i] * &signs[i]).collect();
        return Ok(LpOutcome::Infeasible { farkas });
    }
    for i in 0..m {
        if t.basis[i] >= art {
            if let Some(j) = (0..art).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j)?;
            }
        }
    }

    let mut cost = vec![Rational::zero(); n];
    for j in 0..d {
        cost[j] = c[j].clone();
        cost[d + j] = -&c[j];
    }
    let phase = t.run(&cost, &|j| j < art)?;
    let x = t.values();
    let point: Vector = (0..d).map(|j| &x[j] - &x[d + j]).collect();
    match phase {
        Phase::Optimal => {
            let y = t.duals(&original, &cost)?;
            let dual = (0..m).map(|i| &y[i] * &signs[i]).collect();
            let value = c.iter().zip(&point).map(|(ci, zi)| ci * zi).sum();
            Ok(LpOutcome::Optimal { value, point, dual })
        }
        Phase::Unbounded(j) => {
            let mut dir = vec![Rational::zero(); n];
            dir[j] = Rational::one();
            for (i, &bi) in t.basis.iter().enumerate() {
                dir[bi] = -&t.rows[i][j];
            }
            let ray = (0..d).map(|k| &dir[k] - &dir[d + k]).collect();
            Ok(LpOutcome::Unbounded { point, ray })
        }
    }
}

/// A point of `{z : A z <= b}`, or Farkas multipliers proving it empty.
pub fn feasible_point(
    a: &Matrix,
    b: &[Rational],
    max_pivots: usize,
) -> Result<std::result::Result<Vector, Vector>> {
    match maximize(a, b, &vec![Rational::zero(); a.cols()], max_pivots)? {
        LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => Ok(Ok(point)),
        LpOutcome::Infeasible { farkas } => Ok(Err(farkas)),
    }
}
