use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Matrix, Rational, Vector};

/// Discrete linear dynamical system `(M, x)` with orbit `x, Mx, M^2 x, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LdsJson", into = "LdsJson")]
pub struct Lds {
    matrix: Matrix,
    start: Vector,
}

#[derive(Serialize, Deserialize)]
struct LdsJson {
    matrix: Matrix,
    #[serde(with = "crate::kernel::serde_rational::vec")]
    start: Vector,
}

impl TryFrom<LdsJson> for Lds {
    type Error = Error;
    fn try_from(j: LdsJson) -> Result<Self> {
        Lds::new(j.matrix, j.start)
    }
}

impl From<Lds> for LdsJson {
    fn from(l: Lds) -> Self {
        LdsJson {
            matrix: l.matrix,
            start: l.start,
        }
    }
}

impl Lds {
    pub fn new(matrix: Matrix, start: Vector) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "system matrix is {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.rows() == 0 {
            return Err(Error::Shape("system dimension must be at least 1".into()));
        }
        if start.len() != matrix.rows() {
            return Err(Error::Shape(format!(
                "start vector has length {}, matrix dimension is {}",
                start.len(),
                matrix.rows()
            )));
        }
        Ok(Lds { matrix, start })
    }

    pub fn from_i64(matrix: &[&[i64]], start: &[i64]) -> Self {
        Lds::new(
            Matrix::from_i64(matrix),
            start.iter().map(|&v| crate::kernel::rat(v)).collect(),
        )
        .expect("consistent literal system")
    }

    pub fn dim(&self) -> usize {
        self.start.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn start(&self) -> &[Rational] {
        &self.start
    }

    /// `M v`.
    pub fn step(&self, v: &[Rational]) -> Vector {
        self.matrix
            .mul_vec(v)
            .expect("dimension checked at construction")
    }

    /// `M^n x` by repeated squaring.
    pub fn point(&self, n: u64) -> Vector {
        self.matrix
            .pow(n)
            .and_then(|p| p.mul_vec(&self.start))
            .expect("dimension checked at construction")
    }

    /// Lazily iterates the orbit from `x`.
    pub fn orbit(&self) -> impl Iterator<Item = Vector> + '_ {
        std::iter::successors(Some(self.start.clone()), move |v| Some(self.step(v)))
    }
}
