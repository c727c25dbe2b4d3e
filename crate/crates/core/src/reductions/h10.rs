use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{rat, Matrix, MultiPoly, Rational, Vector};
use crate::orbit::Lds;

/// Orbit-hyperplane instance built from a polynomial and a candidate root.
///
/// The state is `(v_n, ..., v_{n+d-1})` with `v_n = (n - y_1)...(n - y_{d-1})`,
/// advanced by the companion matrix of `(X - 1)^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H10Instance {
    pub polynomial: MultiPoly,
    pub d: usize,
    pub lds: Lds,
    /// Normal of the hyperplane `z_1 = 0`.
    #[serde(with = "crate::kernel::serde_rational::vec")]
    pub normal: Vector,
    /// Required number of hits.
    pub k: usize,
    #[serde(with = "crate::kernel::serde_rational::vec")]
    pub witness: Vector,
    /// `(x_1, ..., x_d)` with `x_i = (i - y_1)...(i - y_{d-1})`.
    #[serde(with = "crate::kernel::serde_rational::vec")]
    pub s_point: Vector,
    /// Whether the witness is a root of the polynomial.
    pub witness_is_root: bool,
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// Recurrence coefficients of `(X - 1)^d`: `c_i = (-1)^(i+1) C(d, i)`.
pub fn unipotent_coefficients(d: usize) -> Vec<Rational> {
    (1..=d)
        .map(|i| {
            let c = Rational::from_integer(binomial(d, i));
            if i % 2 == 1 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// `(n - y_1)...(n - y_{d-1})`.
pub fn witness_product(witness: &[Rational], n: i64) -> Rational {
    let n = rat(n);
    witness
        .iter()
        .fold(Rational::one(), |acc, y| acc * (&n - y))
}

pub fn build_h10(polynomial: MultiPoly, witness: &[Rational]) -> Result<H10Instance> {
    let d = witness.len() + 1;
    if polynomial.nvars() > witness.len() {
        return Err(Error::Shape(format!(
            "polynomial has {} variables but the witness has length {}",
            polynomial.nvars(),
            witness.len()
        )));
    }
    let polynomial = polynomial.with_nvars(witness.len())?;
    let witness_is_root = polynomial.eval(witness)?.is_zero();
    let matrix = Matrix::companion(&unipotent_coefficients(d));
    let start: Vector = (0..d as i64).map(|n| witness_product(witness, n)).collect();
    let s_point: Vector = (1..=d as i64)
        .map(|i| witness_product(witness, i))
        .collect();
    let mut normal = vec![Rational::zero(); d];
    normal[0] = Rational::one();
    Ok(H10Instance {
        polynomial,
        d,
        lds: Lds::new(matrix, start)?,
        normal,
        k: d - 1,
        witness: witness.to_vec(),
        s_point,
        witness_is_root,
    })
}

impl H10Instance {
    /// Indices `n <= bound` with `(M^n x)_1 = 0`, by exact iteration.
    pub fn hit_indices(&self, bound: u64) -> Vec<u64> {
        self.lds
            .orbit()
            .take(bound as usize + 1)
            .enumerate()
            .filter(|(_, v)| v[0].is_zero())
            .map(|(n, _)| n as u64)
            .collect()
    }

    /// Whether the witness consists of distinct naturals.
    pub fn has_natural_witness(&self) -> bool {
        let mut seen: Vec<&Rational> = Vec::new();
        for y in &self.witness {
            if !y.is_integer() || y.is_negative() || seen.contains(&y) {
                return false;
            }
            seen.push(y);
        }
        true
    }
}

pub fn count_hyperplane_hits(inst: &H10Instance, bound: u64) -> u64 {
    inst.hit_indices(bound).len() as u64
}
