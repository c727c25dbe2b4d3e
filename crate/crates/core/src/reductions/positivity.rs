use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{rat, GaussianRational, Matrix, MultiPoly, Rational, Vector};
use crate::orbit::{BoolFormula, Lds, Relation, SemialgebraicPredicate, SignAtom};

/// Four-dimensional system whose orbit tracks `u_n = r Im(l^n) - n (1 - Re(l^n))`
/// for `|l| = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityInstance {
    pub lambda: GaussianRational,
    #[serde(with = "crate::kernel::serde_rational")]
    pub r: Rational,
    pub lds: Lds,
    /// Temporal property whose truth is ultimate positivity of `u`.
    pub formula: String,
}

pub fn build_positivity(lambda: GaussianRational, r: Rational) -> Result<PositivityInstance> {
    if !lambda.norm_sqr().is_one() {
        return Err(Error::Domain(format!(
            "|lambda|^2 = {} is not 1",
            lambda.norm_sqr()
        )));
    }
    let (a, b) = (lambda.re.clone(), lambda.im.clone());
    let z = Rational::zero;
    let o = Rational::one;
    let matrix = Matrix::from_rows(vec![
        vec![a.clone(), -&b, o(), z()],
        vec![b.clone(), a.clone(), z(), o()],
        vec![z(), z(), a.clone(), -&b],
        vec![z(), z(), b, a],
    ])?;
    Ok(PositivityInstance {
        lambda,
        r,
        lds: Lds::new(matrix, vec![rat(1); 4])?,
        formula: "F G S".into(),
    })
}

impl PositivityInstance {
    fn inverse(&self) -> GaussianRational {
        self.lambda.conj()
    }

    /// Denominator `Re(l^-1) x_3 - Im(l^-1) x_4`.
    pub fn denominator(&self, x: &[Rational]) -> Rational {
        let inv = self.inverse();
        &inv.re * &x[2] - &inv.im * &x[3]
    }

    /// `p(x)`, or `None` where the denominator vanishes.
    pub fn p(&self, x: &[Rational]) -> Option<Rational> {
        let den = self.denominator(x);
        if den.is_zero() {
            return None;
        }
        let half = || Rational::new(1.into(), 2.into());
        let first = &self.r * half() * (&x[3] - &x[2]);
        let second = (&x[0] - &x[2]) / den * (rat(1) - (&x[2] + &x[3]) * half());
        Some(first - second)
    }

    /// `p(M^n x)`; an evaluation error when the denominator vanishes there.
    pub fn p_at(&self, n: u64) -> Result<Rational> {
        self.p(&self.lds.point(n)).ok_or_else(|| Error::Evaluation {
            index: n as usize,
            reason: "denominator of p vanishes".into(),
        })
    }

    /// `u_n = r Im(l^n) - n (1 - Re(l^n))`.
    pub fn u(&self, n: u64) -> Rational {
        let ln = self.lambda.powi(n as i64).expect("nonzero base");
        &self.r * &ln.im - rat(n as i64) * (rat(1) - ln.re)
    }

    /// `S = {p > 0}` as the sign condition `num(p) * den(p) > 0`.
    pub fn target_predicate(&self) -> SemialgebraicPredicate {
        let var = |i| MultiPoly::var(4, i);
        let c = |q: Rational| MultiPoly::constant(4, q);
        let inv = self.inverse();
        let den = var(2).scale(&inv.re).sub(&var(3).scale(&inv.im));
        let half = Rational::new(1.into(), 2.into());
        let first = var(3).sub(&var(2)).scale(&(&self.r * &half));
        let tail = c(rat(1)).sub(&var(2).add(&var(3)).scale(&half));
        let num = first.mul(&den).sub(&var(0).sub(&var(2)).mul(&tail));
        SemialgebraicPredicate {
            name: "S".into(),
            atoms: vec![SignAtom {
                poly: num.mul(&den),
                rel: Relation::Gt,
            }],
            formula: BoolFormula::Atom(0),
        }
    }
}

/// Checks `p(M^n x) = u_n` exactly for every `n <= bound` where `p` is defined.
pub fn verify_positivity_identity(inst: &PositivityInstance, bound: u64) -> bool {
    inst.lds
        .orbit()
        .take(bound as usize + 1)
        .enumerate()
        .all(|(n, x): (usize, Vector)| match inst.p(&x) {
            Some(p) => p == inst.u(n as u64),
            None => true,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ratio;
    use crate::orbit::eval_predicate;

    fn pyth() -> GaussianRational {
        GaussianRational::new(ratio(3, 5), ratio(4, 5))
    }

    #[test]
    fn values() {
        let inst = build_positivity(pyth(), rat(1)).unwrap();
        assert_eq!(inst.u(0), rat(0));
        assert_eq!(inst.p_at(0).unwrap(), rat(0));
        assert_eq!(inst.u(1), ratio(2, 5));
        assert_eq!(inst.p_at(1).unwrap(), ratio(2, 5));
        let inst = build_positivity(GaussianRational::i(), rat(2)).unwrap();
        assert_eq!(inst.u(2), rat(-4));
        assert_eq!(inst.p_at(2).unwrap(), rat(-4));
    }

    #[test]
    fn orbit_rows() {
        let inst = build_positivity(pyth(), rat(1)).unwrap();
        for n in 1..12u64 {
            let x = inst.lds.point(n);
            let ln = inst.lambda.powi(n as i64).unwrap();
            let lm = inst.lambda.powi(n as i64 - 1).unwrap();
            let k = rat(n as i64);
            assert_eq!(x[0], &ln.re - &ln.im + &k * (&lm.re - &lm.im));
            assert_eq!(x[1], &ln.im + &ln.re + &k * (&lm.im + &lm.re));
            assert_eq!(x[2], &ln.re - &ln.im);
            assert_eq!(x[3], &ln.im + &ln.re);
        }
    }

    #[test]
    fn identity() {
        assert!(verify_positivity_identity(
            &build_positivity(pyth(), rat(1)).unwrap(),
            200
        ));
        assert!(verify_positivity_identity(
            &build_positivity(GaussianRational::i(), rat(0)).unwrap(),
            50
        ));
    }

    #[test]
    fn tampered_matrix_fails() {
        let mut inst = build_positivity(pyth(), rat(1)).unwrap();
        let mut rows = inst.lds.matrix().to_rows();
        rows[0][2] = ratio(11, 10);
        inst.lds = Lds::new(Matrix::from_rows(rows).unwrap(), vec![rat(1); 4]).unwrap();
        assert!(!verify_positivity_identity(&inst, 5));
    }

    #[test]
    fn vanishing_denominator() {
        // Along a genuine orbit the denominator is Re(l^(n-1)) - Im(l^(n-1)) != 0.
        let inst = build_positivity(GaussianRational::i(), rat(1)).unwrap();
        let bad: Vec<u64> = (0..8).filter(|&n| inst.p_at(n).is_err()).collect();
        assert!(bad.is_empty());
        assert!(matches!(
            build_positivity(GaussianRational::new(rat(1), rat(1)), rat(0)),
            Err(Error::Domain(_))
        ));
        let mut rows = inst.lds.matrix().to_rows();
        rows[2][2] = rat(0);
        rows[2][3] = rat(0);
        rows[3][2] = rat(0);
        rows[3][3] = rat(0);
        let zeroed = PositivityInstance {
            lds: Lds::new(Matrix::from_rows(rows).unwrap(), vec![rat(1); 4]).unwrap(),
            ..inst
        };
        assert_eq!(
            zeroed.p_at(1),
            Err(Error::Evaluation {
                index: 1,
                reason: "denominator of p vanishes".into()
            })
        );
    }

    #[test]
    fn predicate_agrees_with_p() {
        let inst = build_positivity(pyth(), ratio(7, 2)).unwrap();
        let pred = inst.target_predicate();
        for n in 0..40 {
            let x = inst.lds.point(n);
            let direct = inst.p(&x).is_some_and(|p| p > rat(0));
            assert_eq!(eval_predicate(&x, &pred).unwrap(), direct, "n = {n}");
        }
    }
}
