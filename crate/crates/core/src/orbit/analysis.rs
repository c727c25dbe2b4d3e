use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{ConstructiblePredicate, LassoWord, Lds, Letter};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::kernel::{MultiPoly, Rational, Vector};
use crate::lrs::{lrs_of_polynomial_with_cap, Lrs};
use crate::zeroset::{find_zeros_bounded, skolem, ZeroSetDecomposition};

/// `[x, Mx, ..., M^n x]`.
pub fn orbit_prefix(lds: &Lds, n: usize) -> Vec<Vector> {
    lds.orbit().take(n + 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ReachVerdict {
    /// `M^n x` equals the target, and no earlier point does.
    Hit {
        n: u64,
    },
    /// Zero set of `|M^n x - y|^2`, complete and empty.
    Unreachable {
        certificate: ZeroSetDecomposition,
    },
    Inconclusive {
        search_bound: u64,
    },
}

/// `sum_i (z_i - y_i)^2`.
pub fn distance_polynomial(y: &[Rational]) -> MultiPoly {
    let d = y.len();
    let mut q = MultiPoly::zero(d);
    for (i, yi) in y.iter().enumerate() {
        let diff = MultiPoly::var(d, i).sub(&MultiPoly::constant(d, yi.clone()));
        q = q.add(&diff.mul(&diff));
    }
    q
}

/// Sequence `|M^n x - y|^2`, zero exactly when the orbit is at `y`.
pub fn reach_sequence(lds: &Lds, y: &[Rational], budget: &Budget) -> Result<Lrs> {
    if y.len() != lds.dim() {
        return Err(Error::Shape(format!(
            "target has dimension {}, system has {}",
            y.len(),
            lds.dim()
        )));
    }
    lrs_of_polynomial_with_cap(lds, &distance_polynomial(y), budget.lift_cap)
}

/// Whether the orbit of `lds` ever reaches `y`.
pub fn reach_point(lds: &Lds, y: &[Rational], budget: &Budget) -> Result<ReachVerdict> {
    let s = reach_sequence(lds, y, budget)?;
    let early = find_zeros_bounded(&s, budget.search_bound).first().copied();
    let dec = match early {
        Some(_) => None,
        None => Some(skolem(&s, budget)?),
    };
    if let Some(n) = early.or_else(|| dec.as_ref().and_then(|d| d.first_zero())) {
        if lds.point(n) != y {
            return Err(Error::Evaluation {
                index: n as usize,
                reason: "claimed hit does not replay".into(),
            });
        }
        return Ok(ReachVerdict::Hit { n });
    }
    let dec = dec.expect("decomposition computed when the search finds no zero");
    if dec.is_complete() {
        Ok(ReachVerdict::Unreachable { certificate: dec })
    } else {
        Ok(ReachVerdict::Inconclusive {
            search_bound: dec.search_bound,
        })
    }
}

/// Sequence `c . M^n x - b`.
pub fn hyperplane_sequence(
    lds: &Lds,
    c: &[Rational],
    b: &Rational,
    budget: &Budget,
) -> Result<Lrs> {
    if c.len() != lds.dim() {
        return Err(Error::Shape(format!(
            "normal vector has dimension {}, system has {}",
            c.len(),
            lds.dim()
        )));
    }
    if c.iter().all(Zero::is_zero) {
        return Err(Error::Domain("hyperplane normal must be nonzero".into()));
    }
    lrs_of_polynomial_with_cap(lds, &MultiPoly::affine(c, b), budget.lift_cap)
}

/// Indices at which the orbit lies on `{z : c . z = b}`.
pub fn hit_hyperplane(
    lds: &Lds,
    c: &[Rational],
    b: &Rational,
    budget: &Budget,
) -> Result<ZeroSetDecomposition> {
    skolem(&hyperplane_sequence(lds, c, b, budget)?, budget)
}

/// Zero set of one atom along the orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomEvidence {
    pub predicate: String,
    pub atom: usize,
    pub sequence: Lrs,
    pub decomposition: ZeroSetDecomposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CharacteristicWord {
    Lasso {
        word: LassoWord<Letter>,
        evidence: Vec<AtomEvidence>,
    },
    /// Some atom's zero set could not be certified complete.
    Inconclusive {
        predicate: String,
        atom: usize,
        search_bound: u64,
    },
}

/// First index from which the claimed zero pattern is periodic, and a period.
fn eventual_period(dec: &ZeroSetDecomposition) -> (u64, u64) {
    let stem = dec
        .exceptional
        .iter()
        .map(|n| n + 1)
        .chain(dec.progressions.iter().map(|p| p.a))
        .max()
        .unwrap_or(0);
    let period = dec.progressions.iter().fold(1u64, |l, p| l.lcm(&p.b));
    (stem, period)
}

/// Ultimately periodic word recording which predicates hold at each point
/// of the orbit.
pub fn characteristic_word(
    lds: &Lds,
    preds: &[ConstructiblePredicate],
    budget: &Budget,
) -> Result<CharacteristicWord> {
    if preds.is_empty() {
        return Err(Error::Domain("at least one predicate is required".into()));
    }
    let preds: Vec<ConstructiblePredicate> = preds
        .iter()
        .map(|p| p.bind(lds.dim()))
        .collect::<Result<_>>()?;
    let mut evidence = Vec::new();
    for p in &preds {
        for (j, q) in p.atoms.iter().enumerate() {
            let sequence = lrs_of_polynomial_with_cap(lds, q, budget.lift_cap)?;
            let decomposition = skolem(&sequence, budget)?;
            if !decomposition.is_complete() {
                return Ok(CharacteristicWord::Inconclusive {
                    predicate: p.name.clone(),
                    atom: j,
                    search_bound: decomposition.search_bound,
                });
            }
            evidence.push(AtomEvidence {
                predicate: p.name.clone(),
                atom: j,
                sequence,
                decomposition,
            });
        }
    }
    Ok(CharacteristicWord::Lasso {
        word: word_from_evidence(&preds, &evidence)?,
        evidence,
    })
}

/// Assembles the characteristic word from per-atom zero sets, listed in
/// predicate order and then atom order.
pub fn word_from_evidence(
    preds: &[ConstructiblePredicate],
    evidence: &[AtomEvidence],
) -> Result<LassoWord<Letter>> {
    let expected: usize = preds.iter().map(|p| p.atoms.len()).sum();
    if evidence.len() != expected {
        return Err(Error::Shape(format!(
            "{} atom zero sets for {expected} atoms",
            evidence.len()
        )));
    }
    let (mut stem, mut period) = (0u64, 1u64);
    for e in evidence {
        let (s, p) = eventual_period(&e.decomposition);
        stem = stem.max(s);
        period = period.lcm(&p);
    }
    let letter = |n: u64| -> Letter {
        let mut k = 0;
        let mut out = Letter::new();
        for (i, p) in preds.iter().enumerate() {
            let base = k;
            if p.formula
                .eval(&mut |j| evidence[base + j].decomposition.contains(n))
            {
                out.insert(i);
            }
            k += p.atoms.len();
        }
        out
    };
    let word = LassoWord::new(
        preds.iter().map(|p| p.name.clone()).collect(),
        (0..stem).map(letter).collect(),
        (stem..stem + period).map(letter).collect(),
    )?;
    Ok(word.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;
    use crate::orbit::BoolFormula;
    use crate::zeroset::ArithmeticProgression;

    fn four_dim() -> Lds {
        Lds::from_i64(
            &[
                &[3, 2, 0, -5],
                &[0, 1, 0, 3],
                &[0, 4, 3, 13],
                &[3, 11, 6, 24],
            ],
            &[1, -1, 2, 0],
        )
    }

    fn rotation() -> Lds {
        Lds::from_i64(&[&[0, -1], &[1, 0]], &[1, 0])
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn prefixes() {
        assert_eq!(
            orbit_prefix(&four_dim(), 1),
            vec![v(&[1, -1, 2, 0]), v(&[1, -1, 2, 4])]
        );
        let p = orbit_prefix(&Lds::from_i64(&[&[2]], &[1]), 4);
        assert_eq!(
            p,
            [1, 2, 4, 8, 16]
                .iter()
                .map(|&x| v(&[x]))
                .collect::<Vec<_>>()
        );
        let id = Lds::from_i64(&[&[1, 0], &[0, 1]], &[3, 4]);
        assert_eq!(orbit_prefix(&id, 3), vec![v(&[3, 4]); 4]);
    }

    #[test]
    fn reachability() {
        let b = Budget::default();
        assert_eq!(
            reach_point(&four_dim(), &v(&[1, -1, 2, 4]), &b).unwrap(),
            ReachVerdict::Hit { n: 1 }
        );
        assert_eq!(
            reach_point(&four_dim(), &v(&[1, -1, 2, 0]), &b).unwrap(),
            ReachVerdict::Hit { n: 0 }
        );
        let doubling = Lds::from_i64(&[&[2]], &[1]);
        match reach_point(&doubling, &v(&[3]), &b).unwrap() {
            ReachVerdict::Unreachable { certificate } => {
                assert!(certificate.is_complete() && certificate.first_zero().is_none())
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(reach_point(&doubling, &v(&[3, 1]), &b).is_err());
    }

    #[test]
    fn hyperplanes() {
        let b = Budget::default();
        let d = hit_hyperplane(&four_dim(), &v(&[0, 0, 0, 1]), &rat(0), &b).unwrap();
        assert!(d.contains(0));
        let d = hit_hyperplane(&rotation(), &v(&[1, 0]), &rat(0), &b).unwrap();
        assert_eq!(d.progressions, vec![ArithmeticProgression { a: 1, b: 2 }]);
        assert!(d.exceptional.is_empty() && d.is_complete());
        let id = Lds::from_i64(&[&[1, 0], &[0, 1]], &[3, 4]);
        let never = hit_hyperplane(&id, &v(&[1, 1]), &rat(1), &b).unwrap();
        assert!(never.is_complete() && never.first_zero().is_none());
        let always = hit_hyperplane(&id, &v(&[1, 1]), &rat(7), &b).unwrap();
        assert_eq!(
            always.progressions,
            vec![ArithmeticProgression { a: 0, b: 1 }]
        );
        assert!(matches!(
            hit_hyperplane(&id, &v(&[0, 0]), &rat(1), &b),
            Err(Error::Domain(_))
        ));
    }

    fn word(lds: &Lds, preds: &[ConstructiblePredicate]) -> LassoWord<Letter> {
        match characteristic_word(lds, preds, &Budget::default()).unwrap() {
            CharacteristicWord::Lasso { word, .. } => word,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn characteristic_words() {
        let p = ConstructiblePredicate::equation("P", "z1".parse().unwrap());
        let w = word(&rotation(), &[p]);
        let on: Letter = [0].into_iter().collect();
        assert!(w.stem.is_empty());
        assert_eq!(w.cycle, vec![Letter::new(), on.clone()]);

        let t = ConstructiblePredicate::equation("T", "0".parse().unwrap());
        let w = word(&rotation(), &[t]);
        assert!(w.stem.is_empty());
        assert_eq!(w.cycle, vec![on.clone()]);

        let two = ConstructiblePredicate::equation("P", "z1 - 2".parse().unwrap());
        let w = word(&Lds::from_i64(&[&[2]], &[1]), &[two]);
        assert_eq!(w.stem, vec![Letter::new(), on]);
        assert_eq!(w.cycle, vec![Letter::new()]);

        let neither = ConstructiblePredicate::new(
            "N",
            vec!["z1".parse().unwrap(), "z2".parse().unwrap()],
            BoolFormula::Not(Box::new(BoolFormula::Or(vec![
                BoolFormula::Atom(0),
                BoolFormula::Atom(1),
            ]))),
        )
        .unwrap();
        let w = word(&rotation(), &[neither]);
        assert_eq!(w.cycle, vec![Letter::new()]);
    }
}
