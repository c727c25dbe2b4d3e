use std::collections::BTreeSet;

use num_traits::Zero;

use super::{
    certify_nonzero_dominant, certify_nonzero_modular, certify_nonzero_polynomial,
    decompose_degeneracy, ArithmeticProgression, ClassCertificate, ClassKind, NonzeroCertificate,
    Status, ZeroSetDecomposition,
};
use crate::budget::Budget;
use crate::error::Result;
use crate::lrs::{zero_pattern, Lrs};

/// Indices `n <= bound` with `u_n = 0`, by exact iteration.
pub fn find_zeros_bounded(s: &Lrs, bound: u64) -> Vec<u64> {
    zero_pattern(s, bound as usize + 1)
        .into_iter()
        .enumerate()
        .filter(|(_, z)| *z)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Indices of the zeros `v_m = 0`, `m < cutoff`, of a class subsequence.
fn class_zeros_below(sub: &Lrs, cutoff: u64, offset: u64, r: u64, period: u64) -> Vec<u64> {
    zero_pattern(sub, cutoff as usize)
        .into_iter()
        .enumerate()
        .filter(|(_, z)| *z)
        .map(|(m, _)| offset + r + period * m as u64)
        .collect()
}

/// Zero set of `s`: identically-zero residue classes become progressions;
/// every other class is searched up to `budget.search_bound` and, if a
/// modular, polynomial or dominant-root certificate shows it has no further zeros,
/// counted as complete.
pub fn skolem(s: &Lrs, budget: &Budget) -> Result<ZeroSetDecomposition> {
    let dec = decompose_degeneracy(s)?;
    let offset = dec.offset;
    let period = dec.period;
    let bound = budget.search_bound.max(offset);
    let found = find_zeros_bounded(s, bound);
    let (_, tail) = s.split_nilpotent();

    let mut progressions = Vec::new();
    let mut zeros: BTreeSet<u64> = found.iter().copied().filter(|&n| n < offset).collect();
    let mut certificates = Vec::new();
    let mut complete = true;
    let mut steps = budget.total_steps;

    for (r, kind) in dec.classes.iter().enumerate() {
        let r = r as u64;
        if *kind == ClassKind::IdenticallyZero {
            let mut a = offset + r;
            while a >= period && s.term(a - period).is_zero() {
                a -= period;
            }
            progressions.push(ArithmeticProgression { a, b: period });
            continue;
        }
        let class_zeros: Vec<u64> = found
            .iter()
            .copied()
            .filter(|&n| n >= offset && (n - offset) % period == r)
            .collect();
        let known_zero = class_zeros.first().map(|n| n - offset);
        let sub = &dec.subsequences[r as usize];

        let proof = certify_nonzero_modular(
            &tail,
            period,
            r,
            known_zero,
            2,
            budget.quick_prime,
            budget,
            &mut steps,
        )
        .map(NonzeroCertificate::Modular)
        .or_else(|| {
            certify_nonzero_polynomial(sub, budget.max_cutoff).map(NonzeroCertificate::Polynomial)
        })
        .or_else(|| {
            certify_nonzero_dominant(sub, budget.max_cutoff).map(NonzeroCertificate::DominantRoot)
        })
        .or_else(|| {
            certify_nonzero_modular(
                &tail,
                period,
                r,
                known_zero,
                budget.quick_prime + 1,
                budget.max_prime,
                budget,
                &mut steps,
            )
            .map(NonzeroCertificate::Modular)
        });

        match proof {
            Some(proof) => {
                let certified: Vec<u64> = match &proof {
                    NonzeroCertificate::Modular(c) => c
                        .zero_residual_positions
                        .iter()
                        .filter(|&&j| tail.term(j).is_zero())
                        .map(|&j| offset + j)
                        .collect(),
                    NonzeroCertificate::DominantRoot(c) => {
                        class_zeros_below(sub, c.cutoff, offset, r, period)
                    }
                    NonzeroCertificate::Polynomial(c) => {
                        class_zeros_below(sub, c.cutoff, offset, r, period)
                    }
                };
                zeros.extend(certified);
                certificates.push(ClassCertificate {
                    offset,
                    period,
                    residue: r,
                    proof,
                });
            }
            None => {
                complete = false;
                zeros.extend(class_zeros);
            }
        }
    }

    progressions.sort();
    let exceptional = zeros
        .into_iter()
        .filter(|&n| !progressions.iter().any(|p| p.contains(n)))
        .collect();
    Ok(ZeroSetDecomposition {
        progressions,
        exceptional,
        status: if complete {
            Status::Complete
        } else {
            Status::SearchBounded
        },
        search_bound: bound,
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn run(s: &Lrs) -> ZeroSetDecomposition {
        skolem(s, &Budget::default()).unwrap()
    }

    #[test]
    fn bounded_search_examples() {
        assert_eq!(
            find_zeros_bounded(&Lrs::from_i64(&[1, 1], &[0, 1]), 100),
            vec![0]
        );
        assert_eq!(
            find_zeros_bounded(&Lrs::from_i64(&[0, 1], &[2, 0]), 6),
            vec![1, 3, 5]
        );
        assert!(find_zeros_bounded(&Lrs::from_i64(&[1], &[1]), 10).is_empty());
    }

    #[test]
    fn fibonacci() {
        let d = run(&Lrs::from_i64(&[1, 1], &[0, 1]));
        assert!(d.progressions.is_empty());
        assert_eq!(d.exceptional, vec![0]);
        assert_eq!(d.status, Status::Complete);
        assert!(matches!(
            d.certificates[0].proof,
            NonzeroCertificate::DominantRoot(_)
        ));
    }

    #[test]
    fn alternating() {
        let d = run(&Lrs::from_i64(&[0, 1], &[2, 0]));
        assert_eq!(d.progressions, vec![ArithmeticProgression { a: 1, b: 2 }]);
        assert!(d.exceptional.is_empty());
        assert_eq!(d.status, Status::Complete);
    }

    #[test]
    fn powers_of_two_modular() {
        let d = run(&Lrs::from_i64(&[2], &[1]));
        assert!(d.progressions.is_empty() && d.exceptional.is_empty());
        assert_eq!(d.status, Status::Complete);
        match &d.certificates[0].proof {
            NonzeroCertificate::Modular(c) => assert_eq!(c.modulus, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_sequence() {
        let d = run(&Lrs::from_i64(&[1, 1], &[0, 0]));
        assert_eq!(d.progressions, vec![ArithmeticProgression { a: 0, b: 1 }]);
        assert!(d.is_complete());
    }

    #[test]
    fn nilpotent_prefix() {
        // 5, 0, 0, 0, ...: u_{n+1} = 0 u_n
        let s = Lrs::general(vec![rat(0)], vec![rat(5)]).unwrap();
        let d = run(&s);
        assert_eq!(d.progressions, vec![ArithmeticProgression { a: 1, b: 1 }]);
        assert!(d.exceptional.is_empty());
        // 0, 3, 0, 0, ...: the progression starts at the first zero
        let s = Lrs::general(vec![rat(0), rat(0)], vec![rat(0), rat(3)]).unwrap();
        let d = run(&s);
        assert_eq!(d.progressions, vec![ArithmeticProgression { a: 2, b: 1 }]);
        assert_eq!(d.exceptional, vec![0]);
    }
}
