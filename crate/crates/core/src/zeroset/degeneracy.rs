use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernel::{Polynomial, Rational};
use crate::lrs::{minimal, Lrs};

/// Euler's totient.
pub(crate) fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Nonzero roots of `p`, squarefree and monic.
fn nonzero_root_part(p: &Polynomial) -> Result<Polynomial> {
    let sq = p.squarefree_part()?;
    Ok(sq.shift_down(sq.zero_root_multiplicity()))
}

/// Power sums `S_0..S_m` of the roots of `q` scaled by the common
/// denominator of its coefficients, so that all of them are integers.
fn scaled_power_sums(q: &Polynomial, m: usize) -> Vec<BigInt> {
    let d = q.deg();
    let lc = q.leading();
    let monic: Vec<Rational> = (0..=d).map(|i| q.coeff(d - i) / &lc).collect();
    let l = monic
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    // a_i of y^d + a_1 y^{d-1} + ... with roots multiplied by l
    let mut a = Vec::with_capacity(d + 1);
    let mut pw = BigInt::one();
    for c in &monic {
        a.push((c * Rational::from_integer(pw.clone())).to_integer());
        pw *= &l;
    }
    let mut s = vec![BigInt::from(d)];
    for k in 1..=m {
        let mut acc = BigInt::zero();
        for i in 1..=k.min(d) {
            if i < k {
                acc += &a[i] * &s[k - i];
            } else {
                acc += &a[i] * BigInt::from(k);
            }
        }
        s.push(-acc);
    }
    s
}

/// Rank of an integer matrix by fraction-free elimination.
fn integer_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = &m[rank][c] * &m[r][j] - &m[r][c] * &m[rank][j];
                m[r][j] = v / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Least common multiple `L` of the orders of all roots of unity among the
/// ratios of distinct roots of `p`.
///
/// Let `c(k)` be the number of distinct `k`-th powers of the roots, the rank
/// of the Hankel matrix `[S_{(i+j)k}]` of root power sums. A ratio of order
/// exactly `N` makes `c(N) < c(N/q)` for every prime `q | N`; call such `k`
/// new. Every new `k` divides the lcm of the ratio orders, so the lcm of the
/// new values is exactly `L`. A ratio of two roots has degree at most
/// `d(d-1)`, so only `k` with `phi(k) <= d(d-1)` can be orders, and
/// `phi(k) >= sqrt(k/2)` bounds the search by `2 d^4`.
pub fn degeneracy_period(p: &Polynomial) -> Result<u64> {
    let q = nonzero_root_part(p)?;
    let d = q.deg();
    if d <= 1 {
        return Ok(1);
    }
    let phi_max = (d * (d - 1)) as u64;
    let candidates: Vec<u64> = (2..=2 * (d as u64).pow(4))
        .filter(|&k| totient(k) <= phi_max)
        .collect();
    let k_max = candidates.last().copied().unwrap_or(1) as usize;
    let sums = scaled_power_sums(&q, 2 * (d - 1) * k_max);
    let mut distinct = std::collections::HashMap::new();
    let mut count = |k: u64| -> usize {
        *distinct.entry(k).or_insert_with(|| {
            let k = k as usize;
            let h = (0..d)
                .map(|i| (0..d).map(|j| sums[(i + j) * k].clone()).collect())
                .collect();
            integer_rank(h)
        })
    };
    let mut l = 1u64;
    for k in candidates {
        let ck = count(k);
        if ck == d {
            continue;
        }
        if prime_factors(k).into_iter().all(|f| count(k / f) != ck) {
            l = l.lcm(&k);
        }
    }
    Ok(l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    IdenticallyZero,
    Nondegenerate,
}

/// Residue classes modulo `period` of the sequence, after removing the
/// first `offset` terms (the nilpotent part of the recurrence).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyDecomposition {
    pub offset: u64,
    pub period: u64,
    pub classes: Vec<ClassKind>,
    /// Subsequence `u_{offset + r + period * m}` of each class.
    #[serde(skip)]
    pub subsequences: Vec<Lrs>,
}

/// Splits the sequence into classes modulo the degeneracy period of its
/// minimal recurrence.
pub fn decompose_degeneracy(s: &Lrs) -> Result<DegeneracyDecomposition> {
    let (prefix, tail) = s.split_nilpotent();
    let offset = prefix.len() as u64;
    let m = minimal(&tail);
    if m.order() == 0 {
        return Ok(DegeneracyDecomposition {
            offset,
            period: 1,
            classes: vec![ClassKind::IdenticallyZero],
            subsequences: vec![Lrs::zero()],
        });
    }
    let period = degeneracy_period(&m.char_poly())?;
    let mut classes = Vec::new();
    let mut subsequences = Vec::new();
    for r in 0..period {
        let v = m.subsample(period as u32, r)?;
        let zero = v.init().iter().all(num_traits::Zero::is_zero);
        classes.push(if zero {
            ClassKind::IdenticallyZero
        } else {
            ClassKind::Nondegenerate
        });
        subsequences.push(v);
    }
    Ok(DegeneracyDecomposition {
        offset,
        period,
        classes,
        subsequences,
    })
}
