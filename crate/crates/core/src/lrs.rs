//! Linear recurrence sequences `u_{n+d} = c_1 u_{n+d-1} + ... + c_d u_n`,
//! their minimal recurrences, and recurrences obtained by evaluating a
//! polynomial along an orbit.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{
    monomials_up_to, power_roots, Matrix, MultiPoly, Polynomial, Rational, Vector,
};
use crate::orbit::Lds;

/// Default cap on the number of lifted coordinates.
pub const DEFAULT_LIFT_CAP: usize = 2000;

const ITERATION_CUTOFF: u64 = 256;

/// A linear recurrence sequence given by coefficients `c_1..c_d` and initial
/// terms `u_0..u_{d-1}`.
///
/// Sequences built with [`Lrs::new`] have `c_d != 0`. Sequences derived from
/// singular systems may carry trailing zero coefficients; see
/// [`Lrs::split_nilpotent`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LrsJson", into = "LrsJson")]
pub struct Lrs {
    coeffs: Vec<Rational>,
    init: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct LrsJson {
    #[serde(with = "crate::kernel::serde_rational::vec")]
    coeffs: Vec<Rational>,
    #[serde(with = "crate::kernel::serde_rational::vec")]
    init: Vec<Rational>,
}

impl TryFrom<LrsJson> for Lrs {
    type Error = Error;
    fn try_from(j: LrsJson) -> Result<Self> {
        Lrs::general(j.coeffs, j.init)
    }
}

impl From<Lrs> for LrsJson {
    fn from(s: Lrs) -> Self {
        LrsJson {
            coeffs: s.coeffs,
            init: s.init,
        }
    }
}

impl Lrs {
    pub fn new(coeffs: Vec<Rational>, init: Vec<Rational>) -> Result<Self> {
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(Error::Domain(
                "last recurrence coefficient must be nonzero".into(),
            ));
        }
        Self::general(coeffs, init)
    }

    /// Like [`Lrs::new`] but allows `c_d = 0`.
    pub fn general(coeffs: Vec<Rational>, init: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != init.len() {
            return Err(Error::Shape(format!(
                "{} coefficients but {} initial terms",
                coeffs.len(),
                init.len()
            )));
        }
        Ok(Lrs { coeffs, init })
    }

    pub fn from_i64(coeffs: &[i64], init: &[i64]) -> Self {
        let r = |v: &[i64]| v.iter().map(|&x| crate::kernel::rat(x)).collect();
        Lrs::new(r(coeffs), r(init)).expect("valid literal recurrence")
    }

    /// The identically zero sequence, of order 0.
    pub fn zero() -> Self {
        Lrs {
            coeffs: Vec::new(),
            init: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn init(&self) -> &[Rational] {
        &self.init
    }

    /// `X^d - c_1 X^{d-1} - ... - c_d`.
    pub fn char_poly(&self) -> Polynomial {
        let d = self.order();
        let mut c = vec![Rational::zero(); d + 1];
        c[d] = Rational::one();
        for (i, ci) in self.coeffs.iter().enumerate() {
            c[d - 1 - i] = -ci;
        }
        Polynomial::new(c)
    }

    pub fn companion(&self) -> Matrix {
        Matrix::companion(&self.coeffs)
    }

    /// First `n` terms.
    pub fn terms(&self, n: usize) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.init.iter().take(n).cloned().collect();
        while out.len() < n {
            let k = out.len();
            let mut acc = Rational::zero();
            for (i, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    acc += c * &out[k - 1 - i];
                }
            }
            out.push(acc);
        }
        out
    }

    /// Iterator over all terms.
    pub fn iter(&self) -> LrsIter {
        LrsIter {
            coeffs: self.coeffs.clone(),
            window: self.init.clone().into(),
        }
    }

    pub fn term_by_iteration(&self, n: u64) -> Rational {
        self.iter().nth(n as usize).expect("infinite iterator")
    }

    pub fn term_by_powering(&self, n: u64) -> Rational {
        if self.order() == 0 {
            return Rational::zero();
        }
        let p = self.companion().pow(n).expect("square companion");
        p.row(0)
            .iter()
            .zip(&self.init)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Exact `u_n`.
    pub fn term(&self, n: u64) -> Rational {
        if n < ITERATION_CUTOFF {
            self.term_by_iteration(n)
        } else {
            self.term_by_powering(n)
        }
    }

    /// Terms `u_{r}, u_{r+L}, u_{r+2L}, ...` as a recurrence of the same order.
    pub fn subsample(&self, step: u32, offset: u64) -> Result<Lrs> {
        if step == 0 {
            return Err(Error::Domain("subsampling step must be positive".into()));
        }
        let d = self.order();
        if d == 0 {
            return Ok(Lrs::zero());
        }
        let q = power_roots(&self.char_poly(), step)?;
        let coeffs: Vec<Rational> = (0..d).map(|i| -q.coeff(d - 1 - i)).collect();
        let pw = self.companion().pow(step as u64)?;
        let mut state: Vector = (0..d as u64).map(|i| self.term(offset + i)).collect();
        let mut init = Vec::with_capacity(d);
        for _ in 0..d {
            init.push(state[0].clone());
            state = pw.mul_vec(&state)?;
        }
        Lrs::general(coeffs, init)
    }

    /// `c * u_n`.
    pub fn scale(&self, c: &Rational) -> Lrs {
        Lrs {
            coeffs: self.coeffs.clone(),
            init: self.init.iter().map(|t| t * c).collect(),
        }
    }

    /// `u_{n+k}`.
    pub fn shift(&self, k: u64) -> Lrs {
        let d = self.order() as u64;
        Lrs {
            coeffs: self.coeffs.clone(),
            init: (k..k + d).map(|i| self.term(i)).collect(),
        }
    }

    /// Number `k` of trailing zero coefficients.
    pub fn nilpotent_index(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// Splits off the first `k` terms, where `k` is the number of trailing
    /// zero coefficients, and returns them with the recurrence satisfied by
    /// `u_{n+k}`, which has nonzero last coefficient (or order 0).
    pub fn split_nilpotent(&self) -> (Vec<Rational>, Lrs) {
        let k = self.nilpotent_index();
        if k == 0 {
            return (Vec::new(), self.clone());
        }
        let d = self.order();
        let prefix = self.terms(k);
        let tail_coeffs = self.coeffs[..d - k].to_vec();
        let tail_init = self.terms(d)[k..].to_vec();
        (
            prefix,
            Lrs {
                coeffs: tail_coeffs,
                init: tail_init,
            },
        )
    }

    /// Whether every term is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().chain(&self.init).all(|c| c.is_integer())
    }
}

/// Integer recurrence `w_j = E D^j t_j` with the same zeros as `t`: returns
/// integer coefficients and initial terms. `E` makes the initial terms
/// coprime integers, so rescaling `t` changes `w` at most in sign.
pub fn integer_normalization(t: &Lrs) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut den = BigInt::one();
    for c in t.coeffs() {
        den = den.lcm(c.denom());
    }
    let dq = Rational::from_integer(den.clone());
    let mut pw = Rational::one();
    let coeffs: Vec<BigInt> = t
        .coeffs()
        .iter()
        .map(|c| {
            pw *= &dq;
            (c * &pw).to_integer()
        })
        .collect();
    let mut scaled = Vec::with_capacity(t.order());
    let mut pw = Rational::one();
    for u in t.init() {
        scaled.push(u * &pw);
        pw *= &dq;
    }
    let mut e = BigInt::one();
    for s in &scaled {
        e = e.lcm(s.denom());
    }
    let eq = Rational::from_integer(e);
    let init: Vec<BigInt> = scaled.iter().map(|s| (s * &eq).to_integer()).collect();
    let g = init.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    if g > BigInt::one() {
        return (coeffs, init.iter().map(|x| x / &g).collect());
    }
    (coeffs, init)
}

/// Zero pattern of the first `n` terms, computed over the integers.
pub fn zero_pattern(s: &Lrs, n: usize) -> Vec<bool> {
    let (c, init) = integer_normalization(s);
    let d = c.len();
    let mut w: std::collections::VecDeque<BigInt> = init.into();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        if d == 0 {
            out.push(true);
            continue;
        }
        let mut next = BigInt::zero();
        for (i, ci) in c.iter().enumerate() {
            if !ci.is_zero() {
                next += ci * &w[d - 1 - i];
            }
        }
        w.push_back(next);
        out.push(w.pop_front().expect("window of length d").is_zero());
    }
    out
}

pub struct LrsIter {
    coeffs: Vec<Rational>,
    window: std::collections::VecDeque<Rational>,
}

impl Iterator for LrsIter {
    type Item = Rational;
    fn next(&mut self) -> Option<Rational> {
        if self.coeffs.is_empty() {
            return Some(Rational::zero());
        }
        let d = self.coeffs.len();
        let mut acc = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &self.window[d - 1 - i];
            }
        }
        self.window.push_back(acc);
        self.window.pop_front()
    }
}

/// Least-order recurrence generating `terms`, assuming the sequence has
/// order at most `terms.len() / 2`. Trailing zero coefficients are allowed.
pub fn minimal_from_terms(terms: &[Rational]) -> Lrs {
    let n = terms.len() / 2;
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = terms[i + j].clone();
        }
    }
    let r = h.rank();
    if r == 0 {
        return Lrs::zero();
    }
    let mut hr = Matrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            hr[(i, j)] = terms[i + j].clone();
        }
    }
    let rhs: Vec<Rational> = (0..r).map(|i| terms[i + r].clone()).collect();
    let a = hr
        .solve(&rhs)
        .expect("square")
        .expect("leading Hankel block of a minimal realization is nonsingular");
    // u_{n+r} = sum_j a_j u_{n+j}, so c_i = a_{r-i}
    let coeffs = (1..=r).map(|i| a[r - i].clone()).collect();
    Lrs {
        coeffs,
        init: terms[..r].to_vec(),
    }
}

/// Equivalent recurrence of least order (Hankel rank over `2d` terms).
pub fn minimal(s: &Lrs) -> Lrs {
    let d = s.order();
    if d == 0 {
        return Lrs::zero();
    }
    minimal_from_terms(&s.terms(2 * d))
}

/// Whether the minimal recurrence has a squarefree characteristic polynomial.
pub fn is_simple(s: &Lrs) -> bool {
    let m = minimal(s);
    m.order() == 0 || m.char_poly().is_squarefree()
}

/// Whether `M` is diagonalisable over the complex numbers.
pub fn is_diagonalisable(m: &Matrix) -> Result<bool> {
    let sq = m.char_poly()?.squarefree_part()?;
    Ok(m.eval_poly(&sq)?.is_zero())
}

/// The system lifted to all monomials of degree at most `degree` in the
/// state coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedLds {
    pub base_dim: usize,
    pub degree: u32,
    pub monomials: Vec<Vec<u32>>,
    pub matrix: Matrix,
    pub start: Vector,
}

impl LiftedLds {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Values of every monomial at `z`, in basis order.
    pub fn monomial_vector(&self, z: &[Rational]) -> Result<Vector> {
        monomial_vector(&self.monomials, z)
    }

    /// Coefficient vector of `q` in the monomial basis.
    pub fn functional(&self, q: &MultiPoly) -> Result<Vector> {
        let index: HashMap<&Vec<u32>, usize> = self
            .monomials
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mut w = vec![Rational::zero(); self.dim()];
        for (e, c) in q.terms() {
            let i = index.get(e).ok_or_else(|| {
                Error::Shape(format!(
                    "monomial {e:?} exceeds the lift degree {}",
                    self.degree
                ))
            })?;
            w[*i] = c.clone();
        }
        Ok(w)
    }
}

fn monomial_vector(monomials: &[Vec<u32>], z: &[Rational]) -> Result<Vector> {
    monomials
        .iter()
        .map(|e| {
            let mut p = MultiPoly::constant(z.len(), Rational::one());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    p = p.mul(&MultiPoly::var(z.len(), i).pow(k));
                }
            }
            p.eval(z)
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Lifts `lds` to the monomials of degree at most `degree`, refusing more
/// than `cap` lifted coordinates.
pub fn lift_with_cap(lds: &Lds, degree: u32, cap: usize) -> Result<LiftedLds> {
    let d = lds.dim();
    let dim = binomial(d + degree as usize, degree as usize);
    if dim > cap {
        return Err(Error::Resource(format!(
            "lift to degree {degree} in dimension {d} needs {dim} coordinates (cap {cap})"
        )));
    }
    let monomials = monomials_up_to(d, degree);
    let index: HashMap<Vec<u32>, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let m = lds.matrix();
    let forms: Vec<MultiPoly> = (0..d)
        .map(|j| MultiPoly::affine(m.row(j), &Rational::zero()))
        .collect();
    // image of each monomial under z -> Mz, built from a smaller monomial
    let mut images: Vec<MultiPoly> = Vec::with_capacity(monomials.len());
    for e in &monomials {
        let img = match e.iter().position(|&k| k > 0) {
            None => MultiPoly::constant(d, Rational::one()),
            Some(j) => {
                let mut smaller = e.clone();
                smaller[j] -= 1;
                images[index[&smaller]].mul(&forms[j])
            }
        };
        images.push(img);
    }
    let mut lifted = Matrix::zeros(dim, dim);
    for (i, img) in images.iter().enumerate() {
        for (e, c) in img.terms() {
            lifted[(i, index[e])] = c.clone();
        }
    }
    let start = monomial_vector(&monomials, lds.start())?;
    Ok(LiftedLds {
        base_dim: d,
        degree,
        monomials,
        matrix: lifted,
        start,
    })
}

pub fn lift(lds: &Lds, degree: u32) -> Result<LiftedLds> {
    if degree == 0 {
        return Err(Error::Domain("lift degree must be positive".into()));
    }
    lift_with_cap(lds, degree, DEFAULT_LIFT_CAP)
}

/// Upper bound on the order of `n -> q(M^n x)`: the number of monomials in
/// the homogeneous degrees that occur in `q`.
pub fn order_bound(dim: usize, q: &MultiPoly) -> usize {
    let mut degrees: Vec<u32> = q.terms().map(|(e, _)| e.iter().sum()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees
        .iter()
        .map(|&k| binomial(dim + k as usize - 1, k as usize).max(1))
        .sum()
}

/// Recurrence for `u_n = q(M^n x)`, of order at most the lift dimension.
pub fn lrs_of_polynomial(lds: &Lds, q: &MultiPoly) -> Result<Lrs> {
    lrs_of_polynomial_with_cap(lds, q, DEFAULT_LIFT_CAP)
}

pub fn lrs_of_polynomial_with_cap(lds: &Lds, q: &MultiPoly, cap: usize) -> Result<Lrs> {
    let d = lds.dim();
    if !q.is_zero() && q.nvars() != d {
        return Err(Error::Shape(format!(
            "polynomial in {} variables on a system of dimension {d}",
            q.nvars()
        )));
    }
    if q.is_zero() {
        return Ok(Lrs::zero());
    }
    let bound = order_bound(d, q);
    if bound > cap {
        return Err(Error::Resource(format!(
            "sequence order bound {bound} exceeds the lift cap {cap}"
        )));
    }
    let terms: Vec<Rational> = lds
        .orbit()
        .take(2 * bound)
        .map(|z| q.eval(&z))
        .collect::<Result<_>>()?;
    Ok(minimal_from_terms(&terms))
}
