use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with rational coefficients in a fixed
/// number of variables `z_1..z_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

/// All exponent vectors in `nvars` variables of total degree at most
/// `max_degree`, graded by degree and then lexicographically descending
/// (`z_1` before `z_2`). The constant monomial comes first.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == nvars - 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(nvars, remaining - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        out.push(Vec::new());
        return out;
    }
    for deg in 0..=max_degree {
        rec(nvars, deg, &mut Vec::new(), &mut out);
    }
    out
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `z_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// `c . z - b`.
    pub fn affine(c: &[Rational], b: &Rational) -> Self {
        let n = c.len();
        let mut p = Self::constant(n, -b);
        for (i, ci) in c.iter().enumerate() {
            p = p.add(&Self::var(n, i).scale(ci));
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, Rational)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Shape(format!(
                    "monomial has {} exponents, expected {}",
                    e.len(),
                    nvars
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.remove(&e).unwrap_or_else(Rational::zero) + c;
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Rebinds the variable count, padding exponents with zeros when the
    /// count grows.
    pub fn with_nvars(mut self, nvars: usize) -> Result<Self> {
        if self.nvars < nvars {
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(mut e, c)| {
                    e.resize(nvars, 0);
                    (e, c)
                })
                .collect();
            self.nvars = nvars;
        }
        if self.terms.is_empty() {
            self.nvars = nvars;
            return Ok(self);
        }
        if self.nvars != nvars {
            return Err(Error::Shape(format!(
                "polynomial in {} variables used in dimension {}",
                self.nvars, nvars
            )));
        }
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree (0 for constants and the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        if out.terms.is_empty() {
            out.nvars = o.nvars;
        }
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = Self::zero(self.nvars.max(o.nvars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> MultiPoly {
        let mut acc = Self::constant(self.nvars, Rational::one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if !self.terms.is_empty() && point.len() != self.nvars {
            return Err(Error::Shape(format!(
                "evaluating a polynomial in {} variables at a point of dimension {}",
                self.nvars,
                point.len()
            )));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    exponents: Vec<u32>,
    #[serde(with = "super::serde_rational")]
    coeff: Rational,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(e, c)| Term {
                exponents: e.clone(),
                coeff: c.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

/// Either a term list or the text syntax, e.g. `"z1^2 - 3*z2"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PolyJson {
    Text(String),
    Terms(Vec<Term>),
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = match PolyJson::deserialize(d)? {
            PolyJson::Text(t) => return t.parse().map_err(serde::de::Error::custom),
            PolyJson::Terms(terms) => terms,
        };
        let nvars = terms.first().map_or(0, |t| t.exponents.len());
        MultiPoly::from_terms(
            nvars,
            terms.into_iter().map(|t| (t.exponents, t.coeff)).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    #[test]
    fn monomial_order_and_count() {
        let m = monomials_up_to(2, 2);
        assert_eq!(
            m,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        // C(d + D, D)
        assert_eq!(monomials_up_to(4, 2).len(), 15);
        assert_eq!(monomials_up_to(3, 3).len(), 20);
    }

    #[test]
    fn arithmetic_and_eval() {
        let z1 = MultiPoly::var(2, 0);
        let z2 = MultiPoly::var(2, 1);
        let p = z1.add(&z2).pow(2).sub(&z1.mul(&z2).scale(&rat(2)));
        // (z1 + z2)^2 - 2 z1 z2 = z1^2 + z2^2
        assert_eq!(p.eval(&[rat(3), rat(4)]).unwrap(), rat(25));
        assert_eq!(p.degree(), 2);
        assert!(z1.sub(&z1).is_zero());
    }
}
