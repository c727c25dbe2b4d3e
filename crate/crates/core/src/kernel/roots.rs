//! Real-root isolation, root-power and root-product polynomials, resultants
//! and root counting inside a disk.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rat, Polynomial, Rational};
use crate::error::{Error, Result};

/// Open rational interval `(lo, hi)` containing exactly one real root of the
/// squarefree polynomial `poly`. Endpoints are never roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub poly: Polynomial,
}

impl IsolatingInterval {
    /// Bisects until `hi - lo <= width`.
    pub fn refine_to(&mut self, width: &Rational) {
        let two = rat(2);
        while &(&self.hi - &self.lo) > width {
            let mid = (&self.lo + &self.hi) / &two;
            let s_mid = self.poly.sign_at(&mid);
            if s_mid == 0 {
                let q = (&self.hi - &self.lo) / rat(4);
                self.lo = &mid - &q;
                self.hi = &mid + &q;
                continue;
            }
            if s_mid == self.poly.sign_at(&self.lo) {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
    }

    /// Refines so that endpoints are multiples of `2^-bits`.
    pub fn refine_bits(&mut self, bits: u32) {
        let w = Rational::new(BigInt::one(), BigInt::one() << bits);
        self.refine_to(&w);
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// True if the interval lies in the positive reals.
    pub fn is_positive(&self) -> bool {
        !self.lo.is_negative()
    }
}

/// Positive rescaling to coprime integer coefficients (sign preserved).
fn normalize_positive(p: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let (ints, _) = p.integer_coeffs();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    Polynomial::new(
        ints.into_iter()
            .map(|c| Rational::from_integer(c / &g))
            .collect(),
    )
}

/// Generalized Sturm chain `f0, f1, -rem(f0, f1), ...` (each term rescaled
/// by a positive constant).
pub fn sturm_chain(f0: &Polynomial, f1: &Polynomial) -> Vec<Polynomial> {
    let mut seq = vec![normalize_positive(f0)];
    if f1.is_zero() {
        return seq;
    }
    seq.push(normalize_positive(f1));
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        seq.push(normalize_positive(&-&r));
    }
    seq
}

/// Classical Sturm sequence of `p`.
pub fn sturm_sequence(p: &Polynomial) -> Vec<Polynomial> {
    sturm_chain(p, &p.derivative())
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(seq: &[Polynomial], x: &Rational) -> usize {
    variations(seq.iter().map(|p| p.sign_at(x)))
}

fn sign_at_infinity(p: &Polynomial, negative: bool) -> i32 {
    if p.is_zero() {
        return 0;
    }
    let s = if p.leading().is_positive() { 1 } else { -1 };
    if negative && p.deg() % 2 == 1 {
        -s
    } else {
        s
    }
}

fn variations_at_infinity(seq: &[Polynomial], negative: bool) -> usize {
    variations(seq.iter().map(|p| sign_at_infinity(p, negative)))
}

/// Number of distinct real roots of `p` in `(a, b]`.
pub fn sturm_count(p: &Polynomial, a: &Rational, b: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Domain("root count of the zero polynomial".into()));
    }
    let seq = sturm_sequence(&p.squarefree_part()?);
    let va = variations_at(&seq, a);
    let vb = variations_at(&seq, b);
    Ok(va.saturating_sub(vb))
}

/// Number of distinct real roots of `p`.
pub fn count_real_roots(p: &Polynomial) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Domain("root count of the zero polynomial".into()));
    }
    let seq = sturm_sequence(&p.squarefree_part()?);
    Ok(variations_at_infinity(&seq, true) - variations_at_infinity(&seq, false))
}

/// One isolating interval per distinct real root, in increasing order.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<IsolatingInterval>> {
    let sq = p.squarefree_part()?;
    if sq.deg() == 0 {
        return Ok(Vec::new());
    }
    let seq = sturm_sequence(&sq);
    let bound = Rational::from_integer(sq.root_bound().ceil().to_integer());
    let mut out = Vec::new();
    let mut stack = vec![(-&bound, bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let n = variations_at(&seq, &lo) - variations_at(&seq, &hi);
        match n {
            0 => {}
            1 => out.push(IsolatingInterval {
                lo,
                hi,
                poly: sq.clone(),
            }),
            _ => {
                let mut mid = (&lo + &hi) / rat(2);
                let mut k = 3u32;
                while sq.sign_at(&mid).is_zero_sign() {
                    // nudge off a root; finitely many roots so this ends
                    mid = &lo + (&hi - &lo) * Rational::new(BigInt::one(), BigInt::from(k));
                    k += 1;
                }
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

trait ZeroSign {
    fn is_zero_sign(&self) -> bool;
}

impl ZeroSign for i32 {
    fn is_zero_sign(&self) -> bool {
        *self == 0
    }
}

/// Power sums `s_1..s_m` of the roots of `p` (with multiplicity).
fn power_sums(p: &Polynomial, m: usize) -> Vec<Rational> {
    let n = p.deg();
    let lc = p.leading();
    // a_i = coefficient of X^{n-i} in the monic polynomial
    let a: Vec<Rational> = (0..=n).map(|i| p.coeff(n - i) / &lc).collect();
    let mut s = vec![Rational::zero(); m + 1];
    for k in 1..=m {
        let mut acc = Rational::zero();
        for i in 1..k.min(n + 1) {
            acc += &a[i] * &s[k - i];
        }
        if k <= n {
            acc += &a[k] * rat(k as i64);
        }
        s[k] = -acc;
    }
    s.remove(0);
    s
}

/// Monic polynomial of degree `m` whose roots have power sums `sums[0..m]`.
fn from_power_sums(sums: &[Rational], m: usize) -> Polynomial {
    let mut e = vec![Rational::one()];
    for k in 1..=m {
        let mut acc = Rational::zero();
        for i in 1..=k {
            let t = &e[k - i] * &sums[i - 1];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        e.push(acc / rat(k as i64));
    }
    let mut coeffs = vec![Rational::zero(); m + 1];
    for (k, ek) in e.iter().enumerate() {
        coeffs[m - k] = if k % 2 == 0 { ek.clone() } else { -ek };
    }
    Polynomial::new(coeffs)
}

/// Monic polynomial whose root multiset is `{λ^k : p(λ) = 0}`.
///
/// This equals `Res_y(p(y), X - y^k) / lc(p)^k`; it is computed from the
/// power sums of the roots via Newton's identities.
pub fn power_roots(p: &Polynomial, k: u32) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::Domain("root power exponent must be positive".into()));
    }
    if p.is_zero() {
        return Err(Error::Domain("root powers of the zero polynomial".into()));
    }
    let n = p.deg();
    if k == 1 || n == 0 {
        return Ok(p.monic());
    }
    let s = power_sums(p, n * k as usize);
    let sums: Vec<Rational> = (1..=n).map(|j| s[j * k as usize - 1].clone()).collect();
    Ok(from_power_sums(&sums, n))
}

/// Monic polynomial of degree `deg(p)^2` whose roots are all products
/// `λ_i λ_j` (ordered pairs, with multiplicity) of roots of `p`.
pub fn composed_product(p: &Polynomial) -> Result<Polynomial> {
    if p.is_zero() {
        return Err(Error::Domain(
            "composed product of the zero polynomial".into(),
        ));
    }
    let n = p.deg();
    let m = n * n;
    let s = power_sums(p, m);
    let sums: Vec<Rational> = s.iter().map(|x| x * x).collect();
    Ok(from_power_sums(&sums, m))
}

type ZPoly = Vec<BigInt>;

fn zdeg(p: &ZPoly) -> usize {
    p.len() - 1
}

fn ztrim(mut p: ZPoly) -> ZPoly {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn zcontent(p: &ZPoly) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Pseudo-remainder of `a` by `b`: `lc(b)^(deg a - deg b + 1) a mod b`.
fn zprem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let db = zdeg(b);
    let lb = b[db].clone();
    let mut r = a.clone();
    let mut e = zdeg(a) + 1 - db;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[dr - db + j] -= &lr * bc;
        }
        r.pop();
        r = ztrim(r);
        e -= 1;
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    let f = num_traits::pow(lb, e);
    ztrim(r.into_iter().map(|c| c * &f).collect())
}

/// Resultant of two rational polynomials, computed with the subresultant
/// pseudo-remainder sequence over the integers.
pub fn resultant(a: &Polynomial, b: &Polynomial) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    let (ai, la) = a.integer_coeffs();
    let (bi, lb) = b.integer_coeffs();
    // Res(la a, lb b) = la^deg b lb^deg a Res(a, b)
    let scale = Rational::from_integer(num_traits::pow(la, b.deg()))
        * Rational::from_integer(num_traits::pow(lb, a.deg()));
    Rational::from_integer(zresultant(ai, bi)) / scale
}

fn zresultant(a: ZPoly, b: ZPoly) -> BigInt {
    let (mut a, mut b) = (a, b);
    let mut s = BigInt::one();
    if zdeg(&a) < zdeg(&b) {
        if zdeg(&a) % 2 == 1 && zdeg(&b) % 2 == 1 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if zdeg(&b) == 0 {
        return num_traits::pow(b[0].clone(), zdeg(&a));
    }
    let ca = zcontent(&a);
    let cb = zcontent(&b);
    let t = num_traits::pow(ca.clone(), zdeg(&b)) * num_traits::pow(cb.clone(), zdeg(&a));
    a = a.into_iter().map(|c| c / &ca).collect();
    b = b.into_iter().map(|c| c / &cb).collect();
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = zdeg(&a);
        let db = zdeg(&b);
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = zprem(&a, &b);
        a = b;
        let denom = &g * num_traits::pow(h.clone(), delta);
        b = r.into_iter().map(|c| c / &denom).collect();
        g = a[zdeg(&a)].clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        if b.len() == 1 && b[0].is_zero() {
            return BigInt::zero();
        }
        if zdeg(&b) == 0 {
            let da = zdeg(&a);
            let lb = b[0].clone();
            let hh = num_traits::pow(lb, da) / num_traits::pow(h, da - 1);
            return s * t * hh;
        }
    }
}

/// Number of roots (with multiplicity) of `p` of modulus strictly less than
/// `radius`. Errors with [`Error::Boundary`] if a root lies on the circle.
///
/// The circle is parametrized rationally by
/// `z(t) = R((1 - t^2) + 2ti) / (1 + t^2)`; the winding number of
/// `p(z(t)) (1 + t^2)^n = A(t) + i B(t)` is half the Cauchy index of `A/B`
/// over the projective line, obtained from a Sturm chain.
pub fn count_roots_in_disk(p: &Polynomial, radius: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Domain("root count of the zero polynomial".into()));
    }
    if !radius.is_positive() {
        return Err(Error::Domain("disk radius must be positive".into()));
    }
    let n = p.deg();
    if n == 0 {
        return Ok(0);
    }
    if p.eval(&-radius).is_zero() {
        return Err(Error::Boundary(format!("root at -{radius}")));
    }
    // G = (1 - t^2) + 2t i as (re, im); W = 1 + t^2
    let g_re = Polynomial::from_i64(&[1, 0, -1]);
    let g_im = Polynomial::from_i64(&[0, 2]);
    let w = Polynomial::from_i64(&[1, 0, 1]);
    let w_pows: Vec<Polynomial> = {
        let mut v = vec![Polynomial::one()];
        for i in 0..n {
            let next = &v[i] * &w;
            v.push(next);
        }
        v
    };
    let mut a = Polynomial::zero();
    let mut b = Polynomial::zero();
    let mut cur_re = Polynomial::one();
    let mut cur_im = Polynomial::zero();
    let mut rk = Rational::one();
    for k in 0..=n {
        let c = p.coeff(k) * &rk;
        if !c.is_zero() {
            let f = w_pows[n - k].scale(&c);
            a = &a + &(&cur_re * &f);
            b = &b + &(&cur_im * &f);
        }
        let nre = &(&cur_re * &g_re) - &(&cur_im * &g_im);
        let nim = &(&cur_re * &g_im) + &(&cur_im * &g_re);
        cur_re = nre;
        cur_im = nim;
        rk *= radius;
    }
    if b.is_zero() {
        return Ok(0);
    }
    if a.is_zero() {
        // p(z(t)) purely imaginary along the circle: no winding
        return Ok(0);
    }
    let g = a.gcd(&b);
    if g.deg() > 0 {
        if count_real_roots(&g)? > 0 {
            return Err(Error::Boundary(format!("root on |z| = {radius}")));
        }
        a = a.exact_div(&g)?;
        b = b.exact_div(&g)?;
    }
    let chain = sturm_chain(&b, &a);
    let ind_real =
        variations_at_infinity(&chain, true) as i64 - variations_at_infinity(&chain, false) as i64;
    let ind_inf = if a.deg() > b.deg() {
        let s_plus = sign_at_infinity(&a, false) * sign_at_infinity(&b, false);
        let s_minus = sign_at_infinity(&a, true) * sign_at_infinity(&b, true);
        match (s_plus, s_minus) {
            (-1, 1) => 1,
            (1, -1) => -1,
            _ => 0,
        }
    } else {
        0
    };
    let total = ind_real + ind_inf;
    debug_assert!(total >= 0 && total % 2 == 0);
    Ok((total / 2) as usize)
}
