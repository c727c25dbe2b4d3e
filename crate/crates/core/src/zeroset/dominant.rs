use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::kernel::{
    composed_product, count_roots_in_disk, isolate_real_roots, ratio, round_dyadic, Interval,
    IsolatingInterval, Polynomial, Rational,
};
use crate::lrs::{minimal, Lrs};

/// Transcript proving `v_m != 0` for all `m >= cutoff`.
///
/// Exactly one root `rho` of the minimal characteristic polynomial `P` lies
/// outside the disk of radius `inner_radius`, and it is real, in
/// `[root_lo, root_hi]`, with `|rho| > outer_radius > inner_radius`. Writing
/// `v_m = a rho^m + r_m`, a contour integral over `|z| = outer_radius` gives
/// `|r_m| <= remainder_constant * outer_radius^m`, and
/// `|a| >= coeff_lower`. The cutoff is where `(|rho| / outer_radius)^m`
/// exceeds `remainder_constant / coeff_lower`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominantCertificate {
    pub cutoff: u64,
    #[serde(with = "crate::kernel::serde_rational")]
    pub inner_radius: Rational,
    #[serde(with = "crate::kernel::serde_rational")]
    pub outer_radius: Rational,
    #[serde(with = "crate::kernel::serde_rational")]
    pub root_lo: Rational,
    #[serde(with = "crate::kernel::serde_rational")]
    pub root_hi: Rational,
    #[serde(with = "crate::kernel::serde_rational")]
    pub coeff_lower: Rational,
    #[serde(with = "crate::kernel::serde_rational")]
    pub remainder_constant: Rational,
}

fn count_inside(p: &Polynomial, r: &Rational) -> Option<usize> {
    match count_roots_in_disk(p, r) {
        Ok(c) => Some(c),
        Err(Error::Boundary(_)) => None,
        Err(_) => None,
    }
}

/// Some rational `x` with `lo < x^2 < hi`, for `0 <= lo < hi`.
fn sqrt_between(lo: &Rational, hi: &Rational) -> Rational {
    let mut a = Rational::zero();
    let mut b = hi.clone().max(Rational::one());
    loop {
        let mid = (&a + &b) / Rational::from_integer(2.into());
        let sq = &mid * &mid;
        if &sq <= lo {
            a = mid;
        } else if &sq >= hi {
            b = mid;
        } else {
            return mid;
        }
    }
}

fn radii_from_composed_product(p: &Polynomial) -> Option<(Rational, Rational)> {
    let cp = composed_product(p).ok()?;
    let cp = cp.shift_down(cp.zero_root_multiplicity());
    let mut roots: Vec<IsolatingInterval> = Vec::new();
    for mut iv in isolate_real_roots(&cp).ok()? {
        while iv.lo.is_negative() && iv.hi.is_positive() {
            let w = iv.width() / Rational::from_integer(2.into());
            iv.refine_to(&w);
        }
        if iv.hi.is_positive() {
            roots.push(iv);
        }
    }
    let top = roots.pop()?;
    let below = roots.pop();
    let mut top = top;
    let mut below_hi = below.as_ref().map_or(Rational::zero(), |b| b.hi.clone());
    let mut below = below;
    while below_hi >= top.lo {
        let w = top.width() / Rational::from_integer(2.into());
        top.refine_to(&w);
        if let Some(b) = below.as_mut() {
            let w = b.width() / Rational::from_integer(2.into());
            b.refine_to(&w);
            below_hi = b.hi.clone();
        }
    }
    let a = below_hi.max(Rational::zero());
    let gap = &top.lo - &a;
    let q = |k: i64| &a + &gap * ratio(k, 8);
    let r1 = sqrt_between(&q(1), &q(3));
    let r2 = sqrt_between(&q(5), &q(7));
    Some((r1, r2))
}

fn radii_by_search(p: &Polynomial) -> Option<(Rational, Rational)> {
    let e = p.deg();
    let mut lo = Rational::zero();
    let mut hi = p.root_bound();
    let two = Rational::from_integer(2.into());
    let mut found = None;
    let resolution = ratio(1, 1 << 12);
    for _ in 0..80 {
        if &hi - &lo <= &hi * &resolution {
            break;
        }
        let mut mid = (&lo + &hi) / &two;
        let mut c = count_inside(p, &mid);
        let mut k = 3i64;
        while c.is_none() && k < 40 {
            mid = &lo + (&hi - &lo) * ratio(1, k);
            c = count_inside(p, &mid);
            k += 1;
        }
        let c = c?;
        if c == e - 1 {
            found = Some(mid);
            break;
        }
        if c >= e {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r1 = found?;
    let mut top = hi;
    for _ in 0..40 {
        if &top - &r1 <= &top * &resolution {
            break;
        }
        let t = (&r1 + &top) / &two;
        match count_inside(p, &t) {
            Some(c) if c == e - 1 => return Some((r1, t)),
            _ => top = t,
        }
    }
    None
}

/// False when some non-real root is at least as large as every real root,
/// which rules out a real dominant root without a radius search.
fn real_root_may_dominate(p: &Polynomial) -> bool {
    let Ok(real) = isolate_real_roots(p) else {
        return false;
    };
    let mut bound: Option<Rational> = None;
    for mut iv in real {
        iv.refine_bits(16);
        let m = iv.lo.abs().max(iv.hi.abs());
        if bound.as_ref().is_none_or(|b| &m > b) {
            bound = Some(m);
        }
    }
    match bound {
        None => false,
        Some(b) => count_inside(p, &b).is_none_or(|c| c == p.deg()),
    }
}

/// Rational radii `r1 < r2` such that exactly one root of `p` lies outside
/// the disk of radius `r1`, and none has modulus in `[r1, r2]`. The outside
/// root is then real and simple.
pub fn dominant_root_radii(p: &Polynomial) -> Option<(Rational, Rational)> {
    let e = p.deg();
    if e == 0 || !real_root_may_dominate(p) {
        return None;
    }
    let (r1, r2) = if e <= 6 {
        radii_from_composed_product(p).or_else(|| radii_by_search(p))?
    } else {
        radii_by_search(p)?
    };
    (count_inside(p, &r1)? == e - 1 && count_inside(p, &r2)? == e - 1).then_some((r1, r2))
}

/// Generating-function numerator: `v_m = sum of residues of z^m B(z) / P(z)`.
pub(crate) fn residue_numerator(m: &Lrs) -> Polynomial {
    let e = m.order();
    let v = m.init();
    let c = m.coeffs();
    let mut b = vec![Rational::zero(); e];
    for k in 0..e {
        let mut a = v[k].clone();
        for i in 1..=k {
            a -= &c[i - 1] * &v[k - i];
        }
        b[e - 1 - k] = a;
    }
    Polynomial::new(b)
}

/// Certifies that the sequence is eventually nonzero when its minimal
/// characteristic polynomial has a unique, real, simple root of maximal
/// modulus. Returns `None` when inapplicable or when the cutoff exceeds
/// `max_cutoff`.
pub fn certify_nonzero_dominant(v: &Lrs, max_cutoff: u64) -> Option<DominantCertificate> {
    let m = minimal(v);
    let e = m.order();
    if e == 0 || m.coeffs().last().is_some_and(Zero::is_zero) {
        return None;
    }
    let p = m.char_poly();
    if e == 1 {
        let rho = m.coeffs()[0].clone();
        let half = rho.abs() / Rational::from_integer(2.into());
        return Some(DominantCertificate {
            cutoff: 0,
            inner_radius: half.clone(),
            outer_radius: half,
            root_lo: rho.clone(),
            root_hi: rho,
            coeff_lower: m.init()[0].abs(),
            remainder_constant: Rational::zero(),
        });
    }
    let (r1, r2) = dominant_root_radii(&p)?;
    let mut outside: Vec<IsolatingInterval> = Vec::new();
    for mut iv in isolate_real_roots(&p).ok()? {
        loop {
            if iv.lo >= r2 || iv.hi <= -&r2 {
                outside.push(iv);
                break;
            }
            if iv.lo >= -&r2 && iv.hi <= r2 {
                break;
            }
            let w = iv.width() / Rational::from_integer(2.into());
            iv.refine_to(&w);
        }
    }
    if outside.len() != 1 {
        return None;
    }
    let mut rho = outside.pop()?;
    let b = residue_numerator(&m);
    let dp = p.derivative();
    let mut bits = 16u32;
    loop {
        rho.refine_bits(bits);
        let x = Interval::new(rho.lo.clone(), rho.hi.clone());
        if let Some(a) = x.eval(&b).div(&x.eval(&dp)) {
            if !a.contains_zero() {
                let a_lo = round_dyadic(&a.mig(), bits, false);
                let rho_lo = rho.lo.abs().min(rho.hi.abs());
                let cert = build_cutoff(&b, &r1, &r2, &rho_lo, &a_lo, e, max_cutoff);
                if let Some((cutoff, k)) = cert {
                    return Some(DominantCertificate {
                        cutoff,
                        inner_radius: r1,
                        outer_radius: r2,
                        root_lo: rho.lo.clone(),
                        root_hi: rho.hi.clone(),
                        coeff_lower: a_lo,
                        remainder_constant: k,
                    });
                }
            }
        }
        if bits >= 256 {
            return None;
        }
        bits *= 2;
    }
}

fn build_cutoff(
    b: &Polynomial,
    r1: &Rational,
    r2: &Rational,
    rho_lo: &Rational,
    a_lo: &Rational,
    e: usize,
    max_cutoff: u64,
) -> Option<(u64, Rational)> {
    if rho_lo <= r2 || a_lo.is_zero() {
        return None;
    }
    let mut b_max = Rational::zero();
    let mut pw = Rational::one();
    for c in b.coeffs() {
        b_max += c.abs() * &pw;
        pw *= r2;
    }
    let gap = r2 - r1;
    let p_min = (rho_lo - r2) * num_traits::pow(gap, e - 1);
    let k = r2 * b_max / p_min;
    let g = rho_lo / r2;
    let n = first_power_exceeding(&g, &(&k / a_lo), max_cutoff)?;
    Some((n, k))
}

/// Least `n <= limit` with `g^n > target`, for `g > 1`, using a dyadic lower
/// bound on `g` to keep numbers small.
pub(crate) fn first_power_exceeding(g: &Rational, target: &Rational, limit: u64) -> Option<u64> {
    let mut bits = 8;
    let mut gl = round_dyadic(g, bits, false);
    while gl <= Rational::one() {
        bits *= 2;
        if bits > 1024 {
            return None;
        }
        gl = round_dyadic(g, bits, false);
    }
    let exceeds = |n: u64| -> bool { &num_traits::pow(gl.clone(), n as usize) > target };
    if exceeds(0) {
        return Some(0);
    }
    let mut hi = 1u64;
    while !exceeds(hi) {
        if hi > limit {
            return None;
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi <= limit).then_some(hi)
}
