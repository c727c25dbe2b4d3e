use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::kernel::{floor, Polynomial, Rational};
use crate::lrs::{minimal, Lrs};

/// Transcript proving `v_m != 0` for all `m >= cutoff` when the minimal
/// characteristic polynomial is `(X - 1)^e`, so that `v_m = P(m)` with
/// `deg P = e - 1`. `coefficients` lists `P` from the constant term up, and
/// `cutoff` exceeds the Cauchy bound `1 + max |p_i / p_lead|` on its roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialCertificate {
    pub cutoff: u64,
    #[serde(with = "crate::kernel::serde_rational::vec")]
    pub coefficients: Vec<Rational>,
}

/// `P` with `P(m) = values[m]`, by Newton forward differences.
pub fn interpolate(values: &[Rational]) -> Polynomial {
    let mut diffs = values.to_vec();
    let mut out = Polynomial::zero();
    let mut basis = Polynomial::one();
    for k in 0..values.len() {
        out = &out + &basis.scale(&diffs[0]);
        // C(m, k + 1) = C(m, k) (m - k) / (k + 1)
        let step = Polynomial::new(vec![-Rational::from_integer(k.into()), Rational::one()]);
        basis = (&basis * &step).scale(&(Rational::one() / Rational::from_integer((k + 1).into())));
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

/// Least integer above every real root modulus of `p`.
pub fn cauchy_cutoff(p: &Polynomial) -> Rational {
    let lead = p.leading();
    let m = p.coeffs()[..p.deg()]
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Rational::zero(), |a, b| a.max(b));
    Rational::from_integer(floor(&(Rational::one() + m))) + Rational::one()
}

pub fn certify_nonzero_polynomial(v: &Lrs, max_cutoff: u64) -> Option<PolynomialCertificate> {
    let m = minimal(v);
    let e = m.order();
    if e < 2 {
        return None;
    }
    let unipotent = Polynomial::new(vec![-Rational::one(), Rational::one()]).pow(e as u32);
    if m.char_poly() != unipotent {
        return None;
    }
    let p = interpolate(m.init());
    let cutoff = cauchy_cutoff(&p).to_integer().to_u64()?;
    (cutoff <= max_cutoff).then(|| PolynomialCertificate {
        cutoff,
        coefficients: p.coeffs().to_vec(),
    })
}
