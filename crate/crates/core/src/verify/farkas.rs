//! Replays invariant certificates with plain matrix arithmetic.

use num_traits::{Signed, Zero};

use crate::invariants::InvariantCertificate;
use crate::kernel::Rational;
use crate::orbit::Lds;

type Check<T> = std::result::Result<T, String>;

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sum_k y_k rows[k]`.
fn combine(rows: &[Vec<Rational>], y: &[Rational], dim: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim];
    for (row, yk) in rows.iter().zip(y) {
        for (o, r) in out.iter_mut().zip(row) {
            *o += yk * r;
        }
    }
    out
}

fn nonnegative(y: &[Rational], what: &str) -> Check<()> {
    match y.iter().position(Signed::is_negative) {
        Some(k) => Err(format!("{what} multiplier {k} is negative")),
        None => Ok(()),
    }
}

/// Checks that the certificate's invariant contains the start, is mapped
/// into itself, and misses the target.
pub fn check_invariant_certificate(lds: &Lds, cert: &InvariantCertificate) -> Check<()> {
    let d = lds.dim();
    let inv = &cert.invariant;
    let tgt = &cert.target;
    if inv.dim() != d || tgt.dim() != d {
        return Err("certificate dimension does not match the system".into());
    }
    let a: Vec<Vec<Rational>> = (0..inv.a().rows())
        .map(|i| inv.a().row(i).to_vec())
        .collect();
    let b = inv.b();
    for (i, row) in a.iter().enumerate() {
        if dot(row, lds.start()) > b[i] {
            return Err(format!("start violates invariant row {i}"));
        }
    }
    let m: Vec<Vec<Rational>> = (0..d).map(|i| lds.matrix().row(i).to_vec()).collect();
    if cert.stability.len() != a.len() {
        return Err("one stability multiplier vector per invariant row is required".into());
    }
    for (i, y) in cert.stability.iter().enumerate() {
        if y.len() != a.len() {
            return Err(format!(
                "stability multipliers for row {i} have the wrong length"
            ));
        }
        nonnegative(y, "stability")?;
        // M^T a_i
        let image = combine(&m, &a[i], d);
        if combine(&a, y, d) != image {
            return Err(format!(
                "stability multipliers for row {i} do not reproduce a_i M"
            ));
        }
        if dot(b, y) > b[i] {
            return Err(format!("stability bound for row {i} exceeds b_i"));
        }
    }
    let mut rows = a;
    rows.extend((0..tgt.a().rows()).map(|i| tgt.a().row(i).to_vec()));
    let mut bounds = b.to_vec();
    bounds.extend(tgt.b().iter().cloned());
    let w = &cert.separation;
    if w.len() != rows.len() {
        return Err("separation multipliers have the wrong length".into());
    }
    nonnegative(w, "separation")?;
    if combine(&rows, w, d).iter().any(|v| !v.is_zero()) {
        return Err("separation multipliers do not cancel the variables".into());
    }
    if !dot(&bounds, w).is_negative() {
        return Err("separation multipliers do not yield a contradiction".into());
    }
    Ok(())
}

pub fn verify_invariant_certificate(lds: &Lds, cert: &InvariantCertificate) -> bool {
    check_invariant_certificate(lds, cert).is_ok()
}
