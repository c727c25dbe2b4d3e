//! Exact arithmetic foundation: rationals, Gaussian rationals, univariate and
//! multivariate polynomials, dense matrices, real-root isolation and
//! outward-rounded rational intervals.

mod gaussian;
mod interval;
mod matrix;
mod multipoly;
mod poly;
mod polyparse;
mod roots;

pub use gaussian::GaussianRational;
pub use interval::Interval;
pub use matrix::{Matrix, Vector};
pub use multipoly::{monomials_up_to, MultiPoly};
pub use poly::Polynomial;
pub use roots::{
    composed_product, count_real_roots, count_roots_in_disk, isolate_real_roots, power_roots,
    resultant, sturm_chain, sturm_count, sturm_sequence, IsolatingInterval,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` (optionally signed). Scientific notation and
/// decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let bad = |_| Error::Parse(format!("not a rational: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(bad)?;
            let d = BigInt::from_str(d.trim()).map_err(bad)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(t).map_err(bad)?)),
    }
}

/// Canonical `"p/q"` form (`q` omitted when 1).
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Floor of a rational as a big integer.
pub fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Rounds `q` down (`up = false`) or up to a multiple of `2^-bits`.
pub fn round_dyadic(q: &Rational, bits: u32, up: bool) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = q * Rational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() };
    Rational::new(n.to_integer(), scale)
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Serde adapters writing rationals as canonical strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = RawRational::deserialize(d)?;
        raw.into_rational().map_err(D::Error::custom)
    }

    /// Accepts strings, and plain JSON integers for convenience.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Str(String),
        Int(i64),
    }

    impl RawRational {
        pub(crate) fn into_rational(self) -> Result<Rational, String> {
            match self {
                RawRational::Str(s) => parse_rational(&s).map_err(|e| e.to_string()),
                RawRational::Int(i) => Ok(super::rat(i)),
            }
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<RawRational>::deserialize(d)?;
            raw.into_iter()
                .map(|r| r.into_rational().map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod matrix {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(rows.len()))?;
            for row in rows {
                let r: Vec<String> = row.iter().map(format_rational).collect();
                seq.serialize_element(&r)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Vec<Vec<Rational>>, D::Error> {
            let raw = Vec::<Vec<RawRational>>::deserialize(d)?;
            raw.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|r| r.into_rational().map_err(D::Error::custom))
                        .collect()
                })
                .collect()
        }
    }

    pub mod vec_vec {
        pub use super::matrix::{deserialize, serialize};
    }

    pub mod option_vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &Option<Vec<Rational>>,
            s: S,
        ) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.iter().map(format_rational).collect::<Vec<_>>()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<Vec<Rational>>, D::Error> {
            let raw = Option::<Vec<RawRational>>::deserialize(d)?;
            raw.map(|v| {
                v.into_iter()
                    .map(|r| r.into_rational().map_err(D::Error::custom))
                    .collect()
            })
            .transpose()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&format_rational(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let raw = Option::<RawRational>::deserialize(d)?;
            raw.map(|r| r.into_rational().map_err(D::Error::custom))
                .transpose()
        }
    }
}
