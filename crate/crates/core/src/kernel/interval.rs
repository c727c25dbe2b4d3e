use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::{round_dyadic, Polynomial, Rational};

/// Closed rational interval `[lo, hi]` used for verified enclosures.
///
/// Every operation returns an interval containing all results of the exact
/// operation on members of the operands. `round` widens endpoints outward
/// to multiples of `2^-bits` to keep denominators bounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        self.mul(&Interval::point(c.clone()))
    }

    /// `None` when the divisor contains zero.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let inv = Interval::new(o.hi.recip(), o.lo.recip());
        Some(self.mul(&inv))
    }

    /// Enclosure of `{|x| : x in self}`.
    pub fn abs(&self) -> Interval {
        if self.contains_zero() {
            let m = self.lo.abs().max(self.hi.abs());
            Interval::new(Rational::zero(), m)
        } else if self.lo.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Largest absolute value of any member.
    pub fn mag(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value of any member.
    pub fn mig(&self) -> Rational {
        self.abs().lo
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn round(&self, bits: u32) -> Interval {
        Interval::new(
            round_dyadic(&self.lo, bits, false),
            round_dyadic(&self.hi, bits, true),
        )
    }

    /// Enclosure of `{p(x) : x in self}` by Horner's scheme.
    pub fn eval(&self, p: &Polynomial) -> Interval {
        let mut acc = Interval::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Interval::point(c.clone()));
        }
        acc
    }

    /// Certain comparison: `Some(Less)` if every member is below `x`, etc.
    pub fn compare(&self, x: &Rational) -> Option<Ordering> {
        if &self.hi < x {
            Some(Ordering::Less)
        } else if &self.lo > x {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{rat, ratio};

    #[test]
    fn enclosure_of_products() {
        let a = Interval::new(rat(-2), rat(3));
        let b = Interval::new(rat(-1), ratio(1, 2));
        let p = a.mul(&b);
        assert_eq!(p, Interval::new(rat(-3), rat(2)));
        assert!(a.div(&b).is_none());
        let q = Interval::new(rat(1), rat(2))
            .div(&Interval::new(rat(4), rat(8)))
            .unwrap();
        assert_eq!(q, Interval::new(ratio(1, 8), ratio(1, 2)));
        assert_eq!(a.abs(), Interval::new(rat(0), rat(3)));
    }
}
