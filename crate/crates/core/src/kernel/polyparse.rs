//! Text syntax for multivariate polynomials: `2*z1^3 - z2^2/3 + (z1 - 1)*z3`.
//!
//! Variables are `z1, z2, ...` (or `x1, x2, ...`); `/` divides by a nonzero
//! constant only.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{MultiPoly, Rational};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

fn highest_variable(text: &str) -> usize {
    let b = text.as_bytes();
    let mut best = 0;
    for (i, &c) in b.iter().enumerate() {
        if c == b'z' || c == b'x' {
            let end = b[i + 1..].iter().take_while(|c| c.is_ascii_digit()).count();
            if let Ok(k) = text[i + 1..i + 1 + end].parse::<usize>() {
                best = best.max(k);
            }
        }
    }
    best
}

/// Polynomial in as many variables as the highest index used.
fn parse(text: &str) -> Result<MultiPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars: highest_variable(text),
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in polynomial", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    let c = constant_value(&d)
                        .ok_or_else(|| self.error("division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(&(Rational::from_integer(1.into()) / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.scale(&Rational::from_integer((-1).into())))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k: u32 = self
                .digits()
                .parse()
                .map_err(|_| self.error("expected exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().parse().expect("digits");
                Ok(MultiPoly::constant(self.nvars, Rational::from_integer(n)))
            }
            Some(b'z' | b'x') => {
                self.pos += 1;
                let i: usize = self
                    .digits()
                    .parse()
                    .map_err(|_| self.error("expected variable index"))?;
                if i == 0 {
                    return Err(self.error("variables are numbered from 1"));
                }
                Ok(MultiPoly::var(self.nvars, i - 1))
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

fn constant_value(p: &MultiPoly) -> Option<Rational> {
    if p.degree() > 0 {
        return None;
    }
    Some(
        p.terms()
            .next()
            .map_or_else(Rational::zero, |(_, c)| c.clone()),
    )
}

impl FromStr for MultiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{rat, ratio};

    #[test]
    fn parses_and_evaluates() {
        let p: MultiPoly = "z1^3 - z2^2".parse().unwrap();
        assert_eq!(p.nvars(), 2);
        assert_eq!(p.eval(&[rat(2), rat(3)]).unwrap(), rat(-1));
        let q: MultiPoly = "x1 + x2 + 2*x3 - 2*x4".parse().unwrap();
        assert_eq!(q.eval(&[rat(1), rat(1), rat(1), rat(2)]).unwrap(), rat(0));
        let r: MultiPoly = "-(z1 - 1)^2 / 4 + 3".parse().unwrap();
        assert_eq!(r.eval(&[rat(3)]).unwrap(), rat(2));
        let h: MultiPoly = "z1/2".parse().unwrap();
        assert_eq!(h.eval(&[rat(1)]).unwrap(), ratio(1, 2));
        let c: MultiPoly = "0".parse().unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "z0", "z1 +", "(z1", "z1 / z2", "1/0", "z1 ^ y", "3 z1"] {
            assert!(bad.parse::<MultiPoly>().is_err(), "{bad}");
        }
    }
}
