use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::orbit::{LassoWord, Letter};

/// Linear temporal logic over atoms naming predicates.
///
/// Text syntax: `G(P1 -> F !P2) & F(P3 | !P1)`. Unary `!`, `X`, `F`, `G` bind
/// tightest, then `U`, `&`, `|`, and right-associative `->`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ltl {
    True,
    False,
    Atom(String),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Eventually(Box<Ltl>),
    Always(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn atom(name: &str) -> Ltl {
        Ltl::Atom(name.to_string())
    }

    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Ltl::True | Ltl::False => {}
            Ltl::Atom(a) => out.push(a),
            Ltl::Not(f) | Ltl::Next(f) | Ltl::Eventually(f) | Ltl::Always(f) => {
                f.collect_atoms(out)
            }
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Until(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Nesting depth of temporal operators.
    pub fn temporal_depth(&self) -> usize {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => 0,
            Ltl::Not(f) => f.temporal_depth(),
            Ltl::Next(f) | Ltl::Eventually(f) | Ltl::Always(f) => 1 + f.temporal_depth(),
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) => {
                a.temporal_depth().max(b.temporal_depth())
            }
            Ltl::Until(a, b) => 1 + a.temporal_depth().max(b.temporal_depth()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Token::LParen);
            }
            ')' => {
                chars.next();
                out.push(Token::RParen);
            }
            '!' | '~' | '¬' => {
                chars.next();
                out.push(Token::Not);
            }
            '&' | '∧' => {
                chars.next();
                if chars.peek() == Some(&'&') {
                    chars.next();
                }
                out.push(Token::And);
            }
            '|' | '∨' => {
                chars.next();
                if chars.peek() == Some(&'|') {
                    chars.next();
                }
                out.push(Token::Or);
            }
            '⇒' | '→' => {
                chars.next();
                out.push(Token::Implies);
            }
            '-' | '=' => {
                chars.next();
                if chars.next() != Some('>') {
                    return Err(Error::Parse(format!("expected '{c}>' in formula")));
                }
                out.push(Token::Implies);
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut id = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '.' {
                        id.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(id));
            }
            c => {
                return Err(Error::Parse(format!(
                    "unexpected character '{c}' in formula"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn implication(&mut self) -> Result<Ltl> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Ltl::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Ltl> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            acc = Ltl::Or(Box::new(acc), Box::new(self.conjunction()?));
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Ltl> {
        let mut acc = self.until()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            acc = Ltl::And(Box::new(acc), Box::new(self.until()?));
        }
        Ok(acc)
    }

    fn until(&mut self) -> Result<Ltl> {
        let lhs = self.unary()?;
        if matches!(self.peek(), Some(Token::Ident(s)) if s == "U") {
            self.pos += 1;
            let rhs = self.until()?;
            return Ok(Ltl::Until(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ltl> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::Parse("formula ends unexpectedly".into()))?;
        self.pos += 1;
        match tok {
            Token::Not => Ok(Ltl::Not(Box::new(self.unary()?))),
            Token::LParen => {
                let f = self.implication()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(Error::Parse("expected ')' in formula".into()));
                }
                self.pos += 1;
                Ok(f)
            }
            Token::Ident(id) => match id.as_str() {
                "X" => Ok(Ltl::Next(Box::new(self.unary()?))),
                "F" => Ok(Ltl::Eventually(Box::new(self.unary()?))),
                "G" => Ok(Ltl::Always(Box::new(self.unary()?))),
                "U" => Err(Error::Parse("'U' needs a left operand".into())),
                "true" => Ok(Ltl::True),
                "false" => Ok(Ltl::False),
                _ => Ok(Ltl::Atom(id)),
            },
            t => Err(Error::Parse(format!("unexpected {t:?} in formula"))),
        }
    }
}

impl FromStr for Ltl {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ltl> {
        let mut p = Parser {
            tokens: tokenize(s)?,
            pos: 0,
        };
        let f = p.implication()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse("trailing input in formula".into()));
        }
        Ok(f)
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::True => write!(f, "true"),
            Ltl::False => write!(f, "false"),
            Ltl::Atom(a) => write!(f, "{a}"),
            Ltl::Not(a) => write!(f, "!{a}"),
            Ltl::Next(a) => write!(f, "X {a}"),
            Ltl::Eventually(a) => write!(f, "F {a}"),
            Ltl::Always(a) => write!(f, "G {a}"),
            Ltl::And(a, b) => write!(f, "({a} & {b})"),
            Ltl::Or(a, b) => write!(f, "({a} | {b})"),
            Ltl::Implies(a, b) => write!(f, "({a} -> {b})"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
        }
    }
}

impl Serialize for Ltl {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ltl {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Truth values of a formula at every lasso position; position `i + 1`
/// follows `i`, and the last position is followed by the first cycle one.
struct LassoGraph {
    len: usize,
    loop_start: usize,
}

impl LassoGraph {
    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len {
            i + 1
        } else {
            self.loop_start
        }
    }

    /// Least fixpoint of `r[i] = hold[i] | (keep[i] & r[succ i])`.
    fn until(&self, keep: &[bool], hold: &[bool]) -> Vec<bool> {
        let mut r = hold.to_vec();
        loop {
            let mut changed = false;
            for i in (0..self.len).rev() {
                if !r[i] && keep[i] && r[self.succ(i)] {
                    r[i] = true;
                    changed = true;
                }
            }
            if !changed {
                return r;
            }
        }
    }

    fn eval(&self, f: &Ltl, atom: &dyn Fn(&str, usize) -> Result<bool>) -> Result<Vec<bool>> {
        let n = self.len;
        Ok(match f {
            Ltl::True => vec![true; n],
            Ltl::False => vec![false; n],
            Ltl::Atom(a) => (0..n).map(|i| atom(a, i)).collect::<Result<_>>()?,
            Ltl::Not(a) => self.eval(a, atom)?.into_iter().map(|v| !v).collect(),
            Ltl::And(a, b) => zip(self.eval(a, atom)?, self.eval(b, atom)?, |x, y| x && y),
            Ltl::Or(a, b) => zip(self.eval(a, atom)?, self.eval(b, atom)?, |x, y| x || y),
            Ltl::Implies(a, b) => zip(self.eval(a, atom)?, self.eval(b, atom)?, |x, y| !x || y),
            Ltl::Next(a) => {
                let v = self.eval(a, atom)?;
                (0..n).map(|i| v[self.succ(i)]).collect()
            }
            Ltl::Eventually(a) => self.until(&vec![true; n], &self.eval(a, atom)?),
            Ltl::Always(a) => {
                let neg: Vec<bool> = self.eval(a, atom)?.into_iter().map(|v| !v).collect();
                self.until(&vec![true; n], &neg)
                    .into_iter()
                    .map(|v| !v)
                    .collect()
            }
            Ltl::Until(a, b) => self.until(&self.eval(a, atom)?, &self.eval(b, atom)?),
        })
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Truth of `f` on a lasso whose letters are given by `holds(atom, letter)`.
pub fn ltl_eval_with<L: Clone + Eq>(
    f: &Ltl,
    w: &LassoWord<L>,
    holds: &dyn Fn(&str, &L) -> Result<bool>,
) -> Result<bool> {
    let g = LassoGraph {
        len: w.stem.len() + w.cycle.len(),
        loop_start: w.stem.len(),
    };
    let atom = |a: &str, i: usize| holds(a, w.letter(i));
    Ok(g.eval(f, &atom)?[0])
}

/// Truth of `f` on a characteristic word; atoms name entries of the
/// word's alphabet.
pub fn ltl_eval_lasso(f: &Ltl, w: &LassoWord<Letter>) -> Result<bool> {
    for a in f.atoms() {
        if !w.alphabet.iter().any(|n| n == a) {
            return Err(Error::Domain(format!("unknown atom '{a}' in formula")));
        }
    }
    let holds = |a: &str, letter: &Letter| -> Result<bool> {
        let id = w.alphabet.iter().position(|n| n == a).expect("checked");
        Ok(letter.contains(&id))
    };
    ltl_eval_with(f, w, &holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(stem: &[&[usize]], cycle: &[&[usize]]) -> LassoWord<Letter> {
        let l = |x: &&[usize]| x.iter().copied().collect::<Letter>();
        LassoWord::new(
            vec!["p".into(), "q".into()],
            stem.iter().map(l).collect(),
            cycle.iter().map(l).collect(),
        )
        .unwrap()
    }

    fn eval(f: &str, w: &LassoWord<Letter>) -> bool {
        ltl_eval_lasso(&f.parse().unwrap(), w).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let f: Ltl = "G(P1 -> F !P2) & F(P3 | !P1)".parse().unwrap();
        assert_eq!(f.to_string(), "(G (P1 -> F !P2) & F (P3 | !P1))");
        assert_eq!(f.to_string().parse::<Ltl>().unwrap(), f);
        assert_eq!(f.atoms(), vec!["P1", "P2", "P3"]);
        let u: Ltl = "p U q U p".parse().unwrap();
        assert_eq!(u.to_string(), "(p U (q U p))");
        for bad in ["", "G", "p &", "(p", "p q", "U p", "p - q"] {
            assert!(bad.parse::<Ltl>().is_err(), "{bad}");
        }
    }

    #[test]
    fn lasso_semantics() {
        let any = word(&[&[0]], &[&[1], &[]]);
        assert!(eval("G true", &any));
        assert!(eval("G F p", &word(&[], &[&[], &[0]])));
        assert!(!eval("F G p", &word(&[&[0]], &[&[]])));
        assert!(eval("p & X !p & X X q", &word(&[&[0], &[]], &[&[1]])));
        assert!(eval("!p U q", &word(&[&[], &[]], &[&[1]])));
        assert!(!eval("!p U q", &word(&[&[], &[0]], &[&[1]])));
        assert!(eval("F G q", &word(&[&[0]], &[&[1]])));
        let err = ltl_eval_lasso(&"G r".parse().unwrap(), &any);
        assert!(matches!(err, Err(Error::Domain(_))));
    }
}
