//! Tropical terms: parsing, printing and evaluation.
//!
//! Grammar (whitespace insignificant, columns in errors are 1-based):
//!
//! ```text
//! expr    := signed (('+' | '-') signed)*
//! signed  := '-' signed | rational '*' signed | '0' | atom
//! atom    := var | 'max(' expr {',' expr} ')' | 'min(' expr {',' expr} ')' | '(' expr ')'
//! var     := 'x' positive-integer
//! rational:= integer ['/' positive-integer]
//! ```
//!
//! Subtraction is sugar for scaling by `-1`; the literal `0` is the empty sum.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::logreal::LogReal;
use crate::arith::rational::{fmt_rational, Rational};
use crate::error::{GvfError, Result};

/// A term in the language of divisible ordered abelian groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// 1-based variable index.
    Var(usize),
    Scale(Rational, Box<Term>),
    Sum(Vec<Term>),
    Max(Vec<Term>),
    Min(Vec<Term>),
}

/// Values a term can be evaluated in.
pub trait TropicalValue: Clone {
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Result<Self>;
    fn scale(&self, q: &Rational) -> Result<Self>;
    fn max(&self, o: &Self) -> Result<Self>;
    fn min(&self, o: &Self) -> Result<Self>;
}

impl TropicalValue for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Result<Self> {
        Ok(self + o)
    }
    fn scale(&self, q: &Rational) -> Result<Self> {
        Ok(self * q)
    }
    fn max(&self, o: &Self) -> Result<Self> {
        Ok(Ord::max(self, o).clone())
    }
    fn min(&self, o: &Self) -> Result<Self> {
        Ok(Ord::min(self, o).clone())
    }
}

impl TropicalValue for LogReal {
    fn zero() -> Self {
        LogReal::zero()
    }
    fn add(&self, o: &Self) -> Result<Self> {
        Ok(LogReal::add(self, o))
    }
    fn scale(&self, q: &Rational) -> Result<Self> {
        Ok(LogReal::scale(self, q))
    }
    fn max(&self, o: &Self) -> Result<Self> {
        Ok(if self.compare(o)?.is_ge() { self.clone() } else { o.clone() })
    }
    fn min(&self, o: &Self) -> Result<Self> {
        Ok(if self.compare(o)?.is_le() { self.clone() } else { o.clone() })
    }
}

impl TropicalValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(&self, o: &Self) -> Result<Self> {
        Ok(self + o)
    }
    fn scale(&self, q: &Rational) -> Result<Self> {
        Ok(self * crate::arith::rational::to_f64(q))
    }
    fn max(&self, o: &Self) -> Result<Self> {
        Ok(f64::max(*self, *o))
    }
    fn min(&self, o: &Self) -> Result<Self> {
        Ok(f64::min(*self, *o))
    }
}

impl Term {
    pub fn var(k: usize) -> Term {
        Term::Var(k)
    }

    /// The constant `0`.
    pub fn zero() -> Term {
        Term::Sum(vec![])
    }

    /// `-t`, folding into an outer scale.
    pub fn negate(self) -> Term {
        match self {
            Term::Scale(q, t) => Term::Scale(-q, t),
            t => Term::Scale(-Rational::one(), Box::new(t)),
        }
    }

    /// Largest variable index, 0 for constant terms.
    pub fn arity(&self) -> usize {
        match self {
            Term::Var(k) => *k,
            Term::Scale(_, t) => t.arity(),
            Term::Sum(ts) | Term::Max(ts) | Term::Min(ts) => {
                ts.iter().map(Term::arity).max().unwrap_or(0)
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Scale(_, t) => 1 + t.size(),
            Term::Sum(ts) | Term::Max(ts) | Term::Min(ts) => {
                1 + ts.iter().map(Term::size).sum::<usize>()
            }
        }
    }

    pub fn eval<V: TropicalValue>(&self, x: &[V]) -> Result<V> {
        match self {
            Term::Var(k) => x
                .get(k - 1)
                .cloned()
                .ok_or_else(|| GvfError::domain(format!("no value for x{k}"))),
            Term::Scale(q, t) => t.eval(x)?.scale(q),
            Term::Sum(ts) => ts
                .iter()
                .try_fold(V::zero(), |acc, t| acc.add(&t.eval(x)?)),
            Term::Max(ts) | Term::Min(ts) => {
                let is_max = matches!(self, Term::Max(_));
                let mut it = ts.iter();
                let mut acc = it
                    .next()
                    .ok_or_else(|| GvfError::domain("empty max/min"))?
                    .eval(x)?;
                for t in it {
                    let y = t.eval(x)?;
                    acc = if is_max { acc.max(&y)? } else { acc.min(&y)? };
                }
                Ok(acc)
            }
        }
    }
}

fn is_compound(t: &Term) -> bool {
    matches!(t, Term::Sum(ts) if !ts.is_empty())
}

fn fmt_atom(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_compound(t) {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

fn fmt_positive_scale(q: &Rational, t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}*", fmt_rational(q))?;
    fmt_atom(t, f)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(k) => write!(f, "x{k}"),
            Term::Scale(q, t) if q.is_negative() => {
                f.write_str("-")?;
                if *q == -Rational::one() && !matches!(**t, Term::Scale(..)) {
                    fmt_atom(t, f)
                } else {
                    fmt_positive_scale(&-q, t, f)
                }
            }
            Term::Scale(q, t) => fmt_positive_scale(q, t, f),
            Term::Sum(ts) if ts.is_empty() => f.write_str("0"),
            Term::Sum(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    match t {
                        Term::Scale(q, inner) if i > 0 && q.is_negative() => {
                            f.write_str(" - ")?;
                            if *q == -Rational::one() && !matches!(**inner, Term::Scale(..)) {
                                fmt_atom(inner, f)?;
                            } else {
                                fmt_positive_scale(&-q, inner, f)?;
                            }
                        }
                        _ => {
                            if i > 0 {
                                f.write_str(" + ")?;
                            }
                            fmt_atom(t, f)?;
                        }
                    }
                }
                Ok(())
            }
            Term::Max(ts) | Term::Min(ts) => {
                f.write_str(if matches!(self, Term::Max(_)) { "max(" } else { "min(" })?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(GvfError::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn expr(&mut self) -> Result<Term> {
        let mut terms = vec![self.signed()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.signed()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(self.signed()?.negate());
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Term::Sum(terms)
        })
    }

    fn signed(&mut self) -> Result<Term> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.signed()?.negate())
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let num = self.digits().ok_or_else(|| GvfError::parse(at, "bad integer"))?;
                let mut q = Rational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let dat = self.pos;
                    let den = self
                        .digits()
                        .ok_or_else(|| GvfError::parse(dat, "expected a positive integer"))?;
                    if den.is_zero() {
                        return Err(GvfError::parse(dat, "zero denominator"));
                    }
                    q /= Rational::from_integer(den);
                }
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    return Ok(Term::Scale(q, Box::new(self.signed()?)));
                }
                if q.is_zero() {
                    return Ok(Term::zero());
                }
                Err(GvfError::parse(
                    at,
                    "nonzero constants are not terms; expected '*' after the scalar",
                ))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Term> {
        let at = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.expr()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(b'x') => {
                self.pos += 1;
                let vat = self.pos;
                match self.digits() {
                    Some(k) if !k.is_zero() => {
                        let k = usize::try_from(k)
                            .map_err(|_| GvfError::parse(vat, "variable index too large"))?;
                        Ok(Term::Var(k))
                    }
                    _ => Err(GvfError::parse(
                        vat,
                        "unknown variable; expected x followed by a positive integer",
                    )),
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
                let is_max = match word {
                    "max" => true,
                    "min" => false,
                    _ => return Err(GvfError::parse(start, format!("unknown name '{word}'"))),
                };
                self.expect(b'(')?;
                let mut args = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.expect(b')')?;
                Ok(if is_max { Term::Max(args) } else { Term::Min(args) })
            }
            Some(c) => Err(GvfError::parse(
                at.max(self.pos),
                format!("unexpected character {:?}; expected a term", c as char),
            )),
            None => Err(GvfError::parse(self.pos, "unexpected end of input; expected a term")),
        }
    }
}

/// Parses a tropical term.
pub fn parse_tropical(text: &str) -> Result<Term> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let t = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(GvfError::parse(
            p.pos,
            format!("unexpected character {:?} after the term", c as char),
        ));
    }
    Ok(t)
}

impl std::str::FromStr for Term {
    type Err = GvfError;
    fn from_str(s: &str) -> Result<Term> {
        parse_tropical(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn p(s: &str) -> Term {
        parse_tropical(s).unwrap()
    }

    #[test]
    fn known_parses() {
        assert_eq!(p("min(x1, x2)"), Term::Min(vec![Term::Var(1), Term::Var(2)]));
        assert_eq!(
            p("1/2*max(x1, x1+x2)"),
            Term::Scale(
                rat(1, 2),
                Box::new(Term::Max(vec![
                    Term::Var(1),
                    Term::Sum(vec![Term::Var(1), Term::Var(2)])
                ]))
            )
        );
        match parse_tropical("max(x1,") {
            Err(GvfError::Parse { offset, .. }) => assert_eq!(offset, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors() {
        for bad in ["", "x0", "y1", "3", "max()", "x1 +", "max(x1) x2", "1/0*x1", "(x1"] {
            assert!(
                matches!(parse_tropical(bad), Err(GvfError::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn subtraction_and_zero() {
        let t = p("max(x1,0) - max(x1,x2,0)");
        assert_eq!(t.arity(), 2);
        let v = t.eval(&[int(6), int(2)]).unwrap();
        assert_eq!(v, int(0));
        assert_eq!(p("x1 - x1").eval(&[int(5)]).unwrap(), int(0));
        assert_eq!(p("-3/2*x1").eval(&[int(2)]).unwrap(), int(-3));
    }

    #[test]
    fn printer_round_trips() {
        for s in [
            "min(x1, x2)",
            "1/2*max(x1, x1 + x2)",
            "max(x1, 0) - max(x1, x2, 0)",
            "-x1",
            "-2*x1 + x3",
            "x1 - 2*(x2 + x3)",
            "-(x1 + x2)",
            "2*-x1",
            "-(3*x1)",
            "(x1 + x2) + x3",
            "0",
            "0*x4",
            "min(-x1, -min(x2, 5/3*x1))",
        ] {
            let t = p(s);
            let printed = t.to_string();
            assert_eq!(p(&printed), t, "{s} -> {printed}");
        }
        let t = Term::Scale(
            -Rational::one(),
            Box::new(Term::Scale(int(2), Box::new(Term::Var(1)))),
        );
        assert_eq!(p(&t.to_string()), t);
        let t = Term::Sum(vec![Term::Var(1), t]);
        assert_eq!(p(&t.to_string()), t);
    }

    #[test]
    fn evaluates_in_logs() {
        let t = p("max(x1, x2)");
        let a = LogReal::log_abs_rational(&int(2)).unwrap();
        let b = LogReal::log_abs_rational(&int(3)).unwrap();
        assert_eq!(t.eval(&[a, b.clone()]).unwrap(), b);
    }
}
