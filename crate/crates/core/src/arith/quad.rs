//! Arithmetic in a quadratic field `Q(sqrt d)` with exact sign decisions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::rational::{fmt_rational, Rational};
use crate::error::{GvfError, Result};

/// `true` iff `d` is squarefree, nonzero and not 1.
pub fn is_valid_discriminant_root(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let n = d.unsigned_abs();
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

/// `a + b*sqrt(d)` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElem {
    d: i64,
    a: Rational,
    b: Rational,
}

impl QuadElem {
    pub fn new(d: i64, a: Rational, b: Rational) -> Result<Self> {
        if !is_valid_discriminant_root(d) {
            return Err(GvfError::domain(format!(
                "d = {d} must be squarefree and different from 0 and 1"
            )));
        }
        Ok(QuadElem { d, a, b })
    }

    /// Constructor for an already validated `d`.
    pub(crate) fn raw(d: i64, a: Rational, b: Rational) -> Self {
        QuadElem { d, a, b }
    }

    pub fn from_rational(d: i64, a: Rational) -> Self {
        QuadElem {
            d,
            a,
            b: Rational::zero(),
        }
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_d(d: i64) -> Self {
        QuadElem {
            d,
            a: Rational::zero(),
            b: Rational::one(),
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.d, o.d, "quadratic elements over different fields");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        QuadElem::raw(self.d, &self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        QuadElem::raw(self.d, &self.a - &o.a, &self.b - &o.b)
    }

    pub fn neg(&self) -> Self {
        QuadElem::raw(self.d, -&self.a, -&self.b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let d = Rational::from_integer(BigInt::from(self.d));
        QuadElem::raw(
            self.d,
            &self.a * &o.a + &d * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }

    pub fn scale(&self, q: &Rational) -> Self {
        QuadElem::raw(self.d, &self.a * q, &self.b * q)
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conj(&self) -> Self {
        QuadElem::raw(self.d, self.a.clone(), -&self.b)
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        let d = Rational::from_integer(BigInt::from(self.d));
        &self.a * &self.a - d * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(GvfError::domain("inverse of zero"));
        }
        let n = self.norm();
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = QuadElem::from_rational(self.d, Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Floating value under the embedding `sqrt d -> +sqrt d` (real fields only).
    pub fn to_f64(&self) -> f64 {
        use crate::arith::rational::to_f64;
        to_f64(&self.a) + to_f64(&self.b) * (self.d as f64).sqrt()
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadElem[{}]({})", self.d, self)
    }
}

impl fmt::Display for QuadElem {
    /// Prints as `a+b*sqrt(d)`, omitting zero parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("sqrt({})", self.d);
        let bpart = |b: &Rational| {
            if b.is_one() {
                root.clone()
            } else {
                format!("{}*{}", fmt_rational(b), root)
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) if self.b == -Rational::one() => write!(f, "-{root}"),
            (true, false) => write!(f, "{}", bpart(&self.b)),
            (false, false) => {
                if self.b.is_negative() {
                    let nb = -&self.b;
                    write!(f, "{}-{}", fmt_rational(&self.a), bpart(&nb))
                } else {
                    write!(f, "{}+{}", fmt_rational(&self.a), bpart(&self.b))
                }
            }
        }
    }
}

fn sign_of(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact sign of `x` under the embedding selected by `embedding` (1 sends
/// `sqrt d` to the positive root, 2 to the negative one). For imaginary
/// fields there is no real sign and the result is 0 for zero, +1 otherwise,
/// which is the sign of `|x|^2`.
pub fn quad_sign(x: &QuadElem, embedding: u8) -> i8 {
    if x.d < 0 {
        return if x.is_zero() { 0 } else { 1 };
    }
    let sa = sign_of(&x.a);
    let sb = sign_of(&x.b) * if embedding == 2 { -1 } else { 1 };
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let d = Rational::from_integer(BigInt::from(x.d));
    let a2 = &x.a * &x.a;
    let db2 = d * &x.b * &x.b;
    // a^2 = d b^2 is impossible for squarefree d != 1 and b != 0
    if a2 > db2 {
        sa
    } else {
        sb
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn q(d: i64, a: i64, b: i64) -> QuadElem {
        QuadElem::new(d, int(a), int(b)).unwrap()
    }

    #[test]
    fn known_signs() {
        assert_eq!(quad_sign(&q(2, 3, -2), 1), 1);
        assert_eq!(quad_sign(&q(2, 1, -1), 1), -1);
        assert_eq!(quad_sign(&q(2, 0, 0), 1), 0);
        assert_eq!(quad_sign(&q(2, 1, -1), 2), 1);
    }

    #[test]
    fn field_identities() {
        let x = q(2, 1, 1);
        assert_eq!(x.mul(&x), q(2, 3, 2));
        assert_eq!(x.norm(), int(-1));
        let y = QuadElem::new(-1, rat(1, 2), rat(-3, 4)).unwrap();
        assert_eq!(y.mul(&y.inv().unwrap()), q(-1, 1, 0));
        assert_eq!(y.pow(-2).unwrap().mul(&y.pow(2).unwrap()), q(-1, 1, 0));
    }

    #[test]
    fn validation_and_display() {
        assert!(QuadElem::new(4, int(1), int(1)).is_err());
        assert!(QuadElem::new(1, int(1), int(1)).is_err());
        assert_eq!(q(-1, 2, -1).to_string(), "2-sqrt(-1)");
        assert_eq!(q(5, 0, 3).to_string(), "3*sqrt(5)");
    }
}
