//! Closed floating intervals with outward rounding.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::rational::{to_f64, Rational};

/// A closed interval `[lo, hi]` of reals, rounded outward after every operation.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn zero() -> Self {
        Self::point(0.0)
    }

    /// Encloses `x` with an absolute slack on either side.
    pub fn around(x: f64, slack: f64) -> Self {
        Interval {
            lo: down(x - slack),
            hi: up(x + slack),
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        let x = to_f64(q);
        if x.is_finite() && Rational::from_float(x).as_ref() == Some(q) {
            return Self::point(x);
        }
        Interval {
            lo: down(x),
            hi: up(x),
        }
    }

    pub fn from_integer(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(k) if k.unsigned_abs() < (1u64 << 53) => Self::point(k as f64),
            _ => Self::from_rational(&Rational::from_integer(n.clone())),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        Interval {
            lo: down(self.lo + o.lo),
            hi: up(self.hi + o.hi),
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.mul(&Self::point(c))
    }

    pub fn max(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.max(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    pub fn min(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.min(o.hi),
        }
    }

    pub fn abs(&self) -> Self {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval {
                lo: 0.0,
                hi: self.hi.max(-self.lo),
            }
        }
    }

    /// Natural logarithm; the lower end may be `-inf` when the interval touches 0.
    pub fn ln(&self) -> Self {
        assert!(self.hi > 0.0, "logarithm of a nonpositive interval");
        let lo = if self.lo > 0.0 {
            down(down(self.lo.ln()))
        } else {
            f64::NEG_INFINITY
        };
        Interval {
            lo,
            hi: up(up(self.hi.ln())),
        }
    }

    pub fn sqrt(&self) -> Self {
        assert!(self.lo >= 0.0, "square root of a negative interval");
        Interval {
            lo: down(self.lo.sqrt()).max(0.0),
            hi: up(self.hi.sqrt()),
        }
    }

    /// Union hull.
    pub fn hull(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.max(o.hi),
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

fn endpoint(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", endpoint(self.lo), endpoint(self.hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn outward_rounding_contains_exact_thirds() {
        let third = Interval::from_rational(&rat(1, 3));
        assert!(third.lo() < 1.0 / 3.0 + 1e-17 && third.hi() > 1.0 / 3.0 - 1e-17);
        let one = third.add(&third).add(&third);
        assert!(one.contains(1.0));
    }

    #[test]
    fn ln_encloses() {
        let l = Interval::point(2.0).ln();
        assert!(l.contains(std::f64::consts::LN_2));
        assert!(l.width() < 1e-15);
    }
}
