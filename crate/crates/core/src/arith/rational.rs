//! Helpers around `BigRational`, the rational type used throughout the crate.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GvfError, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent of the prime `p` in a nonzero integer.
pub fn ord_int(n: &BigInt, p: &BigUint) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `ord_p` of a nonzero rational.
pub fn ord_rat(q: &Rational, p: &BigUint) -> i64 {
    ord_int(q.numer(), p) - ord_int(q.denom(), p)
}

/// Parses `[-]digits[/digits]`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = n
        .parse()
        .map_err(|_| GvfError::parse(0, format!("not a rational: {text:?}")))?;
    let den: BigInt = d
        .parse()
        .map_err(|_| GvfError::parse(0, format!("not a rational: {text:?}")))?;
    if den.is_zero() {
        return Err(GvfError::parse(0, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text `n` or `n/d`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Always `n/d`, used by the JSON schema.
pub fn fmt_rational_full(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// `2^k` as a rational, `k` of either sign.
pub fn pow2(k: i64) -> Rational {
    let p = BigInt::one() << (k.unsigned_abs() as usize);
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

pub fn rat_pow(q: &Rational, e: i64) -> Rational {
    let mut base = if e < 0 { q.recip() } else { q.clone() };
    let mut e = e.unsigned_abs();
    let mut acc = Rational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(fmt_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(fmt_rational(&int(5)), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuations() {
        let p = BigUint::from(2u32);
        assert_eq!(ord_rat(&rat(12, 5), &p), 2);
        assert_eq!(ord_rat(&rat(3, 8), &p), -3);
    }
}
