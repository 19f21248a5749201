//! Exact sign decisions for sums `sum_k c_k 2^(-eps e_k)` with rational `eps`.
//!
//! With `eps = u/w`, each term is a power of `y = 2^(-1/w)`, a root of the
//! irreducible `2 y^w - 1`. Reducing modulo that polynomial leaves a
//! polynomial of degree below `w` that vanishes at `y` only if it is
//! identically zero; otherwise its sign is found by bisecting a rational
//! enclosure of `y` until the bounds agree.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::rational::{rat_pow, to_f64, Rational};
use crate::error::{GvfError, Result};

fn split_eps(eps: &Rational) -> Result<(u64, u64)> {
    if !eps.is_positive() {
        return Err(GvfError::domain("epsilon must be positive"));
    }
    let u = eps.numer().to_u64().ok_or_else(|| GvfError::domain("epsilon too large"))?;
    let w = eps.denom().to_u64().ok_or_else(|| GvfError::domain("epsilon too fine"))?;
    Ok((u, w))
}

/// Sign of `sum_k c_k 2^(-eps e_k)`.
pub fn dyadic_sum_sign(terms: &[(BigInt, u64)], eps: &Rational) -> Result<i8> {
    let (u, w) = split_eps(eps)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    // reduce y^(u e) = y^(r) * (1/2)^q with u e = q w + r
    let mut red = vec![Rational::zero(); w as usize];
    for (c, e) in terms {
        let big_e = u as u128 * *e as u128;
        let q = (big_e / w as u128) as i64;
        let r = (big_e % w as u128) as usize;
        red[r] += Rational::from_integer(c.clone()) * rat_pow(&half, q);
    }
    if red.iter().all(|r| r.is_zero()) {
        return Ok(0);
    }
    if w == 1 {
        let s = &red[0];
        return Ok(if s.is_positive() { 1 } else { -1 });
    }
    let eval_bounds = |lo: &Rational, hi: &Rational| -> (Rational, Rational) {
        let mut low = Rational::zero();
        let mut high = Rational::zero();
        for (j, r) in red.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let a = rat_pow(lo, j as i64) * r;
            let b = rat_pow(hi, j as i64) * r;
            if r.is_positive() {
                low += a;
                high += b;
            } else {
                low += b;
                high += a;
            }
        }
        (low, high)
    };
    let mut lo = half.clone();
    let mut hi = Rational::one();
    loop {
        let (low, high) = eval_bounds(&lo, &hi);
        if low.is_positive() {
            return Ok(1);
        }
        if high.is_negative() {
            return Ok(-1);
        }
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        // y^w = 1/2 and y in (1/2, 1); mid^w is never exactly 1/2 for w >= 2
        if rat_pow(&mid, w as i64) < half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Exact comparison of `sum_k c_k 2^(-eps e_k)` (nonnegative `c_k`) with 1.
pub fn weighted_sum_cmp_one(terms: &[(BigUint, u64)], eps: &Rational) -> Result<Ordering> {
    let mut signed: Vec<(BigInt, u64)> = terms
        .iter()
        .map(|(c, e)| (BigInt::from(c.clone()), *e))
        .collect();
    signed.push((-BigInt::one(), 0));
    Ok(match dyadic_sum_sign(&signed, eps)? {
        1 => Ordering::Greater,
        -1 => Ordering::Less,
        _ => Ordering::Equal,
    })
}

/// Exact comparison of two weighted sums.
pub fn weighted_sum_cmp(
    a: &[(BigUint, u64)],
    b: &[(BigUint, u64)],
    eps: &Rational,
) -> Result<Ordering> {
    let mut signed: Vec<(BigInt, u64)> = a
        .iter()
        .map(|(c, e)| (BigInt::from(c.clone()), *e))
        .collect();
    signed.extend(b.iter().map(|(c, e)| (-BigInt::from(c.clone()), *e)));
    Ok(match dyadic_sum_sign(&signed, eps)? {
        1 => Ordering::Greater,
        -1 => Ordering::Less,
        _ => Ordering::Equal,
    })
}

/// Floating value of `sum_k c_k 2^(-eps e_k)`, for display only.
pub fn weighted_sum_approx(terms: &[(BigUint, u64)], eps: &Rational) -> f64 {
    let e = to_f64(eps);
    terms
        .iter()
        .map(|(c, k)| c.to_f64().unwrap_or(f64::INFINITY) * (-(e * *k as f64)).exp2())
        .sum()
}

/// `s < 2^eps`, decided as `s^w < 2^u`.
pub fn below_pow2(s: &BigUint, eps: &Rational) -> Result<bool> {
    let (u, w) = split_eps(eps)?;
    let lhs = s.pow(w as u32);
    let rhs = BigUint::one() << u as usize;
    Ok(lhs < rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn t(c: u64, e: u64) -> (BigUint, u64) {
        (BigUint::from(c), e)
    }

    #[test]
    fn integer_epsilon() {
        // 2 * 2^-2 = 1/2 < 1
        assert_eq!(weighted_sum_cmp_one(&[t(2, 1)], &int(2)).unwrap(), Ordering::Less);
        // 4 * 2^-2 = 1
        assert_eq!(weighted_sum_cmp_one(&[t(4, 1)], &int(2)).unwrap(), Ordering::Equal);
        assert_eq!(weighted_sum_cmp_one(&[t(5, 1)], &int(2)).unwrap(), Ordering::Greater);
    }

    #[test]
    fn fractional_epsilon() {
        // 2^(-1/2) + 2^(-1) ~ 1.207 > 1
        assert_eq!(
            weighted_sum_cmp_one(&[t(1, 1), t(1, 2)], &rat(1, 2)).unwrap(),
            Ordering::Greater
        );
        // 2 * 2^(-1) = 1 exactly, detected symbolically
        assert_eq!(weighted_sum_cmp_one(&[t(2, 2)], &rat(1, 2)).unwrap(), Ordering::Equal);
        // 2^(-1/3) ~ 0.7937 < 0.8 = 4/5: 5 * 2^(-1/3) vs 4
        let a = [t(5, 1)];
        let b = [t(4, 0)];
        assert_eq!(weighted_sum_cmp(&a, &b, &rat(1, 3)).unwrap(), Ordering::Less);
    }

    #[test]
    fn strict_row_bound() {
        assert!(below_pow2(&BigUint::from(3u32), &int(2)).unwrap());
        assert!(!below_pow2(&BigUint::from(4u32), &int(2)).unwrap());
        // 2^(3/2) ~ 2.83
        assert!(below_pow2(&BigUint::from(2u32), &rat(3, 2)).unwrap());
        assert!(!below_pow2(&BigUint::from(3u32), &rat(3, 2)).unwrap());
    }
}
