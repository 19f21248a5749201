//! Integer factorization and primality.
//!
//! Trial division by the primes below 10^6 peels off small factors; whatever
//! is left is split with Brent's variant of Pollard's rho and certified with
//! Miller-Rabin. The first 13 prime bases make Miller-Rabin deterministic below
//! 3.3 * 10^24; above that more bases are used and the answer is probabilistic.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::rational::Rational;
use crate::error::{GvfError, Result};

const TRIAL_LIMIT: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

/// A nonzero rational written as `sign * prod p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredRational {
    pub sign: i8,
    pub factors: BTreeMap<BigUint, i64>,
}

impl FactoredRational {
    pub fn of_integer(n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(GvfError::domain("cannot factor zero"));
        }
        let factors = factor_biguint(n.magnitude())
            .into_iter()
            .map(|(p, e)| (p, e as i64))
            .collect();
        Ok(FactoredRational {
            sign: if n.is_negative() { -1 } else { 1 },
            factors,
        })
    }

    pub fn of_rational(q: &Rational) -> Result<Self> {
        if q.is_zero() {
            return Err(GvfError::domain("cannot factor zero"));
        }
        let mut out = Self::of_integer(q.numer())?;
        for (p, e) in factor_biguint(q.denom().magnitude()) {
            *out.factors.entry(p).or_insert(0) -= e as i64;
        }
        out.factors.retain(|_, e| *e != 0);
        Ok(out)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, &e) in &self.factors {
            let pe = BigInt::from_biguint(Sign::Plus, p.pow(e.unsigned_abs() as u32));
            if e > 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        Rational::new(num * BigInt::from(self.sign), den)
    }
}

/// Factorization of a nonzero integer: sign and `prime -> exponent`.
pub fn factor_integer(n: &BigInt) -> Result<FactoredRational> {
    FactoredRational::of_integer(n)
}

/// Prime factorization of a positive integer (1 maps to the empty map).
pub fn factor_biguint(n: &BigUint) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return out;
    }
    let mut rest = n.clone();
    if let Some(small) = rest.to_u64() {
        let mut m = small;
        for &p in small_primes() {
            let p = p as u64;
            if p * p > m {
                break;
            }
            while m % p == 0 {
                *out.entry(BigUint::from(p)).or_insert(0) += 1;
                m /= p;
            }
        }
        if m > 1 {
            if m <= TRIAL_LIMIT as u64 * TRIAL_LIMIT as u64 || is_prime(&BigUint::from(m)) {
                *out.entry(BigUint::from(m)).or_insert(0) += 1;
                return out;
            }
            rest = BigUint::from(m);
        } else {
            return out;
        }
    } else {
        for &p in small_primes() {
            let pb = BigUint::from(p);
            loop {
                let (q, r) = rest.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                *out.entry(pb.clone()).or_insert(0) += 1;
            }
            if rest.is_one() {
                return out;
            }
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        if let Some((r, k)) = perfect_power(&m) {
            for _ in 0..k {
                stack.push(r.clone());
            }
            continue;
        }
        let d = pollard_brent(&m);
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    out
}

/// `Some((r, k))` with `r^k = n`, `k >= 2` maximal among tried exponents.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    (2..=bits).rev().find_map(|k| {
        let r = n.nth_root(k);
        (r > BigUint::one() && r.pow(k) == *n).then_some((r, k))
    })
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller-Rabin primality test (see module docs for the exactness range).
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    if let Some(small) = n.to_u32() {
        if small <= TRIAL_LIMIT {
            return small_primes().binary_search(&small).is_ok();
        }
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return *n == BigUint::from(p);
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let bound = BigUint::parse_bytes(b"3317044064679887385961981", 10).expect("constant");
    let bases: &[u32] = if *n < bound { &MR_BASES[..13] } else { &MR_BASES };
    'witness: for &a in bases {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial divisor of an odd composite `n`.
fn pollard_brent(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 64u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
    }
    unreachable!("rho cycles over all increments")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(u64, i64)]) -> BTreeMap<BigUint, i64> {
        pairs.iter().map(|&(p, e)| (BigUint::from(p), e)).collect()
    }

    #[test]
    fn factor_360() {
        let f = factor_integer(&BigInt::from(360)).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, map(&[(2, 3), (3, 2), (5, 1)]));
    }

    #[test]
    fn factor_minus_one() {
        let f = factor_integer(&BigInt::from(-1)).unwrap();
        assert_eq!(f.sign, -1);
        assert!(f.factors.is_empty());
    }

    #[test]
    fn factor_large_power_of_two_times_prime() {
        let n = (BigInt::one() << 31) * BigInt::from(7919);
        let f = factor_integer(&n).unwrap();
        assert_eq!(f.factors, map(&[(2, 31), (7919, 1)]));
        assert_eq!(f.value(), Rational::from_integer(n));
    }

    #[test]
    fn zero_is_rejected() {
        assert!(factor_integer(&BigInt::zero()).is_err());
    }

    #[test]
    fn semiprime_beyond_trial_division() {
        // 1000003 * 1000033, both above the trial limit
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(1_000_033u64);
        let f = factor_biguint(&(&p * &q));
        assert_eq!(f.len(), 2);
        assert_eq!(f[&p], 1);
        assert_eq!(f[&q], 1);
        let big_p = BigUint::parse_bytes(b"18446744073709551557", 10).unwrap();
        let f = factor_biguint(&(&big_p * &big_p * 3u32));
        assert_eq!(f[&big_p], 2);
    }

    #[test]
    fn primality() {
        assert!(is_prime(&BigUint::from(7919u32)));
        assert!(!is_prime(&BigUint::from(561u32)));
        assert!(is_prime(&BigUint::from(1_000_003u32)));
        // strong pseudoprime to bases 2..37 except 41
        let n = BigUint::parse_bytes(b"3825123056546413051", 10).unwrap();
        assert!(!is_prime(&n));
    }
}
