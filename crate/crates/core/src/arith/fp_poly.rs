//! Polynomials over a prime field and their factorization.
//!
//! Factorization runs the classical pipeline: squarefree decomposition,
//! distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting
//! (trace map in characteristic 2). The randomness comes from a seeded
//! ChaCha stream so results are reproducible.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GvfError, Result};

pub const DEFAULT_FACTOR_SEED: u64 = 0x6776_6600;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// A polynomial over `F_p`, coefficients low degree first, no trailing zeros.
///
/// Ordered by characteristic, then degree, then coefficients from the top.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl Ord for FpPoly {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.p
            .cmp(&o.p)
            .then(self.coeffs.len().cmp(&o.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(o.coeffs.iter().rev()))
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, coeffs: c }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let c = coeffs
            .iter()
            .map(|&x| x.rem_euclid(p as i64) as u64)
            .collect();
        Self::new(p, c)
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    /// The generator `t`.
    pub fn t(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.p))
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(
            self.p,
            self.coeffs.iter().map(|&x| mul_mod(x, c, self.p)).collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = o.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % self.p
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs.iter().map(|&x| (self.p - x) % self.p).collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(p), self.clone());
        }
        let inv = inv_mod(d.lead(), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod(c, b, p)) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.lead(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, i as u64 % self.p, self.p))
            .collect();
        Self::new(self.p, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// For `f` with `f' = 0`, returns `g` with `g^p = f`.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        let c = self.coeffs.iter().step_by(p).copied().collect();
        Self::new(self.p, c)
    }

    /// `true` iff irreducible over `F_p` (Rabin's test).
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let x = Self::t(self.p);
        let mut prime_divs = vec![];
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                prime_divs.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            prime_divs.push(m);
        }
        let frob = |k: usize| {
            let mut h = x.clone();
            for _ in 0..k {
                h = h.pow_mod(self.p as u128, &f);
            }
            h
        };
        if !frob(n).sub(&x).rem(&f).is_zero() {
            return false;
        }
        prime_divs
            .iter()
            .all(|&q| frob(n / q).sub(&x).gcd(&f).is_one())
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[{}]({})", self.p, self)
    }
}

impl fmt::Display for FpPoly {
    /// Prints as a polynomial in `t`, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Result of [`factor_fp_poly`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpFactorization {
    pub unit: u64,
    /// Monic irreducible factors with multiplicities, sorted.
    pub factors: Vec<(FpPoly, u32)>,
}

impl FpFactorization {
    pub fn expand(&self, p: u64) -> FpPoly {
        self.factors
            .iter()
            .fold(FpPoly::constant(p, self.unit), |acc, (g, e)| {
                acc.mul(&g.pow(*e))
            })
    }
}

pub fn factor_fp_poly(f: &FpPoly) -> Result<FpFactorization> {
    factor_fp_poly_seeded(f, DEFAULT_FACTOR_SEED)
}

pub fn factor_fp_poly_seeded(f: &FpPoly, seed: u64) -> Result<FpFactorization> {
    if f.is_zero() {
        return Err(GvfError::domain("cannot factor the zero polynomial"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = f.lead();
    let mut factors = vec![];
    for (sq, mult) in squarefree(&f.monic()) {
        for (g, d) in distinct_degree(&sq) {
            let mut parts = vec![];
            equal_degree(&g, d, &mut rng, &mut parts);
            factors.extend(parts.into_iter().map(|h| (h, mult)));
        }
    }
    factors.sort();
    // merge equal factors coming from different squarefree layers (cannot
    // happen for a correct decomposition, kept as a cheap normalization)
    let mut merged: Vec<(FpPoly, u32)> = vec![];
    for (g, e) in factors {
        match merged.last_mut() {
            Some((h, m)) if *h == g => *m += e,
            _ => merged.push((g, e)),
        }
    }
    Ok(FpFactorization {
        unit,
        factors: merged,
    })
}

/// Squarefree decomposition of a monic polynomial: `f = prod g_i^{m_i}`.
fn squarefree(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = vec![];
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree(&f.pth_root()) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if !z.is_one() {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if !c.is_one() {
        for (g, m) in squarefree(&c.pth_root()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of equal-degree irreducibles.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let x = FpPoly::t(p);
    let mut out = vec![];
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p as u128, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if let Some(n) = rest.degree() {
        if n > 0 {
            out.push((rest, n));
        }
    }
    out
}

fn random_poly(p: u64, deg: usize, rng: &mut ChaCha8Rng) -> FpPoly {
    FpPoly::new(p, (0..=deg).map(|_| rng.gen_range(0..p)).collect())
}

fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    let n = f.degree().unwrap_or(0);
    if n == d {
        out.push(f.monic());
        return;
    }
    let p = f.p;
    loop {
        let a = random_poly(p, n - 1, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut acc = a.rem(f);
            let mut pow = acc.clone();
            for _ in 1..d {
                pow = pow.mul(&pow).rem(f);
                acc = acc.add(&pow);
            }
            acc
        } else {
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            a.pow_mod(e, f).sub(&FpPoly::one(p))
        };
        let g = b.gcd(f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = f.div_rem(&g).0;
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// An element of `F_p(t)`: reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpRatio {
    num: FpPoly,
    den: FpPoly,
}

impl FpRatio {
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self> {
        if num.p != den.p {
            return Err(GvfError::mismatch(
                format!("F_{}", num.p),
                format!("F_{}", den.p),
            ));
        }
        if den.is_zero() {
            return Err(GvfError::domain("zero denominator"));
        }
        if num.is_zero() {
            return Ok(Self::zero(num.p));
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let inv = inv_mod(den.lead(), den.p);
        Ok(FpRatio {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    pub fn from_poly(num: FpPoly) -> Self {
        let p = num.p;
        FpRatio {
            num,
            den: FpPoly::one(p),
        }
    }

    pub fn zero(p: u64) -> Self {
        Self::from_poly(FpPoly::zero(p))
    }

    pub fn one(p: u64) -> Self {
        Self::from_poly(FpPoly::one(p))
    }

    pub fn t(p: u64) -> Self {
        Self::from_poly(FpPoly::t(p))
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::from_poly(FpPoly::constant(p, c))
    }

    pub fn characteristic(&self) -> u64 {
        self.num.p
    }

    pub fn num(&self) -> &FpPoly {
        &self.num
    }

    pub fn den(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(n, self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        FpRatio {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(GvfError::domain("inverse of zero"));
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Order of vanishing at the monic irreducible `pi`.
    pub fn ord(&self, pi: &FpPoly) -> i64 {
        fn ord_poly(f: &FpPoly, pi: &FpPoly) -> i64 {
            let mut f = f.clone();
            let mut k = 0;
            loop {
                let (q, r) = f.div_rem(pi);
                if !r.is_zero() {
                    return k;
                }
                f = q;
                k += 1;
            }
        }
        ord_poly(&self.num, pi) - ord_poly(&self.den, pi)
    }

    /// `deg num - deg den`.
    pub fn degree(&self) -> i64 {
        self.num.degree().unwrap_or(0) as i64 - self.den.degree().unwrap_or(0) as i64
    }
}

impl fmt::Debug for FpRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpRatio[{}]({})", self.characteristic(), self)
    }
}

impl fmt::Display for FpRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.coeffs.iter().filter(|&&c| c != 0).count() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t2_t_1_over_f2_is_irreducible() {
        let f = FpPoly::from_i64(2, &[1, 1, 1]);
        let fac = factor_fp_poly(&f).unwrap();
        assert_eq!(fac.unit, 1);
        assert_eq!(fac.factors, vec![(f.clone(), 1)]);
        // exhaustive: no roots, and no degree-1 divisor
        assert!((0..2).all(|x| f.eval(x) != 0));
    }

    #[test]
    fn t2_minus_1_over_f3() {
        let f = FpPoly::from_i64(3, &[-1, 0, 1]);
        let fac = factor_fp_poly(&f).unwrap();
        assert_eq!(
            fac.factors,
            vec![
                (FpPoly::from_i64(3, &[1, 1]), 1),
                (FpPoly::from_i64(3, &[2, 1]), 1)
            ]
        );
        assert_eq!(fac.expand(3), f);
    }

    #[test]
    fn t_over_f5() {
        let f = FpPoly::t(5);
        let fac = factor_fp_poly(&f).unwrap();
        assert_eq!(fac.factors, vec![(f, 1)]);
    }

    #[test]
    fn zero_is_rejected() {
        assert!(factor_fp_poly(&FpPoly::zero(3)).is_err());
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        // (t+1)^3 * (t^2+1) over F_3, where (t+1)^3 = t^3 + 1 has zero derivative
        let a = FpPoly::from_i64(3, &[1, 1]);
        let b = FpPoly::from_i64(3, &[1, 0, 1]);
        let f = a.pow(3).mul(&b).scale(2);
        let fac = factor_fp_poly(&f).unwrap();
        assert_eq!(fac.unit, 2);
        assert_eq!(fac.factors, vec![(a, 3), (b, 1)]);
        assert_eq!(fac.expand(3), f);
    }

    #[test]
    fn ratio_normalizes() {
        let p = 3;
        let num = FpPoly::from_i64(p, &[-1, 0, 1]);
        let den = FpPoly::from_i64(p, &[2, 2]);
        let r = FpRatio::new(num, den).unwrap();
        assert_eq!(r.den().coeffs(), &[1]);
        assert_eq!(r.num(), &FpPoly::from_i64(p, &[1, 2]));
        assert_eq!(r.to_string(), "(2*t + 1)");
    }

    #[test]
    fn ext_gcd_identity() {
        let a = FpPoly::from_i64(7, &[3, 0, 1, 5]);
        let b = FpPoly::from_i64(7, &[1, 2, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn rabin_irreducibility() {
        assert!(FpPoly::from_i64(2, &[1, 1, 0, 0, 1]).is_irreducible());
        assert!(!FpPoly::from_i64(2, &[1, 0, 1]).is_irreducible());
    }
}
