//! Integer polynomials: gcd, squarefree decomposition and Zassenhaus factorization.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor::is_prime;
use crate::arith::fp_poly::{factor_fp_poly, FpPoly};
use crate::arith::rational::Rational;

/// A polynomial with integer coefficients, low degree first, no trailing zeros.
///
/// Ordered by degree, then coefficients from the top.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl Ord for ZPoly {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&o.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(o.coeffs.iter().rev()))
    }
}

impl PartialOrd for ZPoly {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    pub fn div_scalar(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x / c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Value at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| {
            acc * x + Rational::from_integer(c.clone())
        })
    }

    /// `z^deg * f(1/z)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self` in `Z[z]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return None;
        }
        let lc = d.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let (c, rem) = r[k + dd].div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * b;
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Pseudo-remainder of `self` by `d`.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.coeffs.len() - 1;
        let lc = d.lead();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead();
            let shift = rd - dd;
            let mut next = r.scale(&lc).coeffs;
            for (j, b) in d.coeffs.iter().enumerate() {
                next[shift + j] -= &c * b;
            }
            r = Self::new(next).primitive_keep_sign();
        }
        r
    }

    fn primitive_keep_sign(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.div_scalar(&self.content())
    }

    /// Primitive gcd with positive leading coefficient (zero iff both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = o.primitive();
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Reduction mod `p`.
    pub fn to_fp(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        FpPoly::new(
            p,
            self.coeffs
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
                .collect(),
        )
    }

    /// Largest absolute coefficient.
    pub fn max_norm(&self) -> BigUint {
        self.coeffs
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_default()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }

    /// Formats the polynomial in the given variable name.
    pub fn fmt_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.magnitude();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({})", self.fmt_in("z"))
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_in("z"))
    }
}

/// Squarefree decomposition of a primitive polynomial (Yun): pairs
/// `(g_i, i)` with `f = prod g_i^i` up to sign, each `g_i` primitive.
pub fn squarefree_decomposition(f: &ZPoly) -> Vec<(ZPoly, u32)> {
    let f = f.primitive();
    let mut out = vec![];
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let mut c = df.div_exact(&a0).expect("gcd divides derivative");
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Full factorization over `Z`: `f = unit * prod g_i^{e_i}` with `unit`
/// the signed content and each `g_i` primitive, irreducible, positive leading.
pub fn factor_zpoly(f: &ZPoly) -> (BigInt, Vec<(ZPoly, u32)>) {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut unit = f.content();
    if f.lead().is_negative() {
        unit = -unit;
    }
    let mut factors = vec![];
    for (g, e) in squarefree_decomposition(f) {
        for h in factor_squarefree(&g) {
            factors.push((h, e));
        }
    }
    factors.sort();
    (unit, factors)
}

fn mignotte_bound(f: &ZPoly) -> BigInt {
    let n = f.degree().unwrap_or(0);
    let norm2: BigInt = f.coeffs.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    (BigInt::one() << n) * norm * f.lead().abs()
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn lift_fp(g: &FpPoly) -> ZPoly {
    ZPoly::new(g.coeffs().iter().map(|&c| BigInt::from(c)).collect())
}

/// `(f / p^j) mod p` for `f` divisible by `p^j`.
fn div_pow_to_fp(f: &ZPoly, pj: &BigInt, p: u64) -> FpPoly {
    ZPoly::new(f.coeffs.iter().map(|c| c / pj).collect()).to_fp(p)
}

/// Lifts `f = g*h mod p` (g monic) to `f = g*h mod p^k`.
fn hensel_lift(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, _, t) = g.ext_gcd(h);
    debug_assert!(one.is_one());
    let pb = BigInt::from(p);
    let mut gz = lift_fp(g);
    let mut hz = lift_fp(h);
    // keep the leading coefficient of h equal to lc(f) exactly
    let lc = f.lead();
    let hd = hz.degree().unwrap_or(0);
    let mut hc = hz.coeffs.clone();
    hc[hd] = lc.clone();
    hz = ZPoly::new(hc);
    let mut pj = pb.clone();
    for _ in 1..k {
        let err = f.sub(&gz.mul(&hz));
        let e = div_pow_to_fp(&err, &pj, p);
        let dg = t.mul(&e).rem(g);
        let dh = e.sub(&h.mul(&dg)).div_rem(g).0;
        gz = gz.add(&lift_fp(&dg).scale(&pj));
        hz = hz.add(&lift_fp(&dh).scale(&pj));
        pj *= &pb;
    }
    let m = pj;
    let red = |x: &ZPoly| ZPoly::new(x.coeffs.iter().map(|c| symmetric_mod(c, &m)).collect());
    (red(&gz), red(&hz))
}

fn choose_prime(f: &ZPoly) -> u64 {
    let lc = f.lead();
    let mut p = 2u64;
    loop {
        if is_prime(&BigUint::from(p)) && !(&lc % p).is_zero() {
            let fp = f.to_fp(p);
            if fp.gcd(&fp.derivative()).is_one() {
                return p;
            }
        }
        p += 1;
    }
}

/// Factors a primitive squarefree polynomial with positive leading coefficient.
fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let f = f.primitive();
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return if n == 1 { vec![f] } else { vec![] };
    }
    let p = choose_prime(&f);
    let fp = f.to_fp(p);
    let fac = factor_fp_poly(&fp).expect("nonzero mod p");
    let locals: Vec<FpPoly> = fac.factors.into_iter().map(|(g, _)| g).collect();
    if locals.len() == 1 {
        return vec![f];
    }
    let bound = mignotte_bound(&f) * 2;
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= bound {
        pk *= p;
        k += 1;
    }
    // lift the local factors one at a time
    let mut lifted = vec![];
    let mut rest = f.clone();
    for (i, g) in locals.iter().enumerate() {
        if i + 1 == locals.len() {
            // the remaining cofactor is lc * g
            lifted.push(monic_mod(&rest, &pk));
            break;
        }
        let rp = rest.to_fp(p);
        let h = rp.div_rem(g).0;
        let (gz, hz) = hensel_lift(&rest, g, &h, p, k);
        lifted.push(gz);
        rest = hz;
    }
    recombine(&f, lifted, &pk)
}

/// Monic associate of `f` modulo `m`.
fn monic_mod(f: &ZPoly, m: &BigInt) -> ZPoly {
    let lc = f.lead().mod_floor(m);
    let inv = mod_inverse(&lc, m);
    ZPoly::new(
        f.coeffs
            .iter()
            .map(|c| symmetric_mod(&(c * &inv), m))
            .collect(),
    )
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn recombine(f: &ZPoly, mut locals: Vec<ZPoly>, m: &BigInt) -> Vec<ZPoly> {
    let mut out = vec![];
    let mut f = f.clone();
    let mut size = 1;
    while 2 * size <= locals.len() {
        let mut found = false;
        for subset in subsets(locals.len(), size) {
            let lc = f.lead();
            let mut g = ZPoly::constant(lc.clone());
            for &i in &subset {
                g = g.mul(&locals[i]);
                g = ZPoly::new(g.coeffs.iter().map(|c| symmetric_mod(c, m)).collect());
            }
            let g = g.primitive();
            if let Some(q) = f.div_exact(&g) {
                out.push(g);
                f = q.primitive();
                let mut idx = 0;
                locals.retain(|_| {
                    let keep = !subset.contains(&idx);
                    idx += 1;
                    keep
                });
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.degree().unwrap_or(0) > 0 {
        out.push(f.primitive());
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Denominator-free associate of a rational-coefficient polynomial: returns
/// `(c, g)` with `f = c * g`, `g` primitive with positive leading coefficient.
pub fn primitive_of_rational(coeffs: &[Rational]) -> (Rational, ZPoly) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|q| (q * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let z = ZPoly::new(ints);
    if z.is_zero() {
        return (Rational::zero(), z);
    }
    let g = z.primitive();
    let c = Rational::new(
        z.lead() / g.lead(),
        BigInt::from_biguint(Sign::Plus, den.magnitude().clone()),
    );
    (c, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    fn expand(unit: &BigInt, fac: &[(ZPoly, u32)]) -> ZPoly {
        fac.iter()
            .fold(ZPoly::constant(unit.clone()), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }

    #[test]
    fn gcd_and_division() {
        let a = zp(&[-1, 0, 1]);
        let b = zp(&[1, 2, 1]);
        assert_eq!(a.gcd(&b), zp(&[1, 1]));
        assert_eq!(a.div_exact(&zp(&[1, 1])), Some(zp(&[-1, 1])));
        assert_eq!(a.div_exact(&zp(&[2, 1])), None);
    }

    #[test]
    fn squarefree_parts() {
        // (z-1)^2 (z+2)^3 * 3
        let f = zp(&[-1, 1]).pow(2).mul(&zp(&[2, 1]).pow(3)).scale(&BigInt::from(3));
        let sq = squarefree_decomposition(&f);
        assert_eq!(sq, vec![(zp(&[-1, 1]), 2), (zp(&[2, 1]), 3)]);
    }

    #[test]
    fn factor_cyclotomic_product() {
        // z^6 - 1 = (z-1)(z+1)(z^2+z+1)(z^2-z+1)
        let f = zp(&[-1, 0, 0, 0, 0, 0, 1]);
        let (u, fac) = factor_zpoly(&f);
        assert_eq!(u, BigInt::one());
        assert_eq!(fac.len(), 4);
        assert_eq!(expand(&u, &fac), f);
    }

    #[test]
    fn factor_swinnerton_dyer_like() {
        // z^4 + 1 is irreducible over Z but splits mod every prime
        let f = zp(&[1, 0, 0, 0, 1]);
        let (_, fac) = factor_zpoly(&f);
        assert_eq!(fac, vec![(f, 1)]);
    }

    #[test]
    fn factor_non_monic() {
        // (2z+3)(3z^2-5)(-1) * 6
        let f = zp(&[3, 2])
            .mul(&zp(&[-5, 0, 3]))
            .scale(&BigInt::from(-6));
        let (u, fac) = factor_zpoly(&f);
        assert_eq!(u, BigInt::from(-6));
        assert_eq!(fac, vec![(zp(&[3, 2]), 1), (zp(&[-5, 0, 3]), 1)]);
        assert_eq!(expand(&u, &fac), f);
    }

    #[test]
    fn primitive_from_rationals() {
        use crate::arith::rational::rat;
        let (c, g) = primitive_of_rational(&[rat(1, 2), rat(-3, 4)]);
        assert_eq!(g, zp(&[-2, 3]));
        assert_eq!(c, rat(-1, 4));
    }
}
