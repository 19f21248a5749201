//! Exact logarithmic reals.
//!
//! A [`LogReal`] is a formal sum `u + sum q_p log p + sum r_k log|g_k|`
//! with rational coefficients, primes `p`, and quadratic integers `g_k`
//! kept in a canonical form (coprime nonnegative coordinates, so that
//! `g_k > 1` under the embedding `sqrt d -> +sqrt d`). The unit part `u` carries degree units for
//! function fields and orders at closed points; it may not be mixed with
//! logarithms in comparisons.
//!
//! Comparisons are exact: after a conservative floating filter, the sign
//! of `sum c_i log x_i` is decided by clearing denominators and comparing
//! `|prod x_i^{D c_i}|` with 1 in exact arithmetic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor::FactoredRational;
use crate::arith::interval::Interval;
use crate::arith::quad::{quad_sign, QuadElem};
use crate::arith::rational::{fmt_rational, rat_pow, to_f64, Rational};
use crate::error::{GvfError, Result};

/// A canonical quadratic integer `a + b sqrt(d)`: `d > 0`, `gcd(a, b) = 1`,
/// `a >= 0`, `b > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgKey {
    pub d: i64,
    pub a: BigInt,
    pub b: BigInt,
}

impl AlgKey {
    pub fn to_quad(&self) -> QuadElem {
        QuadElem::raw(
            self.d,
            Rational::from_integer(self.a.clone()),
            Rational::from_integer(self.b.clone()),
        )
    }

    fn ln_interval(&self) -> Interval {
        let s = Interval::point(self.d as f64).sqrt();
        let v = Interval::from_integer(&self.a).add(&Interval::from_integer(&self.b).mul(&s));
        v.abs().ln()
    }
}

/// Exact real number in the span of logarithms (see module docs).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogReal {
    unit: Rational,
    primes: BTreeMap<BigUint, Rational>,
    algs: BTreeMap<AlgKey, Rational>,
}

fn add_entry<K: Ord>(map: &mut BTreeMap<K, Rational>, k: K, q: Rational) {
    if q.is_zero() {
        return;
    }
    *map.entry(k).or_insert_with(Rational::zero) += q;
}

fn prune<K: Ord + Clone>(map: &mut BTreeMap<K, Rational>) {
    map.retain(|_, q| !q.is_zero());
}

impl LogReal {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A pure rational value in units (degrees, orders).
    pub fn units(q: Rational) -> Self {
        LogReal {
            unit: q,
            ..Default::default()
        }
    }

    /// `q * log p`.
    pub fn log_prime(p: BigUint, q: Rational) -> Self {
        let mut out = Self::zero();
        if !q.is_zero() && !p.is_one() {
            out.primes.insert(p, q);
        }
        out
    }

    /// `log |r|` for a nonzero rational.
    pub fn log_abs_rational(r: &Rational) -> Result<Self> {
        let f = FactoredRational::of_rational(r)?;
        let mut out = Self::zero();
        for (p, e) in f.factors {
            out.primes.insert(p, Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// `log |x|` for nonzero `x` in a quadratic field, under the embedding
    /// `sqrt d -> +sqrt d` when `d > 0`, and as `(1/2) log N(x)` when `d < 0`.
    pub fn log_abs_quad(x: &QuadElem) -> Result<Self> {
        if x.is_zero() {
            return Err(GvfError::domain("logarithm of zero"));
        }
        if x.is_rational() {
            return Self::log_abs_rational(x.a());
        }
        if x.d() < 0 {
            return Ok(Self::log_abs_rational(&x.norm())?.scale(&Rational::new(1.into(), 2.into())));
        }
        let den = x.a().denom().lcm(x.b().denom());
        let ai = (x.a() * Rational::from_integer(den.clone())).to_integer();
        let bi = (x.b() * Rational::from_integer(den.clone())).to_integer();
        let g = ai.gcd(&bi);
        let content = Rational::new(g.clone(), den);
        let mut out = Self::log_abs_rational(&content)?;
        if ai.is_zero() {
            // log|sqrt d| = (1/2) log d
            let d = Rational::from_integer(x.d().into());
            return Ok(out.add(&Self::log_abs_rational(&d)?.scale(&Rational::new(1.into(), 2.into()))));
        }
        let (key, coeff, extra) = canonical_alg(x.d(), ai / &g, bi / &g);
        out = out.add(&extra);
        add_entry(&mut out.algs, key, coeff);
        prune(&mut out.algs);
        Ok(out)
    }

    pub fn unit_part(&self) -> &Rational {
        &self.unit
    }

    pub fn prime_part(&self) -> &BTreeMap<BigUint, Rational> {
        &self.primes
    }

    pub fn alg_part(&self) -> &BTreeMap<AlgKey, Rational> {
        &self.algs
    }

    /// `true` iff the value is a pure number of units.
    pub fn is_units(&self) -> bool {
        self.primes.is_empty() && self.algs.is_empty()
    }

    /// Formal zero test; exact because the canonical form is checked by [`LogReal::sign`].
    pub fn is_formally_zero(&self) -> bool {
        self.unit.is_zero() && self.primes.is_empty() && self.algs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.unit += &o.unit;
        for (p, q) in &o.primes {
            add_entry(&mut out.primes, p.clone(), q.clone());
        }
        for (k, q) in &o.algs {
            add_entry(&mut out.algs, k.clone(), q.clone());
        }
        prune(&mut out.primes);
        prune(&mut out.algs);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LogReal {
            unit: &self.unit * c,
            primes: self.primes.iter().map(|(p, q)| (p.clone(), q * c)).collect(),
            algs: self.algs.iter().map(|(k, q)| (k.clone(), q * c)).collect(),
        }
    }

    /// Floating approximation.
    pub fn approx(&self) -> f64 {
        self.to_interval().mid()
    }

    /// Certified enclosure.
    pub fn to_interval(&self) -> Interval {
        let mut acc = Interval::from_rational(&self.unit);
        for (p, q) in &self.primes {
            let lp = Interval::from_integer(&BigInt::from_biguint(Sign::Plus, p.clone())).ln();
            acc = acc.add(&Interval::from_rational(q).mul(&lp));
        }
        for (k, q) in &self.algs {
            acc = acc.add(&Interval::from_rational(q).mul(&k.ln_interval()));
        }
        acc
    }

    /// Exact sign.
    pub fn sign(&self) -> Result<i8> {
        if self.is_formally_zero() {
            return Ok(0);
        }
        if self.is_units() {
            return Ok(if self.unit.is_positive() { 1 } else { -1 });
        }
        if !self.unit.is_zero() {
            return Err(GvfError::domain(
                "cannot compare a value mixing degree units with logarithms",
            ));
        }
        let mut ds = self.algs.keys().map(|k| k.d);
        if let Some(d0) = ds.next() {
            if ds.any(|d| d != d0) {
                return Err(GvfError::domain(
                    "values from two different quadratic fields cannot be compared",
                ));
            }
        }
        let iv = self.to_interval();
        if iv.lo() > 0.0 {
            return Ok(1);
        }
        if iv.hi() < 0.0 {
            return Ok(-1);
        }
        Ok(self.exact_sign())
    }

    fn exact_sign(&self) -> i8 {
        let den = self
            .primes
            .values()
            .chain(self.algs.values())
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let dq = Rational::from_integer(den);
        let mut r = Rational::one();
        for (p, q) in &self.primes {
            let e = (q * &dq).to_integer().to_i64().expect("exponent fits");
            let pr = Rational::from_integer(BigInt::from_biguint(Sign::Plus, p.clone()));
            r *= rat_pow(&pr, e);
        }
        if self.algs.is_empty() {
            return match r.abs().cmp(&Rational::one()) {
                Ordering::Greater => 1,
                Ordering::Less => -1,
                Ordering::Equal => 0,
            };
        }
        let mut x: Option<QuadElem> = None;
        for (k, q) in &self.algs {
            let e = (q * &dq).to_integer().to_i64().expect("exponent fits");
            let g = k.to_quad().pow(e).expect("nonzero");
            x = Some(match x {
                None => g,
                Some(acc) => acc.mul(&g),
            });
        }
        let x = x.expect("nonempty").scale(&r);
        let one = QuadElem::from_rational(x.d(), Rational::one());
        let above = quad_sign(&x.sub(&one), 1);
        let below = quad_sign(&x.add(&one), 1);
        if above > 0 || below < 0 {
            1
        } else if above == 0 || below == 0 {
            0
        } else {
            -1
        }
    }

    /// Exact equality of the real values; formal equality is only sufficient.
    pub fn exact_eq(&self, o: &Self) -> Result<bool> {
        Ok(self == o || self.sub(o).sign()? == 0)
    }

    /// Exact comparison (see [`LogReal::sign`] for the error cases).
    pub fn compare(&self, o: &Self) -> Result<Ordering> {
        Ok(match self.sub(o).sign()? {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    /// `q` with `self = q * o`, when the two are formally proportional.
    pub fn ratio(&self, o: &Self) -> Option<Rational> {
        let q = if !o.unit.is_zero() {
            &self.unit / &o.unit
        } else if let Some((p, c)) = o.primes.iter().next() {
            self.primes.get(p).cloned().unwrap_or_else(Rational::zero) / c
        } else if let Some((k, c)) = o.algs.iter().next() {
            self.algs.get(k).cloned().unwrap_or_else(Rational::zero) / c
        } else {
            return None;
        };
        (o.scale(&q) == *self).then_some(q)
    }

    /// Exact value as `q * log 2` when that is the whole content.
    pub fn as_multiple_of_log(&self, p: &BigUint) -> Option<Rational> {
        if !self.unit.is_zero() || !self.algs.is_empty() {
            return None;
        }
        match self.primes.len() {
            0 => Some(Rational::zero()),
            1 => self.primes.get(p).cloned(),
            _ => None,
        }
    }
}

/// Canonical form of `a + b sqrt d` (coprime, `b != 0`, `d > 0`): returns
/// `(key, c, r)` with `log|a + b sqrt d| = c log|key| + r`. The key is
/// `|a| + |b| sqrt d`, so an element and its conjugate share a key.
fn canonical_alg(d: i64, a: BigInt, b: BigInt) -> (AlgKey, Rational, LogReal) {
    let same_sign = a.is_zero() || a.sign() == b.sign();
    let key = AlgKey {
        d,
        a: a.abs(),
        b: b.abs(),
    };
    if same_sign {
        return (key, Rational::one(), LogReal::zero());
    }
    // ||a| - |b| sqrt d| = |N| / key
    let n = key.to_quad().norm();
    let corr = LogReal::log_abs_rational(&n).expect("nonzero norm");
    (key, -Rational::one(), corr)
}

impl fmt::Debug for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogReal({self})")
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        if !self.unit.is_zero() {
            parts.push(fmt_rational(&self.unit));
        }
        for (p, q) in &self.primes {
            parts.push(format!("{}*log({p})", fmt_rational(q)));
        }
        for (k, q) in &self.algs {
            parts.push(format!(
                "{}*log|{}|",
                fmt_rational(q),
                k.to_quad()
            ));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// An element of `R` extended by `+inf` and `-inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtLogReal {
    Finite(LogReal),
    PosInf,
    NegInf,
}

impl From<LogReal> for ExtLogReal {
    fn from(x: LogReal) -> Self {
        ExtLogReal::Finite(x)
    }
}

impl ExtLogReal {
    pub fn zero() -> Self {
        ExtLogReal::Finite(LogReal::zero())
    }

    pub fn finite(&self) -> Option<&LogReal> {
        match self {
            ExtLogReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtLogReal::Finite(_))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        use ExtLogReal::*;
        match (self, o) {
            (Finite(a), Finite(b)) => Ok(Finite(a.add(b))),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                Err(GvfError::Undefined("(-inf) + (+inf)".into()))
            }
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }

    pub fn neg(&self) -> Self {
        use ExtLogReal::*;
        match self {
            Finite(a) => Finite(a.neg()),
            PosInf => NegInf,
            NegInf => PosInf,
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        use ExtLogReal::*;
        match self {
            Finite(a) => Ok(Finite(a.scale(c))),
            _ if c.is_zero() => Err(GvfError::Undefined("0 * inf".into())),
            _ if c.is_negative() => Ok(self.neg()),
            _ => Ok(self.clone()),
        }
    }

    pub fn compare(&self, o: &Self) -> Result<Ordering> {
        use ExtLogReal::*;
        Ok(match (self, o) {
            (Finite(a), Finite(b)) => a.compare(b)?,
            (PosInf, PosInf) | (NegInf, NegInf) => Ordering::Equal,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
        })
    }

    pub fn sign(&self) -> Result<i8> {
        match self {
            ExtLogReal::Finite(a) => a.sign(),
            ExtLogReal::PosInf => Ok(1),
            ExtLogReal::NegInf => Ok(-1),
        }
    }

    pub fn max(self, o: Self) -> Result<Self> {
        Ok(if self.compare(&o)? == Ordering::Less { o } else { self })
    }

    pub fn min(self, o: Self) -> Result<Self> {
        Ok(if self.compare(&o)? == Ordering::Greater { o } else { self })
    }

    pub fn max_of(items: impl IntoIterator<Item = Self>) -> Result<Self> {
        items.into_iter().try_fold(ExtLogReal::NegInf, |acc, x| acc.max(x))
    }

    pub fn min_of(items: impl IntoIterator<Item = Self>) -> Result<Self> {
        items.into_iter().try_fold(ExtLogReal::PosInf, |acc, x| acc.min(x))
    }

    pub fn approx(&self) -> f64 {
        match self {
            ExtLogReal::Finite(a) => a.approx(),
            ExtLogReal::PosInf => f64::INFINITY,
            ExtLogReal::NegInf => f64::NEG_INFINITY,
        }
    }

    pub fn to_interval(&self) -> Interval {
        match self {
            ExtLogReal::Finite(a) => a.to_interval(),
            ExtLogReal::PosInf => Interval::point(f64::INFINITY),
            ExtLogReal::NegInf => Interval::point(f64::NEG_INFINITY),
        }
    }
}

impl fmt::Display for ExtLogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtLogReal::Finite(a) => write!(f, "{a}"),
            ExtLogReal::PosInf => write!(f, "+inf"),
            ExtLogReal::NegInf => write!(f, "-inf"),
        }
    }
}

/// A value that is exact where possible and a certified interval otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(ExtLogReal),
    Approx(Interval),
}

impl Quantity {
    pub fn exact(&self) -> Option<&ExtLogReal> {
        match self {
            Quantity::Exact(x) => Some(x),
            Quantity::Approx(_) => None,
        }
    }

    pub fn to_interval(&self) -> Interval {
        match self {
            Quantity::Exact(x) => x.to_interval(),
            Quantity::Approx(i) => *i,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Quantity::Exact(x) => x.approx(),
            Quantity::Approx(i) => i.mid(),
        }
    }
}

impl From<ExtLogReal> for Quantity {
    fn from(x: ExtLogReal) -> Self {
        Quantity::Exact(x)
    }
}

impl From<LogReal> for Quantity {
    fn from(x: LogReal) -> Self {
        Quantity::Exact(ExtLogReal::Finite(x))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(x) => write!(f, "{x}"),
            Quantity::Approx(i) => write!(f, "{i}"),
        }
    }
}

/// Formal tensor `x (x) y` over the log basis, used for exact ratio checks:
/// `x/y = z/w` holds whenever `x (x) w = z (x) y` formally.
pub fn formal_tensor(x: &LogReal, y: &LogReal) -> BTreeMap<(String, String), Rational> {
    let basis = |v: &LogReal| -> Vec<(String, Rational)> {
        let mut out = vec![];
        if !v.unit.is_zero() {
            out.push(("1".to_string(), v.unit.clone()));
        }
        for (p, q) in &v.primes {
            out.push((format!("p{p}"), q.clone()));
        }
        for (k, q) in &v.algs {
            out.push((format!("a{}:{}:{}", k.d, k.a, k.b), q.clone()));
        }
        out
    };
    let mut t: BTreeMap<(String, String), Rational> = BTreeMap::new();
    for (bx, qx) in basis(x) {
        for (by, qy) in basis(y) {
            // symmetrize so that the tensor is independent of argument order
            let key = if bx <= by {
                (bx.clone(), by.clone())
            } else {
                (by.clone(), bx.clone())
            };
            *t.entry(key).or_insert_with(Rational::zero) += &qx * &qy;
        }
    }
    t.retain(|_, q| !q.is_zero());
    t
}

/// `q * log 2` for convenience.
pub fn log2_times(q: Rational) -> LogReal {
    LogReal::log_prime(BigUint::from(2u32), q)
}

/// Approximate value of a rational coefficient, for display.
pub fn approx_rational(q: &Rational) -> f64 {
    to_f64(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn lg(n: i64) -> LogReal {
        LogReal::log_abs_rational(&int(n)).unwrap()
    }

    #[test]
    fn known_comparisons() {
        assert_eq!(lg(2).compare(&lg(3)).unwrap(), Ordering::Less);
        assert_eq!(lg(2).scale(&int(2)).compare(&lg(4)).unwrap(), Ordering::Equal);
        let g = QuadElem::new(2, int(3), int(2)).unwrap();
        let h = QuadElem::new(2, int(1), int(1)).unwrap();
        // (1 + sqrt 2)^2 = 3 + 2 sqrt 2
        assert_eq!(h.mul(&h), g);
        let lhs = LogReal::log_abs_quad(&g).unwrap().scale(&rat(1, 2));
        let rhs = LogReal::log_abs_quad(&h).unwrap();
        assert_eq!(lhs.compare(&rhs).unwrap(), Ordering::Equal);
    }

    #[test]
    fn canonical_form_inverts_small_values() {
        // sqrt2 - 1 = 1/(1 + sqrt2)
        let x = QuadElem::new(2, int(-1), int(1)).unwrap();
        let l = LogReal::log_abs_quad(&x).unwrap();
        let h = LogReal::log_abs_quad(&QuadElem::new(2, int(1), int(1)).unwrap()).unwrap();
        assert_eq!(l, h.neg());
        assert!((l.approx() - (2f64.sqrt() - 1.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn conjugates_sum_to_norm() {
        let x = QuadElem::new(2, rat(7, 3), rat(-5, 2)).unwrap();
        let s = LogReal::log_abs_quad(&x)
            .unwrap()
            .add(&LogReal::log_abs_quad(&x.conj()).unwrap());
        assert_eq!(s, LogReal::log_abs_rational(&x.norm()).unwrap());
    }

    #[test]
    fn mixing_units_and_logs_is_an_error() {
        let x = LogReal::units(int(1)).add(&lg(2));
        assert!(x.sign().is_err());
    }

    #[test]
    fn infinities() {
        let p = ExtLogReal::PosInf;
        assert!(p.add(&ExtLogReal::NegInf).is_err());
        assert_eq!(p.add(&lg(2).into()).unwrap(), ExtLogReal::PosInf);
        assert_eq!(
            ExtLogReal::max_of(vec![lg(2).into(), ExtLogReal::NegInf]).unwrap(),
            lg(2).into()
        );
    }

    #[test]
    fn tight_exact_comparison() {
        // 2^10 = 1024 vs 1000 = 2^3 5^3: differ by 2.4%, 3^{1/2} vs 2^{0.79..}
        let a = lg(2).scale(&int(10));
        let b = lg(1000);
        assert_eq!(a.compare(&b).unwrap(), Ordering::Greater);
        // log(3^665) vs log(2^1054): differ by about 1e-4
        let c = lg(3).scale(&int(665));
        let d = lg(2).scale(&int(1054));
        assert_eq!(c.compare(&d).unwrap(), Ordering::Greater);
    }
}
