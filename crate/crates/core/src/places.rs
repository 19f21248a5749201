//! Places of the supported fields and the valuations they carry.
//!
//! Normalizations, each multiplied by the valuation's scale:
//!
//! | place                 | `v(a)`                                   |
//! |-----------------------|------------------------------------------|
//! | `QFinite(p)`          | `ord_p(a) log p`                         |
//! | `QArch`               | `-log|a|`                                |
//! | `FpFinite(pi)`        | `ord_pi(a) deg pi` (degree units)        |
//! | `FpDegree`            | `-deg a`                                 |
//! | `QuadFinite`          | `(f/2) w(a) log p`                       |
//! | `QuadArch`, `d > 0`   | `-(1/2) log|sigma(a)|`                   |
//! | `QuadArch`, `d < 0`   | `-(1/2) log N(a)`                        |
//! | `QzGauss(p)`          | `-log` of the p-adic Gauss norm          |
//! | `QzPoint(x)`          | `ord_x(a)` (order units)                 |
//! | `QzArch`              | not exact; see [`qz_arch_mean`]         |
//!
//! Over a quadratic field the prime 2 splits when `d = 1 mod 8`, is inert
//! when `d = 5 mod 8` and ramifies otherwise. An odd prime ramifies when it
//! divides `d` and splits exactly when `d` is a square mod `p`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor::factor_biguint;
use crate::arith::fp_poly::{factor_fp_poly, FpPoly};
use crate::arith::interval::Interval;
use crate::arith::logreal::{ExtLogReal, LogReal};
use crate::arith::mahler::mahler_measure;
use crate::arith::quad::QuadElem;
use crate::arith::rational::{fmt_rational, ord_int, ord_rat, Rational};
use crate::arith::zpoly::{factor_zpoly, ZPoly};
use crate::field::{FieldElem, FieldKind, QzElem};
use crate::error::{GvfError, Result};

/// How a rational prime behaves in a quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitKind {
    /// First of two split places (local root `s` is the smaller residue, or
    /// `s = 1 mod 4` at `p = 2`).
    Split1,
    /// The conjugate split place.
    Split2,
    Inert,
    Ramified,
}

impl SplitKind {
    /// `(e, f)`: ramification index and residue degree.
    pub fn ef(&self) -> (u32, u32) {
        match self {
            SplitKind::Split1 | SplitKind::Split2 => (1, 1),
            SplitKind::Inert => (1, 2),
            SplitKind::Ramified => (2, 1),
        }
    }
}

impl fmt::Display for SplitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitKind::Split1 => "split1",
            SplitKind::Split2 => "split2",
            SplitKind::Inert => "inert",
            SplitKind::Ramified => "ramified",
        })
    }
}

/// A normalized place of one of the supported fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    QFinite(BigUint),
    QArch,
    /// A monic irreducible polynomial of `F_p[t]`.
    FpFinite(FpPoly),
    /// The place at infinity of `F_p(t)`.
    FpDegree(u64),
    QuadFinite { d: i64, p: BigUint, kind: SplitKind },
    /// Embedding 1 sends `sqrt d` to the positive root, 2 to the negative
    /// one; imaginary fields have the single embedding 1.
    QuadArch { d: i64, embedding: u8 },
    QzGauss(BigUint),
    QzArch,
    /// A closed point of the projective line: a primitive irreducible
    /// integer polynomial, or `None` for the point at infinity.
    QzPoint(Option<ZPoly>),
}

impl Place {
    pub fn field_kind(&self) -> FieldKind {
        match self {
            Place::QFinite(_) | Place::QArch => FieldKind::Q,
            Place::FpFinite(pi) => FieldKind::Fp(pi.characteristic()),
            Place::FpDegree(p) => FieldKind::Fp(*p),
            Place::QuadFinite { d, .. } | Place::QuadArch { d, .. } => FieldKind::Quad(*d),
            Place::QzGauss(_) | Place::QzArch | Place::QzPoint(_) => FieldKind::Qz,
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::QArch | Place::QuadArch { .. } | Place::QzArch)
    }

    /// The rational prime under a finite place of a number field.
    pub fn residue_prime(&self) -> Option<&BigUint> {
        match self {
            Place::QFinite(p) | Place::QzGauss(p) | Place::QuadFinite { p, .. } => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::QFinite(p) => write!(f, "QFinite({p})"),
            Place::QArch => write!(f, "QArch"),
            Place::FpFinite(pi) => write!(f, "FpFinite({pi})"),
            Place::FpDegree(_) => write!(f, "FpDegree"),
            Place::QuadFinite { p, kind, .. } => write!(f, "QuadFinite({p}, {kind})"),
            Place::QuadArch { embedding, .. } => write!(f, "QuadArch({embedding})"),
            Place::QzGauss(p) => write!(f, "QzGauss({p})"),
            Place::QzArch => write!(f, "QzArch"),
            Place::QzPoint(Some(g)) => write!(f, "QzPoint({g})"),
            Place::QzPoint(None) => write!(f, "QzPoint(inf)"),
        }
    }
}

/// A place together with a positive rational scale.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    pub place: Place,
    pub scale: Rational,
}

impl Valuation {
    pub fn new(place: Place, scale: Rational) -> Result<Self> {
        if !scale.is_positive() {
            return Err(GvfError::domain("valuation scale must be positive"));
        }
        Ok(Valuation { place, scale })
    }

    /// The scale-1 representative of a place.
    pub fn unit(place: Place) -> Self {
        Valuation {
            place,
            scale: Rational::one(),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale.is_one() {
            write!(f, "{}", self.place)
        } else {
            write!(f, "{}*{}", fmt_rational(&self.scale), self.place)
        }
    }
}

fn ord_fp_poly(f: &FpPoly, pi: &FpPoly) -> i64 {
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

fn ord_zpoly(f: &ZPoly, g: &ZPoly) -> i64 {
    let mut f = f.clone();
    let mut k = 0;
    while let Some(q) = f.div_exact(g) {
        f = q;
        k += 1;
    }
    k
}

/// Splitting type of `p` in `Q(sqrt d)`.
pub fn splitting(d: i64, p: &BigUint) -> SplitKind {
    let pi = BigInt::from_biguint(Sign::Plus, p.clone());
    let dd = BigInt::from(d);
    if *p == BigUint::from(2u32) {
        return match dd.mod_floor(&BigInt::from(8)).to_u32().expect("small") {
            1 => SplitKind::Split1,
            5 => SplitKind::Inert,
            _ => SplitKind::Ramified,
        };
    }
    let r = dd.mod_floor(&pi);
    if r.is_zero() {
        return SplitKind::Ramified;
    }
    let e = (&pi - 1) / 2;
    if r.modpow(&e, &pi).is_one() {
        SplitKind::Split1
    } else {
        SplitKind::Inert
    }
}

/// The places of `Q(sqrt d)` above `p`, or the archimedean places for `None`.
pub fn places_above(d: i64, p: Option<&BigUint>) -> Vec<Place> {
    match p {
        None if d > 0 => vec![
            Place::QuadArch { d, embedding: 1 },
            Place::QuadArch { d, embedding: 2 },
        ],
        None => vec![Place::QuadArch { d, embedding: 1 }],
        Some(p) => match splitting(d, p) {
            SplitKind::Split1 | SplitKind::Split2 => vec![
                Place::QuadFinite {
                    d,
                    p: p.clone(),
                    kind: SplitKind::Split1,
                },
                Place::QuadFinite {
                    d,
                    p: p.clone(),
                    kind: SplitKind::Split2,
                },
            ],
            kind => vec![Place::QuadFinite {
                d,
                p: p.clone(),
                kind,
            }],
        },
    }
}

/// Square root of `d` modulo an odd prime `p` (Tonelli-Shanks), `d` a nonzero square.
fn sqrt_mod_prime(d: &BigInt, p: &BigInt) -> BigInt {
    let d = d.mod_floor(p);
    let one = BigInt::one();
    let pm1: BigInt = p - 1;
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while z.modpow(&(&pm1 / 2), p) != pm1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = d.modpow(&q, p);
    let mut r = d.modpow(&((&q + 1) / 2), p);
    while t != one {
        let mut i = 0;
        let mut tt = t.clone();
        while tt != one {
            tt = (&tt * &tt) % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1) as usize), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    r
}

/// The p-adic square root of `d` fixed by the `Split1` convention, modulo `p^k`.
fn padic_sqrt(d: i64, p: &BigInt, k: u32) -> BigInt {
    let dd = BigInt::from(d);
    let modulus = p.pow(k);
    if *p == BigInt::from(2) {
        // d = 1 mod 8: lift bit by bit, then pick the root that is 1 mod 4
        let mut s = BigInt::one();
        let mut j = 3u32;
        while j < k + 2 {
            let m2 = BigInt::one() << (j + 1) as usize;
            if !(&s * &s - &dd).mod_floor(&m2).is_zero() {
                s += BigInt::one() << (j - 1) as usize;
            }
            j += 1;
        }
        let mut s = s.mod_floor(&modulus);
        if s.mod_floor(&BigInt::from(4)) != BigInt::one() {
            s = (-s).mod_floor(&modulus);
        }
        return s;
    }
    let r = sqrt_mod_prime(&dd, p);
    let r = r.clone().min(p - &r);
    let mut s = r;
    for _ in 0..k {
        let f = (&s * &s - &dd).mod_floor(&modulus);
        if f.is_zero() {
            break;
        }
        let inv = (BigInt::from(2) * &s).extended_gcd(&modulus).x;
        s = (&s - f * inv).mod_floor(&modulus);
    }
    s
}

/// Writes `x = (A + B sqrt d) / c` with integers.
fn integral_form(x: &QuadElem) -> (BigInt, BigInt, BigInt) {
    let c = x.a().denom().lcm(x.b().denom());
    let cq = Rational::from_integer(c.clone());
    (
        (x.a() * &cq).to_integer(),
        (x.b() * &cq).to_integer(),
        c,
    )
}

/// Normalized discrete valuation `w` at a finite place of a quadratic field.
fn quad_w(x: &QuadElem, p: &BigUint, kind: SplitKind) -> i64 {
    match kind {
        SplitKind::Inert => ord_rat(&x.norm(), p) / 2,
        SplitKind::Ramified => ord_rat(&x.norm(), p),
        SplitKind::Split1 | SplitKind::Split2 => {
            if x.is_rational() {
                return ord_rat(x.a(), p);
            }
            let (a, b, c) = integral_form(x);
            let pi = BigInt::from_biguint(Sign::Plus, p.clone());
            let n = &a * &a - BigInt::from(x.d()) * &b * &b;
            let k = ord_int(&n, p) as u32 + 1;
            let s = padic_sqrt(x.d(), &pi, k);
            let s = if kind == SplitKind::Split2 { -s } else { s };
            let modulus = pi.pow(k);
            let y = (a + b * s).mod_floor(&modulus);
            debug_assert!(!y.is_zero());
            ord_int(&y, p) - ord_int(&c, p)
        }
    }
}

fn check_kind(place: &Place, a: &FieldElem) -> Result<()> {
    if place.field_kind() != a.kind() {
        return Err(GvfError::mismatch(place.field_kind(), a.kind()));
    }
    Ok(())
}

/// Value of the scale-1 valuation at `place` on a nonzero element.
fn eval_place(place: &Place, a: &FieldElem) -> Result<LogReal> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    Ok(match (place, a) {
        (Place::QFinite(p), FieldElem::Q(x)) => {
            LogReal::log_prime(p.clone(), Rational::from_integer(ord_rat(x, p).into()))
        }
        (Place::QArch, FieldElem::Q(x)) => LogReal::log_abs_rational(x)?.neg(),
        (Place::FpFinite(pi), FieldElem::Fp(x)) => {
            let o = ord_fp_poly(x.num(), pi) - ord_fp_poly(x.den(), pi);
            let deg = pi.degree().unwrap_or(0) as i64;
            LogReal::units(Rational::from_integer((o * deg).into()))
        }
        (Place::FpDegree(_), FieldElem::Fp(x)) => {
            LogReal::units(Rational::from_integer((-x.degree()).into()))
        }
        (Place::QuadFinite { p, kind, .. }, FieldElem::Quad(x)) => {
            let (_, f) = kind.ef();
            let w = quad_w(x, p, *kind);
            LogReal::log_prime(
                p.clone(),
                Rational::new(BigInt::from(w) * BigInt::from(f), BigInt::from(2)),
            )
        }
        (Place::QuadArch { d, embedding }, FieldElem::Quad(x)) => {
            if *d < 0 {
                LogReal::log_abs_rational(&x.norm())?.scale(&-half)
            } else {
                let y = if *embedding == 2 { x.conj() } else { x.clone() };
                LogReal::log_abs_quad(&y)?.scale(&-half)
            }
        }
        (Place::QzGauss(p), FieldElem::Qz(x)) => LogReal::log_prime(
            p.clone(),
            Rational::from_integer(ord_rat(x.scalar(), p).into()),
        ),
        (Place::QzPoint(Some(g)), FieldElem::Qz(x)) => {
            let o = ord_zpoly(x.num(), g) - ord_zpoly(x.den(), g);
            LogReal::units(Rational::from_integer(o.into()))
        }
        (Place::QzPoint(None), FieldElem::Qz(x)) => {
            let o = x.den().degree().unwrap_or(0) as i64 - x.num().degree().unwrap_or(0) as i64;
            LogReal::units(Rational::from_integer(o.into()))
        }
        (Place::QzArch, FieldElem::Qz(_)) => {
            return Err(GvfError::NonExact(
                "the archimedean place of Q(z) is a circle average; use qz_arch_mean".into(),
            ))
        }
        _ => return Err(GvfError::mismatch(place.field_kind(), a.kind())),
    })
}

/// `v(a)`, with `v(0) = +inf`.
pub fn v_eval(v: &Valuation, a: &FieldElem) -> Result<ExtLogReal> {
    check_kind(&v.place, a)?;
    if a.is_zero() {
        return Ok(ExtLogReal::PosInf);
    }
    Ok(ExtLogReal::Finite(eval_place(&v.place, a)?.scale(&v.scale)))
}

/// Certified enclosure of `-log|s| - m(num) + m(den)` for `a = s num/den`,
/// the value of the archimedean place of `Q(z)` (Jensen's formula).
pub fn qz_arch_mean(a: &QzElem) -> Result<Interval> {
    if a.is_zero() {
        return Err(GvfError::domain("archimedean value of zero"));
    }
    let ls = LogReal::log_abs_rational(a.scalar())?.to_interval();
    let mn = mahler_measure(a.num())?;
    let md = mahler_measure(a.den())?;
    Ok(ls.add(&mn).sub(&md).neg())
}

fn rational_primes(q: &Rational) -> Vec<BigUint> {
    let mut ps: Vec<BigUint> = factor_biguint(q.numer().magnitude())
        .into_keys()
        .chain(factor_biguint(q.denom().magnitude()).into_keys())
        .collect();
    ps.sort();
    ps.dedup();
    ps
}

/// The places of `kind` carrying no finite data: archimedean places and the
/// degree place.
pub fn arch_places(kind: FieldKind) -> Vec<Place> {
    match kind {
        FieldKind::Q => vec![Place::QArch],
        FieldKind::Fp(p) => vec![Place::FpDegree(p)],
        FieldKind::Quad(d) => places_above(d, None),
        FieldKind::Qz => vec![Place::QzArch],
    }
}

/// Places where `a != 0` has nonzero value. Over `Q(z)` the archimedean
/// place is always reported since its value is only known numerically.
pub fn support(a: &FieldElem) -> Result<Vec<Place>> {
    if a.is_zero() {
        return Err(GvfError::domain("the support of zero is undefined"));
    }
    let mut out: Vec<Place> = match a {
        FieldElem::Q(x) => {
            let mut v: Vec<Place> = rational_primes(x).into_iter().map(Place::QFinite).collect();
            if x.abs() != Rational::one() {
                v.push(Place::QArch);
            }
            v
        }
        FieldElem::Fp(x) => {
            let mut v = vec![];
            for poly in [x.num(), x.den()] {
                if poly.degree().unwrap_or(0) > 0 {
                    for (g, _) in factor_fp_poly(poly)?.factors {
                        v.push(Place::FpFinite(g));
                    }
                }
            }
            if x.degree() != 0 {
                v.push(Place::FpDegree(x.characteristic()));
            }
            v
        }
        FieldElem::Quad(x) => {
            let (aa, bb, c) = integral_form(x);
            let n = &aa * &aa - BigInt::from(x.d()) * &bb * &bb;
            let mut primes: Vec<BigUint> = factor_biguint(n.magnitude())
                .into_keys()
                .chain(factor_biguint(c.magnitude()).into_keys())
                .collect();
            primes.sort();
            primes.dedup();
            let mut v = vec![];
            for p in primes {
                v.extend(places_above(x.d(), Some(&p)));
            }
            v.extend(places_above(x.d(), None));
            let mut kept = vec![];
            for pl in v {
                if !eval_place(&pl, a)?.is_formally_zero() {
                    kept.push(pl);
                }
            }
            kept
        }
        FieldElem::Qz(x) => {
            let mut v: Vec<Place> = rational_primes(x.scalar())
                .into_iter()
                .map(Place::QzGauss)
                .collect();
            for poly in [x.num(), x.den()] {
                if poly.degree().unwrap_or(0) > 0 {
                    for (g, _) in factor_zpoly(poly).1 {
                        v.push(Place::QzPoint(Some(g)));
                    }
                }
            }
            if x.num().degree() != x.den().degree() {
                v.push(Place::QzPoint(None));
            }
            v.push(Place::QzArch);
            v
        }
    };
    out.sort();
    out.dedup();
    Ok(out)
}

/// The Galois conjugate place: swaps split places and real embeddings.
pub fn galois_act(place: &Place) -> Place {
    match place {
        Place::QuadFinite { d, p, kind } => Place::QuadFinite {
            d: *d,
            p: p.clone(),
            kind: match kind {
                SplitKind::Split1 => SplitKind::Split2,
                SplitKind::Split2 => SplitKind::Split1,
                k => *k,
            },
        },
        Place::QuadArch { d, embedding } if *d > 0 => Place::QuadArch {
            d: *d,
            embedding: 3 - embedding,
        },
        other => other.clone(),
    }
}

/// Outcome of [`triangle_defect_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleCheck {
    Holds,
    Fails,
    /// The bound involved `(-inf) + (+inf)`.
    Undefined,
}

/// Checks `v(x+y) >= min(v(x), v(y)) + min(v(2), 0)`.
pub fn triangle_defect_check(v: &Valuation, x: &FieldElem, y: &FieldElem) -> Result<TriangleCheck> {
    let s = x.add(y)?;
    let lhs = v_eval(v, &s)?;
    let m = v_eval(v, x)?.min(v_eval(v, y)?)?;
    let two = FieldElem::from_int(x.kind(), 2);
    let v2 = v_eval(v, &two)?.min(ExtLogReal::zero())?;
    let rhs = match m.add(&v2) {
        Ok(r) => r,
        Err(GvfError::Undefined(_)) => return Ok(TriangleCheck::Undefined),
        Err(e) => return Err(e),
    };
    Ok(if lhs.compare(&rhs)?.is_ge() {
        TriangleCheck::Holds
    } else {
        TriangleCheck::Fails
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn lg(n: i64) -> LogReal {
        LogReal::log_abs_rational(&int(n)).unwrap()
    }

    fn q(x: i64) -> FieldElem {
        FieldElem::Q(int(x))
    }

    #[test]
    fn known_values() {
        let v2 = Valuation::unit(Place::QFinite(big(2)));
        assert_eq!(v_eval(&v2, &q(12)).unwrap(), lg(2).scale(&int(2)).into());
        let va = Valuation::unit(Place::QArch);
        assert_eq!(v_eval(&va, &q(-8)).unwrap(), lg(2).scale(&int(-3)).into());
        let x = FieldElem::parse(FieldKind::Fp(3), "(t^2+1)/t").unwrap();
        let vd = Valuation::unit(Place::FpDegree(3));
        assert_eq!(v_eval(&vd, &x).unwrap(), LogReal::units(int(-1)).into());
        let z = FieldElem::parse(FieldKind::Qz, "3z^2 + z").unwrap();
        let vg = Valuation::unit(Place::QzGauss(big(3)));
        assert_eq!(v_eval(&vg, &z).unwrap(), ExtLogReal::zero());
        assert_eq!(v_eval(&v2, &q(0)).unwrap(), ExtLogReal::PosInf);
        assert!(matches!(
            v_eval(&Valuation::unit(Place::QzArch), &z),
            Err(GvfError::NonExact(_))
        ));
        assert!(v_eval(&v2, &z).is_err());
    }

    #[test]
    fn scale_is_homogeneous() {
        let v = Valuation::new(Place::QFinite(big(3)), rat(5, 2)).unwrap();
        assert_eq!(
            v_eval(&v, &FieldElem::Q(rat(9, 2))).unwrap(),
            lg(3).scale(&int(5)).into()
        );
        assert!(Valuation::new(Place::QArch, int(0)).is_err());
    }

    #[test]
    fn known_supports() {
        let s = support(&FieldElem::Q(rat(12, 5))).unwrap();
        assert_eq!(
            s,
            vec![
                Place::QFinite(big(2)),
                Place::QFinite(big(3)),
                Place::QFinite(big(5)),
                Place::QArch
            ]
        );
        let x = FieldElem::parse(FieldKind::Fp(2), "t+1").unwrap();
        assert_eq!(
            support(&x).unwrap(),
            vec![
                Place::FpFinite(FpPoly::from_i64(2, &[1, 1])),
                Place::FpDegree(2)
            ]
        );
        let z = FieldElem::parse(FieldKind::Qz, "z-2").unwrap();
        assert_eq!(
            support(&z).unwrap(),
            vec![
                Place::QzArch,
                Place::QzPoint(None),
                Place::QzPoint(Some(ZPoly::from_i64(&[-2, 1])))
            ]
        );
        assert!(support(&q(0)).is_err());
    }

    #[test]
    fn known_places_above() {
        let five = places_above(-1, Some(&big(5)));
        assert_eq!(five.len(), 2);
        // norm(2 + i) = 5, so 2 + i has value at exactly one place above 5
        let g = FieldElem::parse(FieldKind::Quad(-1), "2 + i").unwrap();
        let vals: Vec<_> = five
            .iter()
            .map(|p| v_eval(&Valuation::unit(p.clone()), &g).unwrap())
            .collect();
        assert!(vals.contains(&ExtLogReal::zero()));
        assert!(vals.contains(&lg(5).scale(&rat(1, 2)).into()));
        for p in &five {
            if let Place::QuadFinite { kind, .. } = p {
                assert_eq!(kind.ef(), (1, 1));
            }
        }
        let two = places_above(-1, Some(&big(2)));
        assert_eq!(
            two,
            vec![Place::QuadFinite {
                d: -1,
                p: big(2),
                kind: SplitKind::Ramified
            }]
        );
        assert_eq!(places_above(2, None).len(), 2);
        assert_eq!(splitting(17, &big(2)), SplitKind::Split1);
        assert_eq!(splitting(5, &big(2)), SplitKind::Inert);
        assert_eq!(splitting(3, &big(2)), SplitKind::Ramified);
    }

    #[test]
    fn galois_swaps() {
        let s1 = Place::QuadFinite {
            d: -1,
            p: big(5),
            kind: SplitKind::Split1,
        };
        let s2 = galois_act(&s1);
        assert!(matches!(s2, Place::QuadFinite { kind: SplitKind::Split2, .. }));
        assert_eq!(galois_act(&s2), s1);
        let r = places_above(-1, Some(&big(2)))[0].clone();
        assert_eq!(galois_act(&r), r);
        let a1 = Place::QuadArch { d: 2, embedding: 1 };
        assert_eq!(galois_act(&a1), Place::QuadArch { d: 2, embedding: 2 });
    }

    #[test]
    fn split_valuation_at_two() {
        // d = 17: 17 = 1 mod 8, and N((1 + sqrt17)/2) = -4
        let x = FieldElem::parse(FieldKind::Quad(17), "(1 + sqrt(17))/2").unwrap();
        let ps = places_above(17, Some(&big(2)));
        let total = ps
            .iter()
            .map(|p| v_eval(&Valuation::unit(p.clone()), &x).unwrap())
            .try_fold(ExtLogReal::zero(), |acc, v| acc.add(&v))
            .unwrap();
        // half of ord_2 N(x) = 2
        assert_eq!(total, lg(2).into());
        let each: Vec<_> = ps
            .iter()
            .map(|p| v_eval(&Valuation::unit(p.clone()), &x).unwrap())
            .collect();
        // the algebraic integer (1 + sqrt17)/2 has w-values {0, 2} at the two places
        assert!(each.contains(&ExtLogReal::zero()));
    }

    #[test]
    fn triangle_examples() {
        let va = Valuation::unit(Place::QArch);
        assert_eq!(
            triangle_defect_check(&va, &q(1), &q(1)).unwrap(),
            TriangleCheck::Holds
        );
        let v3 = Valuation::unit(Place::QFinite(big(3)));
        assert_eq!(
            triangle_defect_check(&v3, &q(1), &q(2)).unwrap(),
            TriangleCheck::Holds
        );
        assert_eq!(
            triangle_defect_check(&va, &q(0), &q(0)).unwrap(),
            TriangleCheck::Holds
        );
    }
}
