//! Seeded generators for field elements and tropical terms.
//!
//! Every generator draws from a caller-supplied RNG so batteries are
//! reproducible from a single seed.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::arith::fp_poly::{FpPoly, FpRatio};
use crate::arith::quad::QuadElem;
use crate::arith::rational::{int, Rational};
use crate::arith::zpoly::ZPoly;
use crate::field::{FieldElem, FieldKind, QzElem};
use crate::tropical::Term;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero_i64<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            return n;
        }
    }
}

/// A nonzero rational with numerator in `[-num, num]` and denominator in `[1, den]`.
pub fn rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    Rational::new(nonzero_i64(rng, num).into(), rng.gen_range(1..=den).into())
}

fn fp_poly<R: Rng>(rng: &mut R, p: u64, max_deg: usize) -> FpPoly {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let f = FpPoly::new(p, (0..=deg).map(|_| rng.gen_range(0..p)).collect());
        if !f.is_zero() {
            return f;
        }
    }
}

fn zpoly<R: Rng>(rng: &mut R, max_deg: usize, bound: i64) -> ZPoly {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let f = ZPoly::new((0..=deg).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect());
        if !f.is_zero() {
            return f;
        }
    }
}

/// A nonzero element of small size.
pub fn nonzero_elem<R: Rng>(rng: &mut R, kind: FieldKind) -> FieldElem {
    match kind {
        FieldKind::Q => FieldElem::Q(rational(rng, 60, 40)),
        FieldKind::Fp(p) => {
            let x = FpRatio::new(fp_poly(rng, p, 3), fp_poly(rng, p, 2)).expect("nonzero denominator");
            FieldElem::Fp(x)
        }
        FieldKind::Quad(d) => loop {
            let a = if rng.gen_bool(0.2) { int(0) } else { rational(rng, 12, 6) };
            let b = if rng.gen_bool(0.2) { int(0) } else { rational(rng, 12, 6) };
            let x = QuadElem::new(d, a, b).expect("valid field");
            if !x.is_zero() {
                return FieldElem::Quad(x);
            }
        },
        FieldKind::Qz => qz_elem(rng, 5, 20),
    }
}

/// A nonzero element of `Q(z)` with numerator and denominator of degree at
/// most `max_deg` and integer coefficients in `[-bound, bound]`.
pub fn qz_elem<R: Rng>(rng: &mut R, max_deg: usize, bound: i64) -> FieldElem {
    let num = zpoly(rng, max_deg, bound);
    let den = zpoly(rng, max_deg, bound);
    FieldElem::Qz(QzElem::from_parts(int(1), &num, &den).expect("nonzero denominator"))
}

/// An element that is zero with probability `zero_prob`.
pub fn elem<R: Rng>(rng: &mut R, kind: FieldKind, zero_prob: f64) -> FieldElem {
    if rng.gen_bool(zero_prob) {
        FieldElem::zero(kind)
    } else {
        nonzero_elem(rng, kind)
    }
}

pub fn tuple<R: Rng>(rng: &mut R, kind: FieldKind, len: usize, zero_prob: f64) -> Vec<FieldElem> {
    (0..len).map(|_| elem(rng, kind, zero_prob)).collect()
}

pub fn nonzero_tuple<R: Rng>(rng: &mut R, kind: FieldKind, len: usize) -> Vec<FieldElem> {
    (0..len).map(|_| nonzero_elem(rng, kind)).collect()
}

/// A random tropical term in `x1..x_arity` of nesting depth at most `depth`.
pub fn term<R: Rng>(rng: &mut R, arity: usize, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        return Term::Var(rng.gen_range(1..=arity));
    }
    let width = rng.gen_range(1..=3);
    let kids: Vec<Term> = (0..width).map(|_| term(rng, arity, depth - 1)).collect();
    let choices = [0, 1, 2, 3];
    match choices.choose(rng).copied().unwrap_or(0) {
        0 => Term::Max(kids),
        1 => Term::Min(kids),
        2 => Term::Sum(kids),
        _ => {
            let q = rational(rng, 3, 2);
            Term::Scale(q, Box::new(kids.into_iter().next().expect("width >= 1")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a: Vec<FieldElem> = nonzero_tuple(&mut seeded(3), FieldKind::Fp(3), 5);
        let b: Vec<FieldElem> = nonzero_tuple(&mut seeded(3), FieldKind::Fp(3), 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|x| !x.is_zero()));
        let t = term(&mut seeded(9), 3, 3);
        assert!(t.arity() <= 3);
    }
}
