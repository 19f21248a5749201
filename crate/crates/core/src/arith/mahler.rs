//! Certified Mahler measure.
//!
//! Roots of each squarefree part are approximated by Aberth-Ehrlich
//! iteration and then enclosed in Weierstrass inclusion discs: with
//! `W_j = f(z_j) / (lc * prod_{k != j} (z_j - z_k))`, the discs
//! `D(z_j, n |W_j|)` cover the roots, and pairwise disjoint discs contain
//! exactly one root each. Rounding in the evaluation of `f(z_j)` is
//! covered by a Horner error bound.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::arith::interval::Interval;
use crate::arith::zpoly::{squarefree_decomposition, ZPoly};
use crate::error::{GvfError, Result};

pub const DEFAULT_MAHLER_TOL: f64 = 1e-9;

const MAX_ITER: usize = 2000;

/// A disc known to contain exactly one root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootDisc {
    pub center: Complex64,
    pub radius: f64,
}

impl RootDisc {
    /// Enclosure of `|z|` for `z` in the disc.
    pub fn modulus(&self) -> Interval {
        let m = self.center.norm();
        let slack = self.radius + 4.0 * f64::EPSILON * m;
        Interval::new((m - slack).max(0.0), m + slack)
    }
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::zero();
    let mut abs_acc = 0.0;
    let az = z.norm();
    for &a in c.iter().rev() {
        acc = acc * z + a;
        abs_acc = abs_acc * az + a.abs();
    }
    (acc, abs_acc)
}

fn horner_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Certified isolating discs for the roots of a squarefree nonconstant `g`.
pub fn certified_roots(g: &ZPoly) -> Result<Vec<RootDisc>> {
    let n = g
        .degree()
        .filter(|&n| n > 0)
        .ok_or_else(|| GvfError::domain("constant polynomial has no roots"))?;
    let c = g.to_f64_coeffs();
    if c.iter().any(|x| !x.is_finite()) {
        return Err(GvfError::NonConvergence(
            "coefficients exceed floating range".into(),
        ));
    }
    if n == 1 {
        let z = -c[0] / c[1];
        let exact_coeffs = g.coeffs().iter().all(|a| a.abs() < BigInt::from(1u64 << 53));
        let rel = if exact_coeffs { 2.0 } else { 8.0 };
        return Ok(vec![RootDisc {
            center: Complex64::new(z, 0.0),
            radius: rel * f64::EPSILON * z.abs() + f64::MIN_POSITIVE,
        }]);
    }
    let lc = c[n];
    let r0 = (c[0].abs() / lc.abs()).powf(1.0 / n as f64).max(0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for j in 0..n {
            let (p, dp) = horner_with_derivative(&c, z[j]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&k| k != j)
                .map(|k| (z[j] - z[k]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[j] -= w;
                max_step = max_step.max(w.norm() / z[j].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    // unconverged iterates may still certify; the disc test decides
    let eps = f64::EPSILON;
    let mut discs = Vec::with_capacity(n);
    for j in 0..n {
        let (p, abs_sum) = horner(&c, z[j]);
        let err = 4.0 * (n as f64 + 1.0) * eps * abs_sum;
        let mut den = lc.abs();
        for k in 0..n {
            if k != j {
                den *= (z[j] - z[k]).norm();
            }
        }
        den *= 1.0 - 4.0 * n as f64 * eps;
        if den <= 0.0 || !den.is_finite() {
            return Err(GvfError::NonConvergence(
                "root approximations collided".into(),
            ));
        }
        let r = n as f64 * (p.norm() + err) / den * (1.0 + 1e-10);
        discs.push(RootDisc {
            center: z[j],
            radius: r,
        });
    }
    for j in 0..n {
        for k in j + 1..n {
            let dist = (discs[j].center - discs[k].center).norm() * (1.0 - 1e-12);
            if dist <= discs[j].radius + discs[k].radius {
                return Err(GvfError::NonConvergence(
                    "could not separate root inclusion discs".into(),
                ));
            }
        }
    }
    Ok(discs)
}

/// Enclosure of `sum_j log max(1, |z_j|)` over the discs.
pub fn log_max_sum(discs: &[RootDisc]) -> Interval {
    discs.iter().fold(Interval::zero(), |acc, d| {
        let m = d.modulus();
        let lo = m.lo().max(1.0);
        let hi = m.hi().max(1.0);
        acc.add(&Interval::new(lo, hi).ln())
    })
}

/// Mahler measure `log|lc| + sum log max(1, |root|)` with the default tolerance.
pub fn mahler_measure(f: &ZPoly) -> Result<Interval> {
    mahler_measure_tol(f, DEFAULT_MAHLER_TOL)
}

/// Mahler measure as an interval of width at most `tol`.
pub fn mahler_measure_tol(f: &ZPoly, tol: f64) -> Result<Interval> {
    if f.is_zero() {
        return Err(GvfError::domain("Mahler measure of the zero polynomial"));
    }
    let mut acc = Interval::from_integer(&f.content()).ln();
    for (g, e) in squarefree_decomposition(f) {
        let mg = Interval::from_integer(&g.lead())
            .ln()
            .add(&log_max_sum(&certified_roots(&g)?));
        acc = acc.add(&mg.scale(e as f64));
    }
    if acc.width() > tol {
        return Err(GvfError::NonConvergence(format!(
            "Mahler measure enclosure {acc} is wider than {tol}"
        )));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn linear_jensen() {
        let m = mahler_measure(&zp(&[-2, 1])).unwrap();
        assert!(m.contains(2f64.ln()));
        assert!(m.width() <= 1e-9);
        for k in [-7i64, -1, 1, 3, 19] {
            let m = mahler_measure(&zp(&[-k, 1])).unwrap();
            assert!(m.contains((k.abs() as f64).ln()), "k = {k}: {m}");
        }
    }

    #[test]
    fn monomial_is_zero() {
        assert!(mahler_measure(&zp(&[0, 1])).unwrap().contains(0.0));
    }

    #[test]
    fn golden_ratio() {
        let m = mahler_measure(&zp(&[-1, -1, 1])).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(m.contains(phi.ln()), "{m}");
    }

    #[test]
    fn cyclotomic_products_vanish() {
        // (z^5 - 1)(z^2 + 1)^2 (z + 1)^3
        let f = zp(&[-1, 0, 0, 0, 0, 1])
            .mul(&zp(&[1, 0, 1]).pow(2))
            .mul(&zp(&[1, 1]).pow(3));
        let m = mahler_measure(&f).unwrap();
        assert!(m.contains(0.0), "{m}");
    }

    #[test]
    fn content_and_multiplicity() {
        // 6 (z - 3)^2 (2z + 1)
        let f = zp(&[-3, 1]).pow(2).mul(&zp(&[1, 2])).scale(&BigInt::from(6));
        let m = mahler_measure(&f).unwrap();
        let expect = 6f64.ln() + 2.0 * 3f64.ln() + 2f64.ln();
        assert!(m.contains(expect), "{m} vs {expect}");
    }
}
