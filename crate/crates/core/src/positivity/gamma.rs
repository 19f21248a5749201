//! Gamma certificates: `meet div(b_i) - meet div(a_j)` with each `b_i` an
//! integer combination of the `a_j` whose coefficients sum below `2^eps`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::dyadic::below_pow2;
use crate::arith::logreal::{ExtLogReal, LogReal};
use crate::arith::rational::Rational;
use crate::error::{GvfError, Result};
use crate::field::FieldElem;
use crate::places::{v_eval, Place, Valuation};
use crate::tropical::{is_zero, LatticeDivisor};

use super::evaluate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCertificate {
    pub a: Vec<FieldElem>,
    pub b: Vec<FieldElem>,
    /// `rows[i][j]` is the coefficient of `a_j` in `b_i`.
    pub rows: Vec<Vec<BigInt>>,
}

impl GammaCertificate {
    /// Builds `b_i = sum_j rows[i][j] a_j`.
    pub fn from_rows(a: Vec<FieldElem>, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let first = a.first().ok_or_else(|| GvfError::domain("empty tuple"))?;
        let kind = first.kind();
        let mut b = vec![];
        for row in &rows {
            if row.len() != a.len() {
                return Err(GvfError::domain("row length differs from the tuple length"));
            }
            let mut s = FieldElem::zero(kind);
            for (m, x) in row.iter().zip(&a) {
                let m = FieldElem::from_rational(kind, &Rational::from_integer(m.clone()))?;
                s = s.add(&m.mul(x)?)?;
            }
            b.push(s);
        }
        Ok(GammaCertificate { a, b, rows })
    }

    /// `meet div(b_i) - meet div(a_j)`.
    pub fn divisor(&self) -> Result<LatticeDivisor> {
        LatticeDivisor::meet_of(&self.b)?.sub(&LatticeDivisor::meet_of(&self.a)?)
    }
}

/// Checks the certificate against `alpha`: the presentation must match
/// (otherwise an error), every `b_i` must be nonzero and equal to its row
/// combination, and every row must satisfy `sum_j |m_ij| < 2^eps`.
pub fn verify_gamma_membership(
    alpha: &LatticeDivisor,
    cert: &GammaCertificate,
    eps: &Rational,
) -> Result<bool> {
    if !eps.is_positive() {
        return Err(GvfError::domain("epsilon must be positive"));
    }
    if cert.a.is_empty() || cert.b.is_empty() || cert.rows.len() != cert.b.len() {
        return Err(GvfError::domain("a certificate needs nonempty a, b and one row per b"));
    }
    if cert.a.iter().any(FieldElem::is_zero) {
        return Err(GvfError::domain("the a_j must be nonzero"));
    }
    if cert.b.iter().any(FieldElem::is_zero) {
        return Ok(false);
    }
    if !is_zero(&alpha.sub(&cert.divisor()?)?)? {
        return Err(GvfError::domain(
            "inconsistent presentation: the divisor is not meet div(b) - meet div(a)",
        ));
    }
    let combined = GammaCertificate::from_rows(cert.a.clone(), cert.rows.clone())?;
    if combined.b != cert.b {
        return Ok(false);
    }
    for row in &cert.rows {
        let s = row.iter().fold(BigInt::zero(), |acc, m| acc + m.abs());
        if !below_pow2(s.magnitude(), eps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first place where `alpha` breaks the bounds membership forces:
/// `v(alpha) >= 0` at non-archimedean places and `v(alpha) > eps v(2)` at
/// archimedean ones. `None` means the bounds hold.
pub fn gamma_condition(alpha: &LatticeDivisor, eps: &Rational) -> Result<Option<(Place, LogReal)>> {
    crate::tropical::require_decidable(alpha)?;
    let Some(kind) = alpha.kind()? else {
        return Ok(None);
    };
    let two = FieldElem::from_int(kind, 2);
    let mut places = alpha.candidate_places()?;
    if !two.is_zero() {
        places.extend(crate::places::support(&two)?);
        places.sort();
        places.dedup();
    }
    for p in places {
        let x = evaluate(&p, alpha)?;
        let bad = if p.is_archimedean() {
            let ExtLogReal::Finite(v2) = v_eval(&Valuation::unit(p.clone()), &two)? else {
                unreachable!("2 is nonzero in characteristic zero")
            };
            x.compare(&v2.scale(eps))?.is_le()
        } else {
            x.sign()? < 0
        };
        if bad {
            return Ok(Some((p, x)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::field::FieldKind;
    use crate::positivity::is_positive;
    use crate::random::{nonzero_elem, seeded};
    use rand::Rng;

    fn rows(r: &[&[i64]]) -> Vec<Vec<BigInt>> {
        r.iter().map(|x| x.iter().map(|&m| BigInt::from(m)).collect()).collect()
    }

    #[test]
    fn worked_examples() {
        let a = vec![FieldElem::Q(int(3)), FieldElem::Q(rat(1, 2))];
        let c = GammaCertificate::from_rows(a.clone(), rows(&[&[1, 1], &[1, -1]])).unwrap();
        let alpha = c.divisor().unwrap();
        // row sums are 2 < 2^(3/2) but not < 2^1
        assert!(verify_gamma_membership(&alpha, &c, &rat(3, 2)).unwrap());
        assert!(!verify_gamma_membership(&alpha, &c, &int(1)).unwrap());
        let mut wrong = c.clone();
        wrong.b[0] = FieldElem::Q(int(7));
        let alpha_w = wrong.divisor().unwrap();
        assert!(!verify_gamma_membership(&alpha_w, &wrong, &int(2)).unwrap());
        let other = LatticeDivisor::div(&FieldElem::Q(int(5))).unwrap();
        assert!(verify_gamma_membership(&other, &c, &int(2)).is_err());
    }

    #[test]
    fn membership_implies_bounds() {
        let k = FieldKind::Fp(3);
        let mut rng = seeded(5);
        for _ in 0..40 {
            let a: Vec<FieldElem> = (0..2).map(|_| nonzero_elem(&mut rng, k)).collect();
            let r: Vec<Vec<BigInt>> = (0..2)
                .map(|_| (0..2).map(|_| BigInt::from(rng.gen_range(-1..=1))).collect())
                .collect();
            let Ok(c) = GammaCertificate::from_rows(a, r) else { continue };
            if c.b.iter().any(FieldElem::is_zero) {
                continue;
            }
            let alpha = c.divisor().unwrap();
            assert!(verify_gamma_membership(&alpha, &c, &int(2)).unwrap());
            assert_eq!(gamma_condition(&alpha, &int(2)).unwrap(), None);
            // no archimedean places over F_p(t), so the divisor is positive
            assert!(is_positive(&alpha).unwrap().is_positive);
        }
    }
}
