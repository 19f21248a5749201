//! Positivity of lattice divisors and certificates for it.
//!
//! A divisor is positive when it evaluates to a nonnegative value at every
//! place. Only finitely many places can see a given divisor, so the test is
//! a finite exact computation. Negativity certificates witness that a meet
//! of divisors is small at every place; Gamma certificates witness the
//! one-sided bounds that characterize positivity up to an archimedean slack.

mod cross;
mod gamma;
mod negcert;

pub use cross::{cross_validate, CrossReport};
pub use gamma::{gamma_condition, verify_gamma_membership, GammaCertificate};
pub use negcert::{
    negativity_condition, search_neg_certificate, verify_neg_certificate, NegCertificate,
    SearchBounds, DEFAULT_NODE_BUDGET,
};

use crate::arith::logreal::{ExtLogReal, LogReal};
use crate::error::Result;
use crate::places::{Place, Valuation};
use crate::tropical::{ev_pair, LatticeDivisor};

/// Result of [`is_positive`]; a negative verdict names a place where the
/// divisor evaluates below zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityVerdict {
    pub is_positive: bool,
    /// Every checked place evaluated to exactly zero.
    pub is_zero: bool,
    pub witness: Option<(Place, LogReal)>,
    pub checked_places: Vec<Place>,
}

/// `v(alpha)` at the unit-scale representative of `place`.
pub fn evaluate(place: &Place, alpha: &LatticeDivisor) -> Result<LogReal> {
    match ev_pair(&Valuation::unit(place.clone()), alpha)? {
        ExtLogReal::Finite(x) => Ok(x),
        _ => unreachable!("lattice divisors take finite values"),
    }
}

/// Decides whether `alpha` is nonnegative at every place.
pub fn is_positive(alpha: &LatticeDivisor) -> Result<PositivityVerdict> {
    crate::tropical::require_decidable(alpha)?;
    let places = alpha.candidate_places()?;
    let mut is_zero = true;
    for p in &places {
        let x = evaluate(p, alpha)?;
        match x.sign()? {
            0 => {}
            1 => is_zero = false,
            _ => {
                return Ok(PositivityVerdict {
                    is_positive: false,
                    is_zero: false,
                    witness: Some((p.clone(), x)),
                    checked_places: places,
                })
            }
        }
    }
    Ok(PositivityVerdict {
        is_positive: true,
        is_zero,
        witness: None,
        checked_places: places,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::field::{FieldElem, FieldKind};
    use crate::random::{nonzero_elem, seeded};

    fn q(n: i64) -> FieldElem {
        FieldElem::Q(int(n))
    }

    /// `div(x+y) - div(x) meet div(y) - div(2) meet 0`.
    fn triangle_divisor(x: &FieldElem, y: &FieldElem) -> LatticeDivisor {
        let two = FieldElem::from_int(x.kind(), 2);
        let s = LatticeDivisor::div(&x.add(y).unwrap()).unwrap();
        let m = LatticeDivisor::meet_of(&[x.clone(), y.clone()]).unwrap();
        let e = LatticeDivisor::div(&two).unwrap().meet(&LatticeDivisor::zero()).unwrap();
        s.sub(&m).unwrap().sub(&e).unwrap()
    }

    #[test]
    fn worked_examples() {
        let d2 = LatticeDivisor::div(&q(2)).unwrap();
        assert!(is_positive(&d2.abs().unwrap()).unwrap().is_positive);
        let v = is_positive(&d2).unwrap();
        assert!(!v.is_positive);
        let (place, x) = v.witness.unwrap();
        assert_eq!(place, Place::QArch);
        assert_eq!(x, LogReal::log_abs_rational(&int(2)).unwrap().neg());
        let zero = LatticeDivisor::div(&q(1)).unwrap();
        assert!(is_positive(&zero).unwrap().is_zero);
    }

    #[test]
    fn triangle_divisor_positive() {
        let mut rng = seeded(11);
        for _ in 0..50 {
            let x = nonzero_elem(&mut rng, FieldKind::Q);
            let y = nonzero_elem(&mut rng, FieldKind::Q);
            if x.add(&y).unwrap().is_zero() {
                continue;
            }
            assert!(is_positive(&triangle_divisor(&x, &y)).unwrap().is_positive, "{x} {y}");
        }
        let x = FieldElem::Q(rat(1, 3));
        assert!(is_positive(&triangle_divisor(&x, &x)).unwrap().is_positive);
    }

    #[test]
    fn qz_unsupported() {
        let z = FieldElem::parse(FieldKind::Qz, "z").unwrap();
        assert!(is_positive(&LatticeDivisor::div(&z).unwrap()).is_err());
    }
}
