//! Positivity verdicts, negativity certificates and Gamma presentations.

use gvf::arith::rational::{int, rat};
use gvf::field::{FieldElem, FieldKind};
use gvf::positivity::{
    cross_validate, gamma_condition, is_positive, search_neg_certificate, verify_gamma_membership,
    verify_neg_certificate, GammaCertificate, SearchBounds,
};
use gvf::tropical::LatticeDivisor;
use num_bigint::BigInt;

fn main() -> gvf::Result<()> {
    let (x, y) = (FieldElem::Q(rat(3, 4)), FieldElem::Q(rat(-5, 6)));
    let two = FieldElem::Q(int(2));
    let alpha = LatticeDivisor::div(&x.add(&y)?)?
        .sub(&LatticeDivisor::meet_of(&[x.clone(), y.clone()])?)?
        .sub(&LatticeDivisor::meet_of(&[two, FieldElem::one(FieldKind::Q)])?)?;
    let v = is_positive(&alpha)?;
    println!("{alpha}: positive {}, zero {}", v.is_positive, v.is_zero);
    let v = is_positive(&alpha.neg())?;
    println!("its negation: positive {}, witness {:?}", v.is_positive, v.witness);

    let a = [FieldElem::Q(rat(1, 2))];
    match search_neg_certificate(&a, &int(2), SearchBounds::new(2, 4))? {
        Some(c) => println!("certificate {:?}, cost {}, valid {}", c.coefficients, c.cost_approx(), verify_neg_certificate(&a, &c)?),
        None => println!("no certificate"),
    }
    println!("a = (2), eps = 1: {:?}", search_neg_certificate(&[two_q()], &int(1), SearchBounds::new(3, 8))?);

    let b = vec![FieldElem::Q(int(3)), FieldElem::Q(int(5))];
    let cert = GammaCertificate::from_rows(b, vec![vec![BigInt::from(1), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(0)]])?;
    let gamma = cert.divisor()?;
    println!("Gamma divisor {gamma}: member {}", verify_gamma_membership(&gamma, &cert, &int(2))?);
    println!("place condition: {:?}", gamma_condition(&gamma, &int(2))?);

    let report = cross_validate(20, FieldKind::Q, 1)?;
    println!(
        "cross validation: {} cases, {} certificates, {} contradictions",
        report.cases,
        report.certificates_found,
        report.contradictions.len()
    );
    Ok(())
}

fn two_q() -> FieldElem {
    FieldElem::Q(int(2))
}
