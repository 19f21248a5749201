//! Randomized consistency check between exact positivity verdicts and
//! certificate-based conclusions.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;

use crate::arith::rational::{int, rat, Rational};
use crate::error::{GvfError, Result};
use crate::field::{FieldElem, FieldKind};
use crate::random::{rational, seeded};

use super::{
    evaluate, gamma_condition, is_positive, negativity_condition, search_neg_certificate,
    verify_gamma_membership, verify_neg_certificate, GammaCertificate, SearchBounds,
};

/// Outcome of [`cross_validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossReport {
    pub kind: FieldKind,
    pub seed: u64,
    pub cases: usize,
    pub certificates_found: usize,
    pub gamma_checked: usize,
    pub contradictions: Vec<String>,
    /// Cases a bounded search could not settle.
    pub inconclusive: Vec<String>,
}

const SEARCH: SearchBounds = SearchBounds {
    degree: 3,
    coeff: 8,
    node_budget: 200_000,
};

fn small_elem<R: Rng>(rng: &mut R, kind: FieldKind) -> FieldElem {
    match kind {
        FieldKind::Q => FieldElem::Q(rational(rng, 6, 6)),
        FieldKind::Fp(p) => loop {
            let deg = rng.gen_range(-1..=1i64);
            let c = rng.gen_range(1..p) as i64;
            let shift = rng.gen_range(0..p) as i64;
            let base = FieldElem::parse(kind, &format!("{c}*t + {shift}")).expect("valid");
            let x = base.pow(deg).unwrap_or(base);
            if !x.is_zero() {
                return x;
            }
        },
        _ => unreachable!("checked by the caller"),
    }
}

fn epsilon<R: Rng>(rng: &mut R) -> Rational {
    [int(1), rat(3, 2), int(2), int(3)][rng.gen_range(0..4)].clone()
}

fn neg_case<R: Rng>(rng: &mut R, kind: FieldKind, report: &mut CrossReport) -> Result<()> {
    let n = rng.gen_range(1..=2);
    let a: Vec<FieldElem> = (0..n).map(|_| small_elem(rng, kind)).collect();
    let eps = epsilon(rng);
    let label = format!(
        "a = ({}), eps = {}",
        a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
        eps
    );
    let condition = negativity_condition(&a, &eps)?;
    match search_neg_certificate(&a, &eps, SEARCH) {
        Ok(Some(cert)) => {
            report.certificates_found += 1;
            if !verify_neg_certificate(&a, &cert)? {
                report.contradictions.push(format!("{label}: found certificate fails to verify"));
            }
            if let Some((p, x)) = condition {
                report
                    .contradictions
                    .push(format!("{label}: certificate exists but the bound fails at {p} ({x})"));
            }
        }
        Ok(None) => {
            if condition.is_none() {
                report.inconclusive.push(format!("{label}: bound holds, no certificate within bounds"));
            }
        }
        Err(GvfError::BudgetExceeded { nodes }) => {
            report.inconclusive.push(format!("{label}: search stopped after {nodes} nodes"));
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn gamma_case<R: Rng>(rng: &mut R, kind: FieldKind, report: &mut CrossReport) -> Result<()> {
    let eps = epsilon(rng);
    let q = rng.gen_range(1..=2);
    let a: Vec<FieldElem> = (0..q).map(|_| small_elem(rng, kind)).collect();
    let p = rng.gen_range(1..=2);
    let mut rows = vec![];
    while rows.len() < p {
        let row: Vec<BigInt> = (0..q).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
        let s: BigInt = row.iter().map(Signed::abs).sum();
        if crate::arith::dyadic::below_pow2(s.magnitude(), &eps)? {
            rows.push(row);
        }
    }
    let cert = GammaCertificate::from_rows(a, rows)?;
    if cert.b.iter().any(FieldElem::is_zero) {
        return Ok(());
    }
    report.gamma_checked += 1;
    let alpha = cert.divisor()?;
    let label = format!("gamma certificate over {} with eps = {eps}", alpha);
    if !verify_gamma_membership(&alpha, &cert, &eps)? {
        report.contradictions.push(format!("{label}: valid certificate rejected"));
    }
    if let Some((pl, x)) = gamma_condition(&alpha, &eps)? {
        report.contradictions.push(format!("{label}: bound fails at {pl} ({x})"));
    }
    let verdict = is_positive(&alpha)?;
    if let Some((pl, x)) = verdict.witness {
        if x.sign()? >= 0 || evaluate(&pl, &alpha)? != x {
            report.contradictions.push(format!("{label}: witness at {pl} does not reproduce"));
        }
        if !pl.is_archimedean() {
            report
                .contradictions
                .push(format!("{label}: negative at non-archimedean place {pl}"));
        }
    }
    Ok(())
}

/// Runs `n` random cases over `Q` or `F_p(t)`, alternating between
/// negativity-certificate searches and Gamma certificates, and records every
/// disagreement with the exact place-by-place conditions.
pub fn cross_validate(n: usize, kind: FieldKind, seed: u64) -> Result<CrossReport> {
    if !matches!(kind, FieldKind::Q | FieldKind::Fp(_)) {
        return Err(GvfError::Unsupported(format!(
            "cross validation runs over Q and F_p(t), not {kind}"
        )));
    }
    let mut rng = seeded(seed);
    let mut report = CrossReport {
        kind,
        seed,
        cases: n,
        certificates_found: 0,
        gamma_checked: 0,
        contradictions: vec![],
        inconclusive: vec![],
    };
    for i in 0..n {
        if i % 2 == 0 {
            neg_case(&mut rng, kind, &mut report)?;
        } else {
            gamma_case(&mut rng, kind, &mut report)?;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_small_runs() {
        let r = cross_validate(0, FieldKind::Q, 7).unwrap();
        assert_eq!(r.cases, 0);
        assert!(r.contradictions.is_empty() && r.inconclusive.is_empty());
        for kind in [FieldKind::Q, FieldKind::Fp(3)] {
            let r = cross_validate(20, kind, 7).unwrap();
            assert!(r.contradictions.is_empty(), "{:?}", r.contradictions);
        }
        assert!(cross_validate(1, FieldKind::Qz, 7).is_err());
    }
}
