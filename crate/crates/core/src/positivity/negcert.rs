//! Negativity certificates: integer polynomials `P` with `P(a) = 1` and
//! small weighted coefficient norm.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::dyadic::{below_pow2, weighted_sum_approx, weighted_sum_cmp, weighted_sum_cmp_one};
use crate::arith::logreal::{ExtLogReal, LogReal};
use crate::arith::rational::{to_f64, Rational};
use crate::error::{GvfError, Result};
use crate::field::{FieldElem, FieldKind};
use crate::places::{arch_places, support, v_eval, Place, Valuation};

/// Node limit for [`search_neg_certificate`] unless overridden.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// Coefficients `m_s` of `sum_s m_s X^s`, keyed by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegCertificate {
    pub coefficients: BTreeMap<Vec<u32>, BigInt>,
    pub epsilon: Rational,
}

impl NegCertificate {
    /// `(|m_s|, |s|)` pairs of the weighted norm.
    pub fn cost_terms(&self) -> Vec<(BigUint, u64)> {
        self.coefficients
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(s, m)| (m.magnitude().clone(), s.iter().map(|&e| e as u64).sum()))
            .collect()
    }

    /// `sum |m_s| 2^(-eps |s|)` as a float, for display.
    pub fn cost_approx(&self) -> f64 {
        weighted_sum_approx(&self.cost_terms(), &self.epsilon)
    }

    /// Exact comparison of weighted norms; both certificates use `self.epsilon`.
    pub fn cost_cmp(&self, o: &NegCertificate) -> Result<Ordering> {
        weighted_sum_cmp(&self.cost_terms(), &o.cost_terms(), &self.epsilon)
    }
}

/// Search limits: total degree, coefficient size and node budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub degree: u32,
    pub coeff: u64,
    pub node_budget: u64,
}

impl SearchBounds {
    pub fn new(degree: u32, coeff: u64) -> Self {
        SearchBounds {
            degree,
            coeff,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

fn check_tuple(a: &[FieldElem]) -> Result<FieldKind> {
    let first = a.first().ok_or_else(|| GvfError::domain("empty tuple"))?;
    let kind = first.kind();
    for x in a {
        if x.kind() != kind {
            return Err(GvfError::mismatch(kind, x.kind()));
        }
        if x.is_zero() {
            return Err(GvfError::domain("certificates need nonzero elements"));
        }
    }
    if kind == FieldKind::Qz {
        return Err(GvfError::Unsupported("certificates over Q(z) are not decidable here".into()));
    }
    Ok(kind)
}

fn check_eps(eps: &Rational) -> Result<()> {
    if !eps.is_positive() {
        return Err(GvfError::domain("epsilon must be positive"));
    }
    Ok(())
}

fn monomial(a: &[FieldElem], s: &[u32]) -> Result<FieldElem> {
    let mut x = FieldElem::one(a[0].kind());
    for (ai, &e) in a.iter().zip(s) {
        x = x.mul(&ai.pow(e as i64)?)?;
    }
    Ok(x)
}

fn int_elem(kind: FieldKind, m: &BigInt) -> Result<FieldElem> {
    FieldElem::from_rational(kind, &Rational::from_integer(m.clone()))
}

/// Checks `sum m_s a^s = 1` and `sum |m_s| 2^(-eps |s|) < 1` exactly.
pub fn verify_neg_certificate(a: &[FieldElem], cert: &NegCertificate) -> Result<bool> {
    let kind = check_tuple(a)?;
    check_eps(&cert.epsilon)?;
    if let Some(s) = cert.coefficients.keys().find(|s| s.len() != a.len()) {
        return Err(GvfError::domain(format!(
            "exponent vector of length {} for a tuple of length {}",
            s.len(),
            a.len()
        )));
    }
    let mut sum = FieldElem::zero(kind);
    for (s, m) in &cert.coefficients {
        sum = sum.add(&int_elem(kind, m)?.mul(&monomial(a, s)?)?)?;
    }
    if !sum.is_one() {
        return Ok(false);
    }
    Ok(weighted_sum_cmp_one(&cert.cost_terms(), &cert.epsilon)? == Ordering::Less)
}

/// The first place where `min_i v(a_i) + eps * min(v(2), 0)` breaks the
/// bound a certificate forces (`<= 0`, strictly below zero at archimedean
/// places), with that value. `None` means the bound holds everywhere.
pub fn negativity_condition(a: &[FieldElem], eps: &Rational) -> Result<Option<(Place, LogReal)>> {
    let kind = check_tuple(a)?;
    check_eps(eps)?;
    let two = FieldElem::from_int(kind, 2);
    let mut places = arch_places(kind);
    for x in a {
        places.extend(support(x)?);
    }
    if !two.is_zero() {
        places.extend(support(&two)?);
    }
    places.sort();
    places.dedup();
    for p in places {
        let v = Valuation::unit(p.clone());
        let mut m: Option<LogReal> = None;
        for x in a {
            let ExtLogReal::Finite(val) = v_eval(&v, x)? else { unreachable!("nonzero") };
            m = Some(match m {
                Some(b) if b.compare(&val)?.is_le() => b,
                _ => val,
            });
        }
        let mut total = m.expect("nonempty tuple");
        if let ExtLogReal::Finite(v2) = v_eval(&v, &two)? {
            if v2.sign()? < 0 {
                total = total.add(&v2.scale(eps));
            }
        }
        let sign = total.sign()?;
        let bad = if p.is_archimedean() { sign >= 0 } else { sign > 0 };
        if bad {
            return Ok(Some((p, total)));
        }
    }
    Ok(None)
}

fn exponent_vectors(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(n, max_deg, &mut vec![], &mut out);
    out.retain(|s| s.iter().sum::<u32>() >= 1);
    out.sort_by(|x, y| {
        let (dx, dy) = (x.iter().sum::<u32>(), y.iter().sum::<u32>());
        dy.cmp(&dx).then_with(|| x.cmp(y))
    });
    out
}

/// Absolute values under each archimedean embedding.
fn magnitudes(x: &FieldElem) -> Vec<f64> {
    match x {
        FieldElem::Q(q) => vec![to_f64(q).abs()],
        FieldElem::Quad(q) if q.d() > 0 => vec![q.to_f64().abs(), q.conj().to_f64().abs()],
        FieldElem::Quad(q) => vec![to_f64(&q.norm()).sqrt()],
        _ => vec![],
    }
}

struct Level {
    exps: Vec<u32>,
    power: FieldElem,
    weight: f64,
    coeffs: Vec<BigInt>,
}

struct Search<'a> {
    kind: FieldKind,
    eps: &'a Rational,
    levels: Vec<Level>,
    places: Vec<Place>,
    // min over levels k.. of v(a^s) at each place
    suffix_min: Vec<Vec<LogReal>>,
    // bound on |sum_{j >= k} m_j a^(s_j)| per embedding
    suffix_arch: Vec<Vec<f64>>,
    nodes: u64,
    budget: u64,
    best: Option<NegCertificate>,
    best_cost: f64,
}

impl Search<'_> {
    fn dfs(&mut self, k: usize, target: &FieldElem, cost: f64, chosen: &mut Vec<(usize, BigInt)>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(GvfError::BudgetExceeded { nodes: self.nodes });
        }
        if target.is_zero() {
            return self.record(chosen);
        }
        if k == self.levels.len() {
            return Ok(());
        }
        for (i, p) in self.places.iter().enumerate() {
            let ExtLogReal::Finite(v) = v_eval(&Valuation::unit(p.clone()), target)? else {
                unreachable!("nonzero target")
            };
            if v.compare(&self.suffix_min[k][i])?.is_lt() {
                return Ok(());
            }
        }
        for (e, m) in magnitudes(target).into_iter().enumerate() {
            if m > self.suffix_arch[k][e] * (1.0 + 1e-9) + 1e-300 {
                return Ok(());
            }
        }
        let coeffs = self.levels[k].coeffs.clone();
        let weight = self.levels[k].weight;
        for m in coeffs {
            let c = cost + m.abs().to_f64().unwrap_or(f64::INFINITY) * weight;
            if c >= 1.0 + 1e-9 || (self.best.is_some() && c > self.best_cost + 1e-9) {
                if m.is_zero() {
                    continue;
                }
                break;
            }
            if m.is_zero() {
                self.dfs(k + 1, target, cost, chosen)?;
                continue;
            }
            let next = target.sub(&int_elem(self.kind, &m)?.mul(&self.levels[k].power)?)?;
            chosen.push((k, m));
            self.dfs(k + 1, &next, c, chosen)?;
            chosen.pop();
        }
        Ok(())
    }

    fn record(&mut self, chosen: &[(usize, BigInt)]) -> Result<()> {
        let cert = NegCertificate {
            coefficients: chosen
                .iter()
                .map(|(k, m)| (self.levels[*k].exps.clone(), m.clone()))
                .collect(),
            epsilon: self.eps.clone(),
        };
        if weighted_sum_cmp_one(&cert.cost_terms(), self.eps)? != Ordering::Less {
            return Ok(());
        }
        let better = match &self.best {
            None => true,
            Some(b) => match cert.cost_cmp(b)? {
                Ordering::Less => true,
                Ordering::Equal => cert.coefficients < b.coefficients,
                Ordering::Greater => false,
            },
        };
        if better {
            self.best_cost = cert.cost_approx();
            self.best = Some(cert);
        }
        Ok(())
    }
}

/// Exhaustive branch-and-bound search for the cheapest certificate with
/// `1 <= |s| <= degree` and `|m_s| <= coeff`; ties are broken by the
/// lexicographic order of the coefficient map. `Ok(None)` proves that no
/// certificate exists within the bounds; running out of nodes is an error.
pub fn search_neg_certificate(
    a: &[FieldElem],
    eps: &Rational,
    bounds: SearchBounds,
) -> Result<Option<NegCertificate>> {
    let kind = check_tuple(a)?;
    check_eps(eps)?;
    let mut levels = vec![];
    for s in exponent_vectors(a.len(), bounds.degree) {
        let deg: u32 = s.iter().sum();
        let scaled = eps * Rational::from_integer(deg.into());
        let mut max = bounds.coeff;
        while max > 0 && !below_pow2(&BigUint::from(max), &scaled)? {
            max -= 1;
        }
        if let FieldKind::Fp(p) = kind {
            max = max.min(p / 2);
        }
        let mut coeffs = vec![BigInt::zero()];
        for m in 1..=max {
            coeffs.push(BigInt::from(m));
            coeffs.push(-BigInt::from(m));
        }
        levels.push(Level {
            power: monomial(a, &s)?,
            weight: (-to_f64(&scaled)).exp2(),
            exps: s,
            coeffs,
        });
    }
    let mut places: Vec<Place> = vec![];
    for x in a {
        places.extend(support(x)?.into_iter().filter(|p| !p.is_archimedean()));
    }
    places.sort();
    places.dedup();
    let n = levels.len();
    let embeds = magnitudes(&FieldElem::one(kind)).len();
    let mut suffix_min = vec![vec![LogReal::zero(); places.len()]; n + 1];
    let mut suffix_arch = vec![vec![0.0; embeds]; n + 1];
    for k in (0..n).rev() {
        for (i, p) in places.iter().enumerate() {
            let ExtLogReal::Finite(v) = v_eval(&Valuation::unit(p.clone()), &levels[k].power)? else {
                unreachable!("nonzero power")
            };
            suffix_min[k][i] = if k + 1 < n && suffix_min[k + 1][i].compare(&v)?.is_lt() {
                suffix_min[k + 1][i].clone()
            } else {
                v
            };
        }
        let top = levels[k].coeffs.last().map_or(0.0, |m| m.abs().to_f64().unwrap_or(0.0));
        for (e, m) in magnitudes(&levels[k].power).into_iter().enumerate() {
            suffix_arch[k][e] = suffix_arch[k + 1][e] + top * m;
        }
    }
    let mut search = Search {
        kind,
        eps,
        levels,
        places,
        suffix_min,
        suffix_arch,
        nodes: 0,
        budget: bounds.node_budget,
        best: None,
        best_cost: f64::INFINITY,
    };
    search.dfs(0, &FieldElem::one(kind), 0.0, &mut vec![])?;
    Ok(search.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn cert(pairs: &[(&[u32], i64)], eps: Rational) -> NegCertificate {
        NegCertificate {
            coefficients: pairs.iter().map(|(s, m)| (s.to_vec(), BigInt::from(*m))).collect(),
            epsilon: eps,
        }
    }

    #[test]
    fn known_verify() {
        let half = [FieldElem::Q(rat(1, 2))];
        assert!(verify_neg_certificate(&half, &cert(&[(&[1], 2)], int(2))).unwrap());
        assert!(!verify_neg_certificate(&half, &cert(&[(&[1], 3)], int(2))).unwrap());
        let two = [FieldElem::Q(int(2))];
        assert!(!verify_neg_certificate(&two, &cert(&[(&[1], 1)], int(1))).unwrap());
        assert!(verify_neg_certificate(&half, &cert(&[(&[1, 0], 2)], int(2))).is_err());
        // cost exactly 1 is rejected
        assert!(!verify_neg_certificate(&half, &cert(&[(&[1], 2)], int(1))).unwrap());
    }

    #[test]
    fn known_search() {
        let half = [FieldElem::Q(rat(1, 2))];
        let c = search_neg_certificate(&half, &int(2), SearchBounds::new(2, 4)).unwrap().unwrap();
        assert!(verify_neg_certificate(&half, &c).unwrap());
        assert!(c.cost_approx() <= 0.5);
        assert_eq!(c, cert(&[(&[2], 4)], int(2)));
        let two = [FieldElem::Q(int(2))];
        assert_eq!(search_neg_certificate(&two, &int(1), SearchBounds::new(4, 8)).unwrap(), None);
        let third = [FieldElem::Q(rat(1, 3))];
        assert_eq!(search_neg_certificate(&third, &int(1), SearchBounds::new(4, 8)).unwrap(), None);
        let c = search_neg_certificate(&third, &int(2), SearchBounds::new(4, 8)).unwrap().unwrap();
        assert!(verify_neg_certificate(&third, &c).unwrap());
    }

    #[test]
    fn conditions_match_certificates() {
        let half = [FieldElem::Q(rat(1, 2))];
        assert_eq!(negativity_condition(&half, &int(2)).unwrap(), None);
        assert!(negativity_condition(&half, &int(1)).unwrap().is_some());
        let third = [FieldElem::Q(rat(1, 3))];
        let (p, _) = negativity_condition(&third, &int(1)).unwrap().unwrap();
        assert_eq!(p, Place::QArch);
    }

    #[test]
    fn function_field_certificates() {
        let k = FieldKind::Fp(3);
        let a = [FieldElem::parse(k, "t+1").unwrap(), FieldElem::parse(k, "t").unwrap()];
        let c = search_neg_certificate(&a, &int(2), SearchBounds::new(2, 4)).unwrap().unwrap();
        assert!(verify_neg_certificate(&a, &c).unwrap());
        assert_eq!(negativity_condition(&a, &int(2)).unwrap(), None);
        let b = [FieldElem::parse(k, "1/t").unwrap()];
        assert_eq!(search_neg_certificate(&b, &int(2), SearchBounds::new(4, 4)).unwrap(), None);
    }

    #[test]
    fn budget_is_reported() {
        let a = [FieldElem::Q(rat(2, 3)), FieldElem::Q(rat(3, 5))];
        let b = SearchBounds {
            degree: 8,
            coeff: 64,
            node_budget: 1000,
        };
        assert!(matches!(
            search_neg_certificate(&a, &int(3), b),
            Err(GvfError::BudgetExceeded { .. })
        ));
    }
}
