//! Lattice divisors: differences of formal joins of elements of `F (x) Q`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::logreal::{ExtLogReal, LogReal};
use crate::arith::rational::{fmt_rational, Rational};
use crate::error::{GvfError, Result};
use crate::field::{FieldElem, FieldKind};
use crate::places::{arch_places, support, v_eval, Place, Valuation};
use crate::tropical::normal::{to_normal_form, LinearForm};
use crate::tropical::term::Term;

/// A formal product `prod a_i^(q_i)`, written additively as `sum q_i div(a_i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem(BTreeMap<FieldElem, Rational>);

impl GroupElem {
    /// The neutral element `div(1)`.
    pub fn one() -> Self {
        GroupElem(BTreeMap::new())
    }

    /// `div(a)`. Units `1` and `-1` map to the neutral element.
    pub fn of(a: &FieldElem) -> Result<Self> {
        GroupElem::one().times_power(a, &Rational::one())
    }

    fn times_power(mut self, a: &FieldElem, q: &Rational) -> Result<Self> {
        if a.is_zero() {
            return Err(GvfError::domain("div(0) is undefined"));
        }
        if q.is_zero() || a.is_one() || a.neg().is_one() {
            return Ok(self);
        }
        let e = self.0.entry(a.clone()).or_insert_with(Rational::zero);
        *e += q;
        if e.is_zero() {
            self.0.remove(a);
        }
        Ok(self)
    }

    pub fn terms(&self) -> &BTreeMap<FieldElem, Rational> {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn kind(&self) -> Option<FieldKind> {
        self.0.keys().next().map(FieldElem::kind)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, q) in &o.0 {
            out = out.times_power(a, q).expect("keys are nonzero");
        }
        out
    }

    pub fn pow(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return GroupElem::one();
        }
        GroupElem(self.0.iter().map(|(a, e)| (a.clone(), e * q)).collect())
    }

    pub fn inv(&self) -> Self {
        self.pow(&-Rational::one())
    }

    /// `v(x) = sum q_i v(a_i)`.
    pub fn value(&self, v: &Valuation) -> Result<LogReal> {
        let mut acc = LogReal::zero();
        for (a, q) in &self.0 {
            match v_eval(v, a)? {
                ExtLogReal::Finite(x) => acc = acc.add(&x.scale(q)),
                _ => return Err(GvfError::domain("infinite value on a nonzero element")),
            }
        }
        Ok(acc)
    }

    /// The field element when all exponents are integers.
    pub fn to_field(&self, kind: FieldKind) -> Option<FieldElem> {
        let mut acc = FieldElem::one(kind);
        for (a, q) in &self.0 {
            if !q.is_integer() {
                return None;
            }
            let e: i64 = q.to_integer().try_into().ok()?;
            acc = acc.mul(&a.pow(e).ok()?).ok()?;
        }
        Some(acc)
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (a, q)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(if q.is_negative() { " - " } else { " + " })?;
            } else if q.is_negative() {
                f.write_str("-")?;
            }
            let m = q.abs();
            if !m.is_one() {
                write!(f, "{}*", fmt_rational(&m))?;
            }
            write!(f, "div({a})")?;
        }
        Ok(())
    }
}

/// `join(pos) - join(neg)`, both joins nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeDivisor {
    pos: Vec<GroupElem>,
    neg: Vec<GroupElem>,
}

fn tidy(mut v: Vec<GroupElem>) -> Vec<GroupElem> {
    v.sort();
    v.dedup();
    v
}

fn cross(a: &[GroupElem], b: &[GroupElem]) -> Vec<GroupElem> {
    tidy(
        a.iter()
            .flat_map(|x| b.iter().map(move |y| x.mul(y)))
            .collect(),
    )
}

impl LatticeDivisor {
    pub fn new(pos: Vec<GroupElem>, neg: Vec<GroupElem>) -> Result<Self> {
        if pos.is_empty() || neg.is_empty() {
            return Err(GvfError::domain("joins must be nonempty"));
        }
        let d = LatticeDivisor {
            pos: tidy(pos),
            neg: tidy(neg),
        };
        d.kind()?;
        Ok(d)
    }

    pub fn zero() -> Self {
        LatticeDivisor {
            pos: vec![GroupElem::one()],
            neg: vec![GroupElem::one()],
        }
    }

    pub fn from_group(x: GroupElem) -> Self {
        LatticeDivisor {
            pos: vec![x],
            neg: vec![GroupElem::one()],
        }
    }

    /// The principal divisor `div(a)`.
    pub fn div(a: &FieldElem) -> Result<Self> {
        Ok(Self::from_group(GroupElem::of(a)?))
    }

    /// `join_i div(a_i)`.
    pub fn join_of(a: &[FieldElem]) -> Result<Self> {
        let pos = a.iter().map(GroupElem::of).collect::<Result<Vec<_>>>()?;
        LatticeDivisor::new(pos, vec![GroupElem::one()])
    }

    /// `meet_i div(a_i)`.
    pub fn meet_of(a: &[FieldElem]) -> Result<Self> {
        let pos = a
            .iter()
            .map(|x| GroupElem::of(x).map(|g| g.inv()))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeDivisor::new(pos, vec![GroupElem::one()])?.neg())
    }

    pub fn pos(&self) -> &[GroupElem] {
        &self.pos
    }

    pub fn neg_join(&self) -> &[GroupElem] {
        &self.neg
    }

    /// Field of the elements involved; `None` when only `div(1)` appears.
    pub fn kind(&self) -> Result<Option<FieldKind>> {
        let mut kind = None;
        for g in self.pos.iter().chain(&self.neg) {
            for a in g.terms().keys() {
                match kind {
                    None => kind = Some(a.kind()),
                    Some(k) if k != a.kind() => return Err(GvfError::mismatch(k, a.kind())),
                    _ => {}
                }
            }
        }
        Ok(kind)
    }

    /// All field elements occurring in the presentation.
    pub fn elements(&self) -> Vec<FieldElem> {
        let mut v: Vec<FieldElem> = self
            .pos
            .iter()
            .chain(&self.neg)
            .flat_map(|g| g.terms().keys().cloned())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if let (Some(a), Some(b)) = (self.kind()?, o.kind()?) {
            if a != b {
                return Err(GvfError::mismatch(a, b));
            }
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        Ok(LatticeDivisor {
            pos: cross(&self.pos, &o.pos),
            neg: cross(&self.neg, &o.neg),
        })
    }

    pub fn neg(&self) -> Self {
        LatticeDivisor {
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// `(A - B) v (C - D) = (A + D) v (C + B) - (B + D)`.
    pub fn join(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let mut pos = cross(&self.pos, &o.neg);
        pos.extend(cross(&o.pos, &self.neg));
        Ok(LatticeDivisor {
            pos: tidy(pos),
            neg: cross(&self.neg, &o.neg),
        })
    }

    pub fn meet(&self, o: &Self) -> Result<Self> {
        Ok(self.neg().join(&o.neg())?.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return LatticeDivisor::zero();
        }
        let (p, n) = if q.is_negative() {
            (&self.neg, &self.pos)
        } else {
            (&self.pos, &self.neg)
        };
        let m = q.abs();
        LatticeDivisor {
            pos: tidy(p.iter().map(|g| g.pow(&m)).collect()),
            neg: tidy(n.iter().map(|g| g.pow(&m)).collect()),
        }
    }

    pub fn abs(&self) -> Result<Self> {
        self.join(&self.neg())
    }

    pub fn positive_part(&self) -> Result<Self> {
        self.join(&LatticeDivisor::zero())
    }

    pub fn negative_part(&self) -> Result<Self> {
        self.neg().join(&LatticeDivisor::zero())
    }

    /// Places where the divisor can be nonzero, plus the archimedean and
    /// degree places.
    pub fn candidate_places(&self) -> Result<Vec<Place>> {
        let Some(kind) = self.kind()? else {
            return Ok(vec![]);
        };
        let mut out = arch_places(kind);
        for a in self.elements() {
            out.extend(support(&a)?);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

fn max_value(xs: &[GroupElem], v: &Valuation) -> Result<LogReal> {
    let mut best: Option<LogReal> = None;
    for x in xs {
        let val = x.value(v)?;
        best = Some(match best {
            Some(b) if b.compare(&val)? != Ordering::Less => b,
            _ => val,
        });
    }
    best.ok_or_else(|| GvfError::domain("empty join"))
}

/// `v(alpha) = max_{x in I} min_{y in J} v(x / y)`.
pub fn ev_pair(v: &Valuation, alpha: &LatticeDivisor) -> Result<ExtLogReal> {
    if let Some(k) = alpha.kind()? {
        if k != v.place.field_kind() {
            return Err(GvfError::mismatch(v.place.field_kind(), k));
        }
    }
    let a = max_value(&alpha.pos, v)?;
    let b = max_value(&alpha.neg, v)?;
    Ok(ExtLogReal::Finite(a.sub(&b)))
}

fn instantiate(form: &LinearForm, a: &[FieldElem]) -> Result<GroupElem> {
    let mut g = GroupElem::one();
    for (k, q) in &form.0 {
        let x = a
            .get(k - 1)
            .ok_or_else(|| GvfError::domain(format!("no element for x{k}")))?;
        g = g.times_power(x, q)?;
    }
    Ok(g)
}

/// `t(div(a))` as a lattice divisor, via the normal form of `t`.
///
/// Extra coordinates beyond the largest variable of `t` are ignored.
pub fn divisor_from_term(t: &Term, a: &[FieldElem]) -> Result<LatticeDivisor> {
    if a.len() < t.arity() {
        return Err(GvfError::domain(format!(
            "term uses x{} but only {} elements were given",
            t.arity(),
            a.len()
        )));
    }
    if a.iter().any(FieldElem::is_zero) {
        return Err(GvfError::domain("div(0) is undefined"));
    }
    if let Some(first) = a.first() {
        if let Some(x) = a.iter().find(|x| x.kind() != first.kind()) {
            return Err(GvfError::mismatch(first.kind(), x.kind()));
        }
    }
    let n = to_normal_form(t);
    let pos = n
        .alphas
        .iter()
        .map(|f| instantiate(f, a))
        .collect::<Result<Vec<_>>>()?;
    let neg = n
        .betas
        .iter()
        .map(|f| instantiate(f, a))
        .collect::<Result<Vec<_>>>()?;
    LatticeDivisor::new(pos, neg)
}

pub(crate) fn require_decidable(alpha: &LatticeDivisor) -> Result<()> {
    if let Some(FieldKind::Qz) = alpha.kind()? {
        return Err(GvfError::Unsupported(
            "zero and positivity tests need a field with finitely many relevant places; Q(z) has a continuum".into(),
        ));
    }
    Ok(())
}

/// Exact test that `alpha` evaluates to zero at every place.
pub fn is_zero(alpha: &LatticeDivisor) -> Result<bool> {
    require_decidable(alpha)?;
    for p in alpha.candidate_places()? {
        if ev_pair(&Valuation::unit(p), alpha)?.sign()? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for LatticeDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[GroupElem]| v.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "join({}) - join({})", list(&self.pos), list(&self.neg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::tropical::term::parse_tropical;
    use num_bigint::BigUint;

    fn q(n: i64) -> FieldElem {
        FieldElem::Q(int(n))
    }

    fn d(n: i64) -> LatticeDivisor {
        LatticeDivisor::div(&q(n)).unwrap()
    }

    fn lg(n: i64) -> LogReal {
        LogReal::log_abs_rational(&int(n)).unwrap()
    }

    fn v2() -> Valuation {
        Valuation::unit(Place::QFinite(BigUint::from(2u32)))
    }

    #[test]
    fn evaluation_examples() {
        let alpha = d(4).join(&d(6)).unwrap().sub(&d(2)).unwrap();
        assert_eq!(ev_pair(&v2(), &alpha).unwrap(), lg(2).into());
        let z = d(7).sub(&d(7)).unwrap();
        assert_eq!(ev_pair(&Valuation::unit(Place::QArch), &z).unwrap(), ExtLogReal::zero());
        let t = FieldElem::parse(FieldKind::Fp(3), "t").unwrap();
        let a = LatticeDivisor::div(&t).unwrap();
        assert_eq!(
            ev_pair(&Valuation::unit(Place::FpDegree(3)), &a).unwrap(),
            LogReal::units(int(-1)).into()
        );
    }

    #[test]
    fn known_divisor_from_term() {
        let t = parse_tropical("min(x1)").unwrap();
        let a = divisor_from_term(&t, &[q(2)]).unwrap();
        assert!(is_zero(&a.sub(&d(2)).unwrap()).unwrap());
        let t = parse_tropical("min(x1, x2)").unwrap();
        let a = divisor_from_term(&t, &[q(2), q(3)]).unwrap();
        assert_eq!(a.pos(), &[GroupElem::of(&q(2)).unwrap().mul(&GroupElem::of(&q(3)).unwrap())]);
        assert_eq!(a.neg_join().len(), 2);
        let t = parse_tropical("x1 - x1").unwrap();
        assert!(is_zero(&divisor_from_term(&t, &[q(5)]).unwrap()).unwrap());
        assert!(divisor_from_term(&t, &[q(0)]).is_err());
        assert!(divisor_from_term(&parse_tropical("x2").unwrap(), &[q(3)]).is_err());
    }

    #[test]
    fn known_lattice_ops() {
        let j = d(2).join(&d(3)).unwrap();
        assert_eq!(ev_pair(&v2(), &j).unwrap(), lg(2).into());
        assert!(is_zero(&d(2).add(&d(3)).unwrap().sub(&d(6)).unwrap()).unwrap());
        let lhs = j.scale(&int(-1));
        let half = LatticeDivisor::div(&FieldElem::Q(rat(1, 2))).unwrap();
        let third = LatticeDivisor::div(&FieldElem::Q(rat(1, 3))).unwrap();
        let rhs = half.meet(&third).unwrap();
        assert!(is_zero(&lhs.sub(&rhs).unwrap()).unwrap());
        let f = FieldElem::parse(FieldKind::Fp(3), "t").unwrap();
        assert!(d(2).add(&LatticeDivisor::div(&f).unwrap()).is_err());
    }

    #[test]
    fn known_is_zero() {
        // div(pq) v 0 - (div p v div q v 0) with p = 2, q = 3
        let lhs = d(6).join(&LatticeDivisor::zero()).unwrap();
        let rhs = d(2).join(&d(3)).unwrap().join(&LatticeDivisor::zero()).unwrap();
        assert!(is_zero(&lhs.sub(&rhs).unwrap()).unwrap());
        assert!(!is_zero(&d(2)).unwrap());
        assert!(is_zero(&d(2).sub(&d(2)).unwrap()).unwrap());
    }

    #[test]
    fn meet_of_values() {
        let m = LatticeDivisor::meet_of(&[q(2), q(3)]).unwrap();
        let va = Valuation::unit(Place::QArch);
        assert_eq!(ev_pair(&va, &m).unwrap(), lg(3).neg().into());
        let a = d(12).abs().unwrap();
        assert_eq!(ev_pair(&va, &a).unwrap(), lg(12).into());
    }
}
