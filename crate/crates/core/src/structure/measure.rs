//! Lattice valuations and local measures over exact fields.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{finite, DiscreteGvf, Weight};
use crate::arith::logreal::{formal_tensor, ExtLogReal, LogReal, Quantity};
use crate::arith::rational::Rational;
use crate::error::{GvfError, Result};
use crate::field::{FieldElem, FieldKind};
use crate::places::Place;
use crate::tropical::{ev_pair, LatticeDivisor};

/// Place values of an element, with the structure's weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeValVector {
    entries: BTreeMap<Place, LogReal>,
    weights: BTreeMap<Place, Rational>,
}

impl LatticeValVector {
    pub fn entries(&self) -> &BTreeMap<Place, LogReal> {
        &self.entries
    }

    pub fn get(&self, place: &Place) -> LogReal {
        self.entries.get(place).cloned().unwrap_or_default()
    }

    fn combine(&self, o: &Self, pick_max: bool) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut weights = self.weights.clone();
        weights.extend(o.weights.iter().map(|(p, w)| (p.clone(), w.clone())));
        for p in weights.keys() {
            let (x, y) = (self.get(p), o.get(p));
            let bigger = x.compare(&y)?.is_gt();
            let v = if bigger == pick_max { x } else { y };
            if !v.is_formally_zero() {
                entries.insert(p.clone(), v);
            }
        }
        Ok(LatticeValVector { entries, weights })
    }

    pub fn meet(&self, o: &Self) -> Result<Self> {
        self.combine(o, false)
    }

    pub fn join(&self, o: &Self) -> Result<Self> {
        self.combine(o, true)
    }

    fn weighted_sum(&self, f: impl Fn(&LogReal) -> Result<LogReal>) -> Result<LogReal> {
        let mut acc = LogReal::zero();
        for (p, x) in &self.entries {
            let w = self.weights.get(p).cloned().unwrap_or_else(Rational::zero);
            acc = acc.add(&f(x)?.scale(&w));
        }
        Ok(acc)
    }

    /// `sum_v weight * x_v`.
    pub fn integral(&self) -> Result<LogReal> {
        self.weighted_sum(|x| Ok(x.clone()))
    }

    /// `sum_v weight * |x_v|`.
    pub fn norm(&self) -> Result<LogReal> {
        self.weighted_sum(|x| Ok(if x.sign()? < 0 { x.neg() } else { x.clone() }))
    }

    pub fn pos_norm(&self) -> Result<LogReal> {
        self.weighted_sum(|x| Ok(if x.sign()? > 0 { x.clone() } else { LogReal::zero() }))
    }

    pub fn neg_norm(&self) -> Result<LogReal> {
        self.weighted_sum(|x| Ok(if x.sign()? < 0 { x.neg() } else { LogReal::zero() }))
    }
}

/// One atom of a local measure: the place, `v(a)` there and its mass
/// `weight * v(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureAtom {
    pub place: Place,
    pub value: LogReal,
    pub mass: LogReal,
}

/// The finite measure attached to `a` on the places where `v(a) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMeasure {
    pub anchor: FieldElem,
    pub atoms: Vec<MeasureAtom>,
}

impl LocalMeasure {
    pub fn total_mass(&self) -> LogReal {
        self.atoms
            .iter()
            .fold(LogReal::zero(), |acc, a| acc.add(&a.mass))
    }

    pub fn atom(&self, place: &Place) -> Option<&MeasureAtom> {
        self.atoms.iter().find(|a| &a.place == place)
    }
}

/// Outcome of a Radon-Nikodym check between two local measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RnReport {
    /// Shared atoms with `mass_a / mass_b` when it is a rational number.
    pub shared: Vec<(Place, Option<Rational>)>,
    pub ratios_hold: bool,
    /// `None` when no test divisor was supplied.
    pub integral_holds: Option<bool>,
}

impl RnReport {
    pub fn holds(&self) -> bool {
        self.ratios_hold && self.integral_holds.unwrap_or(true)
    }
}

fn exact_weight(w: Weight) -> Result<Rational> {
    match w {
        Weight::Exact(q) => Ok(q),
        Weight::Approx(_) => Err(GvfError::Unsupported(
            "lattice valuations and local measures need exact weights".into(),
        )),
    }
}

impl DiscreteGvf {
    fn require_exact(&self) -> Result<()> {
        if self.kind == FieldKind::Qz {
            return Err(GvfError::Unsupported(
                "lattice valuations and local measures are implemented for exact fields".into(),
            ));
        }
        Ok(())
    }

    /// The vector `(v(x))_v` on the support of `x` and the archimedean places.
    pub fn lattice_valuation(&self, x: &FieldElem) -> Result<LatticeValVector> {
        self.require_exact()?;
        if x.is_zero() {
            return Err(GvfError::domain("lattice valuation of zero"));
        }
        let mut entries = BTreeMap::new();
        let mut weights = BTreeMap::new();
        for p in self.places_for(std::slice::from_ref(x))? {
            let v = finite(self.value(&p, x)?)?;
            weights.insert(p.clone(), exact_weight(self.weight(&p)?)?);
            if !v.is_formally_zero() {
                entries.insert(p, v);
            }
        }
        Ok(LatticeValVector { entries, weights })
    }

    /// `-integral(v(a_1) meet ... meet v(a_n))` over the nonzero coordinates.
    pub fn height_via_lattice(&self, a: &[FieldElem]) -> Result<Quantity> {
        self.require_exact()?;
        if a.is_empty() {
            return Err(GvfError::domain("height of an empty tuple"));
        }
        let mut acc: Option<LatticeValVector> = None;
        for x in a.iter().filter(|x| !x.is_zero()) {
            let v = self.lattice_valuation(x)?;
            acc = Some(match acc {
                None => v,
                Some(m) => m.meet(&v)?,
            });
        }
        Ok(match acc {
            None => Quantity::Exact(ExtLogReal::NegInf),
            Some(m) => Quantity::Exact(ExtLogReal::Finite(m.integral()?.neg())),
        })
    }

    /// Atoms `(v, weight * v(a))` over the places with `v(a) > 0`.
    pub fn local_measure(&self, a: &FieldElem) -> Result<LocalMeasure> {
        let v = self.lattice_valuation(a)?;
        let mut atoms = vec![];
        for (p, x) in v.entries() {
            if x.sign()? > 0 {
                let w = exact_weight(self.weight(p)?)?;
                atoms.push(MeasureAtom {
                    place: p.clone(),
                    value: x.clone(),
                    mass: x.scale(&w),
                });
            }
        }
        if atoms.is_empty() {
            return Err(GvfError::domain(format!("{a} has no place with positive value")));
        }
        Ok(LocalMeasure {
            anchor: a.clone(),
            atoms,
        })
    }

    /// Checks `mass_a / mass_b = v(a) / v(b)` on every shared atom, and when
    /// `beta` is given, that integrating `v(beta) / v(a)` against the measure
    /// of `a` recovers `functional(beta)`.
    pub fn rn_check(
        &self,
        a: &FieldElem,
        b: &FieldElem,
        beta: Option<&LatticeDivisor>,
    ) -> Result<RnReport> {
        let ma = self.local_measure(a)?;
        let mb = self.local_measure(b)?;
        let mut shared = vec![];
        let mut ratios_hold = true;
        for x in &ma.atoms {
            let Some(y) = mb.atom(&x.place) else { continue };
            ratios_hold &= formal_tensor(&x.mass, &y.value) == formal_tensor(&y.mass, &x.value);
            shared.push((x.place.clone(), x.mass.ratio(&y.mass)));
        }
        let integral_holds = match beta {
            None => None,
            Some(beta) => Some(self.integrate_against(&ma, beta)?),
        };
        Ok(RnReport {
            shared,
            ratios_hold,
            integral_holds,
        })
    }

    fn integrate_against(&self, m: &LocalMeasure, beta: &LatticeDivisor) -> Result<bool> {
        for p in beta.candidate_places()? {
            if m.atom(&p).is_none() && ev_pair(&self.valuation(&p), beta)?.sign()? != 0 {
                return Err(GvfError::domain(format!(
                    "the test divisor is not supported on the atoms (nonzero at {p})"
                )));
            }
        }
        let mut acc = LogReal::zero();
        for atom in &m.atoms {
            // (v(beta) / v(a)) * mass, with mass / v(a) the atom's weight
            let e = finite(ev_pair(&self.valuation(&atom.place), beta)?)?;
            let Some(w) = atom.mass.ratio(&atom.value) else {
                return Ok(false);
            };
            acc = acc.add(&e.scale(&w));
        }
        Ok(match self.functional(beta)? {
            Quantity::Exact(ExtLogReal::Finite(f)) => f.exact_eq(&acc)?,
            _ => false,
        })
    }

    /// `mu_a` and `mu_(1/a)` have the same total mass.
    pub fn mass_balance(&self, a: &FieldElem) -> Result<bool> {
        let m1 = self.local_measure(a)?.total_mass();
        let m2 = self.local_measure(&a.inv()?)?.total_mass();
        m1.exact_eq(&m2)
    }
}

#[cfg(test)]
mod tests {
    use super::super::gvf_q;
    use super::*;
    use crate::arith::rational::{int, rat};
    use num_bigint::BigUint;

    fn q(n: i64) -> FieldElem {
        FieldElem::Q(int(n))
    }

    fn lg(n: i64) -> LogReal {
        LogReal::log_abs_rational(&int(n)).unwrap()
    }

    #[test]
    fn lattice_vectors() {
        let g = gvf_q(int(1)).unwrap();
        assert!(g.lattice_valuation(&q(6)).unwrap().integral().unwrap().is_formally_zero());
        let v = g.lattice_valuation(&q(2)).unwrap();
        assert_eq!(v.norm().unwrap(), lg(2).scale(&int(2)));
        assert_eq!(v.pos_norm().unwrap().add(&v.neg_norm().unwrap()), v.norm().unwrap());
        let a = [q(12), FieldElem::Q(rat(-5, 9)), q(0)];
        assert_eq!(g.height_via_lattice(&a).unwrap(), g.height(&a).unwrap());
        assert!(g.lattice_valuation(&q(0)).is_err());
    }

    #[test]
    fn measures() {
        let g = gvf_q(int(1)).unwrap();
        let m = g.local_measure(&q(2)).unwrap();
        assert_eq!(m.atoms.len(), 1);
        assert_eq!(m.atoms[0].place, Place::QFinite(BigUint::from(2u32)));
        assert_eq!(m.atoms[0].mass, lg(2));
        let r = g.rn_check(&q(2), &q(4), None).unwrap();
        assert!(r.holds());
        assert_eq!(r.shared, vec![(Place::QFinite(BigUint::from(2u32)), Some(rat(1, 2)))]);
        assert!(g.local_measure(&FieldElem::Q(rat(1, 3))).is_ok());
        assert!(g.local_measure(&q(1)).is_err());
        assert!(g.mass_balance(&FieldElem::Q(rat(12, 35))).unwrap());
        let beta = LatticeDivisor::div(&q(2)).unwrap().positive_part().unwrap();
        let r = g.rn_check(&FieldElem::Q(rat(6, 5)), &q(2), Some(&beta));
        assert!(r.unwrap().holds());
        let bad = LatticeDivisor::div(&q(7)).unwrap().positive_part().unwrap();
        assert!(g.rn_check(&q(2), &q(4), Some(&bad)).is_err());
    }
}
