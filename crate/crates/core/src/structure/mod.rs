//! Discrete GVF structures: a field with a weighted family of places.
//!
//! Every quantity is a weighted sum over places,
//! `sum_v weight(v) * f(v(a))`, restricted to the finitely many places where
//! `f(v(a))` can be nonzero. Over `Q(z)` the archimedean place is the circle
//! average of `-log|a(e^(i theta))|` and the closed points are weighted by
//! their Weil height, so results there are certified intervals.

mod battery;
mod measure;
mod uniqueness;

pub use battery::{gauge_inequalities, height_axioms, renormalization_invariance, BatteryReport};
pub use measure::{LatticeValVector, LocalMeasure, MeasureAtom};
pub use uniqueness::{uniqueness_witness, UniquenessReport};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::circle::{CircleContext, LogForm, DEFAULT_CIRCLE_TOL};
use crate::arith::interval::Interval;
use crate::arith::logreal::{ExtLogReal, LogReal, Quantity};
use crate::arith::mahler::mahler_measure;
use crate::arith::quad::is_valid_discriminant_root;
use crate::arith::rational::{fmt_rational, Rational};
use crate::error::{GvfError, Result};
use crate::field::{FieldElem, FieldKind, QzElem};
use crate::places::{arch_places, qz_arch_mean, support, v_eval, Place, Valuation};
use crate::tropical::{to_normal_form, GroupElem, LatticeDivisor, LinearForm, Term};

/// Weight of a place: exact except for closed points of `P^1` over `Q`.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Exact(Rational),
    Approx(Interval),
}

/// Which places a renormalization touches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceSelection {
    All,
    Only(BTreeSet<Place>),
}

/// A discrete GVF structure on one of the supported fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteGvf {
    kind: FieldKind,
    global: Rational,
    default_scale: Rational,
    scales: BTreeMap<Place, Rational>,
}

/// All places of `Q` with weight `r`; `ht(2) = r log 2`.
pub fn gvf_q(r: Rational) -> Result<DiscreteGvf> {
    DiscreteGvf::new(FieldKind::Q, r)
}

/// All places of `F_p(t)` with weight `r`, in degree units; `ht(t) = r`.
pub fn gvf_fpt(p: u64, r: Rational) -> Result<DiscreteGvf> {
    DiscreteGvf::new(FieldKind::fp(p)?, r)
}

/// Gauss norms, the circle average and closed points weighted by height.
pub fn gvf_qz() -> DiscreteGvf {
    DiscreteGvf {
        kind: FieldKind::Qz,
        global: Rational::one(),
        default_scale: Rational::one(),
        scales: BTreeMap::new(),
    }
}

/// The Galois-invariant extension of `gvf_q(1)` to `Q(sqrt d)`.
pub fn gvf_quad(d: i64) -> Result<DiscreteGvf> {
    if !is_valid_discriminant_root(d) {
        return Err(GvfError::domain(format!("{d} is not a squarefree integer other than 0, 1")));
    }
    DiscreteGvf::new(FieldKind::Quad(d), Rational::one())
}

struct Acc {
    exact: LogReal,
    approx: Option<Interval>,
}

impl Acc {
    fn new() -> Self {
        Acc {
            exact: LogReal::zero(),
            approx: None,
        }
    }

    fn push(&mut self, w: &Weight, x: &LogReal) {
        match w {
            Weight::Exact(q) => self.exact = self.exact.add(&x.scale(q)),
            Weight::Approx(i) => {
                let t = i.mul(&x.to_interval());
                self.approx = Some(self.approx.map_or(t, |a| a.add(&t)));
            }
        }
    }

    fn push_interval(&mut self, i: Interval) {
        self.approx = Some(self.approx.map_or(i, |a| a.add(&i)));
    }

    fn finish(self) -> Quantity {
        match self.approx {
            None => Quantity::Exact(ExtLogReal::Finite(self.exact)),
            Some(i) => Quantity::Approx(self.exact.to_interval().add(&i)),
        }
    }
}

fn finite(x: ExtLogReal) -> Result<LogReal> {
    match x {
        ExtLogReal::Finite(v) => Ok(v),
        _ => Err(GvfError::domain("infinite value on a nonzero element")),
    }
}

fn check_kinds(kind: FieldKind, a: &[FieldElem]) -> Result<()> {
    for x in a {
        if x.kind() != kind {
            return Err(GvfError::mismatch(kind, x.kind()));
        }
    }
    Ok(())
}

fn max_logs(xs: Vec<LogReal>) -> Result<LogReal> {
    let mut it = xs.into_iter();
    let mut best = it.next().ok_or_else(|| GvfError::domain("empty maximum"))?;
    for x in it {
        if x.compare(&best)?.is_gt() {
            best = x;
        }
    }
    Ok(best)
}

impl DiscreteGvf {
    fn new(kind: FieldKind, r: Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(GvfError::domain("the global scale must be nonnegative"));
        }
        Ok(DiscreteGvf {
            kind,
            global: r,
            default_scale: Rational::one(),
            scales: BTreeMap::new(),
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// The global scale `r`.
    pub fn global_scale(&self) -> &Rational {
        &self.global
    }

    /// Scale applied to the normalized valuation at `place`.
    pub fn scale_of(&self, place: &Place) -> Rational {
        self.scales
            .get(place)
            .cloned()
            .unwrap_or_else(|| self.default_scale.clone())
    }

    pub fn valuation(&self, place: &Place) -> Valuation {
        Valuation {
            place: place.clone(),
            scale: self.scale_of(place),
        }
    }

    pub fn weight(&self, place: &Place) -> Result<Weight> {
        let c = self.scale_of(place);
        Ok(match place {
            Place::QzPoint(None) => Weight::Exact(Rational::zero()),
            Place::QzPoint(Some(g)) => {
                Weight::Approx(mahler_measure(g)?.scale(1.0 / crate::arith::rational::to_f64(&c)))
            }
            Place::QzGauss(_) | Place::QzArch => Weight::Exact(Rational::one() / c),
            _ => Weight::Exact(&self.global / c),
        })
    }

    /// `v(a)` under this structure's scaling.
    pub fn value(&self, place: &Place, a: &FieldElem) -> Result<ExtLogReal> {
        v_eval(&self.valuation(place), a)
    }

    /// Multiplies the scale of the selected places by `c` and divides their
    /// weight by `c`.
    pub fn renormalize(&self, selection: &PlaceSelection, c: &Rational) -> Result<DiscreteGvf> {
        if !c.is_positive() {
            return Err(GvfError::domain("renormalization factor must be positive"));
        }
        let mut out = self.clone();
        match selection {
            PlaceSelection::All => {
                out.default_scale *= c;
                for s in out.scales.values_mut() {
                    *s *= c;
                }
            }
            PlaceSelection::Only(places) => {
                for p in places {
                    if p.field_kind() != self.kind {
                        return Err(GvfError::mismatch(self.kind, p.field_kind()));
                    }
                    let s = self.scale_of(p) * c;
                    out.scales.insert(p.clone(), s);
                }
            }
        }
        out.scales.retain(|_, s| *s != out.default_scale);
        Ok(out)
    }

    fn places_for(&self, elems: &[FieldElem]) -> Result<Vec<Place>> {
        let mut out = arch_places(self.kind);
        for a in elems {
            if !a.is_zero() {
                out.extend(support(a)?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn qz_elems(elems: &[FieldElem]) -> Vec<&QzElem> {
        elems
            .iter()
            .filter_map(|a| match a {
                FieldElem::Qz(x) => Some(x),
                _ => None,
            })
            .collect()
    }

    /// `-sum_k q_k log|a_k|` on the circle.
    fn arch_form<'a>(
        ctx: &mut CircleContext,
        terms: impl IntoIterator<Item = (&'a FieldElem, &'a Rational)>,
    ) -> Result<LogForm> {
        let mut form = LogForm::constant(Interval::zero());
        for (a, q) in terms {
            let FieldElem::Qz(x) = a else {
                return Err(GvfError::mismatch(FieldKind::Qz, a.kind()));
            };
            let f = ctx.log_abs_fraction(x.scalar(), x.num(), x.den(), &-q)?;
            form = form.add_scaled(&f, 1.0);
        }
        Ok(form)
    }

    fn linear_arch_forms(
        ctx: &mut CircleContext,
        forms: &[LinearForm],
        a: &[FieldElem],
    ) -> Result<Vec<LogForm>> {
        forms
            .iter()
            .map(|l| Self::arch_form(ctx, l.0.iter().map(|(k, q)| (&a[k - 1], q))))
            .collect()
    }

    /// `h(a) = sum_v weight * max_i(-v(a_i))` over nonzero coordinates; the
    /// zero tuple has height `-inf`.
    pub fn height(&self, a: &[FieldElem]) -> Result<Quantity> {
        self.height_with_tol(a, DEFAULT_CIRCLE_TOL)
    }

    pub fn height_with_tol(&self, a: &[FieldElem], tol: f64) -> Result<Quantity> {
        if a.is_empty() {
            return Err(GvfError::domain("height of an empty tuple"));
        }
        check_kinds(self.kind, a)?;
        let nz: Vec<FieldElem> = a.iter().filter(|x| !x.is_zero()).cloned().collect();
        if nz.is_empty() {
            return Ok(Quantity::Exact(ExtLogReal::NegInf));
        }
        let mut acc = Acc::new();
        for p in self.places_for(&nz)? {
            if p == Place::QzArch {
                let mut ctx = CircleContext::new();
                let forms = Self::qz_elems(&nz)
                    .into_iter()
                    .map(|x| {
                        ctx.log_abs_fraction(x.scalar(), x.num(), x.den(), &Rational::one())
                    })
                    .collect::<Result<Vec<_>>>()?;
                acc.push_interval(ctx.mean_of_max(&forms, tol)?);
                continue;
            }
            let w = self.weight(&p)?;
            let vals = nz
                .iter()
                .map(|x| Ok(finite(self.value(&p, x)?)?.neg()))
                .collect::<Result<Vec<_>>>()?;
            acc.push(&w, &max_logs(vals)?);
        }
        Ok(acc.finish())
    }

    /// `ht(x) = h(x, 1)`.
    pub fn ht(&self, x: &FieldElem) -> Result<Quantity> {
        self.height(&[x.clone(), FieldElem::one(self.kind)])
    }

    /// `R_t(a) = sum_v weight * t(v(a))`.
    pub fn local_term(&self, t: &Term, a: &[FieldElem]) -> Result<Quantity> {
        self.local_term_with_tol(t, a, DEFAULT_CIRCLE_TOL)
    }

    pub fn local_term_with_tol(&self, t: &Term, a: &[FieldElem], tol: f64) -> Result<Quantity> {
        check_kinds(self.kind, a)?;
        if a.len() < t.arity() {
            return Err(GvfError::domain(format!(
                "term uses x{} but only {} elements were given",
                t.arity(),
                a.len()
            )));
        }
        if a.iter().any(FieldElem::is_zero) {
            return Err(GvfError::domain("local terms need nonzero arguments"));
        }
        let mut acc = Acc::new();
        for p in self.places_for(a)? {
            if p == Place::QzArch {
                let n = to_normal_form(t);
                let mut ctx = CircleContext::new();
                let alphas = Self::linear_arch_forms(&mut ctx, &n.alphas, a)?;
                let betas = Self::linear_arch_forms(&mut ctx, &n.betas, a)?;
                acc.push_interval(
                    ctx.mean_of_max(&alphas, tol)?
                        .sub(&ctx.mean_of_max(&betas, tol)?),
                );
                continue;
            }
            let w = self.weight(&p)?;
            let vals = a
                .iter()
                .map(|x| finite(self.value(&p, x)?))
                .collect::<Result<Vec<_>>>()?;
            acc.push(&w, &t.eval(&vals)?);
        }
        Ok(acc.finish())
    }

    fn group_value(&self, place: &Place, g: &GroupElem) -> Result<LogReal> {
        g.value(&self.valuation(place))
    }

    /// `l(alpha) = sum_v weight * v(alpha)`.
    pub fn functional(&self, alpha: &LatticeDivisor) -> Result<Quantity> {
        self.functional_with_tol(alpha, DEFAULT_CIRCLE_TOL)
    }

    pub fn functional_with_tol(&self, alpha: &LatticeDivisor, tol: f64) -> Result<Quantity> {
        if let Some(k) = alpha.kind()? {
            if k != self.kind {
                return Err(GvfError::mismatch(self.kind, k));
            }
        }
        let mut acc = Acc::new();
        for p in alpha.candidate_places()? {
            if p == Place::QzArch {
                let mut ctx = CircleContext::new();
                let side = |ctx: &mut CircleContext, gs: &[GroupElem]| {
                    gs.iter()
                        .map(|g| Self::arch_form(ctx, g.terms().iter()))
                        .collect::<Result<Vec<_>>>()
                };
                let pos = side(&mut ctx, alpha.pos())?;
                let neg = side(&mut ctx, alpha.neg_join())?;
                acc.push_interval(ctx.mean_of_max(&pos, tol)?.sub(&ctx.mean_of_max(&neg, tol)?));
                continue;
            }
            let w = self.weight(&p)?;
            let a = max_logs(
                alpha
                    .pos()
                    .iter()
                    .map(|g| self.group_value(&p, g))
                    .collect::<Result<_>>()?,
            )?;
            let b = max_logs(
                alpha
                    .neg_join()
                    .iter()
                    .map(|g| self.group_value(&p, g))
                    .collect::<Result<_>>()?,
            )?;
            acc.push(&w, &a.sub(&b));
        }
        Ok(acc.finish())
    }

    /// `sum_v weight * v(a)`; exactly zero on global structures.
    pub fn product_formula_sum(&self, a: &FieldElem) -> Result<Quantity> {
        Ok(self.product_formula_parts(a)?.total)
    }

    /// The product-formula sum split by place type.
    pub fn product_formula_parts(&self, a: &FieldElem) -> Result<ProductFormulaParts> {
        check_kinds(self.kind, std::slice::from_ref(a))?;
        if a.is_zero() {
            return Err(GvfError::domain("the product formula needs a nonzero element"));
        }
        let mut finite_acc = Acc::new();
        let mut arch_acc = Acc::new();
        let mut point_acc = Acc::new();
        for p in self.places_for(std::slice::from_ref(a))? {
            if let (Place::QzArch, FieldElem::Qz(x)) = (&p, a) {
                arch_acc.push_interval(qz_arch_mean(x)?);
                continue;
            }
            let w = self.weight(&p)?;
            let v = finite(self.value(&p, a)?)?;
            match p {
                Place::QzPoint(_) => point_acc.push(&w, &v),
                ref q if q.is_archimedean() || matches!(q, Place::FpDegree(_)) => {
                    arch_acc.push(&w, &v)
                }
                _ => finite_acc.push(&w, &v),
            }
        }
        let finite_part = finite_acc.finish();
        let arch = arch_acc.finish();
        let points = point_acc.finish();
        let total = match (&finite_part, &arch, &points) {
            (Quantity::Exact(x), Quantity::Exact(y), Quantity::Exact(z)) => {
                Quantity::Exact(x.add(y)?.add(z)?)
            }
            _ => Quantity::Approx(
                finite_part
                    .to_interval()
                    .add(&arch.to_interval())
                    .add(&points.to_interval()),
            ),
        };
        Ok(ProductFormulaParts {
            finite: finite_part,
            arch,
            points,
            total,
        })
    }

    /// The structure on `Q` obtained by restriction from a quadratic field.
    pub fn restrict(&self) -> Result<DiscreteGvf> {
        match self.kind {
            FieldKind::Quad(_) => gvf_q(self.global.clone()),
            k => Err(GvfError::domain(format!("restriction is defined for quadratic fields, not {k}"))),
        }
    }

    /// `ht(sigma(a)) = ht(a)` for the nontrivial automorphism.
    pub fn check_galois_invariance(&self, a: &FieldElem) -> Result<bool> {
        if !matches!(self.kind, FieldKind::Quad(_)) {
            return Err(GvfError::domain("Galois invariance is checked over quadratic fields"));
        }
        let h1 = self.ht(a)?;
        let h2 = self.ht(&a.conj())?;
        match (h1, h2) {
            (Quantity::Exact(x), Quantity::Exact(y)) => Ok(x.compare(&y)?.is_eq()),
            _ => Err(GvfError::NonExact("quadratic heights are exact".into())),
        }
    }
}

/// The three parts of the product-formula sum: finite places, the
/// archimedean (or degree) places, and closed points of `P^1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFormulaParts {
    pub finite: Quantity,
    pub arch: Quantity,
    pub points: Quantity,
    pub total: Quantity,
}

impl fmt::Display for DiscreteGvf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Qz => write!(f, "Q(z) with Weil-height weights")?,
            k => write!(f, "{k} with r = {}", fmt_rational(&self.global))?,
        }
        if !self.default_scale.is_one() {
            write!(f, ", scale {}", fmt_rational(&self.default_scale))?;
        }
        for (p, s) in &self.scales {
            write!(f, ", {p} scaled by {}", fmt_rational(s))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::tropical::parse_tropical;
    use num_bigint::BigUint;

    fn q(n: i64) -> FieldElem {
        FieldElem::Q(int(n))
    }

    fn lg(n: i64) -> LogReal {
        LogReal::log_abs_rational(&int(n)).unwrap()
    }

    fn ex(x: LogReal) -> Quantity {
        Quantity::Exact(ExtLogReal::Finite(x))
    }

    #[test]
    fn known_normalizations() {
        let g = gvf_q(int(1)).unwrap();
        assert_eq!(g.ht(&q(2)).unwrap(), ex(lg(2)));
        let f = gvf_fpt(2, int(1)).unwrap();
        let t = FieldElem::parse(FieldKind::Fp(2), "t").unwrap();
        assert_eq!(f.ht(&t).unwrap(), ex(LogReal::units(int(1))));
        let z = gvf_q(int(0)).unwrap();
        assert_eq!(z.height(&[q(7), q(3)]).unwrap(), ex(LogReal::zero()));
        assert!(gvf_q(int(-1)).is_err());
        assert!(gvf_quad(4).is_err());
    }

    #[test]
    fn known_heights() {
        let g = gvf_q(int(1)).unwrap();
        assert_eq!(g.height(&[q(2), q(3)]).unwrap(), ex(lg(3)));
        assert_eq!(g.height(&[q(1), q(1)]).unwrap(), ex(LogReal::zero()));
        let f = gvf_fpt(3, int(1)).unwrap();
        let t = FieldElem::parse(FieldKind::Fp(3), "t").unwrap();
        let t1 = FieldElem::parse(FieldKind::Fp(3), "t+1").unwrap();
        assert_eq!(f.height(&[t, t1]).unwrap(), ex(LogReal::units(int(1))));
        assert_eq!(
            g.height(&[q(0), q(0)]).unwrap(),
            Quantity::Exact(ExtLogReal::NegInf)
        );
    }

    #[test]
    fn known_local_terms() {
        let g = gvf_q(int(1)).unwrap();
        let x1 = parse_tropical("x1").unwrap();
        assert_eq!(
            g.local_term(&x1, &[FieldElem::Q(rat(12, 5))]).unwrap(),
            ex(LogReal::zero())
        );
        let a = [q(6), FieldElem::Q(rat(-5, 4))];
        let t = parse_tropical("-min(x1, x2)").unwrap();
        assert_eq!(g.local_term(&t, &a).unwrap(), g.height(&a).unwrap());
        let t2 = parse_tropical("2*max(x1, -x2)").unwrap();
        let t1 = parse_tropical("max(x1, -x2)").unwrap();
        let (Quantity::Exact(ExtLogReal::Finite(r2)), Quantity::Exact(ExtLogReal::Finite(r1))) =
            (g.local_term(&t2, &a).unwrap(), g.local_term(&t1, &a).unwrap())
        else {
            panic!()
        };
        assert_eq!(r2, r1.scale(&int(2)));
    }

    #[test]
    fn known_functionals() {
        let g = gvf_q(int(1)).unwrap();
        let d = LatticeDivisor::div(&FieldElem::Q(rat(-18, 35))).unwrap();
        assert_eq!(g.functional(&d).unwrap(), ex(LogReal::zero()));
        let a = LatticeDivisor::div(&q(2)).unwrap().abs().unwrap();
        assert_eq!(g.functional(&a).unwrap(), ex(lg(2).scale(&int(2))));
        assert_eq!(
            g.functional(&a.join(&a).unwrap()).unwrap(),
            g.functional(&a).unwrap()
        );
    }

    #[test]
    fn known_renormalize() {
        let g = gvf_q(int(1)).unwrap();
        let sel = PlaceSelection::Only(BTreeSet::from([Place::QFinite(BigUint::from(2u32))]));
        let g2 = g.renormalize(&sel, &int(3)).unwrap();
        assert_eq!(g2.height(&[q(2), q(3)]).unwrap(), ex(lg(3)));
        assert_ne!(g2, g);
        let g3 = g.renormalize(&PlaceSelection::All, &int(2)).unwrap();
        let t = parse_tropical("max(x1, 2*x2) - min(x1, x2)").unwrap();
        let a = [FieldElem::Q(rat(9, 10)), q(14)];
        assert_eq!(g3.local_term(&t, &a).unwrap(), g.local_term(&t, &a).unwrap());
        assert_eq!(g.renormalize(&PlaceSelection::All, &int(1)).unwrap(), g);
        assert!(g.renormalize(&PlaceSelection::All, &int(0)).is_err());
    }

    #[test]
    fn known_quadratic() {
        let g = gvf_quad(-1).unwrap();
        let x = FieldElem::parse(FieldKind::Quad(-1), "1 + i").unwrap();
        assert_eq!(g.ht(&x).unwrap(), ex(lg(2).scale(&rat(1, 2))));
        assert_eq!(g.product_formula_sum(&x).unwrap(), ex(LogReal::zero()));
        assert!(g.check_galois_invariance(&FieldElem::parse(FieldKind::Quad(-1), "2 + 3i").unwrap()).unwrap());
        assert_eq!(g.restrict().unwrap(), gvf_q(int(1)).unwrap());
        let g2 = gvf_quad(2).unwrap();
        let u = FieldElem::parse(FieldKind::Quad(2), "1 + sqrt(2)").unwrap();
        assert_eq!(g2.product_formula_sum(&u).unwrap(), ex(LogReal::zero()));
        let h = g2.ht(&u).unwrap().approx();
        assert!((h - 0.5 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12, "{h}");
    }

    #[test]
    fn qz_product_formula() {
        let g = gvf_qz();
        for s in ["z - 2", "(3z^2 + z)/(z^2 - 5)", "6*(z+1)^3/(2z^2 - 7z + 1)"] {
            let a = FieldElem::parse(FieldKind::Qz, s).unwrap();
            let i = g.product_formula_sum(&a).unwrap().to_interval();
            assert!(i.contains(0.0) && i.width() <= 1e-6, "{s}: {i}");
        }
    }

    #[test]
    fn qz_heights() {
        let g = gvf_qz();
        // ht(z - 2) = m(z - 2) = log 2 (one form is exact)
        let a = FieldElem::parse(FieldKind::Qz, "z - 2").unwrap();
        let h = g.ht(&a).unwrap().to_interval();
        assert!(h.contains(2f64.ln()) && h.width() < 1e-6, "{h}");
        // ht(z) = 0: the circle average of max(0, log|z|) vanishes
        let z = FieldElem::parse(FieldKind::Qz, "z").unwrap();
        let h = g.ht(&z).unwrap().to_interval();
        assert!(h.contains(0.0), "{h}");
        let t = parse_tropical("-min(x1, x2)").unwrap();
        let b = [a.clone(), FieldElem::parse(FieldKind::Qz, "3z + 1").unwrap()];
        let l = g.local_term(&t, &b).unwrap().to_interval();
        let h = g.height(&b).unwrap().to_interval();
        assert!(l.overlaps(&h), "{l} vs {h}");
    }
}
