//! Seeded property batteries over exact structures.

use std::collections::BTreeMap;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{DiscreteGvf, PlaceSelection};
use crate::arith::logreal::{ExtLogReal, LogReal, Quantity};
use crate::arith::rational::{int, rat, Rational};
use crate::error::{GvfError, Result};
use crate::field::FieldElem;
use crate::random::{nonzero_tuple, seeded, term, tuple};

/// Pass/fail counts per named check, with the first few failures spelled out.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatteryReport {
    pub checks: BTreeMap<String, (usize, usize)>,
    pub failures: Vec<String>,
}

impl BatteryReport {
    fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let e = self.checks.entry(name.to_string()).or_default();
        if ok {
            e.0 += 1;
        } else {
            e.1 += 1;
            if self.failures.len() < 20 {
                self.failures.push(format!("{name}: {}", detail()));
            }
        }
    }

    pub fn failed(&self) -> usize {
        self.checks.values().map(|c| c.1).sum()
    }

    pub fn passed(&self) -> usize {
        self.checks.values().map(|c| c.0).sum()
    }
}

fn exact(q: Quantity) -> Result<ExtLogReal> {
    match q {
        Quantity::Exact(x) => Ok(x),
        Quantity::Approx(_) => Err(GvfError::NonExact("batteries need exact structures".into())),
    }
}

fn le(x: &ExtLogReal, y: &ExtLogReal) -> Result<bool> {
    Ok(x.compare(y)?.is_le())
}

fn eq(x: &ExtLogReal, y: &ExtLogReal) -> Result<bool> {
    Ok(x.compare(y)?.is_eq())
}

fn show(a: &[FieldElem]) -> String {
    format!("({})", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// `log2(n) * e` for `e` a rational multiple of `log 2`.
fn log2_multiple(e: &ExtLogReal, n: usize) -> Result<ExtLogReal> {
    let ExtLogReal::Finite(e) = e else {
        return Err(GvfError::domain("the archimedean error is infinite"));
    };
    let c = e
        .as_multiple_of_log(&2u32.into())
        .ok_or_else(|| GvfError::Unsupported("the archimedean error is not a multiple of log 2".into()))?;
    let ln = LogReal::log_abs_rational(&int(n as i64))?;
    Ok(ExtLogReal::Finite(ln.scale(&c)))
}

impl DiscreteGvf {
    fn h(&self, a: &[FieldElem]) -> Result<ExtLogReal> {
        exact(self.height(a)?)
    }

    /// `e = h(2, 1)`, the archimedean error.
    pub fn archimedean_error(&self) -> Result<ExtLogReal> {
        self.h(&[FieldElem::from_int(self.kind, 2), FieldElem::one(self.kind)])
    }
}

/// Height axioms, invariances and the generalized triangle inequality on
/// `trials` random tuples.
pub fn height_axioms(g: &DiscreteGvf, trials: usize, seed: u64) -> Result<BatteryReport> {
    let kind = g.kind();
    let mut rng = seeded(seed);
    let mut r = BatteryReport::default();
    let one = FieldElem::one(kind);
    let e = g.archimedean_error()?;
    let h11 = g.h(&[one.clone(), one.clone()])?;
    r.record("h(1,1) = 0", eq(&h11, &ExtLogReal::zero())?, || format!("{h11}"));
    for _ in 0..trials {
        let n = rng.gen_range(1..=4);
        let x = loop {
            let x = tuple(&mut rng, kind, n, 0.15);
            if x.iter().any(|v| !v.is_zero()) {
                break x;
            }
        };
        let y = tuple(&mut rng, kind, n, 0.15);
        let hx = g.h(&x)?;

        let mut p = x.clone();
        p.shuffle(&mut rng);
        let hp = g.h(&p)?;
        r.record("permutation", eq(&hx, &hp)?, || show(&x));

        let z = loop {
            let len = rng.gen_range(1..=3);
            let z = tuple(&mut rng, kind, len, 0.15);
            if z.iter().any(|v| !v.is_zero()) {
                break z;
            }
        };
        let mut seg = vec![];
        for a in &x {
            for b in &z {
                seg.push(a.mul(b)?);
            }
        }
        let lhs = g.h(&seg)?;
        let rhs = hx.add(&g.h(&z)?)?;
        r.record("segre", eq(&lhs, &rhs)?, || format!("{} (x) {}", show(&x), show(&z)));

        let xy: Vec<FieldElem> = x.iter().chain(&y).cloned().collect();
        let hxy = g.h(&xy)?;
        r.record("monotonicity", le(&hx, &hxy)?, || format!("{} {}", show(&x), show(&y)));

        let sum = x.iter().zip(&y).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>>>()?;
        let hs = g.h(&sum)?;
        r.record("triangle", le(&hs, &hxy.add(&e)?)?, || format!("{} + {}", show(&x), show(&y)));

        let xi = &x[0];
        let rest = &x[1..];
        let with = |extra: &[FieldElem]| -> Vec<FieldElem> {
            std::iter::once(xi.clone()).chain(rest.iter().cloned()).chain(extra.iter().cloned()).collect()
        };
        let base = g.h(&with(&[]))?;
        let dup = g.h(&with(rest))?;
        let zero = g.h(&with(&[FieldElem::zero(kind)]))?;
        let neg: Vec<FieldElem> = std::iter::once(xi.clone()).chain(rest.iter().map(FieldElem::neg)).collect();
        let hneg = g.h(&neg)?;
        r.record(
            "duplication/zero/sign",
            eq(&base, &dup)? && eq(&base, &zero)? && eq(&base, &hneg)?,
            || show(&x),
        );

        let k = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=2);
        let parts: Vec<Vec<FieldElem>> = (0..k).map(|_| tuple(&mut rng, kind, m, 0.15)).collect();
        let mut total = vec![FieldElem::zero(kind); m];
        for part in &parts {
            for (t, v) in total.iter_mut().zip(part) {
                *t = t.add(v)?;
            }
        }
        let concat: Vec<FieldElem> = parts.concat();
        let bound = g.h(&concat)?.add(&log2_multiple(&e, k)?)?;
        r.record("generalized triangle", le(&g.h(&total)?, &bound)?, || show(&concat));
    }
    Ok(r)
}

/// `ht(xy) <= ht(x) + ht(y)` and `ht(x + y) <= ht(x) + ht(y) + e`.
pub fn gauge_inequalities(g: &DiscreteGvf, trials: usize, seed: u64) -> Result<BatteryReport> {
    let kind = g.kind();
    let mut rng = seeded(seed);
    let mut r = BatteryReport::default();
    let e = g.archimedean_error()?;
    let ht = |x: &FieldElem| exact(g.ht(x)?);
    for _ in 0..trials {
        let v = nonzero_tuple(&mut rng, kind, 2);
        let (x, y) = (&v[0], &v[1]);
        let s = ht(x)?.add(&ht(y)?)?;
        r.record("ht(xy)", le(&ht(&x.mul(y)?)?, &s)?, || format!("{x}, {y}"));
        r.record("ht(x+y)", le(&ht(&x.add(y)?)?, &s.add(&e)?)?, || format!("{x}, {y}"));
    }
    Ok(r)
}

/// Renormalizing random place sets by random factors leaves heights and
/// local terms unchanged.
pub fn renormalization_invariance(g: &DiscreteGvf, trials: usize, seed: u64) -> Result<BatteryReport> {
    let kind = g.kind();
    let mut rng = seeded(seed);
    let mut r = BatteryReport::default();
    let factors = [rat(1, 3), rat(1, 2), rat(2, 3), int(1), rat(3, 2), int(2), int(3), int(4), int(5)];
    for _ in 0..trials {
        let len = rng.gen_range(1..=3);
        let a = nonzero_tuple(&mut rng, kind, len);
        let mut places = g.places_for(&a)?;
        places.retain(|_| rng.gen_bool(0.5));
        let c: Rational = factors.choose(&mut rng).cloned().unwrap_or_else(Rational::one);
        let sel = if rng.gen_bool(0.2) {
            PlaceSelection::All
        } else {
            PlaceSelection::Only(places.into_iter().collect())
        };
        let g2 = g.renormalize(&sel, &c)?;
        r.record("height", g.height(&a)? == g2.height(&a)?, || show(&a));
        let t = term(&mut rng, a.len(), 3);
        r.record(
            "local term",
            g.local_term(&t, &a)? == g2.local_term(&t, &a)?,
            || format!("{t} at {}", show(&a)),
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{gvf_fpt, gvf_q};

    #[test]
    fn batteries_pass() {
        for g in [gvf_q(int(1)).unwrap(), gvf_fpt(3, int(1)).unwrap(), gvf_q(rat(1, 2)).unwrap()] {
            let r = height_axioms(&g, 30, 1).unwrap();
            assert_eq!(r.failed(), 0, "{:?}", r.failures);
            let r = renormalization_invariance(&g, 20, 2).unwrap();
            assert_eq!(r.failed(), 0, "{:?}", r.failures);
        }
        let r = gauge_inequalities(&gvf_q(int(1)).unwrap(), 50, 3).unwrap();
        assert_eq!(r.failed(), 0, "{:?}", r.failures);
    }
}
