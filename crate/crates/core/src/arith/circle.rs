//! Certified averages over the unit circle of maxima of log-linear forms
//!
//! `F_i(theta) = c_i + sum_j mu_ij log|e^(i theta) - r_j|`
//!
//! where the `r_j` are polynomial roots enclosed in certified discs. A single
//! form integrates in closed form by Jensen's formula. For several forms the
//! circle is cut into arcs refined adaptively, largest uncertainty first.
//! On an arc away from all roots each form is replaced by its tangent line
//! with a second-derivative remainder and the upper envelope of the lines
//! is integrated exactly; arcs touching a root get analytic bounds for the
//! logarithmic singularity.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::interval::Interval;
use crate::arith::mahler::{certified_roots, RootDisc};
use crate::arith::rational::{to_f64, Rational};
use crate::arith::zpoly::{squarefree_decomposition, ZPoly};
use crate::error::{GvfError, Result};

pub const DEFAULT_CIRCLE_TOL: f64 = 1e-6;

const MAX_ARCS: usize = 1 << 21;

/// `constant + sum mu_j log|e^(i theta) - root_j|`.
#[derive(Clone, Debug)]
pub struct LogForm {
    pub constant: Interval,
    pub terms: Vec<(usize, f64)>,
}

impl LogForm {
    pub fn constant(c: Interval) -> Self {
        LogForm {
            constant: c,
            terms: vec![],
        }
    }

    pub fn add_scaled(&self, o: &LogForm, mu: f64) -> LogForm {
        let mut terms: BTreeMap<usize, f64> = self.terms.iter().copied().collect();
        for &(j, m) in &o.terms {
            *terms.entry(j).or_insert(0.0) += mu * m;
        }
        LogForm {
            constant: self.constant.add(&o.constant.scale(mu)),
            terms: terms.into_iter().filter(|(_, m)| *m != 0.0).collect(),
        }
    }
}

/// Root enclosures shared by a family of forms.
#[derive(Default)]
pub struct CircleContext {
    roots: Vec<RootDisc>,
    polys: BTreeMap<ZPoly, LogForm>,
}

impl CircleContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn roots(&self) -> &[RootDisc] {
        &self.roots
    }

    /// The form `log|f(e^(i theta))|` for a nonzero integer polynomial.
    pub fn log_abs_poly(&mut self, f: &ZPoly) -> Result<LogForm> {
        if let Some(form) = self.polys.get(f) {
            return Ok(form.clone());
        }
        if f.is_zero() {
            return Err(GvfError::domain("log of the zero polynomial"));
        }
        let mut form = LogForm::constant(Interval::from_integer(&f.lead()).abs().ln());
        for (g, m) in squarefree_decomposition(f) {
            if g.degree().unwrap_or(0) == 0 {
                continue;
            }
            for disc in certified_roots(&g)? {
                form.terms.push((self.roots.len(), m as f64));
                self.roots.push(disc);
            }
        }
        self.polys.insert(f.clone(), form.clone());
        Ok(form)
    }

    /// `q * log|s * num / den|`.
    pub fn log_abs_fraction(
        &mut self,
        scalar: &Rational,
        num: &ZPoly,
        den: &ZPoly,
        q: &Rational,
    ) -> Result<LogForm> {
        let qf = to_f64(q);
        let s = Interval::from_rational(scalar).abs().ln();
        let n = self.log_abs_poly(num)?;
        let d = self.log_abs_poly(den)?;
        Ok(LogForm::constant(s.scale(qf))
            .add_scaled(&n, qf)
            .add_scaled(&d, -qf))
    }

    /// `(1/2pi) int max_i F_i(theta) d theta`.
    pub fn mean_of_max(&self, forms: &[LogForm], tol: f64) -> Result<Interval> {
        match forms {
            [] => Err(GvfError::domain("maximum of no forms")),
            [f] => Ok(self.jensen(f)),
            _ => self.adaptive(forms, tol),
        }
    }

    fn jensen(&self, f: &LogForm) -> Interval {
        f.terms.iter().fold(f.constant, |acc, &(j, mu)| {
            let m = self.roots[j].modulus();
            let lm = Interval::new(m.lo().max(1.0), m.hi().max(1.0)).ln();
            acc.add(&lm.scale(mu))
        })
    }

    fn adaptive(&self, forms: &[LogForm], tol: f64) -> Result<Interval> {
        let n0 = 64;
        let step = 2.0 * PI / n0 as f64;
        let mut heap = BinaryHeap::new();
        for k in 0..n0 {
            let a = k as f64 * step;
            heap.push(self.arc(forms, a, a + step)?);
        }
        loop {
            let width: f64 = heap.iter().map(|a| a.hi - a.lo).sum();
            if width / (2.0 * PI) <= tol {
                break;
            }
            // refine a batch to amortize the width recomputation
            let batch = (heap.len() / 8).max(1);
            for _ in 0..batch {
                let Some(top) = heap.pop() else { break };
                let mid = 0.5 * (top.a + top.b);
                if !(top.a < mid && mid < top.b) {
                    return Err(GvfError::NonConvergence(
                        "circle quadrature reached machine resolution".into(),
                    ));
                }
                heap.push(self.arc(forms, top.a, mid)?);
                heap.push(self.arc(forms, mid, top.b)?);
            }
            if heap.len() > MAX_ARCS {
                return Err(GvfError::NonConvergence(format!(
                    "circle quadrature did not reach tolerance {tol}"
                )));
            }
        }
        let (mut lo, mut hi) = (0.0, 0.0);
        let mut mag = 0.0;
        for a in heap.iter() {
            lo += a.lo;
            hi += a.hi;
            mag += a.lo.abs().max(a.hi.abs());
        }
        let slack = 1e-13 * (mag + 1.0);
        Ok(Interval::new(
            (lo - slack) / (2.0 * PI),
            (hi + slack) / (2.0 * PI),
        ))
    }

    fn arc(&self, forms: &[LogForm], a: f64, b: f64) -> Result<Arc> {
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        let w = b - a;
        let pm = Complex64::from_polar(1.0, m);
        let pa = Complex64::from_polar(1.0, a);
        let pb = Complex64::from_polar(1.0, b);
        // per-root geometry
        let mut near = BTreeMap::new();
        for f in forms {
            for &(j, _) in &f.terms {
                near.entry(j).or_insert_with(|| {
                    let d = &self.roots[j];
                    RootGeom::new(d, h, m, pa, pb, pm, w)
                });
            }
        }
        // crude bounds valid on every arc
        let mut crude_lo = f64::NEG_INFINITY;
        let mut crude_hi = f64::NEG_INFINITY;
        let mut abs_lo = f64::NEG_INFINITY;
        let mut abs_sum = 0.0;
        for f in forms {
            let mut lo = f.constant.lo();
            let mut hi = f.constant.hi();
            let mut s = w * f.constant.lo().abs().max(f.constant.hi().abs());
            for &(j, mu) in &f.terms {
                let g = &near[&j];
                let (l, u) = if mu > 0.0 {
                    (mu * g.log_dmin, mu * g.log_dmax)
                } else {
                    (mu * g.log_dmax, mu * g.log_dmin)
                };
                lo += l;
                hi += u;
                s += mu.abs() * g.abs_integral;
            }
            crude_lo = crude_lo.max(if lo.is_nan() { f64::NEG_INFINITY } else { lo * w });
            crude_hi = crude_hi.max(if hi.is_nan() { f64::INFINITY } else { hi * w });
            abs_lo = abs_lo.max(-s);
            abs_sum += s;
        }
        let mut lo = crude_lo.max(abs_lo);
        let mut hi = crude_hi.min(abs_sum);
        if near.values().all(|g| g.dist_center > g.radius) {
            let mut lines = Vec::with_capacity(forms.len());
            let mut k_max: f64 = 0.0;
            let mut slop_max: f64 = 0.0;
            for f in forms {
                let mut val = f.constant.mid();
                let mut slope = 0.0;
                let mut k = 0.0;
                let mut slop = 0.5 * f.constant.width();
                for &(j, mu) in &f.terms {
                    let g = &near[&j];
                    val += mu * g.log_mid;
                    slope += mu * g.slope_mid;
                    k += mu.abs() * g.curvature;
                    slop += mu.abs() * g.slop;
                }
                lines.push((val, slope));
                k_max = k_max.max(k);
                slop_max = slop_max.max(slop);
            }
            let env = envelope_integral(&lines, h);
            let mag: f64 = lines.iter().map(|(v, s)| v.abs() + s.abs() * h).fold(0.0, f64::max);
            let err = k_max * h * h * h / 3.0 + w * slop_max + 1e-14 * w * (mag + 1.0);
            if err.is_finite() {
                lo = lo.max(env - err);
                hi = hi.min(env + err);
            }
        }
        if lo.partial_cmp(&hi).is_none_or(|o| o.is_gt()) {
            // rounding in the two independent bounds crossed; keep their hull
            let (a2, b2) = (lo.min(hi), lo.max(hi));
            lo = a2;
            hi = b2;
        }
        Ok(Arc { a, b, lo, hi })
    }
}

struct RootGeom {
    radius: f64,
    dist_center: f64,
    log_dmin: f64,
    log_dmax: f64,
    abs_integral: f64,
    log_mid: f64,
    slope_mid: f64,
    curvature: f64,
    slop: f64,
}

fn wrap(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    if y < -PI {
        y += 2.0 * PI;
    }
    y
}

impl RootGeom {
    fn new(d: &RootDisc, h: f64, m: f64, pa: Complex64, pb: Complex64, pm: Complex64, w: f64) -> Self {
        let c = d.center;
        let rho = c.norm();
        let r = d.radius + 4.0 * f64::EPSILON * (rho + 1.0);
        let phi = c.arg();
        let ends_min = (c - pa).norm().min((c - pb).norm());
        let ends_max = (c - pa).norm().max((c - pb).norm());
        let dist_center = if rho == 0.0 {
            1.0
        } else if wrap(phi - m).abs() <= h {
            (rho - 1.0).abs()
        } else {
            ends_min
        } * (1.0 - 1e-15);
        let far_center = if rho == 0.0 {
            1.0
        } else if wrap(phi + PI - m).abs() <= h {
            rho + 1.0
        } else {
            ends_max
        } * (1.0 + 1e-15);
        let dmin = dist_center - r;
        let dmax = far_center + r;
        let log_dmin = if dmin > 0.0 { dmin.ln() } else { f64::NEG_INFINITY };
        let log_dmax = dmax.ln();
        // int over the arc of |log|x - root||
        let pos_part = w * log_dmax.max(0.0);
        let neg_part = if dmin > 0.0 {
            w * (-log_dmin).max(0.0)
        } else {
            let rho_lo = (rho - r).max(0.0);
            if rho_lo <= 0.0 {
                f64::INFINITY
            } else {
                // |x - root| >= sqrt(rho) (2/pi) |theta - arg root|
                (w * (-0.5 * rho_lo.ln() - (2.0 / PI).ln() + 1.0 - (w / 2.0).ln())).max(0.0)
            }
        };
        let abs_integral = (pos_part + neg_part) * (1.0 + 1e-12);
        let dm = (pm - c).norm();
        let log_mid = dm.ln();
        // d/dtheta log|e^(i theta) - c| = rho sin(theta - phi) / |e^(i theta) - c|^2
        let slope_mid = rho * (m - phi).sin() / (dm * dm);
        let dc = dist_center.max(0.0);
        let curvature = if dc > 0.0 {
            rho / (dc * dc) + 2.0 * rho * rho / (dc * dc * dc * dc)
        } else {
            f64::INFINITY
        };
        let slop = if dist_center > r {
            r / (dist_center - r)
        } else {
            f64::INFINITY
        };
        RootGeom {
            radius: r,
            dist_center,
            log_dmin,
            log_dmax,
            abs_integral,
            log_mid,
            slope_mid,
            curvature,
            slop,
        }
    }
}

struct Arc {
    a: f64,
    b: f64,
    lo: f64,
    hi: f64,
}

impl PartialEq for Arc {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Arc {}
impl PartialOrd for Arc {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Arc {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.hi - self.lo)
            .total_cmp(&(o.hi - o.lo))
            .then(o.a.total_cmp(&self.a))
    }
}

/// `int_{-h}^{h} max_i (v_i + s_i t) dt`.
fn envelope_integral(lines: &[(f64, f64)], h: f64) -> f64 {
    let mut cuts = vec![-h, h];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ds = lines[i].1 - lines[j].1;
            if ds != 0.0 {
                let t = (lines[j].0 - lines[i].0) / ds;
                if t > -h && t < h {
                    cuts.push(t);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for win in cuts.windows(2) {
        let (t0, t1) = (win[0], win[1]);
        if t1 <= t0 {
            continue;
        }
        let tm = 0.5 * (t0 + t1);
        let best = lines
            .iter()
            .copied()
            .max_by(|x, y| (x.0 + x.1 * tm).total_cmp(&(y.0 + y.1 * tm)))
            .expect("nonempty");
        total += (t1 - t0) * (best.0 + best.1 * tm);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn single_form_is_jensen() {
        let mut ctx = CircleContext::new();
        let f = ctx.log_abs_poly(&zp(&[-2, 1])).unwrap();
        let m = ctx.mean_of_max(&[f], DEFAULT_CIRCLE_TOL).unwrap();
        assert!(m.contains(2f64.ln()));
    }

    #[test]
    fn max_with_zero() {
        // mean of log max(1, |z - 2|) = log 2 - mean of log min(1, ...) ; check
        // against a fine Riemann sum
        let mut ctx = CircleContext::new();
        let f = ctx.log_abs_poly(&zp(&[-1, 2])).unwrap();
        let zero = LogForm::constant(Interval::zero());
        let m = ctx.mean_of_max(&[f, zero], 1e-7).unwrap();
        let n = 200_000;
        let riemann: f64 = (0..n)
            .map(|k| {
                let t = (k as f64 + 0.5) * 2.0 * PI / n as f64;
                let z = Complex64::from_polar(1.0, t);
                (2.0 * z - 1.0).norm().ln().max(0.0)
            })
            .sum::<f64>()
            / n as f64;
        assert!(m.width() <= 1e-7, "{m}");
        assert!((m.mid() - riemann).abs() < 1e-6, "{m} vs {riemann}");
    }

    #[test]
    fn singular_roots_on_circle() {
        // mean of max(log|z-1|, log|z+1|) is finite; compare with Riemann sum
        let mut ctx = CircleContext::new();
        let f = ctx.log_abs_poly(&zp(&[-1, 1])).unwrap();
        let g = ctx.log_abs_poly(&zp(&[1, 1])).unwrap();
        let m = ctx.mean_of_max(&[f, g], 1e-5).unwrap();
        let n = 400_000;
        let riemann: f64 = (0..n)
            .map(|k| {
                let t = (k as f64 + 0.5) * 2.0 * PI / n as f64;
                let z = Complex64::from_polar(1.0, t);
                (z - 1.0).norm().max((z + 1.0).norm()).ln()
            })
            .sum::<f64>()
            / n as f64;
        assert!(m.width() <= 1e-5, "{m}");
        assert!((m.mid() - riemann).abs() < 1e-4, "{m} vs {riemann}");
    }

    #[test]
    fn fraction_forms() {
        let mut ctx = CircleContext::new();
        let f = ctx
            .log_abs_fraction(&int(3), &zp(&[-2, 1]), &zp(&[0, 1]), &int(1))
            .unwrap();
        let m = ctx.mean_of_max(&[f], DEFAULT_CIRCLE_TOL).unwrap();
        assert!(m.contains(6f64.ln()), "{m}");
    }
}
