//! Normal form `max_i alpha_i(x) - max_j beta_j(x)` of a tropical term.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::arith::rational::{fmt_rational, Rational};
use crate::error::Result;
use crate::tropical::term::{Term, TropicalValue};

/// A linear form `sum_k q_k x_k`; keys are 1-based variable indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm(pub BTreeMap<usize, Rational>);

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm(BTreeMap::new())
    }

    pub fn var(k: usize) -> Self {
        LinearForm(BTreeMap::from([(k, Rational::from_integer(1.into()))]))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, q) in &o.0 {
            let e = m.entry(*k).or_insert_with(<Rational as Zero>::zero);
            *e += q;
            if e.is_zero() {
                m.remove(k);
            }
        }
        LinearForm(m)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return LinearForm::zero();
        }
        LinearForm(self.0.iter().map(|(k, c)| (*k, c * q)).collect())
    }

    pub fn eval<V: TropicalValue>(&self, x: &[V]) -> Result<V> {
        let mut acc = V::zero();
        for (k, q) in &self.0 {
            let xv = x.get(k - 1).ok_or_else(|| {
                crate::error::GvfError::domain(format!("no value for x{k}"))
            })?;
            acc = acc.add(&xv.scale(q)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, q)) in self.0.iter().enumerate() {
            let sign = if q.is_negative() { "-" } else { "+" };
            if i == 0 {
                if q.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = q.abs();
            if a.is_integer() && a == Rational::from_integer(1.into()) {
                write!(f, "x{k}")?;
            } else {
                write!(f, "{}*x{k}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

/// `max(alphas) - max(betas)`; both lists are nonempty and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub alphas: Vec<LinearForm>,
    pub betas: Vec<LinearForm>,
}

fn cross(a: &[LinearForm], b: &[LinearForm]) -> Vec<LinearForm> {
    let mut out: Vec<LinearForm> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x.add(y)))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn tidy(mut v: Vec<LinearForm>) -> Vec<LinearForm> {
    v.sort();
    v.dedup();
    v
}

impl NormalForm {
    fn constant_zero() -> Self {
        NormalForm {
            alphas: vec![LinearForm::zero()],
            betas: vec![LinearForm::zero()],
        }
    }

    pub fn neg(&self) -> Self {
        NormalForm {
            alphas: self.betas.clone(),
            betas: self.alphas.clone(),
        }
    }

    pub fn eval<V: TropicalValue>(&self, x: &[V]) -> Result<V> {
        let max_of = |forms: &[LinearForm]| -> Result<V> {
            let mut it = forms.iter();
            let mut acc = it.next().expect("nonempty").eval(x)?;
            for f in it {
                acc = acc.max(&f.eval(x)?)?;
            }
            Ok(acc)
        };
        max_of(&self.alphas)?.add(&max_of(&self.betas)?.scale(&-Rational::from_integer(1.into()))?)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[LinearForm]| {
            v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
        };
        write!(f, "max({}) - max({})", list(&self.alphas), list(&self.betas))
    }
}

/// Rewrites `t` as a difference of two maxima of linear forms.
pub fn to_normal_form(t: &Term) -> NormalForm {
    match t {
        Term::Var(k) => NormalForm {
            alphas: vec![LinearForm::var(*k)],
            betas: vec![LinearForm::zero()],
        },
        Term::Scale(q, inner) => {
            let n = to_normal_form(inner);
            if q.is_zero() {
                NormalForm::constant_zero()
            } else if q.is_positive() {
                NormalForm {
                    alphas: tidy(n.alphas.iter().map(|l| l.scale(q)).collect()),
                    betas: tidy(n.betas.iter().map(|l| l.scale(q)).collect()),
                }
            } else {
                let a = q.abs();
                NormalForm {
                    alphas: tidy(n.betas.iter().map(|l| l.scale(&a)).collect()),
                    betas: tidy(n.alphas.iter().map(|l| l.scale(&a)).collect()),
                }
            }
        }
        Term::Sum(ts) => ts.iter().fold(NormalForm::constant_zero(), |acc, t| {
            let n = to_normal_form(t);
            NormalForm {
                alphas: cross(&acc.alphas, &n.alphas),
                betas: cross(&acc.betas, &n.betas),
            }
        }),
        Term::Max(ts) => {
            let parts: Vec<NormalForm> = ts.iter().map(to_normal_form).collect();
            let mut alphas = vec![];
            for (i, p) in parts.iter().enumerate() {
                let mut acc = p.alphas.clone();
                for (j, q) in parts.iter().enumerate() {
                    if i != j {
                        acc = cross(&acc, &q.betas);
                    }
                }
                alphas.extend(acc);
            }
            let betas = parts
                .iter()
                .fold(vec![LinearForm::zero()], |acc, p| cross(&acc, &p.betas));
            NormalForm {
                alphas: tidy(alphas),
                betas,
            }
        }
        Term::Min(ts) => {
            let negated = Term::Max(ts.iter().map(|t| t.clone().negate()).collect());
            to_normal_form(&negated).neg()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::tropical::term::parse_tropical;

    fn lf(pairs: &[(usize, i64)]) -> LinearForm {
        LinearForm(pairs.iter().map(|(k, q)| (*k, int(*q))).collect())
    }

    #[test]
    fn worked_examples() {
        let n = to_normal_form(&parse_tropical("min(x1, x2)").unwrap());
        assert_eq!(n.alphas, vec![lf(&[(1, 1), (2, 1)])]);
        assert_eq!(n.betas, tidy(vec![lf(&[(1, 1)]), lf(&[(2, 1)])]));
        let n = to_normal_form(&parse_tropical("max(x1, x2)").unwrap());
        assert_eq!(n.alphas, tidy(vec![lf(&[(1, 1)]), lf(&[(2, 1)])]));
        assert_eq!(n.betas, vec![LinearForm::zero()]);
    }

    #[test]
    fn agrees_with_ast() {
        let pts: Vec<Vec<Rational>> = vec![
            vec![int(1), int(-2), rat(3, 2)],
            vec![int(0), int(0), int(0)],
            vec![rat(-7, 3), int(5), int(-1)],
        ];
        for s in [
            "min(x1, x2) + max(x2, x3)",
            "-max(x1, 2*x2, min(x3, 0))",
            "1/2*max(x1, x1 + x2) - min(x1, x3)",
            "max(min(x1, x2), min(x2, x3), -x1)",
        ] {
            let t = parse_tropical(s).unwrap();
            let n = to_normal_form(&t);
            for p in &pts {
                assert_eq!(t.eval(p).unwrap(), n.eval(p).unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(lf(&[(1, 1), (2, -2)]).to_string(), "x1 - 2*x2");
        assert_eq!(LinearForm::zero().to_string(), "0");
    }
}
