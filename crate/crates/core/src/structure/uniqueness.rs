//! Finite witness that the product-formula weights on `Q(i)` and `Q(sqrt 2)`
//! are unique up to scaling.

use num_bigint::BigUint;
use num_traits::Signed;

use super::finite;
use crate::arith::linalg::{kernel, rank};
use crate::arith::logreal::{formal_tensor, LogReal};
use crate::arith::quad::QuadElem;
use crate::arith::rational::{int, Rational};
use crate::error::{GvfError, Result};
use crate::field::FieldElem;
use crate::places::{places_above, v_eval, Place, Valuation};

/// Left kernel of the matrix `M[v, a] = v(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessReport {
    pub d: i64,
    pub bound: u64,
    pub places: Vec<Place>,
    pub elements: Vec<FieldElem>,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Whether the all-ones weight vector lies in the kernel.
    pub ones_in_kernel: bool,
}

fn primes_up_to(b: u64) -> Vec<u64> {
    (2..=b).filter(|&n| (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0)).collect()
}

fn quad(d: i64, a: i64, b: i64) -> FieldElem {
    FieldElem::Quad(QuadElem::new(d, int(a), int(b)).expect("valid field"))
}

fn value(place: &Place, x: &FieldElem) -> Result<LogReal> {
    finite(v_eval(&Valuation::unit(place.clone()), x)?)
}

/// An element generating the prime at `place` (norm `p^f`, positive value).
fn prime_generator(d: i64, place: &Place, p: u64, f: u32) -> Result<FieldElem> {
    let target = int(p as i64).pow(f as i32);
    let limit = 4 * p as i64 + 4;
    for size in 0..=limit {
        for a in -size..=size {
            for b in [size - a.abs(), a.abs() - size] {
                let x = QuadElem::new(d, int(a), int(b))?;
                if x.is_zero() || x.norm().abs() != target {
                    continue;
                }
                let x = FieldElem::Quad(x);
                if value(place, &x)?.sign()? > 0 {
                    return Ok(x);
                }
            }
        }
    }
    Err(GvfError::NonConvergence(format!("no generator found for {place}")))
}

/// Builds `M[v, a] = v(a)` over the places above `p <= bound` and at
/// infinity, with the fundamental unit and one generator per finite place as
/// columns, and reports `dim {w : w^T M = 0}`.
pub fn uniqueness_witness(d: i64, bound: u64) -> Result<UniquenessReport> {
    let unit = match d {
        -1 => quad(-1, 0, 1),
        2 => quad(2, 1, 1),
        _ => {
            return Err(GvfError::Unsupported(format!(
                "uniqueness witnesses are available for d = -1 and d = 2, not {d}"
            )))
        }
    };
    let mut finite_places = vec![];
    let mut elements = vec![unit];
    for p in primes_up_to(bound) {
        for place in places_above(d, Some(&BigUint::from(p))) {
            let Place::QuadFinite { kind, .. } = &place else { unreachable!() };
            elements.push(prime_generator(d, &place, p, kind.ef().1)?);
            finite_places.push((place, p));
        }
    }
    let arch = places_above(d, None);

    // finite rows are rational multiples of log p
    let mut f_rows = vec![];
    for (place, p) in &finite_places {
        let row = elements
            .iter()
            .map(|x| {
                value(place, x)?
                    .as_multiple_of_log(&BigUint::from(*p))
                    .ok_or_else(|| GvfError::domain("finite value is not a multiple of log p"))
            })
            .collect::<Result<Vec<Rational>>>()?;
        f_rows.push(row);
    }
    let f_rank = rank(&f_rows);
    let ker = kernel(&f_rows, elements.len());

    // archimedean rows restricted to the kernel of the finite block
    let mut a_rows: Vec<Vec<LogReal>> = vec![];
    for place in &arch {
        let vals = elements
            .iter()
            .map(|x| value(place, x))
            .collect::<Result<Vec<_>>>()?;
        a_rows.push(
            ker.iter()
                .map(|k| {
                    k.iter()
                        .zip(&vals)
                        .fold(LogReal::zero(), |acc, (c, v)| acc.add(&v.scale(c)))
                })
                .collect(),
        );
    }
    let a_rank = formal_rank(&a_rows);

    let mut places: Vec<Place> = finite_places.into_iter().map(|(p, _)| p).collect();
    places.extend(arch);
    let ones_in_kernel = elements.iter().try_fold(true, |ok, x| {
        let s = places
            .iter()
            .try_fold(LogReal::zero(), |acc, p| Ok::<_, GvfError>(acc.add(&value(p, x)?)))?;
        Ok::<_, GvfError>(ok && s.sign()? == 0)
    })?;
    let total = f_rank + a_rank;
    Ok(UniquenessReport {
        d,
        bound,
        kernel_dim: places.len() - total,
        rank: total,
        places,
        elements,
        ones_in_kernel,
    })
}

/// Rank of a matrix with at most two rows of formal log values.
fn formal_rank(rows: &[Vec<LogReal>]) -> usize {
    let nonzero: Vec<&Vec<LogReal>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_formally_zero()))
        .collect();
    match nonzero.as_slice() {
        [] => 0,
        [_] => 1,
        [r, s] => {
            let n = r.len();
            let dependent = (0..n).all(|i| {
                (0..n).all(|j| formal_tensor(&r[i], &s[j]) == formal_tensor(&r[j], &s[i]))
            });
            if dependent {
                1
            } else {
                2
            }
        }
        _ => unreachable!("quadratic fields have at most two archimedean places"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_one() {
        for d in [-1, 2] {
            let r = uniqueness_witness(d, 20).unwrap();
            assert_eq!(r.kernel_dim, 1, "d = {d}");
            assert!(r.ones_in_kernel);
        }
        assert!(uniqueness_witness(3, 20).is_err());
    }

    #[test]
    fn degenerate_bound() {
        let r = uniqueness_witness(2, 2).unwrap();
        assert!(r.kernel_dim >= 1);
    }
}
