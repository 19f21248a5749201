//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use gvf::arith::logreal::{ExtLogReal, LogReal, Quantity};
use gvf::arith::rational::{int, Rational};
use gvf::field::{FieldElem, FieldKind};
use gvf::positivity::{cross_validate, is_positive, search_neg_certificate, verify_neg_certificate, SearchBounds};
use gvf::random::{nonzero_elem, nonzero_tuple, qz_elem, rational, seeded, term};
use gvf::structure::{
    gauge_inequalities, gvf_fpt, gvf_q, gvf_quad, height_axioms, renormalization_invariance, uniqueness_witness,
};
use gvf::tropical::{divisor_from_term, LatticeDivisor};
use gvf::Result;
use num_bigint::BigUint;
use rand::Rng;

type Check = fn() -> Result<String>;

const SEED: u64 = 20_240_917;
const QZ_WIDTH: f64 = 1e-6;
const F3: FieldKind = FieldKind::Fp(3);

fn is_exact_zero(q: &Quantity) -> Result<bool> {
    Ok(match q {
        Quantity::Exact(ExtLogReal::Finite(x)) => x.sign()? == 0,
        _ => false,
    })
}

fn exact_same(a: &Quantity, b: &Quantity) -> Result<bool> {
    Ok(match (a, b) {
        (Quantity::Exact(x), Quantity::Exact(y)) => x.compare(y)? == std::cmp::Ordering::Equal,
        _ => false,
    })
}

fn within(start: Instant, limit: Duration) -> Result<()> {
    let spent = start.elapsed();
    if spent > limit {
        return Err(gvf::GvfError::Domain(format!("took {spent:?}, limit {limit:?}")));
    }
    Ok(())
}

fn product_formula_exact() -> Result<String> {
    let start = Instant::now();
    let mut rng = seeded(SEED);
    for kind in [FieldKind::Q, F3] {
        let g = if kind == FieldKind::Q { gvf_q(int(1))? } else { gvf_fpt(3, int(1))? };
        for i in 0..1000 {
            let a = nonzero_elem(&mut rng, kind);
            if !is_exact_zero(&g.product_formula_sum(&a)?)? {
                return Err(gvf::GvfError::Domain(format!("{kind} case {i}: {a}")));
            }
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("2000 elements in {:?}", start.elapsed()))
}

fn normalization() -> Result<String> {
    let h2 = gvf_q(int(1))?.ht(&FieldElem::from_int(FieldKind::Q, 2))?;
    let ht = gvf_fpt(3, int(1))?.ht(&FieldElem::generator(F3)?)?;
    let log2 = Quantity::Exact(ExtLogReal::Finite(LogReal::log_prime(BigUint::from(2u8), int(1))));
    let one = Quantity::Exact(ExtLogReal::Finite(LogReal::units(int(1))));
    if !exact_same(&h2, &log2)? || !exact_same(&ht, &one)? {
        return Err(gvf::GvfError::Domain(format!("ht(2) = {h2}, ht(t) = {ht}")));
    }
    Ok("ht(2) = log 2, ht(t) = 1".into())
}

fn height_axiom_suite() -> Result<String> {
    let start = Instant::now();
    let mut total = 0;
    for g in [gvf_q(int(1))?, gvf_fpt(3, int(1))?] {
        let r = height_axioms(&g, 500, SEED)?;
        if r.failed() > 0 {
            return Err(gvf::GvfError::Domain(format!("{g}: {:?}", r.failures)));
        }
        total += r.passed();
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{total} checks in {:?}", start.elapsed()))
}

fn qz_product_formula() -> Result<String> {
    let start = Instant::now();
    let g = gvf::structure::gvf_qz();
    let mut rng = seeded(SEED);
    let mut widest = 0f64;
    for i in 0..50 {
        let f = qz_elem(&mut rng, 5, 20);
        let total = g.product_formula_parts(&f)?.total.to_interval();
        widest = widest.max(total.width());
        if !total.contains(0.0) || total.width() > QZ_WIDTH {
            return Err(gvf::GvfError::Domain(format!("case {i}: {f} gives {total}")));
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("50 functions, widest {widest:.2e}, {:?}", start.elapsed()))
}

fn conversion_consistency() -> Result<String> {
    let mut rng = seeded(SEED);
    for kind in [FieldKind::Q, F3] {
        let g = if kind == FieldKind::Q { gvf_q(int(1))? } else { gvf_fpt(3, int(1))? };
        for i in 0..200 {
            let n = rng.gen_range(1..=4);
            let a = nonzero_tuple(&mut rng, kind, n);
            let h = g.height(&a)?;
            let via_functional = g.functional(&LatticeDivisor::meet_of(&a)?.neg())?;
            let via_lattice = g.height_via_lattice(&a)?;
            let t = term(&mut rng, n, 3);
            let r = g.local_term(&t, &a)?;
            let via_divisor = g.functional(&divisor_from_term(&t, &a)?)?;
            if !exact_same(&h, &via_functional)? || !exact_same(&h, &via_lattice)? || !exact_same(&r, &via_divisor)? {
                return Err(gvf::GvfError::Domain(format!("{kind} case {i}: t = {t}")));
            }
        }
    }
    Ok("400 inputs, heights, functionals, local terms and lattice valuations agree".into())
}

fn local_measures() -> Result<String> {
    let g = gvf_q(int(1))?;
    let mut rng = seeded(SEED);
    let mut done = 0;
    while done < 100 {
        let a = nonzero_elem(&mut rng, FieldKind::Q);
        let b = nonzero_elem(&mut rng, FieldKind::Q);
        if a.is_one() || b.is_one() || a.neg().is_one() || b.neg().is_one() {
            continue;
        }
        let beta = LatticeDivisor::div(&a)?.positive_part()?;
        let rn = g.rn_check(&a, &b, Some(&beta))?;
        if !rn.holds() || rn.integral_holds != Some(true) || !g.mass_balance(&a)? {
            return Err(gvf::GvfError::Domain(format!("a = {a}, b = {b}")));
        }
        done += 1;
    }
    Ok("100 pairs, RN ratios, integrals and mass balance exact".into())
}

fn renormalization() -> Result<String> {
    let mut checks = 0;
    for g in [gvf_q(int(1))?, gvf_fpt(3, int(1))?] {
        let r = renormalization_invariance(&g, 100, SEED)?;
        if r.failed() > 0 {
            return Err(gvf::GvfError::Domain(format!("{g}: {:?}", r.failures)));
        }
        checks += r.passed();
    }
    Ok(format!("{checks} checks unchanged"))
}

fn positivity_engine() -> Result<String> {
    let start = Instant::now();
    let mut rng = seeded(SEED);
    let two = FieldElem::from_int(FieldKind::Q, 2);
    let one = FieldElem::one(FieldKind::Q);
    let mut done = 0;
    while done < 200 {
        let x = FieldElem::Q(rational(&mut rng, 60, 40));
        let y = FieldElem::Q(rational(&mut rng, 60, 40));
        let s = x.add(&y)?;
        if s.is_zero() {
            continue;
        }
        let alpha = LatticeDivisor::div(&s)?
            .sub(&LatticeDivisor::meet_of(&[x.clone(), y.clone()])?)?
            .sub(&LatticeDivisor::meet_of(&[two.clone(), one.clone()])?)?;
        if !is_positive(&alpha)?.is_positive {
            return Err(gvf::GvfError::Domain(format!("x = {x}, y = {y}")));
        }
        done += 1;
    }
    let a = [FieldElem::Q(Rational::new(int(1).to_integer(), 2.into()))];
    let cert = search_neg_certificate(&a, &int(2), SearchBounds::new(2, 4))?
        .ok_or_else(|| gvf::GvfError::Domain("no certificate for a = (1/2), eps = 2".into()))?;
    let cost: Rational = cert
        .cost_terms()
        .into_iter()
        .map(|(m, s)| Rational::new(m.into(), num_bigint::BigInt::from(4u8).pow(s as u32)))
        .sum();
    if !verify_neg_certificate(&a, &cert)? || cost > Rational::new(1.into(), 2.into()) {
        return Err(gvf::GvfError::Domain(format!("certificate cost {cost}")));
    }
    let mut contradictions = 0;
    for kind in [FieldKind::Q, F3] {
        contradictions += cross_validate(100, kind, SEED)?.contradictions.len();
    }
    if contradictions > 0 {
        return Err(gvf::GvfError::Domain(format!("{contradictions} contradictions")));
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("200 verdicts, certificate cost {cost}, 0 contradictions, {:?}", start.elapsed()))
}

fn quadratic_extensions() -> Result<String> {
    let gq = gvf_q(int(1))?;
    let mut rng = seeded(SEED);
    for d in [-1, 2] {
        let g = gvf_quad(d)?;
        let kind = g.kind();
        for _ in 0..50 {
            let a = nonzero_elem(&mut rng, kind);
            if !is_exact_zero(&g.product_formula_sum(&a)?)? {
                return Err(gvf::GvfError::Domain(format!("d = {d}: product formula at {a}")));
            }
        }
        for _ in 0..100 {
            let a = nonzero_elem(&mut rng, kind);
            if !g.check_galois_invariance(&a)? || !exact_same(&g.ht(&a)?, &g.ht(&a.conj())?)? {
                return Err(gvf::GvfError::Domain(format!("d = {d}: Galois invariance at {a}")));
            }
        }
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let qs: Vec<Rational> = (0..n).map(|_| rational(&mut rng, 60, 40)).collect();
            let over_q: Vec<FieldElem> = qs.iter().map(|q| FieldElem::Q(q.clone())).collect();
            let over_k = qs.iter().map(|q| FieldElem::from_rational(kind, q)).collect::<Result<Vec<_>>>()?;
            if !exact_same(&g.height(&over_k)?, &gq.height(&over_q)?)? {
                return Err(gvf::GvfError::Domain(format!("d = {d}: restriction at {qs:?}")));
            }
        }
        let u = uniqueness_witness(d, 20)?;
        if u.kernel_dim != 1 {
            return Err(gvf::GvfError::Domain(format!("d = {d}: kernel dimension {}", u.kernel_dim)));
        }
    }
    Ok("d = -1, 2: product formula, Galois invariance, restriction, kernel dimension 1".into())
}

fn gauge() -> Result<String> {
    let r = gauge_inequalities(&gvf_q(int(1))?, 500, SEED)?;
    if r.failed() > 0 {
        return Err(gvf::GvfError::Domain(format!("{:?}", r.failures)));
    }
    Ok(format!("{} checks", r.passed()))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("product formula over Q and F_3(t)", product_formula_exact),
        ("normalization", normalization),
        ("height axioms", height_axiom_suite),
        ("product formula over Q(z)", qz_product_formula),
        ("conversion consistency", conversion_consistency),
        ("local measures", local_measures),
        ("renormalization invariance", renormalization),
        ("positivity engine", positivity_engine),
        ("quadratic extensions", quadratic_extensions),
        ("gauge inequalities", gauge),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
