//! Tropical terms, their normal forms and lattice divisors.

use gvf::arith::rational::int;
use gvf::field::{FieldElem, FieldKind};
use gvf::places::{Place, Valuation};
use gvf::tropical::{divisor_from_term, ev_pair, is_zero, parse_tropical, to_normal_form, LatticeDivisor};

fn main() -> gvf::Result<()> {
    let t = parse_tropical("max(x1, 2*x2) + min(x1, 0) - 1/2*x3")?;
    println!("term: {t}");
    println!("normal form: {}", to_normal_form(&t));
    println!("t(1, -2, 4) = {}", t.eval(&[int(1), int(-2), int(4)])?);

    let a: Vec<FieldElem> = ["6", "1/4", "5"].iter().map(|s| FieldElem::parse(FieldKind::Q, s)).collect::<Result<_, _>>()?;
    let alpha = divisor_from_term(&t, &a)?;
    println!("divisor: {alpha}");
    for p in alpha.candidate_places()? {
        println!("  v_{p}(alpha) = {}", ev_pair(&Valuation::unit(p.clone()), &alpha)?);
    }

    let zero = divisor_from_term(&parse_tropical("max(x1,0) - max(x1,x2,0)")?, &a)?;
    println!("{zero} is zero: {}", is_zero(&zero)?);

    let join = LatticeDivisor::join_of(&a)?;
    let v2 = Valuation::unit(Place::QFinite(2u8.into()));
    println!("v_2(div 6 v div 1/4 v div 5) = {}", ev_pair(&v2, &join)?);
    Ok(())
}
