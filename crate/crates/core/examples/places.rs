//! Valuations of one element at every place where it is nonzero.

use gvf::field::{FieldElem, FieldKind};
use gvf::places::{arch_places, places_above, splitting, support, v_eval, Valuation};
use num_bigint::BigUint;

fn show(kind: FieldKind, text: &str) -> gvf::Result<()> {
    let a = FieldElem::parse(kind, text)?;
    println!("{a} in {kind}");
    let mut places = arch_places(kind);
    places.extend(support(&a)?);
    places.sort();
    places.dedup();
    for p in places {
        match v_eval(&Valuation::unit(p.clone()), &a) {
            Ok(v) => println!("  {p}: {v} ~ {:.6}", v.approx()),
            Err(e) => println!("  {p}: {e}"),
        }
    }
    Ok(())
}

fn main() -> gvf::Result<()> {
    show(FieldKind::Q, "-360/7")?;
    show(FieldKind::Fp(5), "(t^2 + 2)/(t^3 + t)")?;
    show(FieldKind::Quad(-1), "3 + 4*i")?;
    show(FieldKind::Quad(2), "1 + sqrt(2)")?;
    show(FieldKind::Qz, "(z^2 - 2)/(3*z)")?;

    for p in [2u32, 3, 5, 7] {
        let p = BigUint::from(p);
        println!("p = {p} in Q(sqrt -1): {}, places {:?}", splitting(-1, &p), places_above(-1, Some(&p)).len());
    }
    Ok(())
}
