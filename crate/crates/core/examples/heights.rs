//! Heights, local terms and functionals of discrete structures.

use gvf::arith::rational::{int, rat};
use gvf::field::{FieldElem, FieldKind};
use gvf::structure::{gvf_fpt, gvf_q, gvf_qz, PlaceSelection};
use gvf::tropical::{parse_tropical, LatticeDivisor};

fn main() -> gvf::Result<()> {
    let g = gvf_q(int(1))?;
    let a: Vec<FieldElem> = [rat(3, 4), int(10), int(-6)].into_iter().map(FieldElem::Q).collect();
    println!("{g}");
    println!("  h(3/4, 10, -6) = {}", g.height(&a)?);
    println!("  via functional = {}", g.functional(&LatticeDivisor::meet_of(&a)?.neg())?);
    println!("  via lattice    = {}", g.height_via_lattice(&a)?);
    let t = parse_tropical("max(x1, x2) - min(x2, x3)")?;
    println!("  R_t(a) for t = {t}: {}", g.local_term(&t, &a)?);

    let renormed = g.renormalize(&PlaceSelection::All, &rat(5, 2))?;
    println!("  renormalized: h = {}", renormed.height(&a)?);

    let f = gvf_fpt(3, int(2))?;
    let t_elem = FieldElem::parse(FieldKind::Fp(3), "t^2 + 1")?;
    println!("{f}\n  ht(t^2 + 1) = {}", f.ht(&t_elem)?);

    let z = gvf_qz();
    let x = FieldElem::parse(FieldKind::Qz, "(z^2 - 3)/2")?;
    println!("{z}\n  ht((z^2 - 3)/2) in {}", z.ht(&x)?);
    Ok(())
}
