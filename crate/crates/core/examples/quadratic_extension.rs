//! The Galois-invariant extension to Q(i) and Q(sqrt 2).

use gvf::arith::rational::{int, rat};
use gvf::field::{FieldElem, FieldKind};
use gvf::structure::{gvf_q, gvf_quad, uniqueness_witness};

fn main() -> gvf::Result<()> {
    for d in [-1, 2] {
        let g = gvf_quad(d)?;
        let kind = FieldKind::Quad(d);
        let a = FieldElem::parse(kind, if d < 0 { "2 + 3*i" } else { "5 - sqrt(2)" })?;
        println!("{g}");
        println!("  ht({a}) = {}, ht({}) = {}", g.ht(&a)?, a.conj(), g.ht(&a.conj())?);
        println!("  Galois invariant: {}", g.check_galois_invariance(&a)?);
        println!("  product formula: {}", g.product_formula_sum(&a)?);
        let q = rat(-9, 14);
        println!(
            "  ht(-9/14) = {} over K, {} over Q",
            g.ht(&FieldElem::from_rational(kind, &q)?)?,
            gvf_q(int(1))?.ht(&FieldElem::Q(q))?
        );
        let u = uniqueness_witness(d, 20)?;
        println!("  {} places, {} elements, rank {}, kernel dimension {}", u.places.len(), u.elements.len(), u.rank, u.kernel_dim);
    }
    Ok(())
}
