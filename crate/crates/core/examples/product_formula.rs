//! The product formula over every supported field.

use gvf::arith::rational::int;
use gvf::field::{FieldElem, FieldKind};
use gvf::structure::{gvf_fpt, gvf_q, gvf_quad, gvf_qz};

fn main() -> gvf::Result<()> {
    let cases = [
        (gvf_q(int(1))?, "-84/275"),
        (gvf_fpt(5, int(1))?, "(t^4 + 2)/(3*t^2 + t)"),
        (gvf_quad(-1)?, "7 - 2*i"),
        (gvf_quad(2)?, "3/2 + 5*sqrt(2)"),
    ];
    for (g, text) in cases {
        let a = FieldElem::parse(g.kind(), text)?;
        println!("{}: sum_v v({a}) = {}", g.kind(), g.product_formula_sum(&a)?);
    }

    let g = gvf_qz();
    for text in ["z - 2", "(3*z^3 - z + 7)/(z^2 + 5)", "(z^5 - 20)/(4*z^2 - 1)"] {
        let f = FieldElem::parse(FieldKind::Qz, text)?;
        let parts = g.product_formula_parts(&f)?;
        println!("Q(z): {f}");
        println!("  Gauss {}  Mahler {}  points {}", parts.finite, parts.arch, parts.points);
        println!("  total {}", parts.total);
    }
    Ok(())
}
