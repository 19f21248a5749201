//! Factorization over Z, F_p[t] and Z[z], and certified Mahler measures.

use gvf::arith::factor::FactoredRational;
use gvf::arith::fp_poly::{factor_fp_poly, FpPoly};
use gvf::arith::mahler::mahler_measure;
use gvf::arith::rational::parse_rational;
use gvf::arith::zpoly::{factor_zpoly, ZPoly};

fn main() -> gvf::Result<()> {
    let q = parse_rational("-1234567890/3456")?;
    let f = FactoredRational::of_rational(&q)?;
    println!("{q} = {} * {:?}", f.sign, f.factors);

    let g = FpPoly::from_i64(3, &[2, 0, 0, 1, 0, 1]);
    println!("over F_3: {g} = {:?}", factor_fp_poly(&g)?.factors);

    let h = ZPoly::from_i64(&[-6, 1, 4, 1]);
    println!("over Z: {h} = {:?}", factor_zpoly(&h));

    for p in [ZPoly::from_i64(&[-2, 1]), ZPoly::from_i64(&[1, 1, 1]), ZPoly::from_i64(&[-1, -1, 0, 1])] {
        println!("m({p}) in {}", mahler_measure(&p)?);
    }
    Ok(())
}
