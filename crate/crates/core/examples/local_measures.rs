//! Local measures, the Radon-Nikodym relation and mass balance.

use gvf::arith::rational::{int, rat};
use gvf::field::FieldElem;
use gvf::structure::gvf_q;
use gvf::tropical::LatticeDivisor;

fn main() -> gvf::Result<()> {
    let g = gvf_q(int(1))?;
    let a = FieldElem::Q(rat(12, 35));
    let b = FieldElem::Q(rat(18, 5));
    let m = g.local_measure(&a)?;
    println!("measure of {a}, total mass {}", m.total_mass());
    for atom in &m.atoms {
        println!("  {}: v = {}, mass = {}", atom.place, atom.value, atom.mass);
    }
    let beta = LatticeDivisor::div(&a)?.positive_part()?;
    let rn = g.rn_check(&a, &b, Some(&beta))?;
    for (p, r) in &rn.shared {
        println!("  d mu_a / d mu_b at {p}: {r:?}");
    }
    println!("ratios hold: {}, integral holds: {:?}", rn.ratios_hold, rn.integral_holds);
    println!("mass balance for {a}: {}", g.mass_balance(&a)?);
    Ok(())
}
