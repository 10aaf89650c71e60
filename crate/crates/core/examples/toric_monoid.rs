// Saturation and face lattice of a lattice monoid.

use kmx::error::Result;
use kmx::toric::LatticeMonoid;

pub fn run_example() -> Result<Vec<Vec<i64>>> {
    let m = LatticeMonoid::new(2, vec![vec![1, 0], vec![1, 2]])?;
    println!("saturated: {}, witness {:?}", m.saturated, m.witness);
    let sat = m.saturation()?;
    println!("Hilbert basis of the saturation: {:?}", sat.generators);
    for f in m.faces() {
        println!("face dim {} generators {:?} hull {:?}", f.dim, f.gens, m.hull_basis(f));
    }
    Ok(sat.generators.clone())
}

pub fn main() -> Result<()> {
    run_example().map(|_| ())
}
