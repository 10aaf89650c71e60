// Components, special sets and exposing functionals of the 3x3 hyperbolic matrix.

use kmx::cartan::{Gcm, RootDatum};
use kmx::error::Result;

pub fn run_example() -> Result<Vec<Vec<usize>>> {
    let a = Gcm::from_json(r#"{"A": [[2,-2,0],[-2,2,-1],[0,-1,2]]}"#)?;
    let d = RootDatum::new(a)?;
    for c in d.classify(d.all()) {
        println!("component {:?}: {}", c.set.one_based(), c.kind);
    }
    let mut special = Vec::new();
    for &theta in d.special_sets() {
        println!("special {:?}, c = {:?}", theta.one_based(), d.exposing_functional(theta)?);
        special.push(theta.one_based());
    }
    Ok(special)
}

pub fn main() -> Result<()> {
    run_example().map(|_| ())
}
