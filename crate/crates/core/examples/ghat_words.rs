// Words in root groups, torus elements and idempotents acting on module slices.

use kmx::catalog;
use kmx::error::Result;
use kmx::ghat::{bruhat_cell, default_probes, probe_equal, ModuleSlice, Word};

pub fn run_example() -> Result<String> {
    let d = catalog::a2();
    let lhs = Word::parse(&d, "X+(1;2) X+(2;3)")?;
    let rhs = Word::parse(&d, "X+(2;3) X+(1;2) X([1,1];6)")?;
    let cmp = probe_equal(&d, &lhs, &rhs, &default_probes(&d, 4))?;
    println!("commutator: {}", serde_json::to_string(&cmp).unwrap());

    let s = ModuleSlice::new(&d, &[1, 1], 4)?;
    let w = Word::parse(&d, "X-(1;1) T(h1;2) X+(2;1)")?;
    println!("theta on L(rho): {}", kmx::exact::fmt_rat(&s.theta(&w)?));

    let c = bruhat_cell(&d, &w)?;
    println!("cell: {} | {} | {}", c.lower, c.middle, c.upper);
    Ok(serde_json::to_value(&cmp).unwrap()["verdict"].as_str().unwrap_or("").to_string())
}

pub fn main() -> Result<()> {
    run_example().map(|_| ())
}
