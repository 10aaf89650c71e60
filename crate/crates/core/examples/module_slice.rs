// Weight multiplicities of L(rho) for affine A1, and the Shapovalov basis.

use kmx::catalog;
use kmx::error::Result;
use kmx::ghat::{weights_and_mults, ModuleSlice};

pub fn run_example() -> Result<Vec<usize>> {
    let d = catalog::affine_a1();
    let rho = d.rho();
    let table = weights_and_mults(&d, &rho, 3)?;
    println!("{}", serde_json::to_string(&table).unwrap());
    let s = ModuleSlice::new(&d, &rho, 3)?;
    let dims: Vec<usize> = s.spaces().iter().map(|sp| sp.dim()).collect();
    for sp in s.spaces() {
        let labels: Vec<String> = (sp.offset..sp.offset + sp.dim()).map(|k| s.label(k)).collect();
        println!("beta {:?}: {}", sp.beta, labels.join(", "));
    }
    Ok(dims)
}

pub fn main() -> Result<()> {
    run_example().map(|_| ())
}
