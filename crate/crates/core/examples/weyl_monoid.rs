// Products in the Weyl monoid and in the normalizer of the torus.

use kmx::catalog;
use kmx::error::Result;

pub fn run_example() -> Result<Vec<String>> {
    let d = catalog::hyperbolic();
    let w = d.wmon();
    let x = w.parse_wmon("w=;theta=1,2;sigma=3")?;
    let y = w.parse_wmon("w=;theta=1,2")?;
    let xy = w.mul(&x, &y);
    let inv = w.inverse(&x);
    println!("x = {:?}", x.record());
    println!("x y = {:?}", xy.record());
    println!("x^-1 = {:?}", inv.record());
    println!("x x^-1 x = {:?}", w.mul(&w.mul(&x, &inv), &x).record());

    let a2 = catalog::a2();
    let n = a2.wmon();
    let s1 = n.parse_nhat("sigma=1")?;
    let sq = n.nhat_mul(&s1, &s1);
    let t: Vec<String> = sq.record().t;
    println!("A2: n_1^2 has torus part {t:?}, image {:?}", n.kappa(&sq).record());
    Ok(t)
}

pub fn main() -> Result<()> {
    run_example().map(|_| ())
}
