// Faces of the Tits cone: normal forms, inclusion and intersection.

use kmx::catalog;
use kmx::error::Result;
use kmx::exact::rat;
use kmx::face::FaceRecord;

pub fn run_example() -> Result<FaceRecord> {
    let d = catalog::hyperbolic();
    let f = d.faces();
    let r = f.parse("w=;theta=1,2")?;
    let s = f.parse("w=3;theta=1,2")?;
    let meet = f.intersect(&r, &s)?;
    println!("R = {:?}", r.record());
    println!("S = {:?}", s.record());
    println!("R meet S = {:?}", meet.record());
    println!("R includes R meet S: {}", f.includes(&r, &meet));

    // an affine datum has only the edge and the whole cone up to W
    let aff = catalog::affine_a1();
    let fa = aff.faces();
    let p = fa.face_of_point(&[rat(1), rat(1), rat(0)])?;
    println!("affine A1: face of rho is {:?}", p.record());
    Ok(meet.record())
}

pub fn main() -> Result<()> {
    run_example().map(|_| ())
}
