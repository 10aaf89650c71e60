//! Small named Cartan matrices used by the examples, tests and `verify`.

use crate::cartan::RootDatum;

/// `A_2`.
pub fn a2() -> RootDatum {
    datum(vec![vec![2, -1], vec![-1, 2]])
}

/// The affine matrix `Ã_1`.
pub fn affine_a1() -> RootDatum {
    datum(vec![vec![2, -2], vec![-2, 2]])
}

/// The 3x3 hyperbolic matrix with an affine `{1,2}` block.
pub fn hyperbolic() -> RootDatum {
    datum(vec![vec![2, -2, 0], vec![-2, 2, -1], vec![0, -1, 2]])
}

/// `Ã_1 ⊕ A_1`: decomposable, with `{1,2}⊥ = {3}`.
pub fn affine_a1_plus_a1() -> RootDatum {
    datum(vec![vec![2, -2, 0], vec![-2, 2, 0], vec![0, 0, 2]])
}

/// `B_2` (non-symmetric, finite).
pub fn b2() -> RootDatum {
    datum(vec![vec![2, -2], vec![-1, 2]])
}

/// A non-symmetric indefinite rank 2 matrix (`a_12 a_21 = 5`).
pub fn rank2_indefinite() -> RootDatum {
    datum(vec![vec![2, -5], vec![-1, 2]])
}

pub fn by_name(name: &str) -> Option<RootDatum> {
    Some(match name {
        "A2" => a2(),
        "A1~" => affine_a1(),
        "hyp" => hyperbolic(),
        "A1~+A1" => affine_a1_plus_a1(),
        "B2" => b2(),
        "H25" => rank2_indefinite(),
        _ => return None,
    })
}

fn datum(rows: Vec<Vec<i64>>) -> RootDatum {
    RootDatum::from_rows(rows).expect("catalog matrices are valid")
}
