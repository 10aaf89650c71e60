use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{rat_pow, rat_solve, smith, to_i64, Int, IntMat, Rat, RatMat};

/// Row-style Hermite normal form of the Z-span of `vectors`. Zero rows are
/// dropped, pivots are positive and entries above a pivot lie in `[0, pivot)`.
/// Two generating sets of the same lattice give the same output.
pub fn hnf_rows(vectors: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(width) = vectors.first().map(|v| v.len()) else { return Vec::new() };
    let mut rows: Vec<Vec<Int>> =
        vectors.iter().map(|v| v.iter().map(|&x| Int::from(x)).collect()).collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = best else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                for j in 0..width {
                    let v = &rows[i][j] - &q * &rows[r][j];
                    rows[i][j] = v;
                }
                done &= rows[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                rows[r].iter_mut().for_each(|x| *x = -x.clone());
            }
            pivots.push((r, c));
            r += 1;
        }
    }
    rows.truncate(r);
    for &(pr, pc) in &pivots {
        for i in 0..pr {
            let q = rows[i][pc].div_floor(&rows[pr][pc]);
            if q.is_zero() {
                continue;
            }
            for j in 0..width {
                let v = &rows[i][j] - &q * &rows[pr][j];
                rows[i][j] = v;
            }
        }
    }
    rows.into_iter().map(|v| v.iter().map(to_i64).collect()).collect()
}

/// Canonical (HNF) basis of the integer kernel `{x in Z^width : M x = 0}`.
pub fn int_kernel(m: &[Vec<i64>], width: usize) -> Vec<Vec<i64>> {
    if m.is_empty() {
        return (0..width).map(|i| (0..width).map(|j| i64::from(i == j)).collect()).collect();
    }
    let s = smith(&IntMat::from_i64(m));
    let rank = s.rank();
    let basis: Vec<Vec<i64>> = (rank..width).map(|j| s.v.col(j).iter().map(to_i64).collect()).collect();
    hnf_rows(&basis)
}

/// Integer coordinates of `x` in the lattice basis `basis` (rows), if `x`
/// lies in the lattice.
pub fn coords_in_basis(basis: &[Vec<i64>], x: &[i64]) -> Option<Vec<i64>> {
    if basis.is_empty() {
        return x.iter().all(|&v| v == 0).then(Vec::new);
    }
    let bt = RatMat::from_i64(basis).transpose();
    let rhs: Vec<Rat> = x.iter().map(|&v| Rat::from_integer(Int::from(v))).collect();
    let sol = rat_solve(&bt, &rhs)?;
    debug_assert!(sol.kernel.is_empty(), "lattice basis is not independent");
    sol.particular
        .iter()
        .map(|q| q.denom().is_one().then(|| to_i64(q.numer())))
        .collect()
}

/// A character of a lattice, stored as its values on a canonical basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeChar {
    pub basis: Vec<Vec<i64>>,
    #[serde(with = "rat_vec_serde")]
    pub values: Vec<Rat>,
}

impl LatticeChar {
    pub fn trivial(basis: Vec<Vec<i64>>) -> Self {
        let values = vec![Rat::one(); basis.len()];
        LatticeChar { basis, values }
    }

    /// Restriction of the character `x -> prod_k t_k^{x_k}` of the ambient
    /// lattice to `basis`.
    pub fn from_ambient(basis: Vec<Vec<i64>>, t: &[Rat]) -> Self {
        let values = basis
            .iter()
            .map(|b| b.iter().zip(t).fold(Rat::one(), |acc, (&e, s)| acc * rat_pow(s, e)))
            .collect();
        LatticeChar { basis, values }
    }

    /// Value at a lattice point, `None` if `x` is outside the lattice.
    pub fn eval(&self, x: &[i64]) -> Option<Rat> {
        let c = coords_in_basis(&self.basis, x)?;
        Some(c.iter().zip(&self.values).fold(Rat::one(), |acc, (&e, s)| acc * rat_pow(s, e)))
    }

    /// Restriction to a sublattice given by its basis.
    pub fn restrict(&self, basis: &[Vec<i64>]) -> Self {
        let values = basis.iter().map(|b| self.eval(b).expect("not a sublattice")).collect();
        LatticeChar { basis: basis.to_vec(), values }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.basis, other.basis, "characters on different lattices");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        LatticeChar { basis: self.basis.clone(), values }
    }

    pub fn inverse(&self) -> Self {
        LatticeChar { basis: self.basis.clone(), values: self.values.iter().map(|v| v.recip()).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }
}

pub(crate) mod rat_vec_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::{fmt_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(fmt_rat).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter().map(|x| parse_rat(x).map_err(serde::de::Error::custom)).collect()
    }
}
