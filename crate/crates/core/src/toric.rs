//! Finitely generated submonoids of `Z^r`: the cone they span, saturation,
//! faces with relative interiors, hulls and dual faces, and the monoid
//! `M̃ = Hom(M, Q)` of multiplicative maps.

use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{coords_in_basis, hnf_rows, int_kernel, rat, smith, to_i64, IntMat, LatticeChar, Rat, RatMat};

pub const MAX_RANK: usize = 8;
pub const MAX_GENERATORS: usize = 64;
/// Cap on the number of simplicial cones inspected for the saturation test.
pub const MAX_BASES: usize = 20_000;
/// Cap on the index of a basis sublattice in the saturation test.
pub const MAX_PARALLELEPIPED: i64 = 100_000;

/// Input wire form `{"rank": r, "generators": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidSpec {
    pub rank: usize,
    pub generators: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMonoid {
    pub rank: usize,
    pub generators: Vec<Vec<i64>>,
    /// Facet normals `y` of the cone inside its span: `y·x >= 0`.
    pub inequalities: Vec<Vec<i64>>,
    /// Basis of the annihilator of the span: `y·x = 0`.
    pub equations: Vec<Vec<i64>>,
    pub saturated: bool,
    /// A point of `cone ∩ Z^r` outside the monoid, when not saturated.
    pub witness: Option<Vec<i64>>,
    /// Every parallelepiped point found while testing saturation.
    parallelepiped: Vec<Vec<i64>>,
    faces: Vec<MonoidFace>,
}

/// A face, recorded by the generators it contains and the facet normals
/// vanishing on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoidFace {
    pub dim: usize,
    pub gens: Vec<usize>,
    pub tight: Vec<usize>,
}

/// A map `M → Q` that is a character of `F − F` on the face `F` and zero
/// off it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MhatElt {
    pub face: MonoidFace,
    pub chr: LatticeChar,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot128(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive128(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

fn rank_of(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMat::from_i64(vectors).rank()
}

/// Extreme rays of the pointed cone `{z : M z >= 0}` where `M` has full
/// column rank, by the double description method with the combinatorial
/// adjacency test.
fn extreme_rays(m: &[Vec<i128>], k: usize) -> Vec<Vec<i128>> {
    if k == 0 {
        return Vec::new();
    }
    let mi64: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    let pivots = IntMat::from_i64(&mi64).bareiss_row_pivots();
    debug_assert_eq!(pivots.len(), k);
    let sub: Vec<Vec<i64>> = pivots.iter().map(|&i| mi64[i].clone()).collect();
    let inv = RatMat::from_i64(&sub).inverse().expect("independent rows");
    let mut rays: Vec<Vec<i128>> = (0..k)
        .map(|j| {
            let col = inv.col(j);
            crate::exact::primitive_integer(&col).iter().map(|x| to_i64(x) as i128).collect()
        })
        .collect();
    let mut processed: Vec<usize> = pivots.clone();
    for (row, a) in m.iter().enumerate() {
        if pivots.contains(&row) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| dot128(a, r)).collect();
        let zero_set = |r: &[i128]| -> u64 {
            processed.iter().filter(|&&i| dot128(&m[i], r) == 0).fold(0u64, |acc, &i| acc | 1 << i)
        };
        let zs: Vec<u64> = rays.iter().map(|r| zero_set(r)).collect();
        let mut next: Vec<Vec<i128>> = Vec::new();
        for (r, &v) in rays.iter().zip(&vals) {
            if v >= 0 {
                next.push(r.clone());
            }
        }
        for p in 0..rays.len() {
            if vals[p] <= 0 {
                continue;
            }
            for n in 0..rays.len() {
                if vals[n] >= 0 {
                    continue;
                }
                let common = zs[p] & zs[n];
                let adjacent = (0..rays.len()).all(|o| o == p || o == n || zs[o] & common != common);
                if adjacent {
                    let mut ray: Vec<i128> =
                        rays[n].iter().zip(&rays[p]).map(|(x, y)| vals[p] * x - vals[n] * y).collect();
                    primitive128(&mut ray);
                    next.push(ray);
                }
            }
        }
        processed.push(row);
        rays = next;
    }
    rays.sort();
    rays.dedup();
    rays
}

impl LatticeMonoid {
    pub fn from_spec(spec: &MonoidSpec) -> Result<Self> {
        Self::new(spec.rank, spec.generators.clone())
    }

    pub fn new(rank: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::Guard(format!("lattice rank {rank} exceeds {MAX_RANK}")));
        }
        if generators.len() > MAX_GENERATORS {
            return Err(Error::Guard(format!("{} generators exceed {MAX_GENERATORS}", generators.len())));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != rank) {
            return Err(Error::RankMismatch { expected: rank, got: g.len() });
        }
        if generators.iter().flatten().any(|x| x.abs() > 1 << 20) {
            return Err(Error::Guard("generator entries exceed 2^20".into()));
        }
        let equations = if generators.is_empty() {
            int_kernel(&[], rank)
        } else {
            int_kernel(&generators, rank)
        };
        let span = if equations.is_empty() { int_kernel(&[], rank) } else { int_kernel(&equations, rank) };
        let k = span.len();
        let m: Vec<Vec<i128>> =
            generators.iter().map(|g| span.iter().map(|b| dot(g, b) as i128).collect()).collect();
        let mut inequalities: Vec<Vec<i64>> = extreme_rays(&m, if generators.is_empty() { 0 } else { k })
            .iter()
            .map(|z| {
                let mut y: Vec<i128> = (0..rank).map(|c| (0..k).map(|j| z[j] * span[j][c] as i128).sum()).collect();
                primitive128(&mut y);
                y.iter().map(|&x| i64::try_from(x).expect("facet normal fits in i64")).collect()
            })
            .collect();
        inequalities.sort();
        inequalities.dedup();
        let mut out = LatticeMonoid {
            rank,
            generators,
            inequalities,
            equations,
            saturated: true,
            witness: None,
            parallelepiped: Vec::new(),
            faces: Vec::new(),
        };
        out.faces = out.enumerate_faces();
        out.check_saturation(&span)?;
        Ok(out)
    }

    /// `x ∈ cone(M) ∩ Z^r`, the saturation of `M`.
    pub fn in_cone(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|e| dot(e, x) == 0) && self.inequalities.iter().all(|y| dot(y, x) >= 0)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.in_cone(x) && (self.saturated || self.nspan_contains(x))
    }

    /// Membership in the `N`-span of the generators. Generators inside the
    /// lineality space span a group; the rest is a bounded search on the
    /// sum of the facet normals.
    pub fn nspan_contains(&self, x: &[i64]) -> bool {
        if !self.in_cone(x) {
            return false;
        }
        let phi: Vec<i64> = (0..self.rank).map(|c| self.inequalities.iter().map(|y| y[c]).sum()).collect();
        let (pointed, flat): (Vec<&Vec<i64>>, Vec<&Vec<i64>>) =
            self.generators.iter().partition(|g| dot(&phi, g) > 0);
        let flat: Vec<Vec<i64>> = flat.into_iter().cloned().collect();
        let group = hnf_rows(&flat);
        let in_group = |r: &[i64]| {
            if group.is_empty() {
                r.iter().all(|&v| v == 0)
            } else {
                coords_in_basis(&group, r).is_some()
            }
        };
        let mut failed: HashSet<(Vec<i64>, usize)> = HashSet::new();
        fn search(
            r: Vec<i64>,
            start: usize,
            pointed: &[&Vec<i64>],
            m: &LatticeMonoid,
            in_group: &dyn Fn(&[i64]) -> bool,
            failed: &mut HashSet<(Vec<i64>, usize)>,
        ) -> bool {
            if in_group(&r) {
                return true;
            }
            if failed.contains(&(r.clone(), start)) {
                return false;
            }
            for i in start..pointed.len() {
                let next: Vec<i64> = r.iter().zip(pointed[i].iter()).map(|(a, b)| a - b).collect();
                if m.in_cone(&next) && search(next, i, pointed, m, in_group, failed) {
                    return true;
                }
            }
            failed.insert((r, start));
            false
        }
        search(x.to_vec(), 0, &pointed, self, &in_group, &mut failed)
    }

    /// Simplicial cones spanned by generators that cover the cone: pyramids
    /// with apex a generator outside the lineality space over the facets
    /// not containing it, down to the lineality space, which is covered by
    /// all bases drawn from its generators.
    fn simplicial_cover(&self) -> Result<Vec<Vec<usize>>> {
        fn tri(
            m: &LatticeMonoid,
            face: &MonoidFace,
            memo: &mut HashMap<Vec<usize>, Vec<Vec<usize>>>,
            budget: &mut usize,
        ) -> Result<Vec<Vec<usize>>> {
            if let Some(v) = memo.get(&face.gens) {
                return Ok(v.clone());
            }
            let minimal = &m.faces[0];
            let mut out = Vec::new();
            if face.gens == minimal.gens {
                for subset in subsets(&face.gens, face.dim) {
                    let vecs: Vec<Vec<i64>> = subset.iter().map(|&i| m.generators[i].clone()).collect();
                    if rank_of(&vecs) == face.dim {
                        out.push(subset);
                    }
                    *budget = budget.checked_sub(1).ok_or_else(too_many)?;
                }
            } else {
                let apex = *face.gens.iter().find(|i| !minimal.gens.contains(i)).expect("face above the lineality");
                for facet in m.faces.iter().filter(|f| f.dim + 1 == face.dim && m.is_subface(f, face)) {
                    if facet.gens.contains(&apex) {
                        continue;
                    }
                    for mut simplex in tri(m, facet, memo, budget)? {
                        simplex.push(apex);
                        simplex.sort();
                        out.push(simplex);
                        *budget = budget.checked_sub(1).ok_or_else(too_many)?;
                    }
                }
            }
            memo.insert(face.gens.clone(), out.clone());
            Ok(out)
        }
        fn too_many() -> Error {
            Error::Guard(format!("saturation test needs more than {MAX_BASES} simplicial cones"))
        }
        let mut budget = MAX_BASES;
        tri(self, &self.whole(), &mut HashMap::new(), &mut budget)
    }

    /// Every point of `cone ∩ Z^r` is a sum of generators and a lattice
    /// point of a half-open parallelepiped of one of the covering simplicial
    /// cones; the monoid is saturated iff those points lie in it.
    fn check_saturation(&mut self, span: &[Vec<i64>]) -> Result<()> {
        if span.is_empty() {
            return Ok(());
        }
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        for simplex in self.simplicial_cover()? {
            let basis: Vec<Vec<i64>> = simplex.iter().map(|&i| self.generators[i].clone()).collect();
            for p in parallelepiped_points(&basis, span)? {
                if seen.insert(p.clone()) {
                    self.parallelepiped.push(p);
                }
            }
        }
        self.parallelepiped.sort();
        self.witness = self.parallelepiped.iter().find(|p| !self.nspan_contains(p)).cloned();
        self.saturated = self.witness.is_none();
        Ok(())
    }

    /// A generating set of the saturation `cone ∩ Z^r`: the generators
    /// plus those parallelepiped points not already generated, taken in
    /// increasing order of the sum of the facet normals.
    pub fn saturation(&self) -> Result<LatticeMonoid> {
        let phi: Vec<i64> = (0..self.rank).map(|c| self.inequalities.iter().map(|y| y[c]).sum()).collect();
        let mut extra = self.parallelepiped.clone();
        extra.sort_by_key(|p| (dot(&phi, p), p.clone()));
        let mut out = LatticeMonoid {
            generators: self.generators.clone(),
            saturated: true,
            witness: None,
            parallelepiped: Vec::new(),
            faces: Vec::new(),
            ..self.clone()
        };
        for p in extra {
            if !out.nspan_contains(&p) {
                if out.generators.len() == MAX_GENERATORS {
                    return Err(Error::Guard(format!("saturation needs more than {MAX_GENERATORS} generators")));
                }
                out.generators.push(p);
            }
        }
        out.faces = out.enumerate_faces();
        Ok(out)
    }

    fn gen_mask(&self, pred: impl Fn(&[i64]) -> bool) -> u64 {
        self.generators.iter().enumerate().filter(|(_, g)| pred(g)).fold(0u64, |a, (i, _)| a | 1 << i)
    }

    fn face_from_mask(&self, mask: u64) -> MonoidFace {
        let gens: Vec<usize> = (0..self.generators.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let tight: Vec<usize> = (0..self.inequalities.len())
            .filter(|&j| gens.iter().all(|&i| dot(&self.inequalities[j], &self.generators[i]) == 0))
            .collect();
        let vecs: Vec<Vec<i64>> = gens.iter().map(|&i| self.generators[i].clone()).collect();
        MonoidFace { dim: rank_of(&vecs), gens, tight }
    }

    fn enumerate_faces(&self) -> Vec<MonoidFace> {
        let all = self.gen_mask(|_| true);
        let facets: Vec<u64> = self.inequalities.iter().map(|y| self.gen_mask(|g| dot(y, g) == 0)).collect();
        let mut masks: Vec<u64> = vec![all];
        let mut seen: HashSet<u64> = HashSet::from([all]);
        let mut i = 0;
        while i < masks.len() {
            let cur = masks[i];
            for &f in &facets {
                let next = cur & f;
                if seen.insert(next) {
                    masks.push(next);
                }
            }
            i += 1;
        }
        let mut faces: Vec<MonoidFace> = masks.into_iter().map(|m| self.face_from_mask(m)).collect();
        faces.sort();
        faces
    }

    /// All faces, ordered by dimension and then by generator indices.
    pub fn faces(&self) -> &[MonoidFace] {
        &self.faces
    }

    /// The face whose generators are exactly `vectors`.
    pub fn face_by_generators(&self, vectors: &[Vec<i64>]) -> Result<MonoidFace> {
        let mask = self.gen_mask(|g| vectors.iter().any(|v| v.as_slice() == g));
        if vectors.iter().any(|v| !self.generators.contains(v)) {
            return Err(Error::NotAFace);
        }
        self.faces.iter().find(|f| f.gens == self.face_from_mask(mask).gens).cloned().ok_or(Error::NotAFace)
    }

    pub fn whole(&self) -> MonoidFace {
        self.faces.last().expect("the monoid is a face of itself").clone()
    }

    pub fn in_face(&self, f: &MonoidFace, x: &[i64]) -> bool {
        self.contains(x) && f.tight.iter().all(|&j| dot(&self.inequalities[j], x) == 0)
    }

    /// `x ∈ ri F`: in `F` and in no proper subface.
    pub fn in_relative_interior(&self, f: &MonoidFace, x: &[i64]) -> bool {
        self.in_face(f, x)
            && (0..self.inequalities.len()).filter(|j| !f.tight.contains(j)).all(|j| dot(&self.inequalities[j], x) > 0)
    }

    /// The face with `x` in its relative interior.
    pub fn face_of(&self, x: &[i64]) -> Result<MonoidFace> {
        if !self.contains(x) {
            return Err(Error::NotInMonoid);
        }
        let vanishing: Vec<usize> =
            (0..self.inequalities.len()).filter(|&j| dot(&self.inequalities[j], x) == 0).collect();
        let mask = vanishing.iter().fold(self.gen_mask(|_| true), |acc, &j| {
            acc & self.gen_mask(|g| dot(&self.inequalities[j], g) == 0)
        });
        Ok(self.face_from_mask(mask))
    }

    pub fn intersect(&self, f: &MonoidFace, g: &MonoidFace) -> MonoidFace {
        let mask = f.gens.iter().filter(|i| g.gens.contains(i)).fold(0u64, |a, &i| a | 1 << i);
        self.face_from_mask(mask)
    }

    pub fn is_subface(&self, small: &MonoidFace, big: &MonoidFace) -> bool {
        small.gens.iter().all(|i| big.gens.contains(i))
    }

    /// Canonical basis of `F − F`.
    pub fn hull_basis(&self, f: &MonoidFace) -> Vec<Vec<i64>> {
        let vecs: Vec<Vec<i64>> = f.gens.iter().map(|&i| self.generators[i].clone()).collect();
        hnf_rows(&vecs)
    }

    /// `M − F`, generated by `M` and the negatives of the generators of `F`.
    pub fn dual_face(&self, f: &MonoidFace) -> Result<LatticeMonoid> {
        let mut gens = self.generators.clone();
        gens.extend(f.gens.iter().map(|&i| self.generators[i].iter().map(|x| -x).collect::<Vec<_>>()));
        LatticeMonoid::new(self.rank, gens)
    }

    /// Faces `G ⊆ F`: the orbits `T(G)` in the closure of `T(F)`.
    pub fn closure(&self, f: &MonoidFace) -> Vec<MonoidFace> {
        self.faces.iter().filter(|g| self.is_subface(g, f)).cloned().collect()
    }

    /// Faces `G` with `e(G)(m) != 0`.
    pub fn principal_open(&self, m: &[i64]) -> Result<Vec<MonoidFace>> {
        let f = self.face_of(m)?;
        Ok(self.faces.iter().filter(|g| self.is_subface(&f, g)).cloned().collect())
    }

    // --- M̃ ---

    /// `e(F)`.
    pub fn idempotent(&self, f: &MonoidFace) -> MhatElt {
        MhatElt { face: f.clone(), chr: LatticeChar::trivial(self.hull_basis(f)) }
    }

    /// The element supported on `F` acting on `F − F` as `x ↦ Π t_k^{x_k}`.
    pub fn mhat(&self, f: &MonoidFace, t: &[Rat]) -> Result<MhatElt> {
        if t.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: t.len() });
        }
        if t.iter().any(Zero::is_zero) {
            return Err(Error::ZeroTorusValue);
        }
        Ok(MhatElt { face: f.clone(), chr: LatticeChar::from_ambient(self.hull_basis(f), t) })
    }

    pub fn mhat_mul(&self, x: &MhatElt, y: &MhatElt) -> MhatElt {
        let face = self.intersect(&x.face, &y.face);
        let basis = self.hull_basis(&face);
        MhatElt { chr: x.chr.restrict(&basis).mul(&y.chr.restrict(&basis)), face }
    }

    pub fn mhat_eval(&self, x: &MhatElt, m: &[i64]) -> Result<Rat> {
        if !self.contains(m) {
            return Err(Error::NotInMonoid);
        }
        if !self.in_face(&x.face, m) {
            return Ok(rat(0));
        }
        Ok(x.chr.eval(m).expect("points of F lie in F − F"))
    }

    pub fn idempotents(&self) -> Vec<MhatElt> {
        self.faces.iter().map(|f| self.idempotent(f)).collect()
    }
}

/// Nonzero lattice points `Σ c_i b_i` with `0 <= c_i < 1` inside the
/// lattice spanned by `span`.
fn parallelepiped_points(basis: &[Vec<i64>], span: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let k = basis.len();
    let coords: Vec<Vec<i64>> =
        basis.iter().map(|b| coords_in_basis(span, b).expect("generators lie in their span")).collect();
    let s = smith(&IntMat::from_i64(&coords));
    let diag: Vec<i64> = s.diagonal().iter().map(to_i64).collect();
    let index = diag.iter().try_fold(1i64, |acc, &d| acc.checked_mul(d)).unwrap_or(i64::MAX);
    if index > MAX_PARALLELEPIPED {
        return Err(Error::Guard(format!("parallelepiped of index {index} exceeds {MAX_PARALLELEPIPED}")));
    }
    let vinv = s.v.to_rat().inverse().expect("unimodular");
    let vinv: Vec<Vec<i64>> =
        (0..k).map(|i| (0..k).map(|j| crate::exact::rat_to_i64(&vinv[(i, j)]).expect("integral")).collect()).collect();
    let bt = RatMat::from_i64(basis).transpose();
    let mut out = Vec::new();
    let mut a = vec![0i64; k];
    loop {
        if a.iter().any(|&x| x != 0) {
            let z: Vec<i64> = (0..k).map(|j| (0..k).map(|i| a[i] * vinv[i][j]).sum()).collect();
            let x: Vec<i64> = (0..span[0].len()).map(|c| (0..k).map(|j| z[j] * span[j][c]).sum()).collect();
            let rhs: Vec<Rat> = x.iter().map(|&v| rat(v)).collect();
            let c = crate::exact::rat_solve(&bt, &rhs).expect("x lies in the span").particular;
            let mut p = x.clone();
            for (ci, b) in c.iter().zip(basis) {
                let fl = to_i64(&ci.floor().to_integer());
                for (pv, bv) in p.iter_mut().zip(b) {
                    *pv -= fl * bv;
                }
            }
            if p.iter().any(|v| !v.is_zero()) {
                out.push(p);
            }
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if a[pos] + 1 < diag[pos].max(1) {
                a[pos] += 1;
                a[pos + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out: Vec<Vec<usize>> = subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    out.extend(subsets(&items[1..], k));
    out
}

impl MonoidFace {
    pub fn generator_vectors(&self, m: &LatticeMonoid) -> Vec<Vec<i64>> {
        self.gens.iter().map(|&i| m.generators[i].clone()).collect()
    }
}
