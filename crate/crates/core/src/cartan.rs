//! Generalized Cartan matrices and their realizations: validation,
//! symmetrization, the FIN/AFF/IND trichotomy, special index sets and the
//! functionals exposing the faces `R(Θ)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{lp_feasible, rat, rat_solve, smith, Int, IntMat, LpProblem, LpResult, Rat, RatMat, Rel};

/// Largest index set accepted by the enumerations in this module.
pub const MAX_RANK: usize = 16;

/// A subset of the index set `I = {0, .., n-1}` (printed 1-based).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Self {
        Subset(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    pub fn single(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_indices(ix: impl IntoIterator<Item = usize>) -> Self {
        Subset(ix.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    /// From 1-based user indices.
    pub fn from_one_based(ix: &[usize]) -> Self {
        Self::from_indices(ix.iter().map(|i| i - 1))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    pub fn union(self, o: Self) -> Self {
        Subset(self.0 | o.0)
    }

    pub fn inter(self, o: Self) -> Self {
        Subset(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        Subset(self.0 & !o.0)
    }

    pub fn is_subset_of(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A validated generalized Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gcm {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
}

impl Gcm {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::NotGcm("empty matrix".into()));
        }
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::NotGcm("matrix is not square".into()));
        }
        if n > MAX_RANK {
            return Err(Error::Guard(format!("rank {n} exceeds {MAX_RANK}")));
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(Error::NotGcm(format!("a_{0}{0} = {1} != 2", i + 1, a[i][i])));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if a[i][j] > 0 {
                    return Err(Error::NotGcm(format!("a_{}{} = {} > 0", i + 1, j + 1, a[i][j])));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(Error::NotGcm(format!(
                        "a_{}{} = {} but a_{}{} = {}",
                        i + 1,
                        j + 1,
                        a[i][j],
                        j + 1,
                        i + 1,
                        a[j][i]
                    )));
                }
            }
        }
        Ok(Gcm { a })
    }

    /// Parses `{"A": [[...], ...]}`.
    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "A")]
            a: Vec<Vec<i64>>,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Gcm::new(raw.a)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn rank(&self) -> usize {
        RatMat::from_i64(&self.a).rank()
    }

    /// Connected components of the zero pattern restricted to `s`, ordered by
    /// their smallest index.
    pub fn components(&self, s: Subset) -> Vec<Subset> {
        let mut seen = Subset::EMPTY;
        let mut out = Vec::new();
        for start in s.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = Subset::single(start);
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in s.iter() {
                    if !comp.contains(j) && self.a[i][j] != 0 {
                        comp = comp.insert(j);
                        stack.push(j);
                    }
                }
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    /// `Θ⊥ = {i : a_ij = 0 for all j in Θ}`.
    pub fn perp(&self, theta: Subset) -> Subset {
        Subset::from_indices((0..self.n()).filter(|&i| theta.iter().all(|j| self.a[i][j] == 0)))
    }

    fn sub_rows(&self, c: Subset, transpose: bool) -> Vec<Vec<Rat>> {
        c.iter()
            .map(|i| c.iter().map(|j| rat(if transpose { self.a[j][i] } else { self.a[i][j] })).collect())
            .collect()
    }
}

/// Symmetrization `A = D B`, `D = diag(ε_i)`, `B` symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct Symmetrization {
    pub eps: Vec<Rat>,
    pub b: RatMat,
}

/// Finds `ε_i > 0` with `ε_j a_ij = ε_i a_ji`; the smallest index of each
/// component gets `ε = 1`.
pub fn symmetrize(a: &Gcm) -> Result<Symmetrization> {
    let n = a.n();
    let mut eps: Vec<Option<Rat>> = vec![None; n];
    for comp in a.components(Subset::full(n)) {
        let root = comp.iter().next().expect("nonempty component");
        eps[root] = Some(Rat::one());
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let ei = eps[i].clone().expect("visited");
            for j in comp.iter() {
                if i == j || a.get(i, j) == 0 {
                    continue;
                }
                let ej = &ei * rat(a.get(j, i)) / rat(a.get(i, j));
                match &eps[j] {
                    None => {
                        eps[j] = Some(ej);
                        stack.push(j);
                    }
                    Some(old) if *old != ej => {
                        return Err(Error::NotSymmetrizable(format!(
                            "cycle condition fails at ({}, {})",
                            i + 1,
                            j + 1
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let eps: Vec<Rat> = eps.into_iter().map(|e| e.expect("all indices visited")).collect();
    let mut b = RatMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = rat(a.get(i, j)) / &eps[i];
        }
    }
    debug_assert_eq!(b, b.transpose());
    Ok(Symmetrization { eps, b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentType {
    #[serde(rename = "FIN")]
    Fin,
    #[serde(rename = "AFF")]
    Aff,
    #[serde(rename = "IND")]
    Ind,
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentType::Fin => "FIN",
            ComponentType::Aff => "AFF",
            ComponentType::Ind => "IND",
        })
    }
}

/// An indecomposable component with its type and a positive certificate
/// `u` (indexed like `set`) for the defining inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub set: Subset,
    pub kind: ComponentType,
    pub certificate: Vec<Int>,
}

/// Runs the three feasibility tests `u > 0` with `A_C u > 0`, `= 0`, `< 0`.
pub fn trichotomy(a: &Gcm, c: Subset) -> [Option<Vec<Int>>; 3] {
    let rows = a.sub_rows(c, false);
    let k = c.len();
    let run = |rel: Option<Rel>| {
        let mut p = LpProblem::new(k, true);
        for r in &rows {
            match rel {
                None => p.push_gt(r.clone()),
                Some(rel) => p.push(r.clone(), rel),
            }
        }
        match lp_feasible(&p) {
            LpResult::Feasible(u) => Some(u),
            LpResult::Infeasible => None,
        }
    };
    [run(None), run(Some(Rel::Eq)), run(Some(Rel::Lt))]
}

fn classify_component(a: &Gcm, c: Subset) -> (ComponentType, Vec<Int>) {
    let [fin, aff, ind] = trichotomy(a, c);
    match (fin, aff, ind) {
        (Some(u), None, None) => (ComponentType::Fin, u),
        (None, Some(u), None) => (ComponentType::Aff, u),
        (None, None, Some(u)) => (ComponentType::Ind, u),
        _ => unreachable!("trichotomy violated for component {c:?}"),
    }
}

/// A realization of a GCM: `H = Z^N` with basis `h_1..h_N`, `N = 2n - l`,
/// the first `n` being the simple coroots, and `P = Hom(H, Z)` with the dual
/// basis `Λ_1..Λ_N`. Weights are stored in `Λ`-coordinates and coweights in
/// `h`-coordinates, so `λ(h)` is the plain dot product.
#[derive(Debug)]
pub struct RootDatum {
    gcm: Gcm,
    sym: Symmetrization,
    l: usize,
    dim: usize,
    /// `alpha[i][k] = α_i(h_k)`.
    alpha: Vec<Vec<i64>>,
    /// Indices `k` with `α_i(h_{n+m}) = δ_{i,k_m}`.
    complement: Vec<usize>,
    /// A coweight with `α_j(ρ∨) = rho_den` for all `j`, used for heights.
    rho_check: Vec<i64>,
    rho_den: i64,
    gram_h: RatMat,
    form_p: RatMat,
    components: Mutex<HashMap<Subset, (ComponentType, Vec<Int>)>>,
    specials: OnceLock<Vec<Subset>>,
    exposing: Mutex<HashMap<Subset, Vec<i64>>>,
}

impl RootDatum {
    pub fn new(gcm: Gcm) -> Result<Self> {
        let sym = symmetrize(&gcm)?;
        let n = gcm.n();
        let l = gcm.rank();
        let dim = 2 * n - l;
        // complete the row space of A by unit vectors, lowest index first
        let mut rows: Vec<Vec<i64>> = gcm.rows().to_vec();
        let mut complement = Vec::new();
        for k in 0..n {
            if complement.len() == n - l {
                break;
            }
            let mut trial = rows.clone();
            trial.push((0..n).map(|j| i64::from(j == k)).collect());
            if RatMat::from_i64(&trial).rank() > RatMat::from_i64(&rows).rank() {
                rows = trial;
                complement.push(k);
            }
        }
        let alpha: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v: Vec<i64> = (0..n).map(|j| gcm.get(j, i)).collect();
                v.extend(complement.iter().map(|&k| i64::from(k == i)));
                v
            })
            .collect();
        let s = smith(&IntMat::from_i64(&alpha));
        if s.rank() != n {
            return Err(Error::PreconditionViolated("simple roots are dependent".into()));
        }
        // ρ∨ with α_j(ρ∨) = 1 for all j
        let at = RatMat::from_i64(&alpha);
        let sol = rat_solve(&at, &vec![Rat::one(); n]).expect("simple roots are independent");
        let den = sol.particular.iter().fold(Int::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let rho_check: Vec<i64> =
            sol.particular.iter().map(|x| crate::exact::to_i64(&(x * Rat::from_integer(den.clone())).to_integer())).collect();
        let rho_den = crate::exact::to_i64(&den);

        let mut gram_h = RatMat::zeros(dim, dim);
        for i in 0..n {
            for k in 0..dim {
                let v = rat(alpha[i][k]) * &sym.eps[i];
                gram_h[(i, k)] = v.clone();
                gram_h[(k, i)] = v;
            }
        }
        let form_p = gram_h
            .inverse()
            .ok_or_else(|| Error::PreconditionViolated("invariant form is degenerate".into()))?;
        Ok(RootDatum {
            gcm,
            sym,
            l,
            dim,
            alpha,
            complement,
            rho_check,
            rho_den,
            gram_h,
            form_p,
            components: Mutex::new(HashMap::new()),
            specials: OnceLock::new(),
            exposing: Mutex::new(HashMap::new()),
        })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        RootDatum::new(Gcm::new(rows)?)
    }

    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    pub fn sym(&self) -> &Symmetrization {
        &self.sym
    }

    /// Number of simple roots.
    pub fn n(&self) -> usize {
        self.gcm.n()
    }

    /// Rank of `A`.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Rank of `H` and `P`, `2n - l`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.n())
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.gcm.get(i, j)
    }

    pub fn alpha(&self, i: usize) -> &[i64] {
        &self.alpha[i]
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Bilinear form on `H` in the `h`-basis.
    pub fn gram_h(&self) -> &RatMat {
        &self.gram_h
    }

    /// Induced form on `P` in the `Λ`-basis.
    pub fn form_p(&self) -> &RatMat {
        &self.form_p
    }

    pub fn form(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let fy = self.form_p.mul_vec(y);
        x.iter().zip(&fy).map(|(a, b)| a * b).sum()
    }

    /// Sign of the height of an integral combination of simple roots given in
    /// `Λ`-coordinates (positive for positive roots).
    pub fn height_sign(&self, beta: &[i64]) -> i64 {
        let s: i128 = beta.iter().zip(&self.rho_check).map(|(&a, &b)| a as i128 * b as i128).sum();
        s.signum() as i64
    }

    /// Height of an element of the root lattice given in `Λ`-coordinates.
    pub fn height(&self, beta: &[i64]) -> i64 {
        let s: i128 = beta.iter().zip(&self.rho_check).map(|(&a, &b)| a as i128 * b as i128).sum();
        debug_assert_eq!(s % self.rho_den as i128, 0);
        (s / self.rho_den as i128) as i64
    }

    /// `Σ k_i α_i` in `Λ`-coordinates.
    pub fn root_vector(&self, k: &[i64]) -> Vec<i64> {
        let mut v = vec![0i64; self.dim];
        for (i, &c) in k.iter().enumerate() {
            if c != 0 {
                for (x, &a) in v.iter_mut().zip(&self.alpha[i]) {
                    *x += c * a;
                }
            }
        }
        v
    }

    /// Simple-root coordinates of an element of the root lattice.
    pub fn root_coords(&self, beta: &[i64]) -> Option<Vec<i64>> {
        let mt = RatMat::from_i64(&self.alpha).transpose();
        let rhs: Vec<Rat> = beta.iter().map(|&x| rat(x)).collect();
        let sol = rat_solve(&mt, &rhs)?;
        sol.particular.iter().map(crate::exact::rat_to_i64).collect()
    }

    /// Fundamental weight `Λ_k` (0-based, `k < dim`).
    pub fn fundamental(&self, k: usize) -> Vec<i64> {
        (0..self.dim).map(|j| i64::from(j == k)).collect()
    }

    /// `ρ = Σ_k Λ_k`.
    pub fn rho(&self) -> Vec<i64> {
        vec![1; self.dim]
    }

    /// Simple coroot `h_i` in `h`-coordinates.
    pub fn coroot(&self, i: usize) -> Vec<i64> {
        (0..self.dim).map(|j| i64::from(j == i)).collect()
    }

    /// `α_i(h)`.
    pub fn alpha_on(&self, i: usize, h: &[i64]) -> i64 {
        self.alpha[i].iter().zip(h).map(|(a, b)| a * b).sum()
    }

    /// Components of `A_S` with their types.
    pub fn classify(&self, s: Subset) -> Vec<Component> {
        self.gcm
            .components(s)
            .into_iter()
            .map(|c| {
                let mut cache = self.components.lock().expect("cache lock");
                let (kind, certificate) =
                    cache.entry(c).or_insert_with(|| classify_component(&self.gcm, c)).clone();
                Component { set: c, kind, certificate }
            })
            .collect()
    }

    /// Union of the components of `A_S` of finite type.
    pub fn finite_part(&self, s: Subset) -> Subset {
        self.classify(s).iter().filter(|c| c.kind == ComponentType::Fin).fold(Subset::EMPTY, |a, c| a.union(c.set))
    }

    /// Union of the components of `A_S` of non-finite type, `S^∞`.
    pub fn infinite_part(&self, s: Subset) -> Subset {
        s.minus(self.finite_part(s))
    }

    pub fn is_special(&self, s: Subset) -> bool {
        self.finite_part(s).is_empty()
    }

    pub fn perp(&self, theta: Subset) -> Subset {
        self.gcm.perp(theta)
    }

    /// All special subsets, ordered by size and then lexicographically.
    pub fn special_sets(&self) -> &[Subset] {
        self.specials.get_or_init(|| {
            let n = self.n();
            let mut v: Vec<Subset> = (0..1u32 << n).map(Subset).filter(|&s| self.is_special(s)).collect();
            v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.one_based().cmp(&b.one_based())));
            v
        })
    }

    /// Coefficients `m` of the exposing functional `c_Θ = Σ m_i h_i`.
    ///
    /// Affine components contribute the primitive positive null vector of the
    /// transposed block; indefinite ones the lexicographically smallest
    /// positive vector with `α_j(c) <= 0` inside a doubling box, falling back
    /// to the LP certificate when the box gets too large.
    pub fn exposing_functional(&self, theta: Subset) -> Result<Vec<i64>> {
        if !self.is_special(theta) {
            return Err(Error::NotSpecial(theta.to_string()));
        }
        if let Some(m) = self.exposing.lock().expect("cache lock").get(&theta) {
            return Ok(m.clone());
        }
        let mut m = vec![0i64; self.n()];
        for comp in self.classify(theta) {
            let idx: Vec<usize> = comp.set.iter().collect();
            let at = self.gcm.sub_rows(comp.set, true);
            let coeffs: Vec<i64> = match comp.kind {
                ComponentType::Aff => {
                    let sol = rat_solve(&RatMat::from_rows(at), &vec![Rat::zero(); idx.len()])
                        .expect("homogeneous system");
                    assert_eq!(sol.kernel.len(), 1, "affine component has corank one");
                    let mut v = crate::exact::primitive_integer(&sol.kernel[0]);
                    if v[0].is_negative() {
                        v.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    v.iter().map(crate::exact::to_i64).collect()
                }
                ComponentType::Ind => lex_smallest_nonpositive(&at).unwrap_or_else(|| {
                    let mut p = LpProblem::new(idx.len(), true);
                    for r in &at {
                        p.push(r.clone(), Rel::Lt);
                    }
                    match lp_feasible(&p) {
                        LpResult::Feasible(u) => u.iter().map(crate::exact::to_i64).collect(),
                        LpResult::Infeasible => unreachable!("indefinite component has a certificate"),
                    }
                }),
                ComponentType::Fin => unreachable!("special sets have no finite component"),
            };
            for (&i, c) in idx.iter().zip(coeffs) {
                m[i] = c;
            }
        }
        self.exposing.lock().expect("cache lock").insert(theta, m.clone());
        Ok(m)
    }

    /// `c_Θ` as a coweight in `h`-coordinates.
    pub fn exposing_coweight(&self, theta: Subset) -> Result<Vec<i64>> {
        let m = self.exposing_functional(theta)?;
        let mut c = vec![0i64; self.dim];
        c[..m.len()].copy_from_slice(&m);
        Ok(c)
    }
}

/// Lexicographically smallest `m >= 1` with `rows . m <= 0`, searching boxes
/// `[1, B]^k` for `B = 1, 2, 4, ..` while the box stays small.
fn lex_smallest_nonpositive(rows: &[Vec<Rat>]) -> Option<Vec<i64>> {
    let k = rows.len();
    let rows: Vec<Vec<i64>> =
        rows.iter().map(|r| r.iter().map(|x| crate::exact::rat_to_i64(x).expect("integral")).collect()).collect();
    let mut bound = 1i64;
    while (bound as f64).powi(k as i32) <= 2.0e6 {
        let mut m = vec![1i64; k];
        loop {
            if rows.iter().all(|r| r.iter().zip(&m).map(|(a, b)| a * b).sum::<i64>() <= 0) {
                return Some(m);
            }
            // next vector in lexicographic order
            let mut advanced = false;
            for pos in (0..k).rev() {
                if m[pos] < bound {
                    m[pos] += 1;
                    m[pos + 1..].iter_mut().for_each(|x| *x = 1);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        bound *= 2;
    }
    None
}
