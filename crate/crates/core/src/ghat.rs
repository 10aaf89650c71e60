//! Finite slices of integrable highest-weight modules `L(Λ)` and the
//! generators of `Ĝ` acting on them as exact operators.
//!
//! A slice holds the weight spaces `L(Λ)_{Λ-β}` with `ht β <= d`. Basis
//! vectors are lowering monomials `f_{i_1}⋯f_{i_k} v_Λ`, picked greedily
//! in degree-lexicographic order from the candidates `f_i b`; Gram entries
//! come from `⟨f_i b|c⟩ = ⟨b|e_i c⟩` and `[e_i, f_j] = δ_ij h_i`.
//!
//! Applying a letter is exact or fails with `DepthExceeded`; nothing is
//! silently truncated.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cartan::RootDatum;
use crate::error::{Error, Result};
use crate::exact::{fmt_rat, parse_rat, rat, rat_pow, IntMat, Int, Rat, RatMat};
use crate::face::Face;
use crate::weyl::{parse_word, WeylElt};
use crate::wmon::{NhatElt, WmonElt};

pub const MAX_RANK: usize = 3;
pub const MAX_DEPTH: usize = 8;

/// Resource limits for slice construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    pub max_rank: usize,
    pub max_depth: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { max_rank: MAX_RANK, max_depth: MAX_DEPTH }
    }
}

/// `(α_i|α_j)`.
fn root_gram(d: &RootDatum) -> Vec<Vec<Rat>> {
    let n = d.n();
    let v: Vec<Vec<Rat>> = (0..n).map(|i| d.alpha(i).iter().map(|&x| rat(x)).collect()).collect();
    (0..n).map(|i| (0..n).map(|j| d.form(&v[i], &v[j])).collect()).collect()
}

fn bilinear(b: &[Vec<Rat>], x: &[i64], y: &[i64]) -> Rat {
    let mut s = Rat::zero();
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            if yj != 0 {
                s += &b[i][j] * rat(xi * yj);
            }
        }
    }
    s
}

/// `Q⁺` elements of height at most `depth`, by height and then
/// lexicographically decreasing.
pub fn positive_cone(n: usize, depth: usize) -> Vec<Vec<i64>> {
    fn rec(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for h in 0..=depth as i64 {
        rec(n, h, &mut Vec::new(), &mut out);
    }
    out
}

fn height(beta: &[i64]) -> usize {
    beta.iter().sum::<i64>() as usize
}

/// Root multiplicities of the positive roots of height at most `depth`,
/// by Peterson's recursion `(β|β-2ρ) c_β = Σ_{β'+β''=β} (β'|β'') c_β' c_β''`
/// with `c_β = Σ_k mult(β/k)/k`.
pub fn root_multiplicities(d: &RootDatum, depth: usize) -> HashMap<Vec<i64>, i64> {
    let n = d.n();
    let b = root_gram(d);
    let mut c: HashMap<Vec<i64>, Rat> = HashMap::new();
    let mut mult: HashMap<Vec<i64>, i64> = HashMap::new();
    let cone = positive_cone(n, depth);
    for beta in cone.iter().skip(1) {
        let ht = height(beta);
        // contributions of proper multiples β = kγ
        let mut multiples = Rat::zero();
        for k in 2..=ht as i64 {
            if beta.iter().all(|x| x % k == 0) {
                let g: Vec<i64> = beta.iter().map(|x| x / k).collect();
                if let Some(&m) = mult.get(&g) {
                    multiples += rat(m) / rat(k);
                }
            }
        }
        if ht == 1 {
            mult.insert(beta.clone(), 1);
            c.insert(beta.clone(), Rat::one());
            continue;
        }
        let two_rho: Rat = (0..n).map(|i| &b[i][i] * rat(beta[i])).sum();
        let lhs = bilinear(&b, beta, beta) - two_rho;
        let mut rhs = Rat::zero();
        for (p, cp) in &c {
            if p.iter().zip(beta).all(|(x, y)| x <= y) && p != beta {
                let q: Vec<i64> = beta.iter().zip(p).map(|(x, y)| x - y).collect();
                if let Some(cq) = c.get(&q) {
                    rhs += bilinear(&b, p, &q) * cp * cq;
                }
            }
        }
        let (cb, m) = if lhs.is_zero() {
            (multiples.clone(), Rat::zero())
        } else {
            let cb = rhs / lhs;
            let m = &cb - &multiples;
            (cb, m)
        };
        assert!(m.is_integer() && !m.is_negative(), "root multiplicity {m} at {beta:?}");
        let m = crate::exact::rat_to_i64(&m).expect("small multiplicity");
        if m > 0 {
            mult.insert(beta.clone(), m);
        }
        if !cb.is_zero() {
            c.insert(beta.clone(), cb);
        }
    }
    mult
}

/// One row of a weight table: `λ = Λ - β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightMult {
    pub beta: Vec<i64>,
    pub weight: Vec<i64>,
    pub mult: i64,
}

fn check_highest(d: &RootDatum, lambda: &[i64], depth: usize, guards: Guards) -> Result<()> {
    if d.n() > guards.max_rank {
        return Err(Error::Guard(format!("rank {} exceeds the module limit {}", d.n(), guards.max_rank)));
    }
    if depth > guards.max_depth {
        return Err(Error::Guard(format!("depth {depth} exceeds the module limit {}", guards.max_depth)));
    }
    if lambda.len() != d.dim() {
        return Err(Error::RankMismatch { expected: d.dim(), got: lambda.len() });
    }
    if let Some(i) = (0..d.n()).find(|&i| lambda[i] < 0) {
        return Err(Error::NotDominant(format!("Λ(h_{}) = {}", i + 1, lambda[i])));
    }
    Ok(())
}

fn weight_of(d: &RootDatum, lambda: &[i64], beta: &[i64]) -> Vec<i64> {
    let r = d.root_vector(beta);
    lambda.iter().zip(&r).map(|(a, b)| a - b).collect()
}

/// Freudenthal's formula
/// `((Λ+ρ|Λ+ρ) - (λ+ρ|λ+ρ)) m_λ = 2 Σ_{α>0} mult α Σ_{k>=1} (λ+kα|α) m_{λ+kα}`.
pub fn weights_and_mults(d: &RootDatum, lambda: &[i64], depth: usize) -> Result<Vec<WeightMult>> {
    weights_and_mults_with(d, lambda, depth, Guards::default())
}

pub fn weights_and_mults_with(d: &RootDatum, lambda: &[i64], depth: usize, guards: Guards) -> Result<Vec<WeightMult>> {
    check_highest(d, lambda, depth, guards)?;
    let n = d.n();
    let b = root_gram(d);
    let roots = root_multiplicities(d, depth);
    let mut roots: Vec<(Vec<i64>, i64)> = roots.into_iter().collect();
    roots.sort();
    // (μ|α_j) = μ(h_j)(α_j|α_j)/2
    let pair = |mu: &[i64], alpha: &[i64]| -> Rat {
        (0..n).map(|j| rat(alpha[j] * mu[j]) * &b[j][j] / rat(2)).sum()
    };
    let mut m: HashMap<Vec<i64>, i64> = HashMap::new();
    let mut out = Vec::new();
    for beta in positive_cone(n, depth) {
        let ht = height(&beta);
        let mult = if ht == 0 {
            1
        } else {
            let lr: Vec<i64> = (0..n).map(|i| lambda[i] + 1).collect();
            let lhs = rat(2) * pair(&lr, &beta) - bilinear(&b, &beta, &beta);
            let mut rhs = Rat::zero();
            for (alpha, ma) in &roots {
                for k in 1.. {
                    let rest: Vec<i64> = beta.iter().zip(alpha).map(|(x, a)| x - k * a).collect();
                    if rest.iter().any(|&x| x < 0) {
                        break;
                    }
                    let Some(&mr) = m.get(&rest) else { continue };
                    let mu = weight_of(d, lambda, &rest);
                    rhs += rat(2 * ma * mr) * pair(&mu, alpha);
                }
            }
            if lhs.is_zero() {
                0
            } else {
                let q = rhs / lhs;
                assert!(q.is_integer() && !q.is_negative(), "weight multiplicity {q} at {beta:?}");
                crate::exact::rat_to_i64(&q).expect("small multiplicity")
            }
        };
        if mult > 0 {
            m.insert(beta.clone(), mult);
            out.push(WeightMult { weight: weight_of(d, lambda, &beta), beta, mult });
        }
    }
    Ok(out)
}

/// One weight space of a slice.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub beta: Vec<i64>,
    pub weight: Vec<i64>,
    pub depth: usize,
    /// Index of the first basis vector in slice coordinates.
    pub offset: usize,
    /// Basis monomials; `[i, j]` is `f_i f_j v_Λ`.
    pub monomials: Vec<Vec<usize>>,
    pub gram: RatMat,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
}

/// A depth-truncated slice of `L(Λ)` with exact operators `e_i`, `f_i`.
#[derive(Clone)]
pub struct ModuleSlice<'d> {
    d: &'d RootDatum,
    lambda: Vec<i64>,
    depth: usize,
    spaces: Vec<WeightSpace>,
    index: HashMap<Vec<i64>, usize>,
    /// `e_i` from space `s` to the space of `β_s - α_i`.
    e_ops: HashMap<(usize, usize), RatMat>,
    /// `f_i` from space `s` to the space of `β_s + α_i`.
    f_ops: HashMap<(usize, usize), RatMat>,
    total: usize,
}

impl fmt::Debug for ModuleSlice<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({:?}) to depth {} ({} vectors)", self.lambda, self.depth, self.total)
    }
}

fn scale_to_int(row: &[Rat]) -> Vec<Int> {
    let l = row.iter().fold(Int::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    row.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
}

impl<'d> ModuleSlice<'d> {
    pub fn new(d: &'d RootDatum, lambda: &[i64], depth: usize) -> Result<Self> {
        Self::with_guards(d, lambda, depth, Guards::default())
    }

    pub fn with_guards(d: &'d RootDatum, lambda: &[i64], depth: usize, guards: Guards) -> Result<Self> {
        check_highest(d, lambda, depth, guards)?;
        let n = d.n();
        let mut s = ModuleSlice {
            d,
            lambda: lambda.to_vec(),
            depth,
            spaces: Vec::new(),
            index: HashMap::new(),
            e_ops: HashMap::new(),
            f_ops: HashMap::new(),
            total: 0,
        };
        s.push_space(vec![0; n], vec![vec![]], RatMat::identity(1));
        for beta in positive_cone(n, depth).into_iter().skip(1) {
            s.build_space(beta);
        }
        Ok(s)
    }

    fn push_space(&mut self, beta: Vec<i64>, monomials: Vec<Vec<usize>>, gram: RatMat) -> usize {
        let id = self.spaces.len();
        let weight = weight_of(self.d, &self.lambda, &beta);
        let dim = monomials.len();
        self.index.insert(beta.clone(), id);
        self.spaces.push(WeightSpace { depth: height(&beta), beta, weight, offset: self.total, monomials, gram });
        self.total += dim;
        id
    }

    fn shifted(&self, beta: &[i64], i: usize, by: i64) -> Option<usize> {
        let mut b = beta.to_vec();
        b[i] += by;
        if b[i] < 0 {
            return None;
        }
        self.index.get(&b).copied()
    }

    /// `e_i` applied to the candidate `f_j b'` with `b'` basis vector `k` of
    /// space `src`: `f_j e_i b' + δ_ij μ'(h_i) b'`, a vector in the space of
    /// `β - α_i` (or `None` when that space is zero).
    fn e_on_candidate(&self, i: usize, j: usize, src: usize, k: usize, beta: &[i64]) -> Option<(usize, Vec<Rat>)> {
        let target = self.shifted(beta, i, -1)?;
        let mut out = vec![Rat::zero(); self.spaces[target].dim()];
        if let Some(mid) = self.shifted(&self.spaces[src].beta, i, -1) {
            if let Some(e) = self.e_ops.get(&(i, src)) {
                let eb = e.col(k);
                if let Some(f) = self.f_ops.get(&(j, mid)) {
                    for (o, x) in out.iter_mut().zip(f.mul_vec(&eb)) {
                        *o += x;
                    }
                }
            }
        }
        if i == j {
            debug_assert_eq!(target, src);
            out[k] += rat(self.spaces[src].weight[i]);
        }
        Some((target, out))
    }

    fn build_space(&mut self, beta: Vec<i64>) {
        let n = self.d.n();
        // candidates (j, src, k) meaning f_j applied to basis vector k of src
        let mut cands: Vec<(usize, usize, usize)> = Vec::new();
        for j in 0..n {
            if let Some(src) = self.shifted(&beta, j, -1) {
                for k in 0..self.spaces[src].dim() {
                    cands.push((j, src, k));
                }
            }
        }
        if cands.is_empty() {
            return;
        }
        let eimg: Vec<Vec<Option<(usize, Vec<Rat>)>>> = cands
            .iter()
            .map(|&(j, src, k)| (0..n).map(|i| self.e_on_candidate(i, j, src, k, &beta)).collect())
            .collect();
        let m = cands.len();
        let mut gram = RatMat::zeros(m, m);
        for (a, &(i, src, k)) in cands.iter().enumerate() {
            let g = &self.spaces[src].gram;
            for b in 0..m {
                if let Some((t, v)) = &eimg[b][i] {
                    debug_assert_eq!(*t, src);
                    gram[(a, b)] = g.row(k).iter().zip(v).map(|(x, y)| x * y).sum();
                }
            }
        }
        let rows: Vec<Vec<Int>> = (0..m).map(|a| scale_to_int(gram.row(a))).collect();
        let picked = IntMat::from_rows(rows).bareiss_row_pivots();
        if picked.is_empty() {
            return;
        }
        let sub = RatMat::from_rows(picked.iter().map(|&a| picked.iter().map(|&b| gram[(a, b)].clone()).collect()).collect());
        let inv = sub.inverse().expect("Gram matrix of independent vectors");
        let monomials = picked
            .iter()
            .map(|&a| {
                let (j, src, k) = cands[a];
                let mut w = vec![j];
                w.extend(&self.spaces[src].monomials[k]);
                w
            })
            .collect();
        let id = self.push_space(beta, monomials, sub);
        let dim = picked.len();
        for i in 0..n {
            let Some(target) = self.shifted(&self.spaces[id].beta, i, -1) else { continue };
            let mut e = RatMat::zeros(self.spaces[target].dim(), dim);
            for (c, &a) in picked.iter().enumerate() {
                if let Some((_, v)) = &eimg[a][i] {
                    for (r, x) in v.iter().enumerate() {
                        e[(r, c)] = x.clone();
                    }
                }
            }
            self.e_ops.insert((i, id), e);
        }
        for (a, &(j, src, k)) in cands.iter().enumerate() {
            let g: Vec<Rat> = picked.iter().map(|&p| gram[(p, a)].clone()).collect();
            let x = inv.mul_vec(&g);
            let f = self.f_ops.entry((j, src)).or_insert_with(|| RatMat::zeros(dim, self.spaces[src].dim()));
            for (r, v) in x.into_iter().enumerate() {
                f[(r, k)] = v;
            }
        }
    }

    pub fn datum(&self) -> &'d RootDatum {
        self.d
    }

    pub fn highest_weight(&self) -> &[i64] {
        &self.lambda
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn spaces(&self) -> &[WeightSpace] {
        &self.spaces
    }

    pub fn space(&self, beta: &[i64]) -> Option<&WeightSpace> {
        self.index.get(beta).map(|&s| &self.spaces[s])
    }

    /// Total dimension.
    pub fn dim(&self) -> usize {
        self.total
    }

    /// Weight table of the slice.
    pub fn weights(&self) -> Vec<WeightMult> {
        self.spaces.iter().map(|s| WeightMult { beta: s.beta.clone(), weight: s.weight.clone(), mult: s.dim() as i64 }).collect()
    }

    /// Matrix of `e_i` from the space of `β` to that of `β - α_i`.
    pub fn e_matrix(&self, i: usize, beta: &[i64]) -> Option<&RatMat> {
        self.e_ops.get(&(i, *self.index.get(beta)?))
    }

    /// Matrix of `f_i` from the space of `β` to that of `β + α_i`.
    pub fn f_matrix(&self, i: usize, beta: &[i64]) -> Option<&RatMat> {
        self.f_ops.get(&(i, *self.index.get(beta)?))
    }

    /// The weight space holding basis vector `k`.
    pub fn space_of(&self, k: usize) -> &WeightSpace {
        let s = self.spaces.partition_point(|s| s.offset <= k) - 1;
        &self.spaces[s]
    }

    pub fn basis_vector(&self, k: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.total];
        v[k] = Rat::one();
        v
    }

    /// Label `f_1 f_2 v` of basis vector `k` (1-based indices).
    pub fn label(&self, k: usize) -> String {
        let s = self.space_of(k);
        let m = &s.monomials[k - s.offset];
        let mut out: String = m.iter().map(|i| format!("f{} ", i + 1)).collect();
        out.push('v');
        out
    }

    fn block<'a>(&self, v: &'a [Rat], s: usize) -> &'a [Rat] {
        let sp = &self.spaces[s];
        &v[sp.offset..sp.offset + sp.dim()]
    }

    fn nonzero_blocks<'a>(&'a self, v: &'a [Rat]) -> impl Iterator<Item = usize> + 'a {
        (0..self.spaces.len()).filter(move |&s| self.block(v, s).iter().any(|x| !x.is_zero()))
    }

    /// Contravariant form.
    pub fn pair(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for s in 0..self.spaces.len() {
            let (a, b) = (self.block(u, s), self.block(v, s));
            if a.iter().all(Zero::is_zero) || b.iter().all(Zero::is_zero) {
                continue;
            }
            let gb = self.spaces[s].gram.mul_vec(b);
            acc += a.iter().zip(&gb).map(|(x, y)| x * y).sum::<Rat>();
        }
        acc
    }

    pub fn apply_e(&self, i: usize, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.total];
        for s in self.nonzero_blocks(v) {
            if let (Some(t), Some(e)) = (self.shifted(&self.spaces[s].beta, i, -1), self.e_ops.get(&(i, s))) {
                let off = self.spaces[t].offset;
                for (r, x) in e.mul_vec(self.block(v, s)).into_iter().enumerate() {
                    out[off + r] += x;
                }
            }
        }
        out
    }

    pub fn apply_f(&self, i: usize, v: &[Rat]) -> Result<Vec<Rat>> {
        let mut out = vec![Rat::zero(); self.total];
        for s in self.nonzero_blocks(v) {
            let sp = &self.spaces[s];
            if sp.depth >= self.depth {
                return Err(Error::DepthExceeded { required: sp.depth + 1, available: self.depth });
            }
            if let (Some(t), Some(f)) = (self.shifted(&sp.beta, i, 1), self.f_ops.get(&(i, s))) {
                let off = self.spaces[t].offset;
                for (r, x) in f.mul_vec(self.block(v, s)).into_iter().enumerate() {
                    out[off + r] += x;
                }
            }
        }
        Ok(out)
    }

    /// `exp(t e_i) v`.
    pub fn exp_e(&self, i: usize, t: &Rat, v: &[Rat]) -> Vec<Rat> {
        let mut out = v.to_vec();
        let mut term = v.to_vec();
        for k in 1.. {
            term = self.apply_e(i, &term);
            if term.iter().all(Zero::is_zero) {
                break;
            }
            let c = t / rat(k);
            term.iter_mut().for_each(|x| *x *= &c);
            out.iter_mut().zip(&term).for_each(|(o, x)| *o += x);
        }
        out
    }

    /// Number of `f_i` steps after which every vector of weight space `s`
    /// is killed: `μ(h_i) + p` with `μ + pα_i` the top of the `α_i`-string.
    pub fn lowering_window(&self, i: usize, s: usize) -> usize {
        let sp = &self.spaces[s];
        let mut p = 0;
        while self.shifted(&sp.beta, i, -(p + 1)).is_some() {
            p += 1;
        }
        (sp.weight[i] + p).max(0) as usize
    }

    /// `exp(t f_i) v`, exact when every window fits in the slice.
    pub fn exp_f(&self, i: usize, t: &Rat, v: &[Rat]) -> Result<Vec<Rat>> {
        let mut out = vec![Rat::zero(); self.total];
        for s in self.nonzero_blocks(v) {
            let q = self.lowering_window(i, s);
            let sp = &self.spaces[s];
            if sp.depth + q > self.depth {
                return Err(Error::DepthExceeded { required: sp.depth + q, available: self.depth });
            }
            let mut term = vec![Rat::zero(); self.total];
            term[sp.offset..sp.offset + sp.dim()].clone_from_slice(self.block(v, s));
            out.iter_mut().zip(&term).for_each(|(o, x)| *o += x);
            for k in 1..=q {
                term = self.apply_f(i, &term)?;
                let c = t / rat(k as i64);
                term.iter_mut().for_each(|x| *x *= &c);
                out.iter_mut().zip(&term).for_each(|(o, x)| *o += x);
            }
        }
        Ok(out)
    }

    fn raise_or_lower(&self, j: usize, positive: bool, v: &[Rat]) -> Result<Vec<Rat>> {
        if positive {
            Ok(self.apply_e(j, v))
        } else {
            self.apply_f(j, v)
        }
    }

    /// `(ad g_j)^m X` applied as `Σ_k C(m,k) (-1)^{m-k} g^k X g^{m-k}`.
    fn apply_root_vector(&self, i: usize, path: &[(usize, i64)], positive: bool, v: &[Rat]) -> Result<Vec<Rat>> {
        let Some((&(j, m), rest)) = path.split_first() else { return self.raise_or_lower(i, positive, v) };
        let mut out = vec![Rat::zero(); self.total];
        let mut right = v.to_vec();
        let mut powers = vec![right.clone()];
        for _ in 0..m {
            right = self.raise_or_lower(j, positive, &right)?;
            powers.push(right.clone());
        }
        let mut binom = Int::one();
        for k in 0..=m {
            // term g^k X g^{m-k} v
            let mut x = self.apply_root_vector(i, rest, positive, &powers[(m - k) as usize])?;
            for _ in 0..k {
                x = self.raise_or_lower(j, positive, &x)?;
            }
            let mut c = Rat::from_integer(binom.clone());
            if (m - k) % 2 == 1 {
                c = -c;
            }
            out.iter_mut().zip(&x).for_each(|(o, y)| *o += &c * y);
            binom = binom * Int::from(m - k) / Int::from(k + 1);
        }
        Ok(out)
    }

    /// `x_α v` for a real root `α`, with `x_α` scaled so that
    /// `[x_α, x_{-α}] = ±h_α`.
    pub fn apply_root(&self, alpha: &[i64], v: &[Rat]) -> Result<Vec<Rat>> {
        let (i, path) = root_path(self.d, alpha)?;
        let scale = root_scale(self.d, alpha)?;
        let mut out = self.apply_root_vector(i, &path, alpha.iter().sum::<i64>() > 0, v)?;
        out.iter_mut().for_each(|x| *x /= &scale);
        Ok(out)
    }

    /// `exp(t x_α) v`; lowering needs the `α`-string of every weight to fit.
    pub fn exp_root(&self, alpha: &[i64], t: &Rat, v: &[Rat]) -> Result<Vec<Rat>> {
        let positive = alpha.iter().sum::<i64>() > 0;
        let ht = alpha.iter().sum::<i64>().unsigned_abs() as usize;
        let mut out = v.to_vec();
        if positive {
            let mut term = v.to_vec();
            for k in 1.. {
                term = self.apply_root(alpha, &term)?;
                if term.iter().all(Zero::is_zero) {
                    break;
                }
                let c = t / rat(k);
                term.iter_mut().for_each(|x| *x *= &c);
                out.iter_mut().zip(&term).for_each(|(o, x)| *o += x);
            }
            return Ok(out);
        }
        let b = root_gram(self.d);
        let pos: Vec<i64> = alpha.iter().map(|x| -x).collect();
        let norm = bilinear(&b, &pos, &pos);
        for s in self.nonzero_blocks(v) {
            let sp = &self.spaces[s];
            // μ(h_α) = 2(μ|α)/(α|α) for the positive root α = -alpha
            let mu_alpha: Rat = (0..self.d.n()).map(|j| rat(pos[j] * sp.weight[j]) * &b[j][j] / rat(2)).sum();
            let pairing = crate::exact::rat_to_i64(&(rat(2) * mu_alpha / &norm)).expect("integral pairing");
            let mut p = 0;
            loop {
                let up: Vec<i64> = sp.beta.iter().zip(&pos).map(|(x, a)| x - (p + 1) * a).collect();
                if up.iter().any(|&x| x < 0) || !self.index.contains_key(&up) {
                    break;
                }
                p += 1;
            }
            let q = (p + pairing).max(0) as usize;
            if sp.depth + q * ht > self.depth {
                return Err(Error::DepthExceeded { required: sp.depth + q * ht, available: self.depth });
            }
            let mut term = vec![Rat::zero(); self.total];
            term[sp.offset..sp.offset + sp.dim()].clone_from_slice(self.block(v, s));
            for k in 1..=q {
                term = self.apply_root(alpha, &term)?;
                let c = t / rat(k as i64);
                term.iter_mut().for_each(|x| *x *= &c);
                out.iter_mut().zip(&term).for_each(|(o, x)| *o += x);
            }
        }
        Ok(out)
    }

    pub fn apply_letter(&self, letter: &Letter, v: &[Rat]) -> Result<Vec<Rat>> {
        match letter {
            Letter::Xplus(i, t) => Ok(self.exp_e(*i, t, v)),
            Letter::Xminus(i, t) => self.exp_f(*i, t, v),
            Letter::Root(a, t) => self.exp_root(a, t, v),
            Letter::Torus(h, s) => {
                let mut out = v.to_vec();
                for sp in &self.spaces {
                    let e: i64 = sp.weight.iter().zip(h).map(|(a, b)| a * b).sum();
                    let c = rat_pow(s, e);
                    out[sp.offset..sp.offset + sp.dim()].iter_mut().for_each(|x| *x *= &c);
                }
                Ok(out)
            }
            Letter::NSimple(i) => {
                let one = Rat::one();
                let v = self.exp_e(*i, &one, v);
                let v = self.exp_f(*i, &-one.clone(), &v)?;
                Ok(self.exp_e(*i, &one, &v))
            }
            Letter::Idem(face) => {
                let faces = self.d.faces();
                let mut out = v.to_vec();
                for sp in &self.spaces {
                    if !faces.contains_int(face, &sp.weight) {
                        out[sp.offset..sp.offset + sp.dim()].iter_mut().for_each(|x| *x = Rat::zero());
                    }
                }
                Ok(out)
            }
        }
    }

    /// Right-to-left application.
    pub fn apply_word(&self, word: &Word, v: &[Rat]) -> Result<Vec<Rat>> {
        let mut v = v.to_vec();
        for l in word.0.iter().rev() {
            v = self.apply_letter(l, &v)?;
        }
        Ok(v)
    }

    /// The operator of `word`, column by column. The domain is the largest
    /// depth `k` such that every basis vector of depth `<= k` maps exactly.
    pub fn evaluate(&self, word: &Word) -> Result<Operator> {
        let mut columns = Vec::new();
        let mut domain = self.depth;
        for k in 0..self.total {
            let depth = self.space_of(k).depth;
            match self.apply_word(word, &self.basis_vector(k)) {
                Ok(c) => columns.push(c),
                Err(e @ Error::DepthExceeded { .. }) => {
                    if depth == 0 {
                        return Err(e);
                    }
                    domain = depth - 1;
                    let keep = self.spaces.iter().filter(|s| s.depth <= domain).map(|s| s.dim()).sum();
                    columns.truncate(keep);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Operator { domain, columns })
    }

    /// `⟨u|w v⟩`.
    pub fn matrix_coefficient(&self, u: &[Rat], word: &Word, v: &[Rat]) -> Result<Rat> {
        Ok(self.pair(u, &self.apply_word(word, v)?))
    }

    /// `θ_Λ(w) = ⟨v_Λ|w v_Λ⟩ / ⟨v_Λ|v_Λ⟩`.
    pub fn theta(&self, word: &Word) -> Result<Rat> {
        let v = self.basis_vector(0);
        self.matrix_coefficient(&v, word, &v)
    }

    /// First coefficient on which the two words differ, over the common
    /// domain of their operators.
    pub fn compare(&self, w1: &Word, w2: &Word) -> Result<Comparison> {
        let (a, b) = (self.evaluate(w1)?, self.evaluate(w2)?);
        let domain = a.domain.min(b.domain);
        let cols = self.spaces.iter().filter(|s| s.depth <= domain).map(|s| s.dim()).sum();
        for c in 0..cols {
            for r in 0..self.total {
                if a.columns[c][r] != b.columns[c][r] {
                    return Ok(Comparison::Distinct(Witness {
                        lambda: self.lambda.clone(),
                        depth: self.depth,
                        row: r,
                        col: c,
                        row_label: self.label(r),
                        col_label: self.label(c),
                        left: fmt_rat(&a.columns[c][r]),
                        right: fmt_rat(&b.columns[c][r]),
                    }));
                }
            }
        }
        Ok(Comparison::Equal { domain, columns: cols })
    }
}

/// Columns of an operator on the basis vectors of depth at most `domain`,
/// in slice coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    pub domain: usize,
    pub columns: Vec<Vec<Rat>>,
}

impl Operator {
    /// Row-major matrix of exact rational strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        let rows = self.columns.first().map_or(0, Vec::len);
        (0..rows).map(|r| self.columns.iter().map(|c| fmt_rat(&c[r])).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub lambda: Vec<i64>,
    pub depth: usize,
    pub row: usize,
    pub col: usize,
    pub row_label: String,
    pub col_label: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal { domain: usize, columns: usize },
    Distinct(Witness),
}

/// Outcome of [`probe_equal`]. `EqualOnProbes` is evidence, not a proof of
/// equality in `Ĝ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum ProbeVerdict {
    EqualOnProbes { probes: Vec<ProbeReport> },
    Distinct { witness: Witness },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub lambda: Vec<i64>,
    pub depth: usize,
    pub domain: usize,
    pub columns: usize,
}

/// Compares two words on every probe slice `L(Λ)` to depth `d`.
pub fn probe_equal(datum: &RootDatum, w1: &Word, w2: &Word, probes: &[(Vec<i64>, usize)]) -> Result<ProbeVerdict> {
    let mut reports = Vec::new();
    for (lambda, depth) in probes {
        let slice = ModuleSlice::new(datum, lambda, *depth)?;
        match slice.compare(w1, w2)? {
            Comparison::Distinct(witness) => return Ok(ProbeVerdict::Distinct { witness }),
            Comparison::Equal { domain, columns } => {
                reports.push(ProbeReport { lambda: lambda.clone(), depth: *depth, domain, columns })
            }
        }
    }
    Ok(ProbeVerdict::EqualOnProbes { probes: reports })
}

/// The default probe set: the fundamental modules `L(Λ_i)`, `i ∈ I`, and
/// `L(ρ)`, all to depth `d`.
pub fn default_probes(datum: &RootDatum, depth: usize) -> Vec<(Vec<i64>, usize)> {
    let mut out: Vec<(Vec<i64>, usize)> = (0..datum.n()).map(|i| (datum.fundamental(i), depth)).collect();
    let rho: Vec<i64> = (0..datum.dim()).map(|k| i64::from(k < datum.n())).collect();
    out.push((rho, depth));
    out
}

/// A generator of `Ĝ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    /// `exp(t e_i)`.
    Xplus(usize, Rat),
    /// `exp(t f_i)`.
    Xminus(usize, Rat),
    /// `t_h(s)`, `h` in `h`-coordinates.
    Torus(Vec<i64>, Rat),
    /// `exp(t x_α)` for a real root `α` in simple-root coordinates, with
    /// `x_α = (ad g_{j_1})^{m_1}⋯(ad g_{j_r})^{m_r} g_i` built along a
    /// reflection path from a simple root (`g = e` or `f` by the sign of `α`).
    Root(Vec<i64>, Rat),
    /// `n_i(1) = x_i(1) x_{-i}(-1) x_i(1)`.
    NSimple(usize),
    Idem(Face),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Xplus(i, t) => write!(f, "X+({};{})", i + 1, fmt_rat(t)),
            Letter::Xminus(i, t) => write!(f, "X-({};{})", i + 1, fmt_rat(t)),
            Letter::Torus(h, s) => {
                let unit = h.iter().filter(|&&x| x != 0).count() == 1 && h.contains(&1);
                if unit {
                    write!(f, "T(h{};{})", h.iter().position(|&x| x == 1).unwrap() + 1, fmt_rat(s))
                } else {
                    let parts: Vec<String> = h.iter().map(i64::to_string).collect();
                    write!(f, "T([{}];{})", parts.join(","), fmt_rat(s))
                }
            }
            Letter::Root(a, t) => {
                let parts: Vec<String> = a.iter().map(i64::to_string).collect();
                write!(f, "X([{}];{})", parts.join(","), fmt_rat(t))
            }
            Letter::NSimple(i) => write!(f, "N({})", i + 1),
            Letter::Idem(face) => {
                let rec = face.record();
                let theta: Vec<String> = rec.theta.iter().map(usize::to_string).collect();
                write!(f, "E(w={}; theta={})", rec.w, theta.join(","))
            }
        }
    }
}

/// A word in the generators, acting right to left.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(pub Vec<Letter>);

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Letter::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn then(mut self, other: &Word) -> Self {
        self.0.extend(other.0.iter().cloned());
        self
    }

    pub fn concat(words: &[&Word]) -> Self {
        Word(words.iter().flat_map(|w| w.0.iter().cloned()).collect())
    }

    /// `n_w = n_{i_1}⋯n_{i_k}` along the canonical reduced word.
    pub fn lift(w: &WeylElt) -> Self {
        Word(w.word().into_iter().map(Letter::NSimple).collect())
    }

    /// `n_w x_{±α_i}(t) n_w⁻¹`, an element of the root group of `±wα_i`.
    pub fn root_element(datum: &RootDatum, w: &WeylElt, i: usize, t: Rat, positive: bool) -> Self {
        let n = Self::lift(w);
        let x = if positive { Letter::Xplus(i, t) } else { Letter::Xminus(i, t) };
        let inv = n.inverse(datum).expect("no idempotents in a lift");
        n.then(&Word::letter(x)).then(&inv)
    }

    /// Group inverse; fails on idempotent letters.
    pub fn inverse(&self, datum: &RootDatum) -> Result<Self> {
        let mut out = Vec::new();
        for l in self.0.iter().rev() {
            match l {
                Letter::Xplus(i, t) => out.push(Letter::Xplus(*i, -t.clone())),
                Letter::Xminus(i, t) => out.push(Letter::Xminus(*i, -t.clone())),
                Letter::Root(a, t) => out.push(Letter::Root(a.clone(), -t.clone())),
                Letter::Torus(h, s) => out.push(Letter::Torus(h.clone(), s.recip())),
                // n_i⁻¹ = t_{h_i}(-1) n_i
                Letter::NSimple(i) => {
                    out.push(Letter::Torus(datum.coroot(*i), rat(-1)));
                    out.push(Letter::NSimple(*i));
                }
                Letter::Idem(_) => return Err(Error::PreconditionViolated("idempotents are not invertible".into())),
            }
        }
        Ok(Word(out))
    }

    /// Reads `X+(1;3/2) X-(2;-1) T(h1;2) N(1) E(w=3 1; theta=1,2)`.
    /// Torus coweights are `hK` or a bracketed vector `[1,0,-1]`.
    pub fn parse(datum: &RootDatum, s: &str) -> Result<Self> {
        let mut out = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| Error::Parse(format!("expected '(' in '{rest}'")))?;
            let close = rest.find(')').ok_or_else(|| Error::Parse(format!("unclosed letter in '{rest}'")))?;
            if close < open {
                return Err(Error::Parse(format!("unbalanced parentheses in '{rest}'")));
            }
            let name = rest[..open].trim();
            let body = &rest[open + 1..close];
            out.push(Self::parse_letter(datum, name, body)?);
            rest = rest[close + 1..].trim_start();
        }
        Ok(Word(out))
    }

    fn parse_letter(datum: &RootDatum, name: &str, body: &str) -> Result<Letter> {
        let index = |s: &str| -> Result<usize> {
            let w = parse_word(s, datum.n())?;
            match w.as_slice() {
                [i] => Ok(*i),
                _ => Err(Error::Parse(format!("expected one index, got '{s}'"))),
            }
        };
        let two = |body: &str| -> Result<(String, Rat)> {
            let (a, b) = body.split_once(';').ok_or_else(|| Error::Parse(format!("expected 'a;b' in '{body}'")))?;
            Ok((a.trim().to_string(), parse_rat(b.trim())?))
        };
        match name {
            "X+" => {
                let (i, t) = two(body)?;
                Ok(Letter::Xplus(index(&i)?, t))
            }
            "X-" => {
                let (i, t) = two(body)?;
                Ok(Letter::Xminus(index(&i)?, t))
            }
            "T" => {
                let (h, s) = two(body)?;
                if s.is_zero() {
                    return Err(Error::ZeroTorusValue);
                }
                let h = if let Some(k) = h.strip_prefix('h') {
                    let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad coweight '{h}'")))?;
                    if k == 0 || k > datum.dim() {
                        return Err(Error::Parse(format!("coweight index {k} out of range")));
                    }
                    (0..datum.dim()).map(|j| i64::from(j + 1 == k)).collect()
                } else {
                    let inner = h.trim_start_matches('[').trim_end_matches(']');
                    let v: Vec<i64> = inner
                        .split(',')
                        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coweight '{h}'"))))
                        .collect::<Result<_>>()?;
                    if v.len() != datum.dim() {
                        return Err(Error::RankMismatch { expected: datum.dim(), got: v.len() });
                    }
                    v
                };
                Ok(Letter::Torus(h, s))
            }
            "X" => {
                let (a, t) = two(body)?;
                let inner = a.trim_start_matches('[').trim_end_matches(']');
                let a: Vec<i64> = inner
                    .split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad root '{a}'"))))
                    .collect::<Result<_>>()?;
                if a.len() != datum.n() {
                    return Err(Error::RankMismatch { expected: datum.n(), got: a.len() });
                }
                root_path(datum, &a)?;
                Ok(Letter::Root(a, t))
            }
            "N" => Ok(Letter::NSimple(index(body)?)),
            "E" => Ok(Letter::Idem(datum.faces().parse(body)?)),
            other => Err(Error::Parse(format!("unknown generator '{other}'"))),
        }
    }
}

/// A word brought into the shape `u⁻·n̂·u⁺`.
#[derive(Clone, Debug)]
pub struct Cell {
    pub lower: Word,
    pub middle: Word,
    pub upper: Word,
    pub nhat: NhatElt,
    pub cell: WmonElt,
}

/// The signed root and parameter of a root-group letter.
fn root_letter(l: &Letter, n: usize) -> Option<(Vec<i64>, Rat)> {
    let unit = |i: usize, s: i64| (0..n).map(|j| if j == i { s } else { 0 }).collect();
    match l {
        Letter::Xplus(i, t) => Some((unit(*i, 1), t.clone())),
        Letter::Xminus(i, t) => Some((unit(*i, -1), t.clone())),
        Letter::Root(a, t) => Some((a.clone(), t.clone())),
        _ => None,
    }
}

fn with_param(l: &Letter, t: Rat) -> Letter {
    match l {
        Letter::Xplus(i, _) => Letter::Xplus(*i, t),
        Letter::Xminus(i, _) => Letter::Xminus(*i, t),
        Letter::Root(a, _) => Letter::Root(a.clone(), t),
        other => other.clone(),
    }
}

fn rank(l: &Letter, n: usize) -> u8 {
    match root_letter(l, n) {
        Some((a, _)) if a.iter().sum::<i64>() < 0 => 0,
        Some(_) => 2,
        None => 1,
    }
}

/// The Bruhat cell `B⁻ σ̂ B` of a word. Out-of-order neighbours are
/// rewritten with `t x_i(c) t⁻¹ = x_i(s^{α_i(h)} c)` and, next to a
/// standard idempotent `e(R(Θ))`, `x e(R(Θ)) = p_Θ(x) e(R(Θ))`; anything
/// else is `NotFactored`.
pub fn bruhat_cell(datum: &RootDatum, word: &Word) -> Result<Cell> {
    let n = datum.n();
    let mut w = word.0.clone();
    // α(h) for a root in simple-root coordinates
    let on = |a: &[i64], h: &[i64]| -> i64 { (0..n).map(|i| a[i] * datum.alpha_on(i, h)).sum() };
    let in_perp = |a: &[i64], face: &Face| {
        let perp = datum.perp(face.theta);
        (0..n).all(|i| a[i] == 0 || perp.contains(i))
    };
    loop {
        let Some(p) = (0..w.len().saturating_sub(1)).find(|&p| rank(&w[p], n) > rank(&w[p + 1], n)) else { break };
        let (a, b) = (w[p].clone(), w[p + 1].clone());
        let stuck = || Error::NotFactored(format!("cannot move {a} past {b}"));
        match (root_letter(&a, n), &b, root_letter(&b, n), &a) {
            // x_α(c) t = t x_α(s^{-α(h)} c)
            (Some((alpha, c)), Letter::Torus(h, s), _, _) => {
                w[p] = b.clone();
                w[p + 1] = with_param(&a, c * rat_pow(s, -on(&alpha, h)));
            }
            // t x_α(c) = x_α(s^{α(h)} c) t
            (_, _, Some((alpha, c)), Letter::Torus(h, s)) => {
                w[p] = with_param(&b, c * rat_pow(s, on(&alpha, h)));
                w[p + 1] = a.clone();
            }
            (Some((alpha, _)), Letter::Idem(face), _, _) if face.w.is_identity() => {
                if in_perp(&alpha, face) {
                    w.swap(p, p + 1);
                } else {
                    w.remove(p);
                }
            }
            (_, _, Some((alpha, _)), Letter::Idem(face)) if face.w.is_identity() => {
                if in_perp(&alpha, face) {
                    w.swap(p, p + 1);
                } else {
                    w.remove(p + 1);
                }
            }
            _ => return Err(stuck()),
        }
    }
    let lower = Word(w.iter().filter(|l| rank(l, n) == 0).cloned().collect());
    let middle = Word(w.iter().filter(|l| rank(l, n) == 1).cloned().collect());
    let upper = Word(w.iter().filter(|l| rank(l, n) == 2).cloned().collect());
    let wm = datum.wmon();
    let weyl = datum.weyl();
    let one = wm.torus_one();
    let mut nhat = wm.nhat(&datum.faces().whole(), &one, &weyl.identity())?;
    for l in &middle.0 {
        let x = match l {
            Letter::Torus(h, s) => wm.nhat(&datum.faces().whole(), &wm.torus_coweight(h, s), &weyl.identity())?,
            Letter::NSimple(i) => wm.nhat(&datum.faces().whole(), &one, &weyl.simple(*i))?,
            Letter::Idem(face) => wm.nhat(face, &one, &weyl.identity())?,
            _ => unreachable!(),
        };
        nhat = wm.nhat_mul(&nhat, &x);
    }
    let cell = wm.kappa(&nhat);
    Ok(Cell { lower, middle, upper, nhat, cell })
}

/// Positive real roots `wα_i` of height at most `max_height`, each with a
/// Weyl element `w` and index `i` realizing it, in simple-root coordinates.
pub fn positive_real_roots(datum: &RootDatum, max_height: usize) -> Vec<(Vec<i64>, WeylElt, usize)> {
    let n = datum.n();
    let weyl = datum.weyl();
    let mut out: Vec<(Vec<i64>, WeylElt, usize)> = (0..n)
        .map(|i| ((0..n).map(|j| i64::from(i == j)).collect(), weyl.identity(), i))
        .collect();
    let mut k = 0;
    while k < out.len() {
        let (beta, w, i) = out[k].clone();
        for j in 0..n {
            // s_j β = β - β(h_j) α_j
            let bh: i64 = (0..n).map(|m| beta[m] * datum.a(j, m)).sum();
            if bh >= 0 {
                continue;
            }
            let mut next = beta.clone();
            next[j] -= bh;
            if height(&next) <= max_height && !out.iter().any(|(b, _, _)| *b == next) {
                out.push((next, weyl.mul(&weyl.simple(j), &w), i));
            }
        }
        k += 1;
    }
    out.sort_by(|a, b| height(&a.0).cmp(&height(&b.0)).then_with(|| b.0.cmp(&a.0)));
    out
}

thread_local! {
    static ROOT_SCALES: std::cell::RefCell<HashMap<(Vec<i64>, Vec<i64>), Rat>> = Default::default();
}

/// The integer `c > 0` with `[X_α, X_{-α}] = ±c² h_α` for the bracket
/// vectors `X_{±α}` of `root_path`, read off on the highest weight vector
/// of `L(Λ_j)` for `j` in the support of `α`.
fn root_scale(d: &RootDatum, alpha: &[i64]) -> Result<Rat> {
    let n = d.n();
    let pos: Vec<i64> = alpha.iter().map(|x| x.abs()).collect();
    let key = ((0..n * n).map(|k| d.a(k / n, k % n)).collect::<Vec<_>>(), pos.clone());
    if let Some(c) = ROOT_SCALES.with(|m| m.borrow().get(&key).cloned()) {
        return Ok(c);
    }
    let (i, path) = root_path(d, &pos)?;
    let c = if path.is_empty() {
        Rat::one()
    } else {
        let j = (0..n).find(|&j| pos[j] > 0).expect("nonzero root");
        let guards = Guards { max_rank: n, max_depth: height(&pos) };
        let slice = ModuleSlice::with_guards(d, &d.fundamental(j), height(&pos), guards)?;
        let mut v = vec![Rat::zero(); slice.dim()];
        v[0] = Rat::one();
        let y = slice.apply_root_vector(i, &path, false, &v)?;
        let x = slice.apply_root_vector(i, &path, true, &y)?;
        let b = root_gram(d);
        // Λ_j(h_α) = α_j (α_j|α_j)/(α|α)
        let on = rat(pos[j]) * &b[j][j] / bilinear(&b, &pos, &pos);
        let sq = (&x[0] / on).abs();
        let r = crate::exact::rat_to_i64(&sq).expect("integral square");
        let c = (r as f64).sqrt().round() as i64;
        assert_eq!(c * c, r, "root vector norm {sq} at {alpha:?}");
        rat(c)
    };
    ROOT_SCALES.with(|m| m.borrow_mut().insert(key, c.clone()));
    Ok(c)
}

/// Writes a real root `±β` as `β = s_{j_1}⋯s_{j_r} α_i` by descending
/// through reflections; returns `i` and the steps `(j, m)` from the top,
/// `m = β(h_j)` being the length of the climb.
pub fn root_path(datum: &RootDatum, alpha: &[i64]) -> Result<(usize, Vec<(usize, i64)>)> {
    let n = datum.n();
    let not_real = || Error::PreconditionViolated(format!("{alpha:?} is not a real root"));
    let sign = if alpha.iter().all(|&x| x >= 0) { 1 } else { -1 };
    let mut beta: Vec<i64> = alpha.iter().map(|x| sign * x).collect();
    if alpha.len() != n || beta.iter().any(|&x| x < 0) || beta.iter().all(|&x| x == 0) {
        return Err(not_real());
    }
    let mut path = Vec::new();
    while height(&beta) > 1 {
        let pair = |j: usize| -> i64 { (0..n).map(|m| beta[m] * datum.a(j, m)).sum() };
        let j = (0..n).find(|&j| pair(j) > 0).ok_or_else(not_real)?;
        let m = pair(j);
        beta[j] -= m;
        if beta[j] < 0 {
            return Err(not_real());
        }
        path.push((j, m));
    }
    let i = beta.iter().position(|&x| x == 1).ok_or_else(not_real)?;
    Ok((i, path))
}

/// Applies `w` to a root given in simple-root coordinates.
pub fn act_on_root(datum: &RootDatum, w: &WeylElt, beta: &[i64]) -> Vec<i64> {
    let n = datum.n();
    let mut b = beta.to_vec();
    for j in w.word().into_iter().rev() {
        let bh: i64 = (0..n).map(|m| b[m] * datum.a(j, m)).sum();
        b[j] -= bh;
    }
    b
}
