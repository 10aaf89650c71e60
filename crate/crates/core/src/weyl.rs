//! The Weyl group acting on weights and coweights, reduced words, parabolic
//! coset representatives and Tits cone membership.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{Signed, Zero};

use crate::cartan::{RootDatum, Subset};
use crate::error::{Error, Result};
use crate::exact::{rat, Rat};

/// Default cap on reflection steps in [`Weyl::dominant_rep`].
pub const DOMINANT_STEP_CAP: usize = 4096;

/// A Weyl group element: its lexicographically smallest reduced word and
/// its matrix on `P` (in the `Λ`-basis) together with the inverse matrix.
/// Equality and hashing go through the canonical word.
#[derive(Clone)]
pub struct WeylElt {
    word: Vec<u8>,
    mat: Vec<i64>,
    inv: Vec<i64>,
    dim: usize,
}

impl PartialEq for WeylElt {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
    }
}

impl Eq for WeylElt {}

impl Hash for WeylElt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.word.hash(state);
    }
}

impl PartialOrd for WeylElt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.word.len().cmp(&other.word.len()).then_with(|| self.word.cmp(&other.word))
    }
}

impl fmt::Debug for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ[{}]", self.word_string())
    }
}

impl WeylElt {
    /// Canonical reduced word, 0-based.
    pub fn word(&self) -> Vec<usize> {
        self.word.iter().map(|&i| i as usize).collect()
    }

    /// Canonical word in the user syntax `"1 2 1"`.
    pub fn word_string(&self) -> String {
        self.word.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Matrix entry of the action on `P`.
    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.mat[r * self.dim + c]
    }

    /// Whether the element lies in the standard parabolic subgroup `W_J`.
    pub fn in_parabolic(&self, j: Subset) -> bool {
        self.word.iter().all(|&i| j.contains(i as usize))
    }
}

/// Parses `"1 2 1"` (1-based, blank separated; empty is the identity).
pub fn parse_word(s: &str, n: usize) -> Result<Vec<usize>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let i: usize = t.parse().map_err(|_| Error::Parse(format!("bad letter '{t}'")))?;
            if i == 0 || i > n {
                return Err(Error::Parse(format!("letter {i} out of range 1..={n}")));
            }
            Ok(i - 1)
        })
        .collect()
}

fn mac(acc: i64, a: i64, b: i64) -> i64 {
    a.checked_mul(b).and_then(|p| acc.checked_add(p)).expect("Weyl matrix entry overflow")
}

/// Working pair (matrix, inverse) before canonicalization.
#[derive(Clone)]
struct Raw {
    mat: Vec<i64>,
    inv: Vec<i64>,
}

/// Result of [`Weyl::dominant_rep`].
#[derive(Clone, Debug, PartialEq)]
pub enum Dominance {
    /// `λ = w λ⁺` with `λ⁺` dominant of facet type `facet`.
    Dominant { w: WeylElt, lambda_plus: Vec<Rat>, facet: Subset },
    /// `u λ` violates a necessary condition attached to the special set `theta`.
    NotInTitsCone { theta: Subset, u: WeylElt },
    /// No verdict within the step cap.
    Undecided { steps: usize },
}

/// Weyl group operations over a fixed realization.
#[derive(Clone, Copy)]
pub struct Weyl<'d> {
    d: &'d RootDatum,
}

impl RootDatum {
    pub fn weyl(&self) -> Weyl<'_> {
        Weyl { d: self }
    }
}

impl<'d> Weyl<'d> {
    pub fn datum(&self) -> &'d RootDatum {
        self.d
    }

    fn dim(&self) -> usize {
        self.d.dim()
    }

    fn raw_identity(&self) -> Raw {
        let n = self.dim();
        let mut mat = vec![0i64; n * n];
        for i in 0..n {
            mat[i * n + i] = 1;
        }
        Raw { inv: mat.clone(), mat }
    }

    /// `raw <- raw * σ_i`.
    fn raw_right(&self, raw: &mut Raw, i: usize) {
        let n = self.dim();
        let a = self.d.alpha(i);
        // mat: column i -= mat * α_i
        let ma: Vec<i64> = (0..n).map(|r| (0..n).fold(0, |acc, c| mac(acc, raw.mat[r * n + c], a[c]))).collect();
        for r in 0..n {
            raw.mat[r * n + i] = raw.mat[r * n + i].checked_sub(ma[r]).expect("Weyl matrix entry overflow");
        }
        // inv: inv <- σ_i inv, i.e. subtract α_i ⊗ row_i(inv)
        let row: Vec<i64> = raw.inv[i * n..(i + 1) * n].to_vec();
        for r in 0..n {
            if a[r] != 0 {
                for c in 0..n {
                    raw.inv[r * n + c] = mac(raw.inv[r * n + c], -a[r], row[c]);
                }
            }
        }
    }

    /// `raw <- σ_i * raw`.
    fn raw_left(&self, raw: &mut Raw, i: usize) {
        std::mem::swap(&mut raw.mat, &mut raw.inv);
        self.raw_right(raw, i);
        std::mem::swap(&mut raw.mat, &mut raw.inv);
    }

    fn apply_raw(&self, m: &[i64], v: &[i64]) -> Vec<i64> {
        let n = self.dim();
        (0..n).map(|r| (0..n).fold(0, |acc, c| mac(acc, m[r * n + c], v[c]))).collect()
    }

    fn raw_right_descent(&self, raw: &Raw, i: usize) -> bool {
        self.d.height_sign(&self.apply_raw(&raw.mat, self.d.alpha(i))) < 0
    }

    fn raw_left_descent(&self, raw: &Raw, i: usize) -> bool {
        self.d.height_sign(&self.apply_raw(&raw.inv, self.d.alpha(i))) < 0
    }

    fn canon(&self, raw: Raw) -> WeylElt {
        let mut work = raw.clone();
        let mut word = Vec::new();
        while let Some(i) = (0..self.d.n()).find(|&i| self.raw_left_descent(&work, i)) {
            word.push(i as u8);
            self.raw_left(&mut work, i);
        }
        debug_assert_eq!(work.mat, self.raw_identity().mat, "descent stripping must reach the identity");
        WeylElt { word, mat: raw.mat, inv: raw.inv, dim: self.dim() }
    }

    fn raw_of(&self, w: &WeylElt) -> Raw {
        Raw { mat: w.mat.clone(), inv: w.inv.clone() }
    }

    pub fn identity(&self) -> WeylElt {
        let raw = self.raw_identity();
        WeylElt { word: Vec::new(), mat: raw.mat, inv: raw.inv, dim: self.dim() }
    }

    pub fn simple(&self, i: usize) -> WeylElt {
        self.from_word(&[i])
    }

    /// Product of simple reflections (0-based letters), reduced and
    /// canonicalized.
    pub fn from_word(&self, word: &[usize]) -> WeylElt {
        let mut raw = self.raw_identity();
        for &i in word {
            assert!(i < self.d.n(), "letter out of range");
            self.raw_right(&mut raw, i);
        }
        self.canon(raw)
    }

    pub fn parse(&self, s: &str) -> Result<WeylElt> {
        Ok(self.from_word(&parse_word(s, self.d.n())?))
    }

    pub fn mul(&self, a: &WeylElt, b: &WeylElt) -> WeylElt {
        let mut raw = self.raw_of(a);
        for &i in &b.word {
            self.raw_right(&mut raw, i as usize);
        }
        self.canon(raw)
    }

    pub fn inverse(&self, a: &WeylElt) -> WeylElt {
        self.canon(Raw { mat: a.inv.clone(), inv: a.mat.clone() })
    }

    /// `a b a^{-1}`.
    pub fn conj(&self, a: &WeylElt, b: &WeylElt) -> WeylElt {
        self.mul(&self.mul(a, b), &self.inverse(a))
    }

    pub fn act_weight(&self, w: &WeylElt, lambda: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        (0..n)
            .map(|r| (0..n).filter(|&c| w.mat[r * n + c] != 0).map(|c| rat(w.mat[r * n + c]) * &lambda[c]).sum())
            .collect()
    }

    pub fn act_weight_int(&self, w: &WeylElt, lambda: &[i64]) -> Vec<i64> {
        self.apply_raw(&w.mat, lambda)
    }

    /// Contragredient action on `H`: the matrix is the inverse transpose.
    pub fn act_coweight_int(&self, w: &WeylElt, h: &[i64]) -> Vec<i64> {
        let n = self.dim();
        (0..n).map(|c| (0..n).fold(0, |acc, r| mac(acc, w.inv[r * n + c], h[r]))).collect()
    }

    pub fn act_coweight(&self, w: &WeylElt, h: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        (0..n)
            .map(|c| (0..n).filter(|&r| w.inv[r * n + c] != 0).map(|r| rat(w.inv[r * n + c]) * &h[r]).sum())
            .collect()
    }

    /// `w(α_i)` in `Λ`-coordinates.
    pub fn act_simple_root(&self, w: &WeylElt, i: usize) -> Vec<i64> {
        self.apply_raw(&w.mat, self.d.alpha(i))
    }

    pub fn is_right_descent(&self, w: &WeylElt, i: usize) -> bool {
        self.raw_right_descent(&self.raw_of(w), i)
    }

    pub fn is_left_descent(&self, w: &WeylElt, i: usize) -> bool {
        self.raw_left_descent(&self.raw_of(w), i)
    }

    pub fn right_descents(&self, w: &WeylElt) -> Subset {
        Subset::from_indices((0..self.d.n()).filter(|&i| self.is_right_descent(w, i)))
    }

    pub fn left_descents(&self, w: &WeylElt) -> Subset {
        Subset::from_indices((0..self.d.n()).filter(|&i| self.is_left_descent(w, i)))
    }

    /// `w = min · u` with `u ∈ W_J` and `min` free of right descents in `J`.
    pub fn coset_right(&self, w: &WeylElt, j: Subset) -> (WeylElt, WeylElt) {
        let mut raw = self.raw_of(w);
        let mut stripped = Vec::new();
        while let Some(i) = j.iter().find(|&i| self.raw_right_descent(&raw, i)) {
            self.raw_right(&mut raw, i);
            stripped.push(i);
        }
        stripped.reverse();
        (self.canon(raw), self.from_word(&stripped))
    }

    /// `w = u · min` with `u ∈ W_K` and `min` free of left descents in `K`.
    pub fn coset_left(&self, w: &WeylElt, k: Subset) -> (WeylElt, WeylElt) {
        let mut raw = self.raw_of(w);
        let mut stripped = Vec::new();
        while let Some(i) = k.iter().find(|&i| self.raw_left_descent(&raw, i)) {
            self.raw_left(&mut raw, i);
            stripped.push(i);
        }
        (self.from_word(&stripped), self.canon(raw))
    }

    /// Minimal element of the double coset `W_K w W_J`.
    pub fn double_min(&self, w: &WeylElt, k: Subset, j: Subset) -> WeylElt {
        let mut raw = self.raw_of(w);
        loop {
            if let Some(i) = k.iter().find(|&i| self.raw_left_descent(&raw, i)) {
                self.raw_left(&mut raw, i);
            } else if let Some(i) = j.iter().find(|&i| self.raw_right_descent(&raw, i)) {
                self.raw_right(&mut raw, i);
            } else {
                return self.canon(raw);
            }
        }
    }

    /// Whether `w ∈ W_K W_J`.
    pub fn in_double_parabolic(&self, w: &WeylElt, k: Subset, j: Subset) -> bool {
        self.double_min(w, k, j).is_identity()
    }

    /// Moves `λ` into the fundamental chamber by simple reflections.
    ///
    /// Every visited `uλ` is tested against the exposing functionals of the
    /// special sets: `uλ(c_Θ) < 0`, or `uλ(c_Θ) = 0` with `uλ(h_i) ≠ 0` for
    /// some `i ∈ Θ`, certifies `λ ∉ X`.
    pub fn dominant_rep(&self, lambda: &[Rat], cap: usize) -> Dominance {
        let n = self.d.n();
        let checks: Vec<(Subset, Vec<i64>)> = self
            .d
            .special_sets()
            .iter()
            .filter(|s| !s.is_empty())
            .map(|&s| (s, self.d.exposing_functional(s).expect("special")))
            .collect();
        let mut cur = lambda.to_vec();
        let mut applied: Vec<usize> = Vec::new();
        loop {
            for (theta, m) in &checks {
                let val: Rat = theta.iter().map(|i| rat(m[i]) * &cur[i]).sum();
                if val.is_negative() || (val.is_zero() && theta.iter().any(|i| !cur[i].is_zero())) {
                    let rev: Vec<usize> = applied.iter().rev().copied().collect();
                    return Dominance::NotInTitsCone { theta: *theta, u: self.from_word(&rev) };
                }
            }
            let Some(i) = (0..n).find(|&i| cur[i].is_negative()) else { break };
            if applied.len() >= cap {
                return Dominance::Undecided { steps: applied.len() };
            }
            let c = cur[i].clone();
            for (x, &a) in cur.iter_mut().zip(self.d.alpha(i)) {
                if a != 0 {
                    *x -= &c * rat(a);
                }
            }
            applied.push(i);
        }
        let facet = Subset::from_indices((0..n).filter(|&i| cur[i].is_zero()));
        Dominance::Dominant { w: self.from_word(&applied), lambda_plus: cur, facet }
    }

    /// Reflects a coweight `d` with `ρ(d) >= 0` until `α_i(d) <= 0` for all
    /// `i`. Returns `(d', v)` with `v d = d'`. Each step lowers `ρ(d)` by at
    /// least one, which bounds the loop.
    pub fn antidominant_coweight(&self, d: &[i64]) -> Result<(Vec<i64>, WeylElt)> {
        let rho = |x: &[i64]| x.iter().sum::<i64>();
        let start = rho(d);
        if start < 0 {
            return Err(Error::PreconditionViolated(format!("ρ(d) = {start} < 0")));
        }
        let mut cur = d.to_vec();
        let mut applied = Vec::new();
        while let Some(i) = (0..self.d.n()).find(|&i| self.d.alpha_on(i, &cur) > 0) {
            if applied.len() as i64 > start {
                return Err(Error::PreconditionViolated("reflection loop did not terminate".into()));
            }
            let a = self.d.alpha_on(i, &cur);
            cur[i] -= a;
            applied.push(i);
        }
        applied.reverse();
        Ok((cur, self.from_word(&applied)))
    }
}
