//! Faces of the Tits cone. Every face is `w·R(Θ)` for a unique special set
//! `Θ` and a unique `w` minimal modulo `W_{Θ∪Θ⊥}`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::{RootDatum, Subset};
use crate::error::{Error, Result};
use crate::exact::{rat, Rat};
use crate::weyl::{parse_word, Dominance, Weyl, WeylElt, DOMINANT_STEP_CAP};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub w: WeylElt,
    pub theta: Subset,
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]R{}", self.w.word_string(), self.theta)
    }
}

/// Wire form `{"w": "3 1", "theta": [1, 2]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub w: String,
    pub theta: Vec<usize>,
}

impl Face {
    pub fn record(&self) -> FaceRecord {
        FaceRecord { w: self.w.word_string(), theta: self.theta.one_based() }
    }
}

/// Face calculus over a fixed realization.
#[derive(Clone, Copy)]
pub struct Faces<'d> {
    d: &'d RootDatum,
    weyl: Weyl<'d>,
}

impl RootDatum {
    pub fn faces(&self) -> Faces<'_> {
        Faces { d: self, weyl: self.weyl() }
    }
}

impl<'d> Faces<'d> {
    pub fn datum(&self) -> &'d RootDatum {
        self.d
    }

    pub fn weyl(&self) -> Weyl<'d> {
        self.weyl
    }

    /// `Θ ∪ Θ⊥`, the type of the stabilizer of `R(Θ)`.
    fn stabilizer_type(&self, theta: Subset) -> Subset {
        theta.union(self.d.perp(theta))
    }

    pub fn normalize(&self, w: &WeylElt, theta: Subset) -> Result<Face> {
        if !self.d.is_special(theta) {
            return Err(Error::NotSpecial(theta.to_string()));
        }
        let (min, _) = self.weyl.coset_right(w, self.stabilizer_type(theta));
        Ok(Face { w: min, theta })
    }

    pub fn standard(&self, theta: Subset) -> Result<Face> {
        self.normalize(&self.weyl.identity(), theta)
    }

    /// The whole cone `X = R(∅)`.
    pub fn whole(&self) -> Face {
        Face { w: self.weyl.identity(), theta: Subset::EMPTY }
    }

    /// The edge `R(I^∞)`, the smallest face.
    pub fn edge(&self) -> Face {
        Face { w: self.weyl.identity(), theta: self.d.infinite_part(self.d.all()) }
    }

    /// `w·c_Θ` in `h`-coordinates; `X` is nonnegative on it and the face is
    /// its zero set in `X`.
    pub fn functional(&self, r: &Face) -> Vec<i64> {
        let c = self.d.exposing_coweight(r.theta).expect("faces carry special sets");
        self.weyl.act_coweight_int(&r.w, &c)
    }

    /// Whether `S ⊆ R`.
    pub fn includes(&self, r: &Face, s: &Face) -> bool {
        if !r.theta.is_subset_of(s.theta) {
            return false;
        }
        let x = self.weyl.mul(&self.weyl.inverse(&r.w), &s.w);
        self.weyl.in_double_parabolic(&x, self.d.perp(r.theta), s.theta)
    }

    /// `R ∩ S`, from the antidominant representative of the sum of the
    /// exposing functionals.
    pub fn intersect(&self, r: &Face, s: &Face) -> Result<Face> {
        let d: Vec<i64> = self.functional(r).iter().zip(self.functional(s)).map(|(a, b)| a + b).collect();
        let (dd, v) = self.weyl.antidominant_coweight(&d)?;
        let support = Subset::from_indices((0..self.d.n()).filter(|&i| dd[i] != 0));
        self.normalize(&self.weyl.inverse(&v), support)
    }

    pub fn act(&self, u: &WeylElt, r: &Face) -> Face {
        self.normalize(&self.weyl.mul(u, &r.w), r.theta).expect("special type")
    }

    /// Smallest face containing `λ`.
    pub fn face_of_point(&self, lambda: &[Rat]) -> Result<Face> {
        match self.weyl.dominant_rep(lambda, DOMINANT_STEP_CAP) {
            Dominance::Dominant { w, facet, .. } => self.normalize(&w, self.d.infinite_part(facet)),
            Dominance::NotInTitsCone { theta, u } => Err(Error::NotInTitsCone(format!(
                "(σ[{}]λ)(c_{}) certifies λ outside X",
                u.word_string(),
                theta
            ))),
            Dominance::Undecided { steps } => Err(Error::Undecided(steps)),
        }
    }

    fn pair(&self, r: &Face, lambda: &[Rat]) -> Rat {
        lambda.iter().zip(self.functional(r)).map(|(x, c)| x * rat(c)).sum()
    }

    /// `λ ∈ R`, deciding `λ ∈ X` first.
    pub fn contains(&self, r: &Face, lambda: &[Rat]) -> Result<bool> {
        self.face_of_point(lambda)?;
        Ok(self.contains_unchecked(r, lambda))
    }

    /// `λ ∈ R` for `λ` already known to lie in `X`.
    pub fn contains_unchecked(&self, r: &Face, lambda: &[Rat]) -> bool {
        num_traits::Zero::is_zero(&self.pair(r, lambda))
    }

    /// Integral variant of [`Faces::contains_unchecked`].
    pub fn contains_int(&self, r: &Face, lambda: &[i64]) -> bool {
        lambda.iter().zip(self.functional(r)).map(|(x, c)| x * c).sum::<i64>() == 0
    }

    pub fn in_relative_interior(&self, r: &Face, lambda: &[Rat]) -> Result<bool> {
        Ok(self.face_of_point(lambda)? == *r)
    }

    /// `λ ∈ span R`: `(w⁻¹λ)(h_i) = 0` for `i ∈ Θ`.
    pub fn in_span(&self, r: &Face, lambda: &[Rat]) -> bool {
        let mu = self.weyl.act_weight(&self.weyl.inverse(&r.w), lambda);
        r.theta.iter().all(|i| num_traits::Zero::is_zero(&mu[i]))
    }

    /// `u` fixes `R` pointwise: `u ∈ w W_Θ w⁻¹`.
    pub fn centralizes(&self, r: &Face, u: &WeylElt) -> bool {
        self.weyl.conj(&self.weyl.inverse(&r.w), u).in_parabolic(r.theta)
    }

    /// `u R = R`: `u ∈ w W_{Θ∪Θ⊥} w⁻¹`.
    pub fn normalizes(&self, r: &Face, u: &WeylElt) -> bool {
        self.weyl.conj(&self.weyl.inverse(&r.w), u).in_parabolic(self.stabilizer_type(r.theta))
    }

    pub fn from_record(&self, rec: &FaceRecord) -> Result<Face> {
        let w = self.weyl.parse(&rec.w)?;
        let theta = self.subset(&rec.theta)?;
        self.normalize(&w, theta)
    }

    fn subset(&self, ix: &[usize]) -> Result<Subset> {
        let n = self.d.n();
        if let Some(&bad) = ix.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::Parse(format!("index {bad} out of range 1..={n}")));
        }
        Ok(Subset::from_one_based(ix))
    }

    /// Reads `w=3 1;theta=1,2` or the JSON record.
    pub fn parse(&self, s: &str) -> Result<Face> {
        let s = s.trim();
        if s.starts_with('{') {
            let rec: FaceRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return self.from_record(&rec);
        }
        let mut rec = FaceRecord { w: String::new(), theta: Vec::new() };
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value in '{part}'")))?;
            match key.trim() {
                "w" => rec.w = val.trim().to_string(),
                "theta" => rec.theta = parse_word(val, self.d.n())?.into_iter().map(|i| i + 1).collect(),
                other => return Err(Error::Parse(format!("unknown face field '{other}'"))),
            }
        }
        self.from_record(&rec)
    }

    /// A face `w·R(Θ)` with `w` a random word of length at most `max_len`
    /// and `Θ` a uniformly chosen special set.
    pub fn random<R: Rng>(&self, rng: &mut R, max_len: usize) -> Face {
        let sp = self.d.special_sets();
        let theta = sp[rng.gen_range(0..sp.len())];
        let w = self.random_elt(rng, max_len);
        self.normalize(&w, theta).expect("special")
    }

    pub fn random_elt<R: Rng>(&self, rng: &mut R, max_len: usize) -> WeylElt {
        let len = rng.gen_range(0..=max_len);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..self.d.n())).collect();
        self.weyl.from_word(&word)
    }
}
