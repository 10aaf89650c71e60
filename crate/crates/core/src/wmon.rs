//! The Weyl monoid `Ŵ`, the torus monoid `T̂` and the normalizer monoid
//! `N̂` in canonical form.
//!
//! A Weyl monoid element is a pair `(R, σ)` standing for `e(R)·σ`, so
//! `(R, σ)(S, τ) = (R ∩ σS, στ)` and `(R, σ) ~ (R, zσ)` for `z ∈ Z_W(R)`.
//! Torus elements are characters of `P`, stored by their values on the
//! fundamental weights `Λ_k`; `t·e(R)` only remembers `t` on `span(R) ∩ P`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::RootDatum;
use crate::error::{Error, Result};
use crate::exact::{fmt_rat, int_kernel, parse_rat, rat, rat_pow, LatticeChar, Rat};
use crate::face::{Face, FaceRecord, Faces};
use crate::weyl::{Weyl, WeylElt};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WmonElt {
    pub face: Face,
    pub sigma: WeylElt,
}

impl fmt::Debug for WmonElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}·σ[{}]", self.face, self.sigma.word_string())
    }
}

/// `t·e(R)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThatElt {
    pub face: Face,
    pub t: LatticeChar,
}

/// `e(R)·t·n_σ` with `σ` the canonical representative of its `Z_W(R)`-coset
/// and `t` restricted to `span(R) ∩ P`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NhatElt {
    pub face: Face,
    pub sigma: WeylElt,
    pub t: LatticeChar,
}

/// Result of letting `Ŵ` act on the Tits cone with an adjoined zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Image {
    Weight(Vec<Rat>),
    Zero,
}

/// A group element `t·n_w` of the torus normalizer, `t` given on the `Λ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NElt {
    pub t: Vec<Rat>,
    pub w: WeylElt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WmonRecord {
    pub face: FaceRecord,
    pub sigma: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NhatRecord {
    pub face: FaceRecord,
    pub sigma: String,
    pub basis: Vec<Vec<i64>>,
    pub t: Vec<String>,
}

impl WmonElt {
    pub fn record(&self) -> WmonRecord {
        WmonRecord { face: self.face.record(), sigma: self.sigma.word_string() }
    }
}

impl NhatElt {
    pub fn record(&self) -> NhatRecord {
        NhatRecord {
            face: self.face.record(),
            sigma: self.sigma.word_string(),
            basis: self.t.basis.clone(),
            t: self.t.values.iter().map(fmt_rat).collect(),
        }
    }
}

impl ThatElt {
    pub fn record(&self) -> NhatRecord {
        NhatRecord {
            face: self.face.record(),
            sigma: String::new(),
            basis: self.t.basis.clone(),
            t: self.t.values.iter().map(fmt_rat).collect(),
        }
    }
}

/// Monoid arithmetic over a fixed realization.
#[derive(Clone, Copy)]
pub struct Wmon<'d> {
    d: &'d RootDatum,
    weyl: Weyl<'d>,
    faces: Faces<'d>,
}

impl RootDatum {
    pub fn wmon(&self) -> Wmon<'_> {
        Wmon { d: self, weyl: self.weyl(), faces: self.faces() }
    }
}

impl<'d> Wmon<'d> {
    pub fn faces(&self) -> Faces<'d> {
        self.faces
    }

    /// Canonical representative of `Z_W(R)·σ`: conjugate by `w_R` into
    /// `W_Θ`-form, strip left descents in `Θ`, conjugate back.
    pub fn canonical(&self, face: &Face, sigma: &WeylElt) -> WeylElt {
        let w = self.weyl;
        let x = w.conj(&w.inverse(&face.w), sigma);
        let (_, min) = w.coset_left(&x, face.theta);
        w.conj(&face.w, &min)
    }

    pub fn normalize(&self, sigma: &WeylElt, face: &Face) -> WmonElt {
        WmonElt { sigma: self.canonical(face, sigma), face: face.clone() }
    }

    pub fn one(&self) -> WmonElt {
        WmonElt { face: self.faces.whole(), sigma: self.weyl.identity() }
    }

    pub fn unit(&self, sigma: &WeylElt) -> WmonElt {
        self.normalize(sigma, &self.faces.whole())
    }

    pub fn idempotent(&self, face: &Face) -> WmonElt {
        self.normalize(&self.weyl.identity(), face)
    }

    pub fn mul(&self, x: &WmonElt, y: &WmonElt) -> WmonElt {
        let moved = self.faces.act(&x.sigma, &y.face);
        let face = self.faces.intersect(&x.face, &moved).expect("face intersection");
        self.normalize(&self.weyl.mul(&x.sigma, &y.sigma), &face)
    }

    /// `(R, σ)⁻¹ = (σ⁻¹R, σ⁻¹)`.
    pub fn inverse(&self, x: &WmonElt) -> WmonElt {
        let inv = self.weyl.inverse(&x.sigma);
        self.normalize(&inv, &self.faces.act(&inv, &x.face))
    }

    pub fn is_idempotent(&self, x: &WmonElt) -> bool {
        x.sigma.is_identity()
    }

    pub fn is_unit(&self, x: &WmonElt) -> bool {
        x.face.theta.is_empty()
    }

    /// `(R, σ)λ = σλ` if `σλ ∈ R`, the adjoined zero otherwise.
    pub fn apply(&self, x: &WmonElt, lambda: &[Rat]) -> Result<Image> {
        self.faces.face_of_point(lambda)?;
        let moved = self.weyl.act_weight(&x.sigma, lambda);
        Ok(if self.faces.contains_unchecked(&x.face, &moved) { Image::Weight(moved) } else { Image::Zero })
    }

    /// Canonical basis of `span(R) ∩ P`.
    pub fn span_lattice(&self, face: &Face) -> Vec<Vec<i64>> {
        let rows: Vec<Vec<i64>> =
            face.theta.iter().map(|i| self.weyl.act_coweight_int(&face.w, &self.d.coroot(i))).collect();
        int_kernel(&rows, self.d.dim())
    }

    fn check_torus(&self, t: &[Rat]) -> Result<()> {
        if t.len() != self.d.dim() {
            return Err(Error::RankMismatch { expected: self.d.dim(), got: t.len() });
        }
        if t.iter().any(Zero::is_zero) {
            return Err(Error::ZeroTorusValue);
        }
        Ok(())
    }

    pub fn that(&self, t: &[Rat], face: &Face) -> Result<ThatElt> {
        self.check_torus(t)?;
        Ok(ThatElt { face: face.clone(), t: LatticeChar::from_ambient(self.span_lattice(face), t) })
    }

    pub fn that_mul(&self, x: &ThatElt, y: &ThatElt) -> ThatElt {
        let face = self.faces.intersect(&x.face, &y.face).expect("face intersection");
        let basis = self.span_lattice(&face);
        let t = x.t.restrict(&basis).mul(&y.t.restrict(&basis));
        ThatElt { face, t }
    }

    /// `σ(t e(R)) = σ(t) e(σR)`.
    pub fn that_act(&self, sigma: &WeylElt, x: &ThatElt) -> ThatElt {
        let face = self.faces.act(sigma, &x.face);
        let moved = LatticeChar {
            basis: x.t.basis.iter().map(|b| self.weyl.act_weight_int(sigma, b)).collect(),
            values: x.t.values.clone(),
        };
        let t = moved.restrict(&self.span_lattice(&face));
        ThatElt { face, t }
    }

    // --- the torus normalizer N ---

    pub fn torus_one(&self) -> Vec<Rat> {
        vec![Rat::one(); self.d.dim()]
    }

    /// `t_h(s)`: `λ ↦ s^{λ(h)}`.
    pub fn torus_coweight(&self, h: &[i64], s: &Rat) -> Vec<Rat> {
        h.iter().map(|&e| rat_pow(s, e)).collect()
    }

    /// `σ(t)(λ) = t(σ⁻¹λ)`.
    pub fn torus_act(&self, sigma: &WeylElt, t: &[Rat]) -> Vec<Rat> {
        let inv = self.weyl.inverse(sigma);
        (0..self.d.dim())
            .map(|k| {
                let img = self.weyl.act_weight_int(&inv, &self.d.fundamental(k));
                img.iter().zip(t).fold(Rat::one(), |acc, (&e, s)| acc * rat_pow(s, e))
            })
            .collect()
    }

    fn torus_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x * y).collect()
    }

    /// `n_u n_v = c(u, v)·n_{uv}`, with `n_i² = t_{h_i}(−1)` and
    /// `n_u n_v = n_{uv}` whenever lengths add.
    pub fn cocycle(&self, u: &WeylElt, v: &WeylElt) -> Vec<Rat> {
        let mut acc = self.torus_one();
        let mut cur = u.clone();
        for j in v.word() {
            let next = self.weyl.mul(&cur, &self.weyl.simple(j));
            if next.length() < cur.length() {
                let h = self.weyl.act_coweight_int(&next, &self.d.coroot(j));
                acc = Self::torus_mul(&acc, &self.torus_coweight(&h, &rat(-1)));
            }
            cur = next;
        }
        acc
    }

    pub fn n_lift(&self, w: &WeylElt) -> NElt {
        NElt { t: self.torus_one(), w: w.clone() }
    }

    pub fn n_mul(&self, x: &NElt, y: &NElt) -> NElt {
        let t = Self::torus_mul(&Self::torus_mul(&x.t, &self.torus_act(&x.w, &y.t)), &self.cocycle(&x.w, &y.w));
        NElt { t, w: self.weyl.mul(&x.w, &y.w) }
    }

    pub fn n_inverse(&self, x: &NElt) -> NElt {
        let winv = self.weyl.inverse(&x.w);
        let c = self.cocycle(&x.w, &winv);
        let target: Vec<Rat> = Self::torus_mul(&x.t, &c).iter().map(|v| v.recip()).collect();
        NElt { t: self.torus_act(&winv, &target), w: winv }
    }

    // --- N̂ ---

    /// `e(R)·t·n_σ` in canonical form.
    pub fn nhat(&self, face: &Face, t: &[Rat], sigma: &WeylElt) -> Result<NhatElt> {
        self.check_torus(t)?;
        let chr = LatticeChar::from_ambient(self.span_lattice(face), t);
        Ok(self.nhat_canonical(face, chr, sigma))
    }

    /// Replaces `n_σ` by `g⁻¹ n_σ = t′ n_{σ_c}`, where `g` lifts `σ σ_c⁻¹`
    /// through `n_{w_R} n_y n_{w_R}⁻¹` with `y ∈ W_Θ`, so `e(R) g = e(R)`.
    fn nhat_canonical(&self, face: &Face, chr: LatticeChar, sigma: &WeylElt) -> NhatElt {
        let w = self.weyl;
        let sc = self.canonical(face, sigma);
        let z = w.mul(sigma, &w.inverse(&sc));
        let y = w.conj(&w.inverse(&face.w), &z);
        let nr = self.n_lift(&face.w);
        let g = self.n_mul(&self.n_mul(&nr, &self.n_lift(&y)), &self.n_inverse(&nr));
        let rest = self.n_mul(&self.n_inverse(&g), &self.n_lift(sigma));
        debug_assert_eq!(rest.w, sc);
        let basis = self.span_lattice(face);
        let t = chr.restrict(&basis).mul(&LatticeChar::from_ambient(basis, &rest.t));
        NhatElt { face: face.clone(), sigma: sc, t }
    }

    pub fn nhat_mul(&self, x: &NhatElt, y: &NhatElt) -> NhatElt {
        let w = self.weyl;
        let moved = self.faces.act(&x.sigma, &y.face);
        let face = self.faces.intersect(&x.face, &moved).expect("face intersection");
        let basis = self.span_lattice(&face);
        let inv = w.inverse(&x.sigma);
        let c = self.cocycle(&x.sigma, &y.sigma);
        let values = basis
            .iter()
            .map(|b| {
                let tx = x.t.eval(b).expect("span of the product lies in span R");
                let ty = y.t.eval(&w.act_weight_int(&inv, b)).expect("and in σ span S");
                let tc = b.iter().zip(&c).fold(Rat::one(), |acc, (&e, s)| acc * rat_pow(s, e));
                tx * ty * tc
            })
            .collect();
        self.nhat_canonical(&face, LatticeChar { basis, values }, &w.mul(&x.sigma, &y.sigma))
    }

    /// `κ`: forget the torus part.
    pub fn kappa(&self, x: &NhatElt) -> WmonElt {
        WmonElt { face: x.face.clone(), sigma: x.sigma.clone() }
    }

    /// `n_σ e(R) n_σ⁻¹`, which equals `e(σR)`.
    pub fn nhat_conj_idem(&self, sigma: &WeylElt, face: &Face) -> NhatElt {
        let one = self.torus_one();
        let n = self.nhat(&self.faces.whole(), &one, sigma).expect("unit");
        let inv = self.n_inverse(&self.n_lift(sigma));
        let ninv = self.nhat(&self.faces.whole(), &inv.t, &inv.w).expect("unit");
        let e = self.nhat(face, &one, &self.weyl.identity()).expect("idempotent");
        self.nhat_mul(&self.nhat_mul(&n, &e), &ninv)
    }

    pub fn parse_wmon(&self, s: &str) -> Result<WmonElt> {
        let (face, sigma, _) = self.parse_fields(s)?;
        Ok(self.normalize(&sigma, &face))
    }

    pub fn parse_nhat(&self, s: &str) -> Result<NhatElt> {
        let (face, sigma, t) = self.parse_fields(s)?;
        self.nhat(&face, &t.unwrap_or_else(|| self.torus_one()), &sigma)
    }

    /// A torus-monoid element from `w=..;theta=..;t=..`.
    pub fn parse_that(&self, s: &str) -> Result<ThatElt> {
        let (face, sigma, t) = self.parse_fields(s)?;
        if !sigma.is_identity() {
            return Err(Error::Parse("a torus element has no sigma".into()));
        }
        self.that(&t.unwrap_or_else(|| self.torus_one()), &face)
    }

    /// Reads `w=..;theta=..;sigma=..;t=..` where `w`, `theta` give the face,
    /// `sigma` a word and `t` the torus values on the `Λ_k`.
    fn parse_fields(&self, s: &str) -> Result<(Face, WeylElt, Option<Vec<Rat>>)> {
        let mut face_parts = Vec::new();
        let mut sigma = self.weyl.identity();
        let mut t = None;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value in '{part}'")))?;
            match key.trim() {
                "w" | "theta" => face_parts.push(part.to_string()),
                "sigma" => sigma = self.weyl.parse(val)?,
                "t" => {
                    let v: Vec<Rat> = val
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|x| !x.is_empty())
                        .map(parse_rat)
                        .collect::<Result<_>>()?;
                    t = Some(v);
                }
                other => return Err(Error::Parse(format!("unknown field '{other}'"))),
            }
        }
        let face = self.faces.parse(&face_parts.join(";"))?;
        Ok((face, sigma, t))
    }
}
