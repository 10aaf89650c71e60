//! Seeded property suites, run by `kmx verify` and the acceptance test.
//!
//! Each suite is deterministic: randomness comes from a ChaCha stream with
//! a fixed per-suite seed, and reports carry counts only (no timings), so
//! two runs print the same bytes.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::{ComponentType, RootDatum, Subset};
use crate::catalog;
use crate::error::{Error, Result};
use crate::exact::{frac, lp_feasible, rat, to_i64, LpProblem, LpResult, Rat, Rel};
use crate::face::{Face, Faces};
use crate::ghat::{
    act_on_root, default_probes, positive_real_roots, probe_equal, weights_and_mults, Comparison, Letter,
    ModuleSlice, ProbeVerdict, Word,
};
use crate::toric::LatticeMonoid;
use crate::wmon::{NhatElt, Wmon, WmonElt};

pub const SUITES: [(u8, &str); 9] = [
    (1, "special sets and type of the hyperbolic example"),
    (2, "face counts of finite and affine data"),
    (3, "face intersection laws"),
    (4, "Weyl monoid laws"),
    (5, "kappa homomorphism and simple-lift cocycle"),
    (6, "operator identities on module slices"),
    (7, "Freudenthal against Shapovalov"),
    (8, "theta multiplicativity"),
    (9, "toric monoids against brute force"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub id: u8,
    pub name: String,
    pub checks: usize,
    pub skipped: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub pass: bool,
}

#[derive(Default)]
struct Tally {
    checks: usize,
    skipped: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }

    /// Requires at least `min` checks to have run.
    fn require(&mut self, min: usize, what: &str) {
        if self.checks < min {
            self.fail(format!("only {} checks for {what}, need {min}", self.checks));
        }
    }

    fn report(self, id: u8) -> SuiteReport {
        let name = SUITES.iter().find(|s| s.0 == id).map_or("", |s| s.1).to_string();
        SuiteReport {
            id,
            name,
            checks: self.checks,
            skipped: self.skipped,
            pass: self.failures == 0,
            failures: self.failures,
            first_failure: self.first,
        }
    }
}

pub fn run_all() -> Vec<SuiteReport> {
    SUITES.iter().map(|&(id, _)| run_suite(id)).collect()
}

pub fn run_suite(id: u8) -> SuiteReport {
    let mut t = Tally::default();
    let outcome = match id {
        1 => special_sets(&mut t),
        2 => face_counts(&mut t),
        3 => face_laws(&mut t),
        4 => monoid_laws(&mut t),
        5 => kappa_and_cocycle(&mut t),
        6 => operator_identities(&mut t),
        7 => module_cross_check(&mut t),
        8 => theta_multiplicativity(&mut t),
        9 => toric(&mut t),
        _ => Err(Error::PreconditionViolated(format!("no suite {id}"))),
    };
    if let Err(e) = outcome {
        t.fail(format!("aborted: {e}"));
    }
    t.report(id)
}

fn rng(id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x6b6d_7800 + id)
}

fn special_sets(t: &mut Tally) -> Result<()> {
    let d = catalog::hyperbolic();
    let expected = vec![Subset(0), Subset::from_one_based(&[1, 2]), Subset::from_one_based(&[1, 2, 3])];
    t.check(d.special_sets() == expected.as_slice(), || format!("special sets {:?}", d.special_sets()));
    let comps = d.classify(d.all());
    t.check(comps.len() == 1 && comps[0].set == d.all() && comps[0].kind == ComponentType::Ind, || {
        format!("classification {comps:?}")
    });
    Ok(())
}

fn affine_a2() -> RootDatum {
    RootDatum::from_rows(vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]).expect("affine A2")
}

fn face_counts(t: &mut Tally) -> Result<()> {
    let mut r = rng(2);
    for (name, d, affine) in
        [("A2", catalog::a2(), false), ("B2", catalog::b2(), false), ("A1~", catalog::affine_a1(), true), ("A2~", affine_a2(), true)]
    {
        let f = d.faces();
        let seen: HashSet<Face> = (0..1000).map(|_| f.random(&mut r, 8)).collect();
        let allowed: HashSet<Face> = if affine { [f.whole(), f.edge()].into() } else { [f.whole()].into() };
        t.check(seen.is_subset(&allowed), || format!("{name}: faces {seen:?}"));
        t.check(seen.len() == allowed.len(), || format!("{name}: {} faces seen", seen.len()));
    }
    Ok(())
}

/// A random symmetrizable 3x3 matrix with off-diagonal entries in `[-2, 0]`.
fn random_datum(r: &mut ChaCha8Rng) -> RootDatum {
    loop {
        let mut a = vec![vec![2i64; 3]; 3];
        for i in 0..3 {
            for j in i + 1..3 {
                if r.gen_bool(0.25) {
                    a[i][j] = 0;
                    a[j][i] = 0;
                } else {
                    a[i][j] = -r.gen_range(1..=2);
                    a[j][i] = -r.gen_range(1..=2);
                }
            }
        }
        if let Ok(d) = RootDatum::from_rows(a) {
            return d;
        }
    }
}

fn face_laws(t: &mut Tally) -> Result<()> {
    let mut r = rng(3);
    let mut data = vec![catalog::hyperbolic(), catalog::affine_a1_plus_a1(), catalog::affine_a1(), catalog::rank2_indefinite()];
    data.push(random_datum(&mut r));
    data.push(random_datum(&mut r));
    for d in &data {
        let f = d.faces();
        for _ in 0..1000 {
            let (a, b) = (f.random(&mut r, 5), f.random(&mut r, 5));
            let ab = f.intersect(&a, &b)?;
            t.check(f.includes(&a, &b) == (ab == b), || format!("includes vs intersect at {a:?}, {b:?}"));
            t.check(ab == f.intersect(&b, &a)?, || format!("commutativity at {a:?}, {b:?}"));
            t.check(f.intersect(&a, &a)? == a, || format!("idempotence at {a:?}"));
            let u = f.random_elt(&mut r, 4);
            t.check(f.act(&u, &ab) == f.intersect(&f.act(&u, &a), &f.act(&u, &b))?, || {
                format!("equivariance at {a:?}, {b:?}, {}", u.word_string())
            });
        }
        let sp = d.special_sets();
        for &x in sp {
            for &y in sp {
                let lhs = f.intersect(&f.standard(x)?, &f.standard(y)?)?;
                t.check(lhs == f.standard(x.union(y))?, || format!("R({x})∩R({y})"));
            }
        }
    }
    Ok(())
}

fn random_elt(m: &Wmon, r: &mut ChaCha8Rng) -> WmonElt {
    let f = m.faces();
    let face = f.random(r, 4);
    let sigma = f.random_elt(r, 4);
    m.normalize(&sigma, &face)
}

fn monoid_laws(t: &mut Tally) -> Result<()> {
    let mut r = rng(4);
    for d in [catalog::hyperbolic(), catalog::affine_a1_plus_a1(), catalog::affine_a1(), catalog::rank2_indefinite()] {
        let m = d.wmon();
        let f = d.faces();
        let w = d.weyl();
        for _ in 0..300 {
            let (x, y, z) = (random_elt(&m, &mut r), random_elt(&m, &mut r), random_elt(&m, &mut r));
            t.check(m.mul(&m.mul(&x, &y), &z) == m.mul(&x, &m.mul(&y, &z)), || format!("associativity at {x:?}, {y:?}, {z:?}"));
            let xi = m.inverse(&x);
            t.check(m.mul(&m.mul(&x, &xi), &x) == x && m.mul(&m.mul(&xi, &x), &xi) == xi && m.inverse(&xi) == x, || {
                format!("inverse axioms at {x:?}")
            });
            let (e, g) = (m.idempotent(&x.face), m.idempotent(&y.face));
            t.check(m.mul(&e, &g) == m.mul(&g, &e), || format!("idempotents commute at {x:?}, {y:?}"));
            let unit = x.face == f.whole();
            t.check(m.is_unit(&x) == unit && (m.mul(&x, &xi) == m.one()) == unit, || format!("unit test at {x:?}"));
            let idem = x.sigma.is_identity();
            t.check(m.is_idempotent(&x) == idem && (m.mul(&x, &x) == x) == idem, || format!("idempotent test at {x:?}"));
            let back = m.mul(&m.unit(&x.sigma), &m.idempotent(&f.act(&w.inverse(&x.sigma), &x.face)));
            t.check(back == x, || format!("unit-regular factorization at {x:?}"));
        }
    }
    // Ã1: a group with an adjoined zero
    let d = catalog::affine_a1();
    let m = d.wmon();
    let zero = m.idempotent(&d.faces().edge());
    for _ in 0..200 {
        let x = random_elt(&m, &mut r);
        t.check(m.is_unit(&x) || x == zero, || format!("Ã1 element {x:?}"));
        t.check(m.mul(&x, &zero) == zero && m.mul(&zero, &x) == zero, || format!("zero absorbs {x:?}"));
    }
    Ok(())
}

fn random_nhat(m: &Wmon, d: &RootDatum, x: &WmonElt, r: &mut ChaCha8Rng) -> Result<NhatElt> {
    let tor: Vec<Rat> = (0..d.dim())
        .map(|_| {
            let p = r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 };
            frac(p, r.gen_range(1..=3))
        })
        .collect();
    m.nhat(&x.face, &tor, &x.sigma)
}

fn kappa_and_cocycle(t: &mut Tally) -> Result<()> {
    let mut r = rng(5);
    for d in [catalog::hyperbolic(), catalog::affine_a1_plus_a1(), catalog::affine_a1(), catalog::rank2_indefinite()] {
        let m = d.wmon();
        for _ in 0..150 {
            let (x, y) = (random_elt(&m, &mut r), random_elt(&m, &mut r));
            let (nx, ny) = (random_nhat(&m, &d, &x, &mut r)?, random_nhat(&m, &d, &y, &mut r)?);
            t.check(m.kappa(&nx) == x && m.kappa(&m.nhat_mul(&nx, &ny)) == m.mul(&x, &y), || format!("kappa at {x:?}, {y:?}"));
        }
    }
    for d in [catalog::a2(), catalog::affine_a1(), catalog::hyperbolic()] {
        let m = d.wmon();
        let w = d.weyl();
        let whole = d.faces().whole();
        let probes = default_probes(&d, 2);
        for i in 0..d.n() {
            let n = m.nhat(&whole, &m.torus_one(), &w.simple(i))?;
            let expected = m.nhat(&whole, &m.torus_coweight(&d.coroot(i), &rat(-1)), &w.identity())?;
            t.check(m.nhat_mul(&n, &n) == expected, || format!("n_{}² algebraically", i + 1));
            let sq = Word(vec![Letter::NSimple(i), Letter::NSimple(i)]);
            let tor = Word::letter(Letter::Torus(d.coroot(i), rat(-1)));
            let v = probe_equal(&d, &sq, &tor, &probes)?;
            t.check(matches!(v, ProbeVerdict::EqualOnProbes { .. }), || format!("n_{}² on probes: {v:?}", i + 1));
        }
    }
    Ok(())
}

/// Slices reused across many comparisons.
struct Probes<'d> {
    slices: Vec<ModuleSlice<'d>>,
}

impl<'d> Probes<'d> {
    fn new(d: &'d RootDatum, depth: usize) -> Result<Self> {
        let slices = default_probes(d, depth).iter().map(|(l, k)| ModuleSlice::new(d, l, *k)).collect::<Result<_>>()?;
        Ok(Probes { slices })
    }

    /// `None` when no probe can evaluate both words.
    fn equal(&self, a: &Word, b: &Word) -> Result<Option<bool>> {
        let mut used = 0;
        for s in &self.slices {
            match s.compare(a, b) {
                Ok(Comparison::Equal { .. }) => used += 1,
                Ok(Comparison::Distinct(_)) => return Ok(Some(false)),
                Err(Error::DepthExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok((used > 0).then_some(true))
    }

    fn expect(&self, t: &mut Tally, a: &Word, b: &Word, want: bool, what: impl FnOnce() -> String) -> Result<()> {
        match self.equal(a, b)? {
            Some(eq) => t.check(eq == want, what),
            None => t.skipped += 1,
        }
        Ok(())
    }
}

/// Whether `x_α` maps `B(R)` into itself, and whether it kills it, on every
/// basis vector whose image stays inside its probe slice. Since `B(R)` is a
/// sum of weight spaces, `exp(t x_α)` preserves (fixes) `B(R)` exactly when
/// `x_α` preserves (kills) it.
fn root_vector_on_face(probes: &Probes, face: &Face, alpha: &[i64]) -> Result<(bool, bool)> {
    // only lowering can leave the slice
    let ht = alpha.iter().sum::<i64>().min(0).unsigned_abs() as usize;
    let (mut preserves, mut fixes) = (true, true);
    for s in &probes.slices {
        let f = s.datum().faces();
        for k in 0..s.dim() {
            let sp = s.space_of(k);
            if sp.depth + ht > s.depth() || !f.contains_int(face, &sp.weight) {
                continue;
            }
            let y = s.apply_root(alpha, &s.basis_vector(k))?;
            for target in s.spaces() {
                if y[target.offset..target.offset + target.dim()].iter().any(|x| *x != rat(0)) {
                    fixes = false;
                    preserves &= f.contains_int(face, &target.weight);
                }
            }
        }
    }
    Ok((preserves, fixes))
}

fn support_in(alpha: &[i64], s: Subset) -> bool {
    alpha.iter().enumerate().all(|(i, &a)| a == 0 || s.contains(i))
}

fn idem(f: &Faces, theta: Subset) -> Result<Word> {
    Ok(Word::letter(Letter::Idem(f.standard(theta)?)))
}

fn operator_identities(t: &mut Tally) -> Result<()> {
    let mut r = rng(6);
    let data = [catalog::affine_a1(), catalog::hyperbolic(), catalog::affine_a1_plus_a1()];
    for d in &data {
        let f = d.faces();
        let w = d.weyl();
        let n = d.n();
        let probes = Probes::new(d, 5)?;
        let roots: Vec<Vec<i64>> = positive_real_roots(d, 4)
            .into_iter()
            .flat_map(|(b, _, _)| [b.clone(), b.iter().map(|x| -x).collect()])
            .collect();

        // conjugating an idempotent by a lift moves its face
        for _ in 0..6 {
            let sigma = f.random_elt(&mut r, 2);
            let face = f.random(&mut r, 1);
            let lift = Word::lift(&sigma);
            let lhs = Word::concat(&[&lift, &Word::letter(Letter::Idem(face.clone())), &lift.inverse(d)?]);
            let rhs = Word::letter(Letter::Idem(f.act(&sigma, &face)));
            probes.expect(t, &lhs, &rhs, true, || format!("conjugation by {} of {face:?}", sigma.word_string()))?;
        }

        // x e(R(Θ)) = p(x) e(R(Θ)) = e(R(Θ)) p(x) on the positive side, dually on the negative side
        for &theta in d.special_sets() {
            let e = idem(&f, theta)?;
            let perp = d.perp(theta);
            for alpha in roots.iter().filter(|a| a.iter().map(|x| x.abs()).sum::<i64>() <= 3) {
                let x = Word::letter(Letter::Root(alpha.clone(), frac(3, 2)));
                let p = if support_in(alpha, perp) { x.clone() } else { Word::empty() };
                let positive = alpha.iter().sum::<i64>() > 0;
                let (lhs, mid, rhs) = if positive {
                    (Word::concat(&[&x, &e]), Word::concat(&[&p, &e]), Word::concat(&[&e, &p]))
                } else {
                    (Word::concat(&[&e, &x]), Word::concat(&[&e, &p]), Word::concat(&[&p, &e]))
                };
                probes.expect(t, &lhs, &mid, true, || format!("absorption of {alpha:?} by R({theta})"))?;
                probes.expect(t, &mid, &rhs, true, || format!("p(x) commutes with R({theta}) for {alpha:?}"))?;
            }
        }

        // normalizer and centralizer of B(R) in root groups
        let mut faces: Vec<Face> = d.special_sets().iter().map(|&s| f.standard(s)).collect::<Result<_>>()?;
        for _ in 0..3 {
            faces.push(f.random(&mut r, 2));
        }
        for face in &faces {
            let e = Word::letter(Letter::Idem(face.clone()));
            let tau_inv = w.inverse(&face.w);
            let perp = d.perp(face.theta);
            for alpha in &roots {
                let beta = act_on_root(d, &tau_inv, alpha);
                let positive = beta.iter().all(|&x| x >= 0);
                let in_theta = support_in(&beta, face.theta);
                let in_perp = support_in(&beta, perp);
                let preserves = positive || in_theta || in_perp;
                let fixes = (positive && !in_perp) || in_theta;
                let (lie_preserves, lie_fixes) = root_vector_on_face(&probes, face, alpha)?;
                t.check(lie_preserves == preserves, || {
                    format!("x_{alpha:?} B({face:?}) ⊆ B({face:?}) is {lie_preserves}, predicate {preserves}")
                });
                t.check(lie_fixes == fixes, || format!("x_{alpha:?} B({face:?}) = 0 is {lie_fixes}, predicate {fixes}"));
                // the group elements agree wherever the predicate holds
                let x = Word::letter(Letter::Root(alpha.clone(), rat(1)));
                let xe = Word::concat(&[&x, &e]);
                if preserves {
                    probes.expect(t, &Word::concat(&[&e, &x, &e]), &xe, true, || format!("U_{alpha:?} preserves B({face:?})"))?;
                }
                if fixes {
                    probes.expect(t, &xe, &e, true, || format!("U_{alpha:?} fixes B({face:?})"))?;
                }
            }
        }

        // weight indicators multiply
        let slices: Vec<ModuleSlice> = (0..n).map(|i| ModuleSlice::new(d, &d.fundamental(i), 3)).collect::<Result<_>>()?;
        let weights: Vec<Vec<i64>> = slices.iter().flat_map(|s| s.spaces().iter().map(|sp| sp.weight.clone())).collect();
        for _ in 0..10 {
            let face = f.random(&mut r, 3);
            for a in &weights {
                for b in &weights {
                    let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    t.check(f.contains_int(&face, &sum) == (f.contains_int(&face, a) && f.contains_int(&face, b)), || {
                        format!("indicator of {face:?} at {a:?} + {b:?}")
                    });
                }
            }
        }

        // e(R(J)) is a zero for the words of Ĝ_J, J special
        for &j in d.special_sets().iter().filter(|s| !s.is_empty()) {
            let e = idem(&f, j)?;
            let idx: Vec<usize> = j.iter().collect();
            for _ in 0..5 {
                let mut g = Word::empty();
                for _ in 0..r.gen_range(1..=3) {
                    let i = idx[r.gen_range(0..idx.len())];
                    let c = frac(r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 }, r.gen_range(1..=2));
                    let l = match r.gen_range(0..if j == d.all() { 5 } else { 4 }) {
                        0 => Letter::Xplus(i, c),
                        1 => Letter::Xminus(i, c),
                        2 => Letter::NSimple(i),
                        3 => Letter::Torus(d.coroot(i), c),
                        _ => Letter::Idem(f.random(&mut r, 2)),
                    };
                    g.0.push(l);
                }
                probes.expect(t, &Word::concat(&[&g, &e]), &e, true, || format!("{g} e(R({j})) = e(R({j}))"))?;
                probes.expect(t, &Word::concat(&[&e, &g]), &e, true, || format!("e(R({j})) {g} = e(R({j}))"))?;
            }
        }

        highest_weight_lines(t, d, &mut r)?;
        levi_fixed_points(t, d)?;
    }
    t.require(500, "operator identities");
    Ok(())
}

/// Generators of `B Ŵ_J B` keep the line `L(Λ)_Λ` for `Λ ∈ F_J`; the others move it.
fn highest_weight_lines(t: &mut Tally, d: &RootDatum, r: &mut ChaCha8Rng) -> Result<()> {
    let f = d.faces();
    let n = d.n();
    let mut lambdas: Vec<Vec<i64>> = (0..n).map(|i| d.fundamental(i)).collect();
    lambdas.push(d.rho());
    lambdas.push(vec![0; d.dim()]);
    for lambda in &lambdas {
        let s = ModuleSlice::new(d, lambda, 4)?;
        let v = s.basis_vector(0);
        let mut letters: Vec<(Letter, bool)> = Vec::new();
        for i in 0..n {
            let zero = lambda[i] == 0;
            letters.push((Letter::Xplus(i, rat(2)), true));
            letters.push((Letter::Torus(d.coroot(i), rat(3)), true));
            letters.push((Letter::Xminus(i, rat(2)), zero));
            letters.push((Letter::NSimple(i), zero));
        }
        for _ in 0..6 {
            let face = f.random(r, 3);
            let inside = f.contains_int(&face, lambda);
            letters.push((Letter::Idem(face), inside));
        }
        for (l, keeps) in letters {
            match s.apply_letter(&l, &v) {
                Ok(out) => {
                    let on_line = out.iter().skip(1).all(|x| *x == rat(0)) && out[0] != rat(0);
                    t.check(on_line == keeps, || format!("{l} on the highest weight line of {lambda:?}"));
                }
                Err(Error::DepthExceeded { .. }) => t.skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

/// Root groups `U_α` with `α ∉ Δ_J` fix the weight spaces `L(Λ)_{Λ-β}`,
/// `supp β ⊆ J`.
fn levi_fixed_points(t: &mut Tally, d: &RootDatum) -> Result<()> {
    let n = d.n();
    let roots = positive_real_roots(d, 3);
    for lambda in [d.fundamental(0), d.rho()] {
        let s = ModuleSlice::new(d, &lambda, 3)?;
        for mask in 0..(1u32 << n) {
            let j = Subset(mask);
            for (alpha, _, _) in roots.iter().filter(|(a, _, _)| !support_in(a, j)) {
                for k in 0..s.dim() {
                    if !support_in(&s.space_of(k).beta, j) {
                        continue;
                    }
                    let v = s.basis_vector(k);
                    let out = s.exp_root(alpha, &frac(5, 3), &v)?;
                    t.check(out == v, || format!("U_{alpha:?} moves {} in L_{j}({lambda:?})", s.label(k)));
                }
            }
        }
    }
    Ok(())
}

fn module_cross_check(t: &mut Tally) -> Result<()> {
    let a2 = catalog::a2();
    let aff = catalog::affine_a1();
    let cases = [(&a2, vec![1, 0, 0, 0]), (&a2, vec![1, 1, 0, 0]), (&aff, aff.fundamental(0))];
    for (d, lambda) in cases {
        let lambda = &lambda[..d.dim()];
        let s = ModuleSlice::new(d, lambda, 4)?;
        let table: Vec<(Vec<i64>, i64)> = weights_and_mults(d, lambda, 4)?.into_iter().map(|w| (w.beta, w.mult)).collect();
        let dims: Vec<(Vec<i64>, i64)> = s.weights().into_iter().map(|w| (w.beta, w.mult)).collect();
        t.check(table == dims, || format!("multiplicities of {lambda:?}: {table:?} vs {dims:?}"));
        for sp in s.spaces() {
            t.check(sp.gram.transpose() == sp.gram && sp.gram.inverse().is_some(), || format!("Gram matrix at {:?}", sp.beta));
        }
        for i in 0..d.n() {
            for u in 0..s.dim() {
                let bu = s.basis_vector(u);
                let eu = s.apply_e(i, &bu);
                for v in 0..s.dim() {
                    let bv = s.basis_vector(v);
                    match s.apply_f(i, &bv) {
                        Ok(fv) => t.check(s.pair(&eu, &bv) == s.pair(&bu, &fv), || {
                            format!("contravariance of e_{} at ({}, {})", i + 1, s.label(u), s.label(v))
                        }),
                        Err(Error::DepthExceeded { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok(())
}

fn random_factored_word(d: &RootDatum, r: &mut ChaCha8Rng) -> Word {
    let f = d.faces();
    let n = d.n();
    let param = |r: &mut ChaCha8Rng| frac(r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 }, r.gen_range(1..=2));
    let mut w = Word::empty();
    for _ in 0..r.gen_range(0..=2) {
        let i = r.gen_range(0..n);
        let c = param(r);
        w.0.push(Letter::Xminus(i, c));
    }
    let h = d.coroot(r.gen_range(0..n));
    let c = param(r);
    w.0.push(Letter::Torus(h, c));
    w = w.then(&Word::lift(&f.random_elt(r, 2)));
    if r.gen_bool(0.5) {
        w.0.push(Letter::Idem(f.random(r, 2)));
    }
    for _ in 0..r.gen_range(0..=2) {
        let i = r.gen_range(0..n);
        let c = param(r);
        w.0.push(Letter::Xplus(i, c));
    }
    w
}

fn theta_multiplicativity(t: &mut Tally) -> Result<()> {
    let mut r = rng(8);
    for (d, depth) in [(catalog::a2(), 5), (catalog::affine_a1(), 5), (catalog::hyperbolic(), 4)] {
        let n = d.n();
        let mut cache: HashMap<Vec<i64>, ModuleSlice> = HashMap::new();
        let mut evaluated = 0;
        for _ in 0..200 {
            if evaluated >= 40 {
                break;
            }
            let mut pick = || -> Vec<i64> { (0..d.dim()).map(|k| if k < n { r.gen_range(0..=1) } else { 0 }).collect() };
            let (l, m) = (pick(), pick());
            let lm: Vec<i64> = l.iter().zip(&m).map(|(a, b)| a + b).collect();
            for x in [&l, &m, &lm] {
                if !cache.contains_key(x) {
                    cache.insert(x.clone(), ModuleSlice::new(&d, x, depth)?);
                }
            }
            let w = random_factored_word(&d, &mut r);
            let th = |x: &Vec<i64>| cache[x].theta(&w);
            match (th(&l), th(&m), th(&lm)) {
                (Ok(a), Ok(b), Ok(c)) => {
                    evaluated += 1;
                    t.check(a.clone() * &b == c, || format!("θ on {w}: {a} * {b} vs {c} for {l:?} + {m:?}"));
                }
                (Err(Error::DepthExceeded { .. }), _, _) | (_, Err(Error::DepthExceeded { .. }), _) | (_, _, Err(Error::DepthExceeded { .. })) => {
                    t.skipped += 1
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return Err(e),
            }
        }
    }
    t.require(100, "theta multiplicativity");
    Ok(())
}

/// `x ∈ cone(G)` by exact LP: `Σ c_g g = s x` with `c >= 0`, `s > 0`.
fn cone_oracle(gens: &[Vec<i64>], x: &[i64]) -> bool {
    let n = gens.len() + 1;
    let mut p = LpProblem::new(n, false);
    for c in 0..x.len() {
        let mut row: Vec<Rat> = gens.iter().map(|g| rat(g[c])).collect();
        row.push(rat(-x[c]));
        p.push(row, Rel::Eq);
    }
    let mut s = vec![rat(0); n];
    s[n - 1] = rat(-1);
    p.push(s, Rel::Lt);
    matches!(lp_feasible(&p), LpResult::Feasible(_))
}

/// A functional vanishing exactly on the generators in `subset`, if any.
fn face_oracle(gens: &[Vec<i64>], rank: usize, subset: &[usize]) -> Option<Vec<i64>> {
    let mut p = LpProblem::new(2 * rank, false);
    for (i, g) in gens.iter().enumerate() {
        let row: Vec<Rat> = g.iter().map(|&v| rat(v)).chain(g.iter().map(|&v| rat(-v))).collect();
        if subset.contains(&i) {
            p.push(row, Rel::Eq);
        } else {
            p.push_gt(row);
        }
    }
    match lp_feasible(&p) {
        LpResult::Feasible(u) => {
            let u: Vec<i64> = u.iter().map(to_i64).collect();
            Some((0..rank).map(|c| u[c] - u[rank + c]).collect())
        }
        LpResult::Infeasible => None,
    }
}

fn box_points(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|p: Vec<i64>| (-radius..=radius).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// The `N`-span of the generators of a pointed cone, cut off at `phi <= bound`.
fn nspan_ball(gens: &[Vec<i64>], phi: &[i64], bound: i64) -> HashSet<Vec<i64>> {
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let mut seen = HashSet::from([vec![0i64; phi.len()]]);
    let mut frontier = vec![vec![0i64; phi.len()]];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| a + b).collect();
            if dot(phi, &q) <= bound && seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen
}

fn toric(t: &mut Tally) -> Result<()> {
    let mut r = rng(9);
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let mut cones = 0;
    while cones < 120 {
        let rank = r.gen_range(2..=4);
        let k = r.gen_range(1..=5);
        let gens: Vec<Vec<i64>> = (0..k).map(|_| (0..rank).map(|_| r.gen_range(-3..=3)).collect()).collect();
        let m = LatticeMonoid::new(rank, gens.clone())?;
        let pts = box_points(rank, if rank == 4 { 1 } else { 2 });
        cones += 1;

        // face lattice against LP certificates
        let expected: BTreeSet<Vec<usize>> = (0u32..1 << k)
            .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| face_oracle(&gens, rank, s).is_some())
            .collect();
        let got: BTreeSet<Vec<usize>> = m.faces().iter().map(|f| f.gens.clone()).collect();
        t.check(got == expected, || format!("faces of {gens:?}: {got:?} vs {expected:?}"));
        for f in m.faces() {
            for g in m.faces() {
                t.check(got.contains(&m.intersect(f, g).gens), || format!("face intersection in {gens:?}"));
            }
        }

        // monoid membership against enumeration, for pointed cones
        if let Some(phi) = face_oracle(&gens, rank, &[]) {
            let bound = pts.iter().map(|p| dot(&phi, p)).max().unwrap_or(0);
            let ball = nspan_ball(&gens, &phi, bound);
            let bad = pts.iter().find(|x| m.contains(x) != ball.contains(*x));
            t.check(bad.is_none(), || format!("membership in {gens:?} at {bad:?}"));
        }

        // Gordan round trip: saturating gives cone ∩ lattice with the same cone
        match m.saturation() {
            Ok(s) => {
                t.check(s.saturated && s.inequalities == m.inequalities && s.equations == m.equations, || {
                    format!("saturation of {gens:?} changed the cone")
                });
                let bad = pts.iter().find(|x| s.nspan_contains(x) != cone_oracle(&gens, x));
                t.check(bad.is_none(), || format!("saturation of {gens:?} at {bad:?}"));
                let again = LatticeMonoid::new(rank, s.generators.clone());
                t.check(again.map_or(true, |a| a.saturated && a.inequalities == s.inequalities), || {
                    format!("saturation of {gens:?} is not stable")
                });
            }
            Err(Error::Guard(_)) => t.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    t.require(100, "toric monoids");
    Ok(())
}
