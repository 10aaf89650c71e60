use kmx::catalog;
use kmx::exact::{frac, rat, Rat};
use kmx::face::Face;
use kmx::wmon::{Image, NhatElt, Wmon, WmonElt};
use kmx::{RootDatum, Subset};
use proptest::prelude::*;

fn set(ix: &[usize]) -> Subset {
    Subset::from_one_based(ix)
}

#[test]
fn normalization_examples() {
    let d = catalog::hyperbolic();
    let m = d.wmon();
    let (f, w) = (d.faces(), d.weyl());
    let r12 = f.standard(set(&[1, 2])).unwrap();
    assert_eq!(m.normalize(&w.simple(0), &r12), m.idempotent(&r12));
    let s = w.from_word(&[2, 0, 1]);
    assert_eq!(m.normalize(&s, &f.whole()).sigma, s);

    let at = catalog::affine_a1();
    let m = at.wmon();
    let c = at.faces().edge();
    for word in [vec![0], vec![1, 0], vec![0, 1, 0, 1]] {
        assert_eq!(m.normalize(&at.weyl().from_word(&word), &c), m.idempotent(&c));
    }
}

#[test]
fn idempotents_of_translated_faces_have_trivial_sigma() {
    let d = catalog::hyperbolic();
    let m = d.wmon();
    let r = d.faces().act(&d.weyl().from_word(&[2, 1, 0]), &d.faces().standard(set(&[1, 2])).unwrap());
    assert!(m.is_idempotent(&m.idempotent(&r)));
    assert!(m.idempotent(&r).sigma.is_identity());
}

#[test]
fn multiplication_examples() {
    let d = catalog::hyperbolic();
    let m = d.wmon();
    let (f, w) = (d.faces(), d.weyl());
    let (s, t) = (w.from_word(&[0, 2]), w.from_word(&[1]));
    assert_eq!(m.mul(&m.unit(&s), &m.unit(&t)), m.unit(&w.mul(&s, &t)));
    let r12 = f.standard(set(&[1, 2])).unwrap();
    let x = m.normalize(&w.simple(2), &r12);
    let prod = m.mul(&x, &m.idempotent(&r12));
    let edge = f.standard(set(&[1, 2, 3])).unwrap();
    assert_eq!(prod, m.idempotent(&edge));
    let e = m.idempotent(&r12);
    assert_eq!(m.mul(&e, &e), e);
}

#[test]
fn inversion_examples() {
    let d = catalog::hyperbolic();
    let m = d.wmon();
    let (f, w) = (d.faces(), d.weyl());
    let r12 = f.standard(set(&[1, 2])).unwrap();
    assert_eq!(m.inverse(&m.idempotent(&r12)), m.idempotent(&r12));
    let s = w.from_word(&[0, 2, 1]);
    assert_eq!(m.inverse(&m.unit(&s)), m.unit(&w.inverse(&s)));
    let x = m.normalize(&w.simple(2), &r12);
    let xi = m.inverse(&x);
    assert_eq!(xi.face, f.act(&w.simple(2), &r12));
    assert_eq!(m.mul(&m.mul(&x, &xi), &x), x);
    assert_eq!(m.mul(&m.mul(&xi, &x), &xi), xi);
}

#[test]
fn action_examples() {
    let d = catalog::hyperbolic();
    let m = d.wmon();
    let (f, w) = (d.faces(), d.weyl());
    let l1: Vec<Rat> = d.fundamental(0).iter().map(|&x| rat(x)).collect();
    let expected: Vec<Rat> = l1.iter().zip(d.alpha(0)).map(|(x, &a)| x - rat(a)).collect();
    assert_eq!(m.apply(&m.unit(&w.simple(0)), &l1).unwrap(), Image::Weight(expected));
    let l3: Vec<Rat> = d.fundamental(2).iter().map(|&x| rat(x)).collect();
    assert_eq!(m.apply(&m.idempotent(&f.edge()), &l3).unwrap(), Image::Zero);
    let zero = vec![rat(0); 3];
    let r12 = f.standard(set(&[1, 2])).unwrap();
    assert_eq!(m.apply(&m.idempotent(&r12), &zero).unwrap(), Image::Weight(zero));
}

#[test]
fn torus_monoid_examples() {
    let at = catalog::affine_a1();
    let m = at.wmon();
    let c = at.faces().edge();
    let t = m.torus_coweight(&at.coroot(0), &frac(5, 3));
    let x = m.that(&t, &c).unwrap();
    assert_eq!(x.t.basis, vec![vec![0, 0, 1]]);
    assert!(x.t.is_trivial());
    assert_eq!(x, m.that(&m.torus_one(), &c).unwrap());

    let d = catalog::hyperbolic();
    let m = d.wmon();
    let f = d.faces();
    let r = f.standard(set(&[1, 2])).unwrap();
    let s = f.act(&d.weyl().simple(2), &r);
    let one = m.torus_one();
    let prod = m.that_mul(&m.that(&one, &r).unwrap(), &m.that(&one, &s).unwrap());
    assert_eq!(prod, m.that(&one, &f.intersect(&r, &s).unwrap()).unwrap());
    assert!(m.that(&[rat(1), rat(0), rat(1)], &r).is_err());
}

#[test]
fn simple_lift_squares_to_torus_element() {
    for d in [catalog::a2(), catalog::affine_a1(), catalog::hyperbolic()] {
        let m = d.wmon();
        let w = d.weyl();
        let one = m.torus_one();
        let whole = d.faces().whole();
        for i in 0..d.n() {
            let n = m.nhat(&whole, &one, &w.simple(i)).unwrap();
            let sq = m.nhat_mul(&n, &n);
            let expected = m.nhat(&whole, &m.torus_coweight(&d.coroot(i), &rat(-1)), &w.identity()).unwrap();
            assert_eq!(sq, expected);
        }
    }
}

#[test]
fn affine_weyl_monoid_is_group_with_zero() {
    let at = catalog::affine_a1();
    let m = at.wmon();
    let zero = m.idempotent(&at.faces().edge());
    for word in [vec![], vec![0], vec![0, 1], vec![1, 0, 1]] {
        let u = m.unit(&at.weyl().from_word(&word));
        assert_eq!(m.mul(&u, &zero), zero);
        assert_eq!(m.mul(&zero, &u), zero);
    }
}

fn datum(which: usize) -> RootDatum {
    vec![catalog::hyperbolic(), catalog::affine_a1_plus_a1(), catalog::affine_a1(), catalog::rank2_indefinite()].swap_remove(which)
}

fn elt(m: &Wmon, d: &RootDatum, face_word: &[usize], pick: usize, sigma: &[usize]) -> WmonElt {
    let f = m.faces();
    let sp = d.special_sets();
    let fw: Vec<usize> = face_word.iter().map(|&i| i % d.n()).collect();
    let face: Face = f.normalize(&d.weyl().from_word(&fw), sp[pick % sp.len()]).unwrap();
    let sw: Vec<usize> = sigma.iter().map(|&i| i % d.n()).collect();
    m.normalize(&d.weyl().from_word(&sw), &face)
}

fn nhat(m: &Wmon, d: &RootDatum, x: &WmonElt, t: &[(i64, i64)]) -> NhatElt {
    let t: Vec<Rat> = t[..d.dim()].iter().map(|&(p, q)| frac(p, q)).collect();
    m.nhat(&x.face, &t, &x.sigma).unwrap()
}

fn arb_word() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..3, 0..=5)
}

fn arb_torus() -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((prop_oneof![-3i64..=-1, 1i64..=3], 1i64..=3), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inverse_monoid_laws(which in 0usize..4, fa in arb_word(), sa in arb_word(), fb in arb_word(), sb in arb_word(),
                           fc in arb_word(), sc in arb_word(), i in 0usize..8, j in 0usize..8, k in 0usize..8) {
        let d = datum(which);
        let m = d.wmon();
        let (x, y, z) = (elt(&m, &d, &fa, i, &sa), elt(&m, &d, &fb, j, &sb), elt(&m, &d, &fc, k, &sc));
        prop_assert_eq!(m.mul(&m.mul(&x, &y), &z), m.mul(&x, &m.mul(&y, &z)));
        prop_assert_eq!(&m.mul(&m.one(), &x), &x);
        prop_assert_eq!(&m.mul(&x, &m.one()), &x);
        let xi = m.inverse(&x);
        prop_assert_eq!(&m.mul(&m.mul(&x, &xi), &x), &x);
        prop_assert_eq!(&m.mul(&m.mul(&xi, &x), &xi), &xi);
        prop_assert_eq!(&m.inverse(&xi), &x);
        // idempotents commute and mirror face intersection
        let (e, g) = (m.idempotent(&x.face), m.idempotent(&y.face));
        prop_assert_eq!(m.mul(&e, &g), m.mul(&g, &e));
        prop_assert_eq!(m.mul(&e, &g), m.idempotent(&m.faces().intersect(&x.face, &y.face).unwrap()));
        prop_assert!(m.is_idempotent(&m.mul(&x, &xi)));
        prop_assert_eq!(m.is_idempotent(&x), m.mul(&x, &x) == x);
        // unit regularity: (R, σ) = σ · e(σ⁻¹R)
        let inv = d.weyl().inverse(&x.sigma);
        prop_assert_eq!(&m.mul(&m.unit(&x.sigma), &m.idempotent(&m.faces().act(&inv, &x.face))), &x);
        prop_assert_eq!(m.is_unit(&x), m.mul(&x, &xi) == m.one());
    }

    #[test]
    fn action_is_a_monoid_action(which in 0usize..4, fa in arb_word(), sa in arb_word(), fb in arb_word(), sb in arb_word(),
                                 i in 0usize..8, j in 0usize..8, lam in proptest::collection::vec(0i64..=2, 3), lw in arb_word()) {
        let d = datum(which);
        let m = d.wmon();
        let (x, y) = (elt(&m, &d, &fa, i, &sa), elt(&m, &d, &fb, j, &sb));
        let mut dom = vec![0i64; d.dim()];
        dom[..d.n()].copy_from_slice(&lam[..d.n()]);
        let lw: Vec<usize> = lw.iter().map(|&i| i % d.n()).collect();
        let point: Vec<Rat> = d.weyl().act_weight_int(&d.weyl().from_word(&lw), &dom).iter().map(|&v| rat(v)).collect();
        let step = match m.apply(&y, &point).unwrap() {
            Image::Weight(v) => m.apply(&x, &v).unwrap(),
            Image::Zero => Image::Zero,
        };
        prop_assert_eq!(m.apply(&m.mul(&x, &y), &point).unwrap(), step);
    }

    #[test]
    fn kappa_is_a_homomorphism(which in 0usize..4, fa in arb_word(), sa in arb_word(), fb in arb_word(), sb in arb_word(),
                               fc in arb_word(), sc in arb_word(), i in 0usize..8, j in 0usize..8, k in 0usize..8,
                               ta in arb_torus(), tb in arb_torus(), tc in arb_torus()) {
        let d = datum(which);
        let m = d.wmon();
        let (x, y, z) = (elt(&m, &d, &fa, i, &sa), elt(&m, &d, &fb, j, &sb), elt(&m, &d, &fc, k, &sc));
        let (nx, ny, nz) = (nhat(&m, &d, &x, &ta), nhat(&m, &d, &y, &tb), nhat(&m, &d, &z, &tc));
        prop_assert_eq!(m.kappa(&m.nhat_mul(&nx, &ny)), m.mul(&x, &y));
        prop_assert_eq!(m.nhat_mul(&m.nhat_mul(&nx, &ny), &nz), m.nhat_mul(&nx, &m.nhat_mul(&ny, &nz)));
        let face = m.faces().act(&x.sigma, &y.face);
        let conj = m.nhat_conj_idem(&x.sigma, &y.face);
        prop_assert_eq!(conj, m.nhat(&face, &m.torus_one(), &d.weyl().identity()).unwrap());
    }

    #[test]
    fn torus_monoid_is_commutative(which in 0usize..4, fa in arb_word(), fb in arb_word(), i in 0usize..8, j in 0usize..8,
                                   ta in arb_torus(), tb in arb_torus(), u in arb_word()) {
        let d = datum(which);
        let m = d.wmon();
        let (x, y) = (elt(&m, &d, &fa, i, &[]), elt(&m, &d, &fb, j, &[]));
        let t = |v: &[(i64, i64)]| v[..d.dim()].iter().map(|&(p, q)| frac(p, q)).collect::<Vec<Rat>>();
        let (a, b) = (m.that(&t(&ta), &x.face).unwrap(), m.that(&t(&tb), &y.face).unwrap());
        prop_assert_eq!(m.that_mul(&a, &b), m.that_mul(&b, &a));
        let u = d.weyl().from_word(&u.iter().map(|&i| i % d.n()).collect::<Vec<_>>());
        prop_assert_eq!(m.that_act(&u, &m.that_mul(&a, &b)), m.that_mul(&m.that_act(&u, &a), &m.that_act(&u, &b)));
    }
}
