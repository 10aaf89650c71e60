use std::collections::HashSet;

use kmx::catalog;
use kmx::exact::{rat, Rat};
use kmx::face::{Face, Faces};
use kmx::{Error, RootDatum, Subset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn set(ix: &[usize]) -> Subset {
    Subset::from_one_based(ix)
}

fn lambda(d: &RootDatum, k: usize) -> Vec<Rat> {
    d.fundamental(k).iter().map(|&x| rat(x)).collect()
}

/// A point in the relative interior of `w·R(Θ)`: `w` applied to the sum of
/// the fundamental weights outside `Θ`.
fn interior_point(f: &Faces, r: &Face) -> Vec<i64> {
    let d = f.datum();
    let mut p = vec![0i64; d.dim()];
    for i in (0..d.n()).filter(|&i| !r.theta.contains(i)) {
        p[i] = 1;
    }
    f.weyl().act_weight_int(&r.w, &p)
}

#[test]
fn normal_forms() {
    let d = catalog::hyperbolic();
    let f = d.faces();
    let w = d.weyl();
    assert_eq!(f.normalize(&w.simple(0), set(&[1, 2])).unwrap(), f.standard(set(&[1, 2])).unwrap());
    assert_eq!(f.normalize(&w.identity(), Subset::EMPTY).unwrap(), f.whole());
    assert!(matches!(f.normalize(&w.simple(2), set(&[1])), Err(Error::NotSpecial(_))));
}

#[test]
fn inclusion_examples() {
    let d = catalog::hyperbolic();
    let f = d.faces();
    let w = d.weyl();
    let r12 = f.standard(set(&[1, 2])).unwrap();
    let s3r12 = f.act(&w.simple(2), &r12);
    assert!(f.includes(&s3r12, &f.edge()));
    assert!(!f.includes(&r12, &s3r12));
    assert!(f.includes(&f.whole(), &s3r12));
}

#[test]
fn intersection_examples() {
    let d = catalog::hyperbolic();
    let f = d.faces();
    let w = d.weyl();
    let r12 = f.standard(set(&[1, 2])).unwrap();
    let r123 = f.standard(set(&[1, 2, 3])).unwrap();
    assert_eq!(f.intersect(&r12, &r123).unwrap(), r123);
    let s3r12 = f.act(&w.simple(2), &r12);
    assert_eq!(f.functional(&r12).iter().zip(f.functional(&s3r12)).map(|(a, b)| a + b).collect::<Vec<_>>(), vec![2, 2, 1]);
    assert_eq!(f.intersect(&r12, &s3r12).unwrap(), r123);
    assert_eq!(f.intersect(&s3r12, &f.whole()).unwrap(), s3r12);
}

#[test]
fn action_examples() {
    let d = catalog::hyperbolic();
    let f = d.faces();
    let w = d.weyl();
    let r12 = f.standard(set(&[1, 2])).unwrap();
    assert_eq!(f.act(&w.simple(0), &r12), r12);
    assert_ne!(f.act(&w.simple(2), &r12), r12);
    assert_eq!(f.act(&w.from_word(&[2, 0, 1]), &f.whole()), f.whole());
}

#[test]
fn smallest_faces_of_points() {
    let d = catalog::hyperbolic();
    let f = d.faces();
    let r12 = f.standard(set(&[1, 2])).unwrap();
    assert_eq!(f.face_of_point(&lambda(&d, 2)).unwrap(), r12);
    assert_eq!(f.face_of_point(&[rat(0), rat(0), rat(0)]).unwrap(), f.edge());
    assert_eq!(f.face_of_point(&lambda(&d, 0)).unwrap(), f.whole());
    assert!(f.in_relative_interior(&r12, &lambda(&d, 2)).unwrap());
    assert!(f.centralizes(&r12, &d.weyl().simple(0)));
    assert!(!f.centralizes(&r12, &d.weyl().simple(2)));
    for face in [f.whole(), r12.clone(), f.edge()] {
        assert!(f.contains(&face, &[rat(0), rat(0), rat(0)]).unwrap());
    }
    let at = catalog::affine_a1();
    let outside: Vec<Rat> = vec![rat(1), rat(-1), rat(0)];
    assert!(matches!(at.faces().face_of_point(&outside), Err(Error::NotInTitsCone(_))));
}

#[test]
fn parse_face_syntax() {
    let d = catalog::hyperbolic();
    let f = d.faces();
    let a = f.parse("w=3 1;theta=1,2").unwrap();
    let b = f.parse(r#"{"w":"3","theta":[1,2]}"#).unwrap();
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a.record()).unwrap(), r#"{"w":"3","theta":[1,2]}"#);
    assert!(f.parse("w=;theta=").unwrap() == f.whole());
    assert!(matches!(f.parse("w=4;theta=1,2"), Err(Error::Parse(_))));
    assert!(matches!(f.parse("w=1;theta=3"), Err(Error::NotSpecial(_))));
}

#[test]
fn face_counts_of_finite_and_affine_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = catalog::a2();
    let f = d.faces();
    let seen: HashSet<Face> = (0..1000).map(|_| f.random(&mut rng, 6)).collect();
    assert_eq!(seen.len(), 1);
    for d in [catalog::affine_a1(), catalog::affine_a1_plus_a1()] {
        let f = d.faces();
        let seen: HashSet<Face> = (0..1000).map(|_| f.random(&mut rng, 6)).collect();
        assert_eq!(seen.len(), 2, "{seen:?}");
    }
}

fn datum(which: usize) -> RootDatum {
    vec![catalog::hyperbolic(), catalog::affine_a1_plus_a1(), catalog::rank2_indefinite(), catalog::affine_a1()].swap_remove(which)
}

fn face_from(f: &Faces, word: &[usize], pick: usize) -> Face {
    let d = f.datum();
    let word: Vec<usize> = word.iter().map(|&i| i % d.n()).collect();
    let sp = d.special_sets();
    f.normalize(&f.weyl().from_word(&word), sp[pick % sp.len()]).unwrap()
}

fn arb_word() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..3, 0..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inclusion_matches_interior_points(which in 0usize..4, a in arb_word(), b in arb_word(), i in 0usize..8, j in 0usize..8) {
        let d = datum(which);
        let f = d.faces();
        let (r, s) = (face_from(&f, &a, i), face_from(&f, &b, j));
        // S ⊆ R exactly when a relative interior point of S lies in R
        prop_assert_eq!(f.includes(&r, &s), f.contains_int(&r, &interior_point(&f, &s)));
        let p = interior_point(&f, &s);
        let p: Vec<Rat> = p.iter().map(|&x| rat(x)).collect();
        prop_assert_eq!(f.face_of_point(&p).unwrap(), s);
    }

    #[test]
    fn intersection_laws(which in 0usize..4, a in arb_word(), b in arb_word(), c in arb_word(), u in arb_word(), i in 0usize..8, j in 0usize..8, k in 0usize..8) {
        let d = datum(which);
        let f = d.faces();
        let (r, s, t) = (face_from(&f, &a, i), face_from(&f, &b, j), face_from(&f, &c, k));
        let rs = f.intersect(&r, &s).unwrap();
        prop_assert_eq!(&rs, &f.intersect(&s, &r).unwrap());
        prop_assert_eq!(&f.intersect(&r, &r).unwrap(), &r);
        prop_assert_eq!(f.intersect(&rs, &t).unwrap(), f.intersect(&r, &f.intersect(&s, &t).unwrap()).unwrap());
        prop_assert_eq!(f.includes(&r, &s), f.intersect(&r, &s).unwrap() == s);
        prop_assert!(f.includes(&r, &rs) && f.includes(&s, &rs));
        // greatest lower bound
        prop_assert_eq!(f.includes(&r, &t) && f.includes(&s, &t), f.includes(&rs, &t));
        let u = f.weyl().from_word(&u.iter().map(|&x| x % d.n()).collect::<Vec<_>>());
        prop_assert_eq!(f.act(&u, &rs), f.intersect(&f.act(&u, &r), &f.act(&u, &s)).unwrap());
        let (x, y) = (d.special_sets()[i % d.special_sets().len()], d.special_sets()[j % d.special_sets().len()]);
        prop_assert_eq!(f.intersect(&f.standard(x).unwrap(), &f.standard(y).unwrap()).unwrap(), f.standard(x.union(y)).unwrap());
    }

    #[test]
    fn membership_is_multiplicative(which in 0usize..4, a in arb_word(), b in arb_word(), c in arb_word(), i in 0usize..8,
                                    l in proptest::collection::vec(0i64..=2, 3), m in proptest::collection::vec(0i64..=2, 3)) {
        let d = datum(which);
        let f = d.faces();
        let r = face_from(&f, &a, i);
        let pad = |v: &[i64]| { let mut x = vec![0i64; d.dim()]; x[..d.n()].copy_from_slice(&v[..d.n()]); x };
        let wl = f.weyl().act_weight_int(&f.weyl().from_word(&b.iter().map(|&x| x % d.n()).collect::<Vec<_>>()), &pad(&l));
        let wm = f.weyl().act_weight_int(&f.weyl().from_word(&c.iter().map(|&x| x % d.n()).collect::<Vec<_>>()), &pad(&m));
        let sum: Vec<i64> = wl.iter().zip(&wm).map(|(x, y)| x + y).collect();
        prop_assert_eq!(f.contains_int(&r, &sum), f.contains_int(&r, &wl) && f.contains_int(&r, &wm));
    }

    #[test]
    fn restriction_to_parabolic_faces(which in 0usize..4, a in arb_word(), i in 0usize..8, mask in 0u32..8) {
        let d = datum(which);
        let f = d.faces();
        let r = face_from(&f, &a, i);
        let j = Subset(mask & ((1 << d.n()) - 1));
        let jinf = d.infinite_part(j);
        let base = f.standard(jinf).unwrap();
        let stab = r.theta.union(d.perp(r.theta));
        let expected = r.theta.is_subset_of(jinf) && f.weyl().in_double_parabolic(&r.w, jinf, stab);
        prop_assert_eq!(f.includes(&r, &base), expected);
    }
}
