use std::collections::HashMap;

use kmx::catalog;
use kmx::exact::{frac, rat, Rat};
use kmx::weyl::{parse_word, Dominance, DOMINANT_STEP_CAP};
use kmx::{Error, RootDatum, Subset};
use proptest::prelude::*;

fn set(ix: &[usize]) -> Subset {
    Subset::from_one_based(ix)
}

fn rv(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

#[test]
fn affine_reflection_of_coroot() {
    let d = catalog::affine_a1();
    let w = d.weyl();
    assert_eq!(w.act_coweight_int(&w.simple(1), &[-1, 0, 0]), vec![-1, -2, 0]);
}

#[test]
fn braid_and_involution_in_a2() {
    let d = catalog::a2();
    let w = d.weyl();
    assert!(w.from_word(&[0, 0]).is_identity());
    let a = w.from_word(&[0, 1, 0]);
    assert_eq!(a, w.from_word(&[1, 0, 1]));
    assert_eq!(a.length(), 3);
    assert_eq!(a.word_string(), "1 2 1");
}

#[test]
fn affine_words_do_not_collapse() {
    let d = catalog::affine_a1();
    let w = d.weyl();
    assert_eq!(w.from_word(&[0, 1, 0, 1]).length(), 4);
}

#[test]
fn coset_representatives() {
    let d = catalog::hyperbolic();
    let w = d.weyl();
    assert_eq!(w.double_min(&w.simple(2), Subset::EMPTY, set(&[1, 2])), w.simple(2));

    let d = catalog::a2();
    let w = d.weyl();
    let (min, u) = w.coset_right(&w.from_word(&[0, 1]), set(&[2]));
    assert_eq!(min, w.simple(0));
    assert_eq!(u, w.simple(1));
}

#[test]
fn dominant_rep_certifies_outside_points() {
    let d = catalog::affine_a1();
    let w = d.weyl();
    match w.dominant_rep(&rv(&[1, -1, 0]), DOMINANT_STEP_CAP) {
        Dominance::NotInTitsCone { theta, .. } => assert_eq!(theta, set(&[1, 2])),
        other => panic!("expected a certificate, got {other:?}"),
    }
}

#[test]
fn dominant_rep_of_a2_weight() {
    let d = catalog::a2();
    let w = d.weyl();
    let lambda = rv(&[-1, 0]);
    match w.dominant_rep(&lambda, DOMINANT_STEP_CAP) {
        Dominance::Dominant { w: u, lambda_plus, facet } => {
            assert_eq!(w.act_weight(&u, &lambda_plus), lambda);
            assert_eq!(lambda_plus, rv(&[0, 1]));
            assert_eq!(facet, set(&[1]));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn antidominant_examples() {
    let d = catalog::hyperbolic();
    let w = d.weyl();
    let (dd, v) = w.antidominant_coweight(&[1, 1, 1]).unwrap();
    assert_eq!(dd[..3], [1, 1, 0]);
    assert_eq!(v, w.simple(2));
    assert_eq!(w.act_coweight_int(&v, &[1, 1, 1]), dd);
    let (dd, v) = w.antidominant_coweight(&[2, 2, 1]).unwrap();
    assert_eq!(dd, vec![2, 2, 1]);
    assert!(v.is_identity());
    assert!(matches!(w.antidominant_coweight(&[-1, 0, 0]), Err(Error::PreconditionViolated(_))));
}

#[test]
fn word_syntax() {
    assert_eq!(parse_word("1 2 1", 3).unwrap(), vec![0, 1, 0]);
    assert_eq!(parse_word("", 3).unwrap(), Vec::<usize>::new());
    assert!(parse_word("4", 3).is_err());
}

/// Breadth-first search over explicit reflection matrices. Visiting parents
/// in the order of their words and letters in increasing order yields the
/// lexicographically smallest reduced word of every element.
fn bfs_words(d: &RootDatum, radius: usize) -> HashMap<Vec<i64>, Vec<usize>> {
    let n = d.dim();
    let refl = |i: usize| -> Vec<i64> {
        let mut m = vec![0i64; n * n];
        for r in 0..n {
            m[r * n + r] = 1;
            m[r * n + i] -= d.alpha(i)[r];
        }
        m
    };
    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i * n + j] += a[i * n + k] * b[k * n + j];
                }
            }
        }
        out
    };
    let mut id = vec![0i64; n * n];
    (0..n).for_each(|i| id[i * n + i] = 1);
    let gens: Vec<Vec<i64>> = (0..d.n()).map(refl).collect();
    let mut seen: HashMap<Vec<i64>, Vec<usize>> = HashMap::from([(id.clone(), vec![])]);
    let mut level = vec![(id, vec![])];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (m, word) in &level {
            for (i, g) in gens.iter().enumerate() {
                let x = mul(m, g);
                if !seen.contains_key(&x) {
                    let mut wd: Vec<usize> = word.clone();
                    wd.push(i);
                    seen.insert(x.clone(), wd.clone());
                    next.push((x, wd));
                }
            }
        }
        level = next;
    }
    seen
}

#[test]
fn length_and_canonical_word_match_bfs() {
    for d in [catalog::a2(), catalog::affine_a1(), catalog::hyperbolic(), catalog::b2(), catalog::affine_a1_plus_a1()] {
        let w = d.weyl();
        let ball = bfs_words(&d, 6);
        for word in ball.values() {
            let e = w.from_word(word);
            assert_eq!(e.word(), *word, "lex-smallest reduced word");
        }
    }
}

fn arb_word(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..n, 0..=8)
}

proptest! {
    #[test]
    fn length_equals_bfs_distance(word in arb_word(3), which in 0usize..3) {
        let d = vec![catalog::hyperbolic(), catalog::affine_a1_plus_a1(), catalog::affine_a1()].swap_remove(which);
        let word: Vec<usize> = word.into_iter().filter(|&i| i < d.n()).collect();
        let w = d.weyl();
        let e = w.from_word(&word);
        let ball = bfs_words(&d, 8);
        let key: Vec<i64> = (0..d.dim()).flat_map(|r| (0..d.dim()).map(move |c| (r, c))).map(|(r, c)| e.entry(r, c)).collect();
        prop_assert_eq!(e.length(), ball[&key].len());
    }

    #[test]
    fn action_preserves_form(word in arb_word(3), lam in proptest::collection::vec(-3i64..=3, 4), mu in proptest::collection::vec(-3i64..=3, 4)) {
        let d = catalog::hyperbolic();
        let w = d.weyl();
        let e = w.from_word(&word);
        let (l, m) = (rv(&lam[..d.dim()]), rv(&mu[..d.dim()]));
        prop_assert_eq!(d.form(&w.act_weight(&e, &l), &w.act_weight(&e, &m)), d.form(&l, &m));
        // pairing between weights and coweights is invariant
        let h: Vec<i64> = mu[..d.dim()].to_vec();
        let wl = w.act_weight_int(&e, &lam[..d.dim()]);
        let wh = w.act_coweight_int(&e, &h);
        let pair = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
        prop_assert_eq!(pair(&wl, &wh), pair(&lam[..d.dim()], &h));
    }

    #[test]
    fn multiplication_is_consistent(a in arb_word(3), b in arb_word(3)) {
        let d = catalog::hyperbolic();
        let w = d.weyl();
        let (x, y) = (w.from_word(&a), w.from_word(&b));
        let mut ab = a.clone();
        ab.extend(&b);
        prop_assert_eq!(w.mul(&x, &y), w.from_word(&ab));
        prop_assert!(w.mul(&x, &w.inverse(&x)).is_identity());
        let desc = w.right_descents(&x);
        for i in 0..3 {
            prop_assert_eq!(desc.contains(i), w.mul(&x, &w.simple(i)).length() < x.length());
        }
    }

    #[test]
    fn dominant_rep_round_trips(word in arb_word(3), lam in proptest::collection::vec(0i64..=3, 3), den in 1i64..=3) {
        let d = catalog::hyperbolic();
        let w = d.weyl();
        let plus: Vec<Rat> = lam.iter().map(|&x| frac(x, den)).collect();
        let e = w.from_word(&word);
        let lambda = w.act_weight(&e, &plus);
        match w.dominant_rep(&lambda, DOMINANT_STEP_CAP) {
            Dominance::Dominant { w: u, lambda_plus, .. } => {
                prop_assert_eq!(&lambda_plus, &plus);
                prop_assert_eq!(w.act_weight(&u, &lambda_plus), lambda);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}
