use std::collections::{BTreeSet, HashSet};

use kmx::exact::{frac, lp_feasible, rat, LpProblem, LpResult, Rat, Rel};
use kmx::toric::LatticeMonoid;
use kmx::Error;
use proptest::prelude::*;

fn monoid(rank: usize, gens: &[&[i64]]) -> LatticeMonoid {
    LatticeMonoid::new(rank, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
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

/// A functional vanishing exactly on the generators in `subset`, if any:
/// the certificate that `subset` is the generator set of a face.
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
            let u: Vec<i64> = u.iter().map(kmx::exact::to_i64).collect();
            Some((0..rank).map(|c| u[c] - u[rank + c]).collect())
        }
        LpResult::Infeasible => None,
    }
}

fn box_points(rank: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|p: Vec<i64>| (-r..=r).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// The `N`-span of generators of a pointed cone, up to `phi <= bound` for a
/// functional `phi` positive on every generator.
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

#[test]
fn positive_quadrant() {
    let m = monoid(2, &[&[1, 0], &[0, 1]]);
    assert!(m.saturated);
    assert_eq!(m.faces().len(), 4);
    let whole = m.whole();
    assert!(m.in_relative_interior(&whole, &[1, 1]));
    assert!(!m.in_relative_interior(&whole, &[1, 0]));
    let zero = m.face_of(&[0, 0]).unwrap();
    assert!(m.hull_basis(&zero).is_empty());
    assert_eq!(m.dual_face(&zero).unwrap().inequalities, m.inequalities);
    let axis = m.face_by_generators(&[vec![1, 0]]).unwrap();
    let dual = m.dual_face(&axis).unwrap();
    assert!(dual.contains(&[-5, 0]) && dual.contains(&[-2, 3]) && !dual.contains(&[0, -1]));
    assert_eq!(dual.faces().len(), 2);
    let fs: Vec<Vec<Vec<i64>>> = dual.faces().iter().map(|f| dual.hull_basis(f)).collect();
    assert_eq!(fs, vec![vec![vec![1, 0]], vec![vec![1, 0], vec![0, 1]]]);
    assert_eq!(m.closure(&whole).len(), 4);
    assert_eq!(m.principal_open(&[1, 1]).unwrap(), vec![whole.clone()]);
    assert_eq!(m.principal_open(&[0, 0]).unwrap().len(), 4);
    assert!(matches!(m.principal_open(&[-1, 0]), Err(Error::NotInMonoid)));
    assert!(matches!(m.face_by_generators(&[vec![1, 1]]), Err(Error::NotAFace)));
}

#[test]
fn non_saturated_cone() {
    let m = monoid(2, &[&[1, 0], &[1, 2]]);
    assert!(!m.saturated);
    assert_eq!(m.witness, Some(vec![1, 1]));
    assert!(m.in_cone(&[1, 1]) && !m.contains(&[1, 1]));
    let s = m.saturation().unwrap();
    assert!(s.saturated && s.contains(&[1, 1]));
}

#[test]
fn subgroup_is_its_only_face() {
    let m = monoid(2, &[&[1, 0], &[-1, 0]]);
    assert!(m.saturated);
    assert_eq!(m.faces().len(), 1);
    assert!(m.contains(&[-4, 0]) && !m.contains(&[0, 1]));
}

#[test]
fn rank_mismatch_and_guards() {
    assert!(matches!(LatticeMonoid::new(2, vec![vec![1, 0, 0]]), Err(Error::RankMismatch { .. })));
    assert!(matches!(LatticeMonoid::new(9, vec![]), Err(Error::Guard(_))));
}

#[test]
fn torus_elements_and_idempotents() {
    let m = monoid(2, &[&[1, 0], &[0, 1]]);
    let axis = m.face_by_generators(&[vec![1, 0]]).unwrap();
    let t = m.mhat(&m.whole(), &[rat(2), rat(3)]).unwrap();
    let x = m.mhat_mul(&t, &m.idempotent(&axis));
    assert_eq!(x.face, axis);
    assert_eq!(x.chr.values, vec![rat(2)]);
    assert_eq!(m.mhat_eval(&x, &[3, 0]).unwrap(), rat(8));
    assert_eq!(m.mhat_eval(&x, &[3, 1]).unwrap(), rat(0));
    let other = m.face_by_generators(&[vec![0, 1]]).unwrap();
    let zero = m.face_of(&[0, 0]).unwrap();
    assert_eq!(m.mhat_mul(&m.idempotent(&axis), &m.idempotent(&other)), m.idempotent(&zero));
    assert_eq!(m.idempotents().len(), 4);
    assert!(matches!(m.mhat(&axis, &[rat(0), rat(1)]), Err(Error::ZeroTorusValue)));
}

fn arb_cone() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (2usize..=4, 1usize..=5).prop_flat_map(|(r, k)| {
        (Just(r), proptest::collection::vec(proptest::collection::vec(-3i64..=3, r), k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn cone_description_matches_lp((rank, gens) in arb_cone()) {
        let m = LatticeMonoid::new(rank, gens.clone()).unwrap();
        let r = if rank == 4 { 1 } else { 2 };
        for x in box_points(rank, r) {
            prop_assert_eq!(m.in_cone(&x), cone_oracle(&gens, &x), "{:?}", x);
        }
    }

    #[test]
    fn faces_match_lp_certificates((rank, gens) in arb_cone()) {
        let m = LatticeMonoid::new(rank, gens.clone()).unwrap();
        let expected: BTreeSet<Vec<usize>> = (0u32..1 << gens.len())
            .map(|mask| (0..gens.len()).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| face_oracle(&gens, rank, s).is_some())
            .collect();
        let got: BTreeSet<Vec<usize>> = m.faces().iter().map(|f| f.gens.clone()).collect();
        prop_assert_eq!(&got, &expected);
        // intersections of faces are faces; idempotents mirror them
        for f in m.faces() {
            for g in m.faces() {
                let h = m.intersect(f, g);
                prop_assert!(got.contains(&h.gens));
                prop_assert_eq!(m.mhat_mul(&m.idempotent(f), &m.idempotent(g)), m.idempotent(&h));
            }
        }
        prop_assert_eq!(m.idempotents().len(), m.faces().len());
    }

    #[test]
    fn gordan_round_trip((rank, gens) in arb_cone()) {
        let m = LatticeMonoid::new(rank, gens.clone()).unwrap();
        // a Hilbert basis beyond the generator guard is out of scope
        let s = match m.saturation() {
            Ok(s) => s,
            Err(Error::Guard(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(s.saturated);
        prop_assert_eq!(&s.inequalities, &m.inequalities);
        prop_assert_eq!(&s.equations, &m.equations);
        if s.generators.len() <= kmx::toric::MAX_GENERATORS {
            let again = LatticeMonoid::new(rank, s.generators.clone()).unwrap();
            prop_assert!(again.saturated);
            prop_assert_eq!(&again.inequalities, &s.inequalities);
        }
        let r = if rank == 4 { 1 } else { 2 };
        for x in box_points(rank, r) {
            // the saturation is cone ∩ lattice
            prop_assert_eq!(s.nspan_contains(&x), cone_oracle(&gens, &x));
            if s.contains(&x) {
                let owners = s.faces().iter().filter(|f| s.in_relative_interior(f, &x)).count();
                prop_assert_eq!(owners, 1, "relative interiors partition the monoid at {:?}", x);
                prop_assert_eq!(s.face_of(&x).unwrap().gens, s.faces().iter().find(|f| s.in_relative_interior(f, &x)).unwrap().gens.clone());
            }
        }
    }

    #[test]
    fn saturation_flag_matches_enumeration((rank, gens) in arb_cone()) {
        let m = LatticeMonoid::new(rank, gens.clone()).unwrap();
        // only pointed cones have a bounded brute force
        if let Some(phi) = face_oracle(&gens, rank, &[]) {
            let pts = box_points(rank, 2);
            let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
            let bound = pts.iter().map(|p| dot(&phi, p)).max().unwrap()
                .max(m.witness.as_ref().map_or(0, |w| dot(&phi, w)));
            let ball = nspan_ball(&gens, &phi, bound);
            for x in &pts {
                prop_assert_eq!(m.contains(x), ball.contains(x), "{:?}", x);
            }
            if let Some(w) = &m.witness {
                prop_assert!(cone_oracle(&gens, w) && !ball.contains(w));
            }
            if m.saturated {
                for x in pts.iter().filter(|x| cone_oracle(&gens, x)) {
                    prop_assert!(ball.contains(x));
                }
            }
        }
    }

    #[test]
    fn characters_multiply_on_common_faces((rank, gens) in arb_cone(), t in proptest::collection::vec((1i64..=3, 1i64..=3), 4)) {
        let m = LatticeMonoid::new(rank, gens.clone()).unwrap();
        let t: Vec<Rat> = t[..rank].iter().map(|&(p, q)| frac(p, q)).collect();
        let unit = m.mhat(&m.whole(), &t).unwrap();
        for f in m.faces() {
            let x = m.mhat_mul(&unit, &m.idempotent(f));
            for g in f.generator_vectors(&m) {
                let expected: Rat = g.iter().zip(&t).map(|(&e, s)| kmx::exact::rat_pow(s, e)).product();
                prop_assert_eq!(m.mhat_eval(&x, &g).unwrap(), expected);
            }
            for g in &gens {
                if !f.generator_vectors(&m).contains(g) && !m.in_face(f, g) {
                    prop_assert_eq!(m.mhat_eval(&x, g).unwrap(), rat(0));
                }
            }
        }
    }
}
