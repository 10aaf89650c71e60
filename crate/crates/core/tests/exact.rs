use kmx::exact::*;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn r(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

/// Determinantal divisors: d_1 ... d_k = gcd of all k x k minors.
fn invariant_factors_oracle(m: &[Vec<i64>]) -> Vec<Int> {
    let (rows, cols) = (m.len(), m[0].len());
    let mut divisors = vec![Int::one()];
    for k in 1..=rows.min(cols) {
        let mut g = Int::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&IntMat::from_i64(&minor).det());
            }
        }
        divisors.push(g);
    }
    let mut out = Vec::new();
    for k in 1..divisors.len() {
        if divisors[k].is_zero() {
            out.push(Int::zero());
        } else {
            out.push(&divisors[k] / &divisors[k - 1]);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn check_smith(m: &[Vec<i64>]) {
    let a = IntMat::from_i64(m);
    let s = smith(&a);
    assert_eq!(s.u.mul(&a).mul(&s.v), s.d, "U M V = D");
    assert!(s.u.det().abs().is_one() && s.v.det().abs().is_one(), "unimodular");
    let diag = s.diagonal();
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j {
                assert!(s.d[(i, j)].is_zero());
            }
        }
    }
    for w in diag.windows(2) {
        assert!(!w[0].is_negative());
        if !w[0].is_zero() {
            assert!(w[1].is_multiple_of(&w[0]), "divisibility chain {diag:?}");
        } else {
            assert!(w[1].is_zero());
        }
    }
    assert_eq!(diag, invariant_factors_oracle(m));
}

#[test]
fn solve_identity() {
    let s = rat_solve(&RatMat::identity(2), &r(&[3, 5])).unwrap();
    assert_eq!(s.particular, r(&[3, 5]));
    assert!(s.kernel.is_empty());
}

#[test]
fn solve_affine_kernel() {
    let s = rat_solve(&RatMat::from_i64(&[vec![2, -2], vec![-2, 2]]), &r(&[0, 0])).unwrap();
    assert_eq!(s.kernel, vec![r(&[1, 1])]);
}

#[test]
fn solve_inconsistent() {
    assert!(rat_solve(&RatMat::from_i64(&[vec![1, 1], vec![1, 1]]), &r(&[1, 2])).is_none());
}

#[test]
fn smith_examples() {
    assert_eq!(smith(&IntMat::identity(2)).diagonal(), vec![Int::one(), Int::one()]);
    assert_eq!(smith(&IntMat::from_i64(&[vec![2, 0], vec![0, 3]])).diagonal(), vec![int(1), int(6)]);
    assert_eq!(smith(&IntMat::from_i64(&[vec![2, -2], vec![-2, 2]])).diagonal(), vec![int(2), int(0)]);
    check_smith(&[vec![2, 0], vec![0, 3]]);
    check_smith(&[vec![2, -2], vec![-2, 2]]);
    check_smith(&[vec![0, 0, 0], vec![0, 4, 6]]);
}

fn lp(rows: &[Vec<i64>], rel: Rel, strict: bool) -> LpResult {
    let mut p = LpProblem::new(rows[0].len(), strict);
    for row in rows {
        p.push(r(row), rel);
    }
    lp_feasible(&p)
}

fn neg(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

#[test]
fn lp_examples() {
    let a2 = vec![vec![2, -1], vec![-1, 2]];
    assert_eq!(lp(&neg(&a2), Rel::Lt, true), LpResult::Feasible(vec![int(1), int(1)]));
    let at1 = vec![vec![2, -2], vec![-2, 2]];
    assert_eq!(lp(&at1, Rel::Eq, true), LpResult::Feasible(vec![int(1), int(1)]));
    assert_eq!(lp(&a2, Rel::Lt, true), LpResult::Infeasible);
}

#[test]
fn hnf_is_canonical() {
    let a = hnf_rows(&[vec![2, 4], vec![1, 3]]);
    let b = hnf_rows(&[vec![1, 3], vec![1, 1], vec![3, 7]]);
    assert_eq!(a, b);
    assert_eq!(int_kernel(&[vec![1, 1, 0]], 3), vec![vec![1, -1, 0], vec![0, 0, 1]]);
}

#[test]
fn lattice_character_restricts() {
    let chr = LatticeChar::from_ambient(vec![vec![1, 0], vec![0, 1]], &[rat(2), frac(1, 3)]);
    assert_eq!(chr.eval(&[2, -1]).unwrap(), rat(12));
    let sub = chr.restrict(&[vec![1, 1]]);
    assert_eq!(sub.values, vec![frac(2, 3)]);
}

fn unimodular(ops: &[(usize, usize, i64)], n: usize) -> IntMat {
    let mut m = IntMat::identity(n);
    for &(a, b, k) in ops {
        if a % n != b % n {
            m.add_row_multiple(a % n, b % n, &int(k));
        }
    }
    m
}

fn grid_feasible(a: &[Vec<i64>], rel: Rel) -> bool {
    let n = a.len();
    let mut u = vec![1i64; n];
    loop {
        let ok = a.iter().all(|row| {
            let s: i64 = row.iter().zip(&u).map(|(x, y)| x * y).sum();
            match rel {
                Rel::Le => s <= 0,
                Rel::Eq => s == 0,
                Rel::Lt => s < 0,
            }
        });
        if ok {
            return true;
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            if u[pos] < 8 {
                u[pos] += 1;
                u[pos + 1..].iter_mut().for_each(|x| *x = 1);
                break;
            }
        }
    }
}

proptest! {
    #[test]
    fn smith_invariant_under_unimodular(
        rows in 1usize..5, cols in 1usize..5,
        entries in proptest::collection::vec(-5i64..=5, 25),
        lops in proptest::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..6),
        rops in proptest::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..6),
    ) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * 5..i * 5 + cols].to_vec()).collect();
        check_smith(&m);
        let a = IntMat::from_i64(&m);
        let b = unimodular(&lops, rows).mul(&a).mul(&unimodular(&rops, cols));
        prop_assert_eq!(smith(&a).diagonal(), smith(&b).diagonal());
    }

    #[test]
    fn lp_matches_grid_search(n in 2usize..=3, off in proptest::collection::vec(-3i64..=0, 6)) {
        let mut a = vec![vec![2i64; n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in 0..n {
                if i < j {
                    let (x, y) = (off[k], if off[k] == 0 { 0 } else { off[k + 3].min(-1) });
                    a[i][j] = x;
                    a[j][i] = y;
                    k += 1;
                }
            }
        }
        for rel in [Rel::Le, Rel::Eq, Rel::Lt] {
            let got = matches!(lp(&a, rel, true), LpResult::Feasible(_));
            prop_assert_eq!(got, grid_feasible(&a, rel), "{:?} {:?}", a, rel);
            if let LpResult::Feasible(u) = lp(&a, rel, true) {
                let mut p = LpProblem::new(n, true);
                for row in &a { p.push(r(row), rel); }
                prop_assert!(p.satisfied_by(&u));
            }
        }
        let gt = matches!(lp(&neg(&a), Rel::Lt, true), LpResult::Feasible(_));
        prop_assert_eq!(gt, grid_feasible(&neg(&a), Rel::Lt));
    }
}
