use num_traits::{One, Signed, Zero};

use super::{primitive_integer, Int, Rat};

/// Relation of one homogeneous row `m_i . u` against zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Lt,
}

/// Homogeneous feasibility problem `M u (rel) 0`, optionally with `u > 0`.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub rows: Vec<Vec<Rat>>,
    pub rel: Vec<Rel>,
    pub strict_positive: bool,
    pub nvars: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    /// A primitive integer certificate.
    Feasible(Vec<Int>),
    Infeasible,
}

impl LpProblem {
    pub fn new(nvars: usize, strict_positive: bool) -> Self {
        LpProblem { rows: Vec::new(), rel: Vec::new(), strict_positive, nvars }
    }

    pub fn push(&mut self, row: Vec<Rat>, rel: Rel) {
        assert_eq!(row.len(), self.nvars);
        self.rows.push(row);
        self.rel.push(rel);
    }

    /// Pushes `row . u > 0`, stored as `-row . u < 0`.
    pub fn push_gt(&mut self, row: Vec<Rat>) {
        self.push(row.into_iter().map(|x| -x).collect(), Rel::Lt);
    }

    /// Checks a candidate against the problem exactly.
    pub fn satisfied_by(&self, u: &[Int]) -> bool {
        if self.strict_positive && !u.iter().all(|x| x.is_positive()) {
            return false;
        }
        if u.iter().any(|x| x.is_negative()) {
            return false;
        }
        self.rows.iter().zip(&self.rel).all(|(row, rel)| {
            let s: Rat = row.iter().zip(u).map(|(a, b)| a * Rat::from_integer(b.clone())).sum();
            match rel {
                Rel::Le => !s.is_positive(),
                Rel::Eq => s.is_zero(),
                Rel::Lt => s.is_negative(),
            }
        })
    }
}

/// Exact feasibility by two-phase simplex with Bland's rule.
///
/// The system is homogeneous, so `u > 0` is replaced by `u >= 1` and every
/// strict row `m . u < 0` by `m . u <= -1`; a solution of either form scales
/// to a solution of the other.
pub fn lp_feasible(p: &LpProblem) -> LpResult {
    let n = p.nvars;
    let shift = if p.strict_positive { Rat::one() } else { Rat::zero() };
    // rows as (coefficients, sense, rhs) after substituting u = shift + x
    let mut cons: Vec<(Vec<Rat>, Sense, Rat)> = Vec::new();
    for (row, rel) in p.rows.iter().zip(&p.rel) {
        let offset: Rat = row.iter().map(|a| a * &shift).sum();
        let (sense, base) = match rel {
            Rel::Le => (Sense::Le, Rat::zero()),
            Rel::Eq => (Sense::Eq, Rat::zero()),
            Rel::Lt => (Sense::Le, -Rat::one()),
        };
        cons.push((row.clone(), sense, base - offset));
    }
    let x = match phase_one(n, cons) {
        Some(x) => x,
        None => return LpResult::Infeasible,
    };
    let u: Vec<Rat> = x.into_iter().map(|v| v + &shift).collect();
    let cert = if u.iter().all(|v| v.is_zero()) { vec![Int::zero(); n] } else { primitive_integer(&u) };
    debug_assert!(p.satisfied_by(&cert));
    LpResult::Feasible(cert)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sense {
    Le,
    Ge,
    Eq,
}

/// Finds `x >= 0` with the given constraints, or `None`.
fn phase_one(n: usize, mut cons: Vec<(Vec<Rat>, Sense, Rat)>) -> Option<Vec<Rat>> {
    for c in cons.iter_mut() {
        if c.2.is_negative() {
            c.0.iter_mut().for_each(|a| *a = -a.clone());
            c.2 = -c.2.clone();
            c.1 = match c.1 {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }
    let m = cons.len();
    let nslack = cons.iter().filter(|c| c.1 != Sense::Eq).count();
    let nart = cons.iter().filter(|c| c.1 != Sense::Le).count();
    let width = n + nslack + nart;
    let mut tab = vec![vec![Rat::zero(); width + 1]; m];
    let mut basis = vec![0usize; m];
    let (mut s, mut a) = (n, n + nslack);
    for (i, (row, sense, rhs)) in cons.iter().enumerate() {
        tab[i][..n].clone_from_slice(row);
        tab[i][width] = rhs.clone();
        match sense {
            Sense::Le => {
                tab[i][s] = Rat::one();
                basis[i] = s;
                s += 1;
            }
            Sense::Ge => {
                tab[i][s] = -Rat::one();
                s += 1;
                tab[i][a] = Rat::one();
                basis[i] = a;
                a += 1;
            }
            Sense::Eq => {
                tab[i][a] = Rat::one();
                basis[i] = a;
                a += 1;
            }
        }
    }
    let art_start = n + nslack;
    // objective: minimize the sum of artificials; reduced costs in `obj`
    let mut obj = vec![Rat::zero(); width + 1];
    for j in art_start..width {
        obj[j] = Rat::one();
    }
    for i in 0..m {
        if basis[i] >= art_start {
            for j in 0..=width {
                obj[j] = &obj[j] - &tab[i][j];
            }
        }
    }
    loop {
        let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) else { break };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][width] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (li, _) = leave.expect("phase one objective is bounded below");
        pivot(&mut tab, &mut obj, li, enter);
        basis[li] = enter;
    }
    if !obj[width].is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = tab[i][width].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Rat>], obj: &mut [Rat], r: usize, c: usize) {
    let inv = tab[r][c].recip();
    tab[r].iter_mut().for_each(|v| *v = &*v * &inv);
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let k = row[c].clone();
            row.iter_mut().zip(&prow).for_each(|(v, p)| *v = &*v - &k * p);
        }
    }
    if !obj[c].is_zero() {
        let k = obj[c].clone();
        obj.iter_mut().zip(&prow).for_each(|(v, p)| *v = &*v - &k * p);
    }
}
