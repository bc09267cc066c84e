//! Exact feasibility of `A x = b, x ≥ 0` over the rationals, by two
//! independent methods.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Reduced row echelon form of `[A | b]`.
struct Rref {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    pivots: Vec<usize>,
}

/// Gauss-Jordan elimination; `None` when the system is inconsistent.
fn rref(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Option<Rref> {
    let mut rows: Vec<Vec<Rational>> = a.to_vec();
    let mut rhs: Vec<Rational> = b.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        rhs[r] *= &inv;
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in 0..n {
                let delta = &f * &rows[r][j];
                rows[i][j] -= delta;
            }
            let delta = &f * &rhs[r];
            rhs[i] -= delta;
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    rows.truncate(r);
    rhs.truncate(r);
    Some(Rref { rows, rhs, pivots })
}

/// Solves a square system, `None` if singular.
fn solve_square(mut m: Vec<Vec<Rational>>, mut v: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = v.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        v.swap(c, p);
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let delta = &f * &m[c][j];
                    m[i][j] -= delta;
                }
                let delta = &f * &v[c];
                v[i] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &v[i] / &m[i][i]).collect())
}

/// Outcome of [`feasible_by_enumeration`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Feasible(Vec<Rational>),
    Infeasible,
    /// More free variables than the enumeration handles.
    TooManyFree(usize),
}

/// Most free variables [`feasible_by_enumeration`] accepts.
pub const MAX_ENUMERATION_FREEDOM: usize = 3;

/// Eliminates the equalities, then looks for a vertex of the remaining
/// polytope in the free variables by trying every choice of `f` active
/// constraints, `f` being the number of free variables.
///
/// A nonempty `{x ≥ 0, A x = b}` contains no line, so it has a vertex if
/// and only if it is nonempty.
pub fn feasible_by_enumeration(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Enumeration {
    let Some(Rref { rows, rhs, pivots }) = rref(a, b, n) else {
        return Enumeration::Infeasible;
    };
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let f = free.len();
    if f > MAX_ENUMERATION_FREEDOM {
        return Enumeration::TooManyFree(f);
    }
    // Constraint rows g(t) = g0 + G t ≥ 0, one per original variable.
    let mut g0 = vec![Rational::zero(); n];
    let mut g = vec![vec![Rational::zero(); f]; n];
    for (k, &c) in free.iter().enumerate() {
        g[c][k] = Rational::one();
    }
    for (i, &p) in pivots.iter().enumerate() {
        g0[p] = rhs[i].clone();
        for (k, &c) in free.iter().enumerate() {
            g[p][k] = -rows[i][c].clone();
        }
    }
    let point = |t: &[Rational]| -> Vec<Rational> {
        (0..n)
            .map(|c| {
                g[c].iter()
                    .zip(t)
                    .fold(g0[c].clone(), |acc, (gc, tk)| acc + gc * tk)
            })
            .collect()
    };
    let mut active = Vec::with_capacity(f);
    let mut found = None;
    choose(n, f, 0, &mut active, &mut |set: &[usize]| {
        let m: Vec<Vec<Rational>> = set.iter().map(|&c| g[c].clone()).collect();
        let v: Vec<Rational> = set.iter().map(|&c| -g0[c].clone()).collect();
        if let Some(t) = solve_square(m, v) {
            let x = point(&t);
            if x.iter().all(|xi| !xi.is_negative()) {
                found = Some(x);
                return true;
            }
        }
        false
    });
    match found {
        Some(x) => Enumeration::Feasible(x),
        None => Enumeration::Infeasible,
    }
}

/// Calls `visit` on each `k`-subset of `start..n` in lexicographic order
/// until it returns true.
fn choose(
    n: usize,
    k: usize,
    start: usize,
    cur: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if cur.len() == k {
        return visit(cur);
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        let stop = choose(n, k, i + 1, cur, visit);
        cur.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Phase-1 simplex method with Bland's rule, which cannot cycle.
pub fn feasible_by_simplex(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Option<Vec<Rational>> {
    let m = b.len();
    let width = n + m;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<Rational> = a[i]
            .iter()
            .map(|x| if flip { -x.clone() } else { x.clone() })
            .collect();
        row.extend((0..m).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
        t.push(row);
        rhs.push(if flip { -b[i].clone() } else { b[i].clone() });
    }
    let mut basis: Vec<usize> = (n..width).collect();
    // Reduced costs for minimizing the sum of artificials, and minus the
    // current objective value.
    let mut cost: Vec<Rational> = (0..width)
        .map(|j| {
            if j < n {
                -t.iter().fold(Rational::zero(), |acc, row| acc + &row[j])
            } else {
                Rational::zero()
            }
        })
        .collect();
    let mut neg_value: Rational = -rhs.iter().fold(Rational::zero(), |acc, v| acc + v);
    while let Some(e) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..m {
            if !t[i][e].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &t[i][e];
            let better = match (&best, leave) {
                (None, _) => true,
                (Some(bv), Some(l)) => ratio < *bv || (ratio == *bv && basis[i] < basis[l]),
                (Some(_), None) => unreachable!(),
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        // The phase-1 objective is bounded below by zero.
        let r = leave.expect("phase-1 problem is bounded");
        let inv = t[r][e].recip();
        for x in t[r].iter_mut() {
            *x *= &inv;
        }
        rhs[r] *= &inv;
        for i in 0..m {
            if i != r && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..width {
                    let delta = &f * &t[r][j];
                    t[i][j] -= delta;
                }
                let delta = &f * &rhs[r];
                rhs[i] -= delta;
            }
        }
        let f = cost[e].clone();
        for j in 0..width {
            let delta = &f * &t[r][j];
            cost[j] -= delta;
        }
        neg_value -= &f * &rhs[r];
        basis[r] = e;
    }
    if !neg_value.is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = rhs[i].clone();
        }
    }
    Some(x)
}

/// True when `x ≥ 0` and `A x = b` hold exactly.
pub fn satisfies(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) -> bool {
    x.iter().all(|v| !v.is_negative())
        && a.iter().zip(b).all(|(row, bi)| {
            row.iter()
                .zip(x)
                .fold(Rational::zero(), |acc, (r, xv)| acc + r * xv)
                == *bi
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn matrix(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn simple_feasible() {
        // x + y = 1, x - y = 0.
        let a = matrix(&[&[1, 1], &[1, -1]]);
        let b = vec![q(1), q(0)];
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(
            feasible_by_enumeration(&a, &b, 2),
            Enumeration::Feasible(vec![half.clone(), half.clone()])
        );
        assert_eq!(feasible_by_simplex(&a, &b, 2), Some(vec![half.clone(), half]));
    }

    #[test]
    fn sign_infeasible() {
        // x + y = 1, x + y + z = 0 forces z = -1.
        let a = matrix(&[&[1, 1, 0], &[1, 1, 1]]);
        let b = vec![q(1), q(0)];
        assert_eq!(feasible_by_enumeration(&a, &b, 3), Enumeration::Infeasible);
        assert_eq!(feasible_by_simplex(&a, &b, 3), None);
    }

    #[test]
    fn inconsistent() {
        let a = matrix(&[&[1, 1], &[2, 2]]);
        let b = vec![q(1), q(3)];
        assert_eq!(feasible_by_enumeration(&a, &b, 2), Enumeration::Infeasible);
        assert_eq!(feasible_by_simplex(&a, &b, 2), None);
    }

    #[test]
    fn freedom_limit() {
        let a = matrix(&[&[1, 1, 1, 1, 1]]);
        assert_eq!(
            feasible_by_enumeration(&a, &[q(1)], 5),
            Enumeration::TooManyFree(4)
        );
        assert!(feasible_by_simplex(&a, &[q(1)], 5).is_some());
    }

    proptest! {
        #[test]
        fn routes_agree(
            m in 1usize..4,
            n in 1usize..6,
            entries in proptest::collection::vec(-3i64..4, 24),
            rhs in proptest::collection::vec(-3i64..4, 4),
        ) {
            let a: Vec<Vec<Rational>> = (0..m).map(|i| (0..n).map(|j| q(entries[i * n + j])).collect()).collect();
            let b: Vec<Rational> = rhs[..m].iter().map(|&v| q(v)).collect();
            let by_simplex = feasible_by_simplex(&a, &b, n);
            if let Some(x) = &by_simplex {
                prop_assert!(satisfies(&a, &b, x));
            }
            match feasible_by_enumeration(&a, &b, n) {
                Enumeration::Feasible(x) => {
                    prop_assert!(satisfies(&a, &b, &x));
                    prop_assert!(by_simplex.is_some());
                }
                Enumeration::Infeasible => prop_assert!(by_simplex.is_none()),
                Enumeration::TooManyFree(_) => {}
            }
        }
    }
}
