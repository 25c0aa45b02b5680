//! Exact rational linear feasibility.
//!
//! Decides `Ax = b, x >= 0` by a dense phase-one simplex over arbitrary
//! precision rationals with Bland's pivoting rule, so the run always
//! terminates and the answer is a mathematical fact, not a numerical one.
//! Infeasible systems come with a Farkas certificate: multipliers `u` with
//! `uᵀA >= 0` componentwise and `uᵀb < 0`, checkable without the solver.

use crate::rational::Rational;

/// The exact answer to a feasibility question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// A nonnegative solution of `Ax = b`.
    Feasible(Vec<Rational>),
    /// Farkas multipliers, one per row of the original system.
    Infeasible(Vec<Rational>),
}

/// Decides `Ax = b, x >= 0` exactly. `a` is given row-major; all rows must
/// have the same length.
pub fn solve_equality_feasibility(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    let m = a.len();
    assert_eq!(m, b.len(), "row count mismatch");
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    assert!(a.iter().all(|r| r.len() == n), "ragged matrix");

    if m == 0 {
        return Feasibility::Feasible(vec![Rational::zero(); n]);
    }

    // Normalize to b >= 0, remembering the sign of each original row so the
    // certificate can be mapped back.
    let mut signs = vec![false; m];
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for i in 0..m {
        if b[i].is_negative() {
            signs[i] = true;
            tab.push(a[i].iter().map(|x| -x).collect());
            rhs.push(-&b[i]);
        } else {
            tab.push(a[i].clone());
            rhs.push(b[i].clone());
        }
    }
    // Append the artificial identity block; artificial i is column n + i.
    for (i, row) in tab.iter_mut().enumerate() {
        for k in 0..m {
            row.push(if k == i { Rational::one() } else { Rational::zero() });
        }
    }

    // Phase-one objective: minimize the sum of artificials. Reduced costs
    // with the artificial basis: 0 - sum of the column for original columns,
    // 0 for artificials; objective value is the sum of the rhs.
    let cols = n + m;
    let mut obj: Vec<Rational> = (0..cols)
        .map(|j| {
            if j < n {
                -tab.iter().map(|row| &row[j]).sum::<Rational>()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let mut obj_value: Rational = rhs.iter().sum();
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: entering column is the lowest index with negative reduced cost.
        let entering = match (0..cols).find(|&j| obj[j].is_negative()) {
            Some(j) => j,
            None => break,
        };
        // Ratio test; ties broken by the lowest basic variable index (Bland).
        let mut pivot_row: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..m {
            if !tab[i][entering].is_negative() && !tab[i][entering].is_zero() {
                let ratio = &rhs[i] / &tab[i][entering];
                let better = match &best {
                    None => true,
                    Some(current) => {
                        ratio < *current
                            || (ratio == *current
                                && basis[i] < basis[pivot_row.expect("row set with best")])
                    }
                };
                if better {
                    best = Some(ratio);
                    pivot_row = Some(i);
                }
            }
        }
        let r = pivot_row.expect("phase-one objective is bounded below by zero");

        // Pivot: normalize row r, eliminate the entering column elsewhere.
        let pivot = tab[r][entering].clone();
        for j in 0..cols {
            tab[r][j] = &tab[r][j] / &pivot;
        }
        rhs[r] = &rhs[r] / &pivot;
        for i in 0..m {
            if i == r || tab[i][entering].is_zero() {
                continue;
            }
            let factor = tab[i][entering].clone();
            for j in 0..cols {
                if !tab[r][j].is_zero() {
                    let delta = &factor * &tab[r][j];
                    tab[i][j] = &tab[i][j] - &delta;
                }
            }
            let delta = &factor * &rhs[r];
            rhs[i] = &rhs[i] - &delta;
        }
        if !obj[entering].is_zero() {
            let factor = obj[entering].clone();
            for j in 0..cols {
                if !tab[r][j].is_zero() {
                    let delta = &factor * &tab[r][j];
                    obj[j] = &obj[j] - &delta;
                }
            }
            let delta = &factor * &rhs[r];
            obj_value = &obj_value + &delta;
        }
        basis[r] = entering;
    }

    if obj_value.is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &var) in basis.iter().enumerate() {
            if var < n {
                x[var] = rhs[i].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        // Simplex multipliers from the artificial reduced costs:
        // obj[n + i] = 1 - y_i, so y_i = 1 - obj[n + i]. With positive
        // optimum, yᵀA <= 0 componentwise and yᵀb > 0; the certificate uses
        // u = -y mapped back through the row sign flips.
        let mut multipliers = Vec::with_capacity(m);
        for i in 0..m {
            let y = Rational::one() - &obj[n + i];
            let u = -y;
            multipliers.push(if signs[i] { -u } else { u });
        }
        Feasibility::Infeasible(multipliers)
    }
}

/// Independent Farkas check: `u` proves `Ax = b, x >= 0` infeasible iff the
/// combined row `uᵀA` is componentwise nonnegative while `uᵀb` is negative.
pub fn farkas_is_valid(a: &[Vec<Rational>], b: &[Rational], multipliers: &[Rational]) -> bool {
    if multipliers.len() != a.len() || b.len() != a.len() {
        return false;
    }
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    for j in 0..n {
        let combined: Rational = a
            .iter()
            .zip(multipliers)
            .map(|(row, u)| &row[j] * u)
            .sum();
        if combined.is_negative() {
            return false;
        }
    }
    let constant: Rational = b.iter().zip(multipliers).map(|(bi, u)| bi * u).sum();
    constant.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn rows(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter()
            .map(|r| r.iter().map(|&x| Rational::int(x)).collect())
            .collect()
    }

    fn ints(data: &[i64]) -> Vec<Rational> {
        data.iter().map(|&x| Rational::int(x)).collect()
    }

    fn check(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
        let result = solve_equality_feasibility(a, b);
        match &result {
            Feasibility::Feasible(x) => {
                assert!(x.iter().all(|xi| !xi.is_negative()));
                for (row, bi) in a.iter().zip(b) {
                    let lhs: Rational = row.iter().zip(x).map(|(aij, xj)| aij * xj).sum();
                    assert_eq!(&lhs, bi);
                }
            }
            Feasibility::Infeasible(u) => {
                assert!(farkas_is_valid(a, b, u));
            }
        }
        result
    }

    #[test]
    fn simple_feasible_system() {
        let a = rows(&[&[1, 1]]);
        let b = ints(&[1]);
        assert!(matches!(check(&a, &b), Feasibility::Feasible(_)));
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let a = rows(&[&[1, 1], &[1, 1]]);
        let b = ints(&[1, 2]);
        assert!(matches!(check(&a, &b), Feasibility::Infeasible(_)));
    }

    #[test]
    fn negative_rhs_forces_infeasibility_with_nonnegative_vars() {
        let a = rows(&[&[1, 2]]);
        let b = ints(&[-1]);
        assert!(matches!(check(&a, &b), Feasibility::Infeasible(_)));
    }

    #[test]
    fn redundant_rows_are_harmless() {
        let a = rows(&[&[1, 0], &[0, 1], &[1, 1]]);
        let b = ints(&[1, 1, 2]);
        match check(&a, &b) {
            Feasibility::Feasible(x) => {
                assert_eq!(x, ints(&[1, 1]));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn fractional_solution() {
        let a = vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(3, 1)]];
        let b = vec![rat(1, 1), rat(1, 1)];
        match check(&a, &b) {
            Feasibility::Feasible(x) => assert_eq!(x, vec![rat(1, 2), rat(1, 3)]),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_zero_rows_terminate() {
        // Heavy degeneracy: several zero right-hand sides.
        let a = rows(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0], &[0, 0, 0]]);
        let b = ints(&[0, 0, 1, 0]);
        // x1 = x3 = 0 forced, then x1 + x2 = 1 with x2 = 0 forced: infeasible.
        assert!(matches!(check(&a, &b), Feasibility::Infeasible(_)));
    }

    #[test]
    fn zero_multipliers_prove_nothing() {
        let a = rows(&[&[1, 1], &[1, 1]]);
        let b = ints(&[1, 2]);
        assert!(!farkas_is_valid(&a, &b, &ints(&[0, 0])));
    }
}
