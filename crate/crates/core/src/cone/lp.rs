//! Exact feasibility by the simplex method with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A point of `{x ≥ 0 : A x = b}`, or `None` if the set is empty.
///
/// Phase I of the simplex method on `A x + s = b` (rows negated so that
/// `b ≥ 0`), minimizing the sum of the artificial variables `s`. Bland's
/// smallest-index rule rules out cycling.
pub fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut t = Vec::with_capacity(width);
        t.extend(row.iter().map(|x| if flip { -x } else { x.clone() }));
        t.extend((0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
        t.push(if flip { -&b[i] } else { b[i].clone() });
        tableau.push(t);
    }
    // objective row: reduced costs of minimizing Σ s
    let mut cost = vec![BigRational::zero(); width];
    for row in &tableau {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    tableau.push(cost);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| tableau[m][j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !tableau[i][enter].is_positive() {
                continue;
            }
            let ratio = &tableau[i][width - 1] / &tableau[i][enter];
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            unreachable!("phase I objective is bounded below by zero");
        };
        pivot(&mut tableau, pivot_row, enter);
        basis[pivot_row] = enter;
    }
    if !tableau[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = tableau[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(tableau: &mut [Vec<BigRational>], row: usize, col: usize) {
    let inv = BigRational::one() / &tableau[row][col];
    for x in tableau[row].iter_mut() {
        *x = &*x * &inv;
    }
    let pivot_row = tableau[row].clone();
    for (i, r) in tableau.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (x, p) in r.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x = &*x - &factor * p;
            }
        }
    }
}

/// Either `c` with `M c ≥ 1` componentwise, or a Farkas certificate `y ≥ 0`
/// with `Σ y = 1` and `yᵀ M = 0`, which shows no `c` has `M c > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrictFeasibility {
    Feasible(Vec<BigRational>),
    Infeasible(Vec<BigRational>),
}

pub fn strict_feasibility(m: &[Vec<BigRational>], cols: usize) -> StrictFeasibility {
    let rows = m.len();
    // M c⁺ − M c⁻ − t = 1 with c⁺, c⁻, t ≥ 0
    let a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.clone();
            r.extend(row.iter().map(|x| -x));
            r.extend((0..rows).map(|j| if i == j { -BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let b = vec![BigRational::one(); rows];
    if let Some(x) = feasible_point(&a, &b) {
        return StrictFeasibility::Feasible((0..cols).map(|j| &x[j] - &x[cols + j]).collect());
    }
    // Mᵀ y = 0, 1ᵀ y = 1, y ≥ 0
    let mut dual: Vec<Vec<BigRational>> = (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect();
    dual.push(vec![BigRational::one(); rows]);
    let mut rhs = vec![BigRational::zero(); cols];
    rhs.push(BigRational::one());
    let y = feasible_point(&dual, &rhs).expect("theorem of the alternative");
    StrictFeasibility::Infeasible(y)
}
