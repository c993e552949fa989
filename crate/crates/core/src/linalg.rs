//! Exact rational linear algebra: elimination, solving, null spaces and
//! projections. Pivots are always chosen as the first nonzero candidate so
//! every routine is deterministic.

use num_traits::Zero;

use crate::rational::{RatVector, Rational};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[RatVector]) -> (Vec<RatVector>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut work: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (r..work.len()).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(r, pivot_row);
        let inv = work[r][col].recip();
        for e in work[r].iter_mut() {
            *e *= &inv;
        }
        for i in 0..work.len() {
            if i != r && !work[i][col].is_zero() {
                let factor = work[i][col].clone();
                for c in 0..ncols {
                    let delta = &factor * &work[r][c];
                    work[i][c] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == work.len() {
            break;
        }
    }
    work.truncate(r);
    (work.into_iter().map(RatVector).collect(), pivots)
}

pub fn rank(rows: &[RatVector]) -> usize {
    rref(rows).0.len()
}

/// Indices of a maximal linearly independent subset, greedy by input order.
pub fn independent_rows(rows: &[RatVector]) -> Vec<usize> {
    let mut chosen: Vec<RatVector> = Vec::new();
    let mut indices = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        chosen.push(row.clone());
        if rank(&chosen) == chosen.len() {
            indices.push(i);
        } else {
            chosen.pop();
        }
    }
    indices
}

/// Unique solution of a square system, or `None` when singular.
pub fn solve_square(rows: &[RatVector], rhs: &[Rational]) -> Option<RatVector> {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    debug_assert_eq!(rhs.len(), n);
    let mut work: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.0.clone();
            row.push(b.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&i| !work[i][col].is_zero())?;
        work.swap(col, pivot_row);
        let inv = work[col][col].recip();
        for e in work[col].iter_mut() {
            *e *= &inv;
        }
        for i in 0..n {
            if i != col && !work[i][col].is_zero() {
                let factor = work[i][col].clone();
                for c in col..=n {
                    let delta = &factor * &work[col][c];
                    work[i][c] -= delta;
                }
            }
        }
    }
    Some(RatVector(work.into_iter().map(|mut r| r.pop().unwrap()).collect()))
}

/// Any solution of `rows · x = rhs`, or `None` when inconsistent.
pub fn solve_system(rows: &[RatVector], rhs: &[Rational]) -> Option<RatVector> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let augmented: Vec<RatVector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.0.clone();
            row.push(b.clone());
            RatVector(row)
        })
        .collect();
    let (echelon, pivots) = rref(&augmented);
    if pivots.contains(&ncols) {
        return None; // a row reduced to 0 = 1
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &pc) in echelon.iter().zip(&pivots) {
        x[pc] = row.0[ncols].clone();
    }
    Some(RatVector(x))
}

/// Canonical basis of `{x : rows · x = 0}` from the free columns of the RREF.
pub fn nullspace(rows: &[RatVector], ncols: usize) -> Vec<RatVector> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|j| {
                let mut e = vec![Rational::zero(); ncols];
                e[j] = Rational::from_integer(1.into());
                RatVector(e)
            })
            .collect();
    }
    let (echelon, pivots) = rref(rows);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::from_integer(1.into());
        for (row, &pc) in echelon.iter().zip(&pivots) {
            v[pc] = -row.0[free].clone();
        }
        basis.push(RatVector(v));
    }
    basis
}

/// Orthogonal projection of `v` onto the span of `span` (rational Gram solve).
pub fn project_onto_span(v: &RatVector, span: &[RatVector]) -> RatVector {
    let idx = independent_rows(span);
    if idx.is_empty() {
        return RatVector::zeros(v.len());
    }
    let basis: Vec<&RatVector> = idx.iter().map(|&i| &span[i]).collect();
    let gram: Vec<RatVector> = basis
        .iter()
        .map(|bi| RatVector(basis.iter().map(|bj| bi.dot(bj)).collect()))
        .collect();
    let rhs: Vec<Rational> = basis.iter().map(|bi| bi.dot(v)).collect();
    let coeffs = solve_square(&gram, &rhs).expect("Gram matrix of independent vectors is invertible");
    let mut out = RatVector::zeros(v.len());
    for (c, b) in coeffs.0.iter().zip(&basis) {
        out = out.add(&b.scaled(c));
    }
    out
}

/// Determinant of a square matrix given by rows.
pub fn det(rows: &[RatVector]) -> Rational {
    let n = rows.len();
    let mut work: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut result = Rational::from_integer(1.into());
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&i| !work[i][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot_row != col {
            work.swap(col, pivot_row);
            result = -result;
        }
        result *= &work[col][col];
        let inv = work[col][col].recip();
        for i in col + 1..n {
            if !work[i][col].is_zero() {
                let factor = &work[i][col] * &inv;
                for c in col..n {
                    let delta = &factor * &work[col][c];
                    work[i][c] -= delta;
                }
            }
        }
    }
    result
}
