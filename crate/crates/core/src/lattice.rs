//! Integer lattice algorithms: Hermite-style column reduction with a tracked
//! unimodular transform, canonical row Hermite form, saturated kernels,
//! basis completion, and Smith invariant factors.
//!
//! Pivot choices are fixed (smallest absolute value, then smallest index),
//! so all bases produced here are deterministic — certificates must be
//! byte-stable across runs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{Int, IntVector};

/// Outcome of column reduction `A·U = H` with `H` in column echelon form.
struct ColumnReduction {
    /// Echelon matrix H, stored as rows of length = #columns of A.
    h_rows: Vec<Vec<Int>>,
    /// Columns of the unimodular transform U.
    u_cols: Vec<Vec<Int>>,
    /// Rows of U⁻¹.
    v_rows: Vec<Vec<Int>>,
    /// Rows of A that received a pivot, in order.
    pivot_rows: Vec<usize>,
}

fn column_reduce(a_rows: &[Vec<Int>], ncols: usize) -> ColumnReduction {
    let nrows = a_rows.len();
    let mut h: Vec<Vec<Int>> = a_rows.to_vec();
    let mut u: Vec<Vec<Int>> = (0..ncols)
        .map(|j| {
            let mut e = vec![Int::zero(); ncols];
            e[j] = Int::one();
            e
        })
        .collect();
    let mut v: Vec<Vec<Int>> = u.clone();

    let swap_cols = |h: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, v: &mut Vec<Vec<Int>>, i: usize, j: usize| {
        for row in h.iter_mut() {
            row.swap(i, j);
        }
        u.swap(i, j);
        v.swap(i, j);
    };
    // col_j -= q * col_i  on A and U;  row_i += q * row_j  on V = U⁻¹.
    let combine = |h: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, v: &mut Vec<Vec<Int>>, j: usize, q: &Int, i: usize| {
        for row in h.iter_mut() {
            let delta = q * &row[i];
            row[j] -= delta;
        }
        for k in 0..u[j].len() {
            let delta = q * &u[i][k];
            u[j][k] -= delta;
        }
        for k in 0..v[i].len() {
            let delta = q * &v[j][k];
            v[i][k] += delta;
        }
    };
    let negate_col = |h: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, v: &mut Vec<Vec<Int>>, i: usize| {
        for row in h.iter_mut() {
            row[i] = -row[i].clone();
        }
        for e in u[i].iter_mut() {
            *e = -e.clone();
        }
        for e in v[i].iter_mut() {
            *e = -e.clone();
        }
    };

    let mut c = 0;
    let mut pivot_rows = Vec::new();
    for row in 0..nrows {
        if c == ncols {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (c..ncols).filter(|&j| !h[row][j].is_zero()).collect();
            match nonzero.len() {
                0 => break,
                1 => {
                    let j = nonzero[0];
                    if j != c {
                        swap_cols(&mut h, &mut u, &mut v, c, j);
                    }
                    if h[row][c].is_negative() {
                        negate_col(&mut h, &mut u, &mut v, c);
                    }
                    pivot_rows.push(row);
                    c += 1;
                    break;
                }
                _ => {
                    let &jmin = nonzero
                        .iter()
                        .min_by_key(|&&j| (h[row][j].abs(), j))
                        .unwrap();
                    for &j in &nonzero {
                        if j == jmin {
                            continue;
                        }
                        let q = h[row][j].div_floor(&h[row][jmin]);
                        if !q.is_zero() {
                            combine(&mut h, &mut u, &mut v, j, &q, jmin);
                        }
                        // div_floor can leave the entry equal to the pivot
                        // (negative case); the next loop pass cleans it up.
                    }
                }
            }
        }
    }

    ColumnReduction {
        h_rows: h,
        u_cols: u,
        v_rows: v,
        pivot_rows,
    }
}

/// Basis of `{z ∈ Z^d : Σ z_j · columns[j] = 0}` for the map `e_j ↦ columns[j]`.
///
/// The basis is saturated (every integer kernel element is an integer
/// combination) and returned in canonical row-Hermite form.
pub fn integer_kernel_basis(columns: &[IntVector], nrows: usize) -> Vec<IntVector> {
    let ncols = columns.len();
    let a_rows: Vec<Vec<Int>> = (0..nrows)
        .map(|r| columns.iter().map(|col| col.0[r].clone()).collect())
        .collect();
    let red = column_reduce(&a_rows, ncols);
    let rank = red.pivot_rows.len();
    let kernel: Vec<IntVector> = red.u_cols[rank..]
        .iter()
        .map(|col| IntVector(col.clone()))
        .collect();
    row_hnf(&kernel)
}

/// Kernel of the map `x ↦ (⟨x, rows[l]⟩)_l` inside `Z^n`: the saturated
/// lattice of integer vectors orthogonal to every row.
pub fn integer_kernel_of_rows(rows: &[IntVector], n: usize) -> Vec<IntVector> {
    let columns: Vec<IntVector> = (0..n)
        .map(|j| IntVector(rows.iter().map(|r| r.0[j].clone()).collect()))
        .collect();
    integer_kernel_basis(&columns, rows.len())
}

/// Canonical row Hermite normal form: echelon rows with positive pivots and
/// the entries above each pivot reduced into `[0, pivot)`. Zero rows dropped.
pub fn row_hnf(rows: &[IntVector]) -> Vec<IntVector> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut work: Vec<Vec<Int>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut r = 0;
    for col in 0..ncols {
        loop {
            let nonzero: Vec<usize> = (r..work.len()).filter(|&i| !work[i][col].is_zero()).collect();
            match nonzero.len() {
                0 => break,
                1 => {
                    let i = nonzero[0];
                    work.swap(r, i);
                    if work[r][col].is_negative() {
                        for e in work[r].iter_mut() {
                            *e = -e.clone();
                        }
                    }
                    for above in 0..r {
                        let q = work[above][col].div_floor(&work[r][col]);
                        if !q.is_zero() {
                            for k in 0..ncols {
                                let delta = &q * &work[r][k];
                                work[above][k] -= delta;
                            }
                        }
                    }
                    r += 1;
                    break;
                }
                _ => {
                    let &imin = nonzero
                        .iter()
                        .min_by_key(|&&i| (work[i][col].abs(), i))
                        .unwrap();
                    for &i in &nonzero {
                        if i == imin {
                            continue;
                        }
                        let q = work[i][col].div_floor(&work[imin][col]);
                        if !q.is_zero() {
                            for k in 0..ncols {
                                let delta = &q * &work[imin][k];
                                work[i][k] -= delta;
                            }
                        }
                    }
                }
            }
        }
        if r == work.len() {
            break;
        }
    }
    work.truncate(r);
    work.into_iter().map(IntVector).collect()
}

/// Completes `sub` to a basis of the lattice spanned by `ambient`.
///
/// `sub` vectors must be expressible integrally in the ambient basis and
/// span a saturated sublattice there; the returned vectors together with
/// `sub` form a basis of the ambient lattice (HNF completion, deterministic).
pub fn complement_basis(sub: &[IntVector], ambient: &[IntVector]) -> Result<Vec<IntVector>> {
    if ambient.is_empty() {
        return if sub.is_empty() {
            Ok(Vec::new())
        } else {
            Err(Error::NotSaturated)
        };
    }
    if sub.is_empty() {
        return Ok(ambient.to_vec());
    }
    let r = ambient.len();
    // Coordinates of each sub vector in the ambient basis, via exact solve.
    let ambient_rat: Vec<crate::rational::RatVector> = ambient.iter().map(|v| v.to_rat()).collect();
    let n = ambient[0].len();
    let mut coord_rows: Vec<Vec<Int>> = Vec::with_capacity(sub.len());
    for s in sub {
        // Solve  Σ_k c_k · ambient[k] = s  (n equations, r unknowns).
        let rows: Vec<crate::rational::RatVector> = (0..n)
            .map(|coord| {
                crate::rational::RatVector(
                    ambient_rat.iter().map(|a| a.0[coord].clone()).collect(),
                )
            })
            .collect();
        let rhs: Vec<crate::rational::Rational> = s
            .0
            .iter()
            .map(|e| crate::rational::Rational::from_integer(e.clone()))
            .collect();
        let c = crate::linalg::solve_system(&rows, &rhs).ok_or(Error::NotSaturated)?;
        let mut ints = Vec::with_capacity(r);
        for e in &c.0 {
            if !e.is_integer() {
                return Err(Error::NotSaturated);
            }
            ints.push(e.to_integer());
        }
        coord_rows.push(ints);
    }

    let red = column_reduce(&coord_rows, r);
    if red.pivot_rows.len() != sub.len() {
        return Err(Error::NotSaturated); // dependent sub vectors cannot extend
    }
    // Saturation <=> the echelon pivots are all ±1 (here normalized to 1).
    for (t, &row) in red.pivot_rows.iter().enumerate() {
        if !red.h_rows[row][t].is_one() {
            return Err(Error::NotSaturated);
        }
    }
    // Rows k..r of U⁻¹ complete the coordinate rows to a basis of Z^r;
    // map them back through the ambient basis.
    let k = sub.len();
    let mut out = Vec::with_capacity(r - k);
    for vrow in &red.v_rows[k..] {
        let mut vec = IntVector::zeros(n);
        for (c, a) in vrow.iter().zip(ambient) {
            vec = vec.add(&a.scaled(c));
        }
        out.push(vec);
    }
    Ok(out)
}

/// Smith invariant factors (nonzero diagonal of the Smith normal form).
pub fn smith_invariant_factors(rows: &[IntVector]) -> Vec<Int> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Int>> = rows.iter().map(|r| r.0.clone()).collect();
    let nrows = a.len();
    let mut t = 0;
    let mut factors = Vec::new();
    while t < nrows && t < ncols {
        // smallest nonzero |entry| in the trailing block, ties by (row, col)
        let mut pivot: Option<(BigInt, usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if a[i][j].is_zero() {
                    continue;
                }
                let key = a[i][j].abs();
                if pivot.as_ref().map_or(true, |(best, bi, bj)| {
                    (&key, i, j) < (best, *bi, *bj)
                }) {
                    pivot = Some((key, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = pivot else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for k in t..ncols {
                        let delta = &q * &a[t][k];
                        a[i][k] -= delta;
                    }
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    clean = false;
                }
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let delta = &q * &row[t];
                        row[j] -= delta;
                    }
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let mut fixed = true;
            'scan: for i in t + 1..nrows {
                for j in t + 1..ncols {
                    if !a[i][j].mod_floor(&a[t][t]).is_zero() {
                        for k in t..ncols {
                            let add = a[i][k].clone();
                            a[t][k] += add;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[t][t].is_negative() {
            a[t][t] = -a[t][t].clone();
        }
        factors.push(a[t][t].clone());
        t += 1;
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::rational::RatVector;

    fn iv(e: &[i64]) -> IntVector {
        IntVector::from_i64(e)
    }

    /// Independent oracle: rational nullspace of the column map, for
    /// cross-checking the span of the integer kernel.
    fn rational_kernel_dim(columns: &[IntVector], nrows: usize) -> usize {
        let rows: Vec<RatVector> = (0..nrows)
            .map(|r| RatVector(columns.iter().map(|c| crate::rational::Rational::from_integer(c.0[r].clone())).collect()))
            .collect();
        linalg::nullspace(&rows, columns.len()).len()
    }

    #[test]
    fn kernel_of_projective_triangle_map() {
        let columns = vec![iv(&[-1, 0]), iv(&[0, -1]), iv(&[1, 1])];
        let basis = integer_kernel_basis(&columns, 2);
        assert_eq!(basis, vec![iv(&[1, 1, 1])]);
        assert_eq!(rational_kernel_dim(&columns, 2), 1);
    }

    #[test]
    fn kernel_of_injective_map_is_empty() {
        let columns = vec![iv(&[1, 0]), iv(&[0, 1])];
        assert!(integer_kernel_basis(&columns, 2).is_empty());
    }

    #[test]
    fn kernel_of_square_map() {
        let columns = vec![iv(&[1, 0]), iv(&[-1, 0]), iv(&[0, 1]), iv(&[0, -1])];
        let basis = integer_kernel_basis(&columns, 2);
        assert_eq!(basis, vec![iv(&[1, 1, 0, 0]), iv(&[0, 0, 1, 1])]);
        assert_eq!(rational_kernel_dim(&columns, 2), 2);
    }

    #[test]
    fn kernel_members_and_saturation_on_seeded_matrices() {
        let mut state = 0x6a09e667f3bcc909u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..60 {
            let nrows = 1 + (next() % 3) as usize;
            let ncols = 1 + (next() % 5) as usize;
            let columns: Vec<IntVector> = (0..ncols)
                .map(|_| IntVector((0..nrows).map(|_| Int::from((next() % 9) as i64 - 4)).collect()))
                .collect();
            let basis = integer_kernel_basis(&columns, nrows);
            assert_eq!(basis.len(), rational_kernel_dim(&columns, nrows));
            for z in &basis {
                for r in 0..nrows {
                    let s: Int = z.0.iter().zip(&columns).map(|(zj, col)| zj * &col.0[r]).sum();
                    assert!(s.is_zero());
                }
            }
            if !basis.is_empty() {
                let factors = smith_invariant_factors(&basis);
                assert!(factors.iter().all(|f| f.is_one()));
            }
        }
    }

    #[test]
    fn complement_of_full_sublattice_is_empty() {
        let ambient = vec![iv(&[1, 1, 1])];
        assert_eq!(complement_basis(&[iv(&[1, 1, 1])], &ambient).unwrap(), vec![]);
    }

    #[test]
    fn complement_completes_a_rank_one_sublattice() {
        let ambient = vec![iv(&[1, 1, 0, 0]), iv(&[0, 0, 1, 1])];
        let comp = complement_basis(&[iv(&[1, 1, 0, 0])], &ambient).unwrap();
        assert_eq!(comp, vec![iv(&[0, 0, 1, 1])]);
    }

    #[test]
    fn complement_rejects_unsaturated_sublattice() {
        let ambient = vec![iv(&[1, 0]), iv(&[0, 1])];
        assert_eq!(
            complement_basis(&[iv(&[2, 0])], &ambient),
            Err(Error::NotSaturated)
        );
    }

    #[test]
    fn completed_bases_are_unimodular_on_seeded_inputs() {
        let mut state = 0xbb67ae8584caa73bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut completed = 0;
        for _ in 0..80 {
            let r = 2 + (next() % 3) as usize;
            // ambient = standard basis of Z^r; sub = one random primitive vector
            let ambient: Vec<IntVector> = (0..r)
                .map(|j| {
                    let mut e = vec![0i64; r];
                    e[j] = 1;
                    iv(&e)
                })
                .collect();
            let raw = IntVector((0..r).map(|_| Int::from((next() % 7) as i64 - 3)).collect());
            if raw.is_zero() {
                continue;
            }
            let (_, w) = crate::rational::primitive_decompose(&raw).unwrap();
            let comp = complement_basis(&[w.clone()], &ambient).unwrap();
            completed += 1;
            let mut all = vec![w.clone()];
            all.extend(comp);
            let dets = smith_invariant_factors(&all);
            assert_eq!(dets.len(), r);
            assert!(dets.iter().all(|f| f.is_one()));
        }
        assert!(completed > 40);
    }

    #[test]
    fn row_hnf_is_canonical() {
        let rows = vec![iv(&[0, 0, 1, 1]), iv(&[1, 1, 0, 0])];
        assert_eq!(row_hnf(&rows), vec![iv(&[1, 1, 0, 0]), iv(&[0, 0, 1, 1])]);
        let rows = vec![iv(&[2, 1]), iv(&[1, 1])];
        assert_eq!(row_hnf(&rows), vec![iv(&[1, 0]), iv(&[0, 1])]);
    }

    #[test]
    fn smith_factors_of_diagonal_and_scaled_matrices() {
        assert_eq!(
            smith_invariant_factors(&[iv(&[2, 0]), iv(&[0, 3])]),
            vec![Int::from(1), Int::from(6)]
        );
        assert_eq!(
            smith_invariant_factors(&[iv(&[1, 0]), iv(&[0, 1])]),
            vec![Int::from(1), Int::from(1)]
        );
        assert_eq!(smith_invariant_factors(&[iv(&[4, 6])]), vec![Int::from(2)]);
    }
}
