//! Exact dense linear algebra over the ambient field.
//!
//! Plain Gauss-Jordan elimination with exact field division; ranks,
//! kernels and inverses carry no tolerance. Inner loops skip zero entries.

use crate::field::{FieldDescriptor, FieldScalar};

/// Reduce `mat` in place to reduced row echelon form; returns pivot columns.
pub fn rref(mat: &mut [Vec<FieldScalar>], ncols: usize) -> Vec<usize> {
    let nrows = mat.len();
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].inverse().expect("pivot is nonzero");
        for j in col..ncols {
            if !mat[row][j].is_zero() {
                mat[row][j] = &mat[row][j] * &inv;
            }
        }
        for r in 0..nrows {
            if r == row || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for j in col..ncols {
                if !mat[row][j].is_zero() {
                    let delta = &factor * &mat[row][j];
                    mat[r][j] = &mat[r][j] - &delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(mat: &[Vec<FieldScalar>], ncols: usize) -> usize {
    let mut work: Vec<Vec<FieldScalar>> = mat.to_vec();
    rref(&mut work, ncols).len()
}

/// Basis of the right kernel of the row matrix `mat` (columns `ncols`).
pub fn kernel_basis(
    mat: &[Vec<FieldScalar>],
    ncols: usize,
    field: &FieldDescriptor,
) -> Vec<Vec<FieldScalar>> {
    let mut work: Vec<Vec<FieldScalar>> = mat.to_vec();
    let pivots = rref(&mut work, ncols);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![FieldScalar::zero(field); ncols];
        v[free] = FieldScalar::one(field);
        for (r, &c) in pivots.iter().enumerate() {
            if !work[r][free].is_zero() {
                v[c] = work[r][free].neg();
            }
        }
        basis.push(v);
    }
    basis
}

/// Exact inverse of a square matrix given by rows; `None` when singular.
pub fn invert(mat: &[Vec<FieldScalar>], field: &FieldDescriptor) -> Option<Vec<Vec<FieldScalar>>> {
    let n = mat.len();
    let mut work: Vec<Vec<FieldScalar>> = Vec::with_capacity(n);
    for (i, row) in mat.iter().enumerate() {
        assert_eq!(row.len(), n, "invert expects a square matrix");
        let mut aug = row.clone();
        aug.extend((0..n).map(|j| {
            if i == j {
                FieldScalar::one(field)
            } else {
                FieldScalar::zero(field)
            }
        }));
        work.push(aug);
    }
    let pivots = rref(&mut work, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solve `A x = rhs` where `A` is given column-wise; `None` if inconsistent.
/// Free variables are set to zero.
pub fn solve_columns(
    cols: &[Vec<FieldScalar>],
    rhs: &[FieldScalar],
    field: &FieldDescriptor,
) -> Option<Vec<FieldScalar>> {
    let nrows = rhs.len();
    let ncols = cols.len();
    let mut work: Vec<Vec<FieldScalar>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<FieldScalar> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let pivots = rref(&mut work, ncols + 1);
    if pivots.contains(&ncols) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![FieldScalar::zero(field); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = work[r][ncols].clone();
    }
    Some(x)
}
