//! Dense exact-rational linear algebra: Gaussian elimination and kernel
//! vectors. Sizes here are tiny (corrals and certificate columns), so plain
//! row reduction is the right tool.

use num_traits::Zero;

use crate::rational::{zero, Rational};

/// Solve `a · x = b` for square `a`. Returns `None` when singular.
#[allow(clippy::needless_range_loop)] // pivoting reads and writes across rows
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone();
        for c in col..n {
            a[col][c] = &a[col][c] / &inv;
        }
        b[col] = &b[col] / &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - &delta;
                }
                let delta = &factor * &b[col];
                b[r] = &b[r] - &delta;
            }
        }
    }
    Some(b)
}

/// Find a nontrivial `z` with `Σ z_k · cols[k] = 0`, or `None` when the
/// columns are linearly independent. Deterministic: reports the kernel
/// vector of the first dependent column.
#[allow(clippy::needless_range_loop)]
pub fn kernel_vector(cols: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = cols.len();
    if n == 0 {
        return None;
    }
    let rows = cols[0].len();
    debug_assert!(cols.iter().all(|c| c.len() == rows));
    let mut a: Vec<Vec<Rational>> =
        (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; n];
    let mut next_row = 0;
    for col in 0..n {
        let pivot = (next_row..rows).find(|&r| !a[r][col].is_zero());
        match pivot {
            Some(pr) => {
                a.swap(next_row, pr);
                let inv = a[next_row][col].clone();
                for c in col..n {
                    a[next_row][c] = &a[next_row][c] / &inv;
                }
                for r in 0..rows {
                    if r != next_row && !a[r][col].is_zero() {
                        let factor = a[r][col].clone();
                        for c in col..n {
                            let delta = &factor * &a[next_row][c];
                            a[r][c] = &a[r][c] - &delta;
                        }
                    }
                }
                pivot_row_of_col[col] = Some(next_row);
                next_row += 1;
            }
            None => {
                // Free column: it is a combination of earlier pivot columns.
                let mut z = vec![zero(); n];
                z[col] = crate::rational::one();
                for (c, pivot_row) in pivot_row_of_col.iter().enumerate().take(col) {
                    if let Some(pr) = pivot_row {
                        z[c] = -a[*pr][col].clone();
                    }
                }
                return Some(z);
            }
        }
    }
    None
}
