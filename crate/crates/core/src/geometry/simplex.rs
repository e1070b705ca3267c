//! Exact phase-1 simplex for linear feasibility.
//!
//! Decides `∃ x ∈ Q^n : coeffs_i · x ≥ rhs_i for all i` (free variables) and
//! produces a witness. Bland's rule guarantees termination; all arithmetic
//! is rational, so the verdict is exact.

use num_traits::{Signed, Zero};

use crate::rational::{one, zero, Rational};

/// One constraint `coeffs · x ≥ rhs`.
pub type Constraint = (Vec<Rational>, Rational);

/// Find a point satisfying every constraint, or `None` when the system is
/// infeasible.
#[allow(clippy::needless_range_loop)] // tableau pivoting touches row pairs
pub fn feasible_point(n_vars: usize, constraints: &[Constraint]) -> Option<Vec<Rational>> {
    let m = constraints.len();
    if m == 0 {
        return Some(vec![zero(); n_vars]);
    }

    // Standard form: x = xp - xn with xp, xn ≥ 0; surplus s_i ≥ 0;
    // artificial a_i ≥ 0 per row. Rows are sign-normalized so rhs ≥ 0.
    // Columns: [xp(0..n) | xn(n..2n) | s(2n..2n+m) | a(2n+m..2n+2m)].
    let n_cols = 2 * n_vars + 2 * m;
    let rhs_col = n_cols;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (coeffs, rhs)) in constraints.iter().enumerate() {
        debug_assert_eq!(coeffs.len(), n_vars);
        let flip = rhs.is_negative();
        let sgn = if flip { -one() } else { one() };
        let mut row = vec![zero(); n_cols + 1];
        for (j, c) in coeffs.iter().enumerate() {
            row[j] = &sgn * c;
            row[n_vars + j] = -&row[j];
        }
        row[2 * n_vars + i] = if flip { one() } else { -one() };
        row[2 * n_vars + m + i] = one();
        row[rhs_col] = &sgn * rhs;
        tab.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n_vars + m + i).collect();

    // Phase-1 objective row: minimize the artificial sum. With artificials
    // basic, the reduced cost of column j is Σ_i tab[i][j] for non-artificial
    // columns and 0 for artificial ones.
    let mut obj = vec![zero(); n_cols + 1];
    for j in 0..=n_cols {
        if j >= 2 * n_vars + m && j < n_cols {
            continue;
        }
        let mut acc = zero();
        for row in &tab {
            acc += &row[j];
        }
        obj[j] = acc;
    }

    loop {
        // Bland: entering column = lowest-index non-artificial column with a
        // positive reduced cost.
        let entering = (0..2 * n_vars + m).find(|&j| obj[j].is_positive());
        let Some(e) = entering else { break };

        // Ratio test; ties resolved by the lowest basic variable index.
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[e].is_positive() {
                let ratio = &row[rhs_col] / &row[e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((l, _)) = leave else {
            // Unbounded phase-1 objective cannot happen (it is bounded below
            // by zero); defensive exit.
            return None;
        };

        // Pivot on (l, e).
        let inv = tab[l][e].clone();
        for c in 0..=n_cols {
            tab[l][c] = &tab[l][c] / &inv;
        }
        for i in 0..m {
            if i != l && !tab[i][e].is_zero() {
                let factor = tab[i][e].clone();
                for c in 0..=n_cols {
                    let delta = &factor * &tab[l][c];
                    tab[i][c] = &tab[i][c] - &delta;
                }
            }
        }
        if !obj[e].is_zero() {
            let factor = obj[e].clone();
            for c in 0..=n_cols {
                let delta = &factor * &tab[l][c];
                obj[c] = &obj[c] - &delta;
            }
        }
        basis[l] = e;
    }

    // Feasible iff every artificial sits at zero.
    for (i, &b) in basis.iter().enumerate() {
        if b >= 2 * n_vars + m && !tab[i][rhs_col].is_zero() {
            return None;
        }
    }

    let mut x = vec![zero(); n_vars];
    for (i, &b) in basis.iter().enumerate() {
        if b < n_vars {
            x[b] = &x[b] + &tab[i][rhs_col];
        } else if b < 2 * n_vars {
            x[b - n_vars] = &x[b - n_vars] - &tab[i][rhs_col];
        }
    }
    Some(x)
}
