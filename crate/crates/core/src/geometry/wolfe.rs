//! Wolfe's minimum-norm-point algorithm over a finite point set, in exact
//! rational arithmetic.
//!
//! Maintains a corral (affinely independent subset whose affine minimizer
//! has strictly positive coefficients) and alternates major cycles (add the
//! point most violating the optimality condition) with minor cycles (step
//! toward the corral's affine minimizer, dropping points whose coefficient
//! hits zero). With exact arithmetic the returned point satisfies
//! `x · q ≥ x · x` for every input point `q`, which certifies that `x` is
//! the minimum-norm point of the convex hull.

use num_traits::Zero;

use super::linalg::solve;
use crate::rational::{dot, one, sq_norm, zero, Rational};

/// Minimum-norm point plus a convex-combination certificate over input
/// indices (strictly positive coefficients, ascending index order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinNorm {
    pub point: Vec<Rational>,
    pub support: Vec<(usize, Rational)>,
}

impl MinNorm {
    pub fn squared_norm(&self) -> Rational {
        sq_norm(&self.point)
    }
}

pub fn min_norm_point(points: &[Vec<Rational>]) -> MinNorm {
    assert!(!points.is_empty(), "min_norm_point needs at least one point");
    let dim = points[0].len();
    debug_assert!(points.iter().all(|p| p.len() == dim));

    let mut start = 0;
    let mut start_norm = sq_norm(&points[0]);
    for (i, q) in points.iter().enumerate().skip(1) {
        let n = sq_norm(q);
        if n < start_norm {
            start = i;
            start_norm = n;
        }
    }
    let mut corral: Vec<usize> = vec![start];
    let mut coeffs: Vec<Rational> = vec![one()];
    let mut x = points[start].clone();

    loop {
        // Major cycle: most-violating point under the current x.
        let xx = sq_norm(&x);
        let mut best = 0;
        let mut best_val = dot(&x, &points[0]);
        for (j, q) in points.iter().enumerate().skip(1) {
            let v = dot(&x, q);
            if v < best_val {
                best = j;
                best_val = v;
            }
        }
        if best_val >= xx {
            let mut support: Vec<(usize, Rational)> =
                corral.iter().cloned().zip(coeffs).collect();
            support.sort_by_key(|(i, _)| *i);
            debug_assert!(verify_certificate(points, &x, &support));
            return MinNorm { point: x, support };
        }
        debug_assert!(!corral.contains(&best), "corral points satisfy x·q = x·x");
        corral.push(best);
        coeffs.push(zero());

        // Minor cycle.
        loop {
            let mu = affine_minimizer(points, &corral);
            if mu.iter().all(|m| !m.is_zero() && *m > zero()) {
                x = combine(points, &corral, &mu);
                coeffs = mu;
                break;
            }
            if mu.iter().all(|m| *m >= zero()) {
                // Minimizer on the corral boundary: accept and drop zeros.
                x = combine(points, &corral, &mu);
                coeffs = mu;
                drop_zeros(&mut corral, &mut coeffs);
                break;
            }
            // Step from coeffs toward mu until the first coefficient hits 0.
            let mut theta: Option<Rational> = None;
            for (l, m) in coeffs.iter().zip(&mu) {
                if *m < zero() {
                    let t = l / &(l - m);
                    if theta.as_ref().is_none_or(|cur| t < *cur) {
                        theta = Some(t);
                    }
                }
            }
            let theta = theta.expect("some coefficient is negative");
            let keep = one() - &theta;
            for (l, m) in coeffs.iter_mut().zip(&mu) {
                *l = &(&keep * &*l) + &(&theta * m);
            }
            drop_zeros(&mut corral, &mut coeffs);
        }
    }
}

fn drop_zeros(corral: &mut Vec<usize>, coeffs: &mut Vec<Rational>) {
    let mut i = 0;
    while i < coeffs.len() {
        if coeffs[i].is_zero() {
            corral.remove(i);
            coeffs.remove(i);
        } else {
            i += 1;
        }
    }
}

fn combine(points: &[Vec<Rational>], corral: &[usize], coeffs: &[Rational]) -> Vec<Rational> {
    let dim = points[corral[0]].len();
    let mut out = vec![zero(); dim];
    for (&i, c) in corral.iter().zip(coeffs) {
        for (o, v) in out.iter_mut().zip(&points[i]) {
            *o = &*o + &(c * v);
        }
    }
    out
}

/// Minimize ‖Σ μ_i q_i‖² subject to Σ μ_i = 1 over the corral's affine
/// hull. KKT system: Gram-matrix rows plus the normalization row. The
/// corral is affinely independent by construction so the system is regular.
fn affine_minimizer(points: &[Vec<Rational>], corral: &[usize]) -> Vec<Rational> {
    let m = corral.len();
    let mut a = vec![vec![zero(); m + 1]; m + 1];
    let mut b = vec![zero(); m + 1];
    for (r, &i) in corral.iter().enumerate() {
        for (c, &j) in corral.iter().enumerate() {
            a[r][c] = dot(&points[i], &points[j]);
        }
        a[r][m] = one();
    }
    for cell in a[m].iter_mut().take(m) {
        *cell = one();
    }
    b[m] = one();
    let mut sol = solve(a, b).expect("corral is affinely independent");
    sol.truncate(m);
    sol
}

fn verify_certificate(points: &[Vec<Rational>], x: &[Rational], support: &[(usize, Rational)]) -> bool {
    let mut total = zero();
    let mut combo = vec![zero(); x.len()];
    for (i, c) in support {
        if *c <= zero() {
            return false;
        }
        total += c;
        for (o, v) in combo.iter_mut().zip(&points[*i]) {
            *o = &*o + &(c * v);
        }
    }
    total == one() && combo == x
}
