//! Exact convex geometry for max-margin training: strict separability,
//! closest pair of convex hulls, and support reduction.
//!
//! Two independent algebraic routes are kept deliberately distinct:
//! separability is decided by an exact phase-1 simplex on the scaled
//! half-space system, while the closest hull pair comes from Wolfe's
//! minimum-norm-point algorithm on the difference polytope. Tests hold the
//! two routes against each other.

pub mod linalg;
pub mod simplex;
pub mod wolfe;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{dot, int, one, sub, zero, Rational};

pub use wolfe::{min_norm_point, MinNorm};

/// A separating hyperplane `w · x + b`, positive on one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub weights: Vec<Rational>,
    pub offset: Rational,
}

impl Hyperplane {
    pub fn eval(&self, point: &[Rational]) -> Rational {
        dot(&self.weights, point) + &self.offset
    }

    /// Equality up to positive scaling.
    pub fn proportional_to(&self, other: &Hyperplane) -> bool {
        if self.weights.len() != other.weights.len() {
            return false;
        }
        // Find a nonzero coordinate to fix the scale.
        let mine = self.weights.iter().chain(std::iter::once(&self.offset));
        let theirs = other.weights.iter().chain(std::iter::once(&other.offset));
        let mut scale: Option<Rational> = None;
        for (a, b) in mine.clone().zip(theirs.clone()) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                (false, false) => {
                    let s = a / b;
                    if s <= zero() {
                        return false;
                    }
                    match &scale {
                        None => scale = Some(s),
                        Some(prev) => {
                            if *prev != s {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        scale.is_some()
    }
}

/// Decide strict separability of two finite point classes and return a
/// witness hyperplane with `w · p + b ≥ 1` on `pos` and `≤ -1` on `neg`.
///
/// Either class may be empty (trivially separable). In zero dimensions the
/// classes are separable iff one of them is empty.
pub fn separating_witness(
    pos: &[Vec<Rational>],
    neg: &[Vec<Rational>],
    dim: usize,
) -> Result<Option<Hyperplane>> {
    check_dims(pos, neg, dim)?;
    // Variables (w, b); strictness is scaled into the ±1 right-hand sides.
    let mut constraints = Vec::with_capacity(pos.len() + neg.len());
    for p in pos {
        let mut coeffs = p.clone();
        coeffs.push(one());
        constraints.push((coeffs, one()));
    }
    for q in neg {
        let mut coeffs: Vec<Rational> = q.iter().map(|v| -v).collect();
        coeffs.push(-one());
        constraints.push((coeffs, one()));
    }
    Ok(simplex::feasible_point(dim + 1, &constraints).map(|mut x| {
        let offset = x.pop().expect("offset variable");
        Hyperplane { weights: x, offset }
    }))
}

/// The closest pair of points between the convex hulls of `pos` and `neg`,
/// with convex-combination certificates over input indices.
///
/// The difference vector `p − n` (and hence the squared distance and the
/// max-margin hyperplane) is unique; the certificates need not be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullPair {
    pub p: Vec<Rational>,
    pub n: Vec<Rational>,
    pub squared_distance: Rational,
    pub pos_support: Vec<(usize, Rational)>,
    pub neg_support: Vec<(usize, Rational)>,
}

impl HullPair {
    /// The perpendicular bisector of the closest pair: the maximum-margin
    /// hyperplane for the two classes.
    pub fn max_margin_hyperplane(&self) -> Hyperplane {
        let weights = sub(&self.p, &self.n);
        let mid: Vec<Rational> = self
            .p
            .iter()
            .zip(&self.n)
            .map(|(a, b)| (a + b) / int(2))
            .collect();
        let offset = -dot(&weights, &mid);
        Hyperplane { weights, offset }
    }
}

/// Outcome of the hull-distance computation: hulls either touch (a common
/// point certifies non-separability) or are strictly apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HullDistance {
    Touching { common_point: Vec<Rational> },
    Separated(HullPair),
}

/// Compute the exact distance between `conv(pos)` and `conv(neg)` via the
/// minimum-norm point of the difference polytope.
pub fn hull_distance(
    pos: &[Vec<Rational>],
    neg: &[Vec<Rational>],
    dim: usize,
) -> Result<HullDistance> {
    check_dims(pos, neg, dim)?;
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::EmptyClass);
    }
    let mut diffs = Vec::with_capacity(pos.len() * neg.len());
    let mut pairs = Vec::with_capacity(pos.len() * neg.len());
    for (i, p) in pos.iter().enumerate() {
        for (j, q) in neg.iter().enumerate() {
            diffs.push(sub(p, q));
            pairs.push((i, j));
        }
    }
    let mn = min_norm_point(&diffs);
    let mut pos_coeff = vec![zero(); pos.len()];
    let mut neg_coeff = vec![zero(); neg.len()];
    for (k, lambda) in &mn.support {
        let (i, j) = pairs[*k];
        pos_coeff[i] = &pos_coeff[i] + lambda;
        neg_coeff[j] = &neg_coeff[j] + lambda;
    }
    let p = combine(pos, &pos_coeff, dim);
    let n = combine(neg, &neg_coeff, dim);
    debug_assert_eq!(sub(&p, &n), mn.point);
    if mn.point.iter().all(|v| v.is_zero()) {
        return Ok(HullDistance::Touching { common_point: p });
    }
    let pair = HullPair {
        squared_distance: mn.squared_norm(),
        pos_support: collect_support(pos_coeff),
        neg_support: collect_support(neg_coeff),
        p,
        n,
    };
    debug_assert!(verify_hull_pair(pos, neg, &pair));
    Ok(HullDistance::Separated(pair))
}

/// The closest hull pair for strictly separable classes; errors with
/// [`Error::NotSeparable`] when the hulls intersect.
pub fn closest_hull_pair(
    pos: &[Vec<Rational>],
    neg: &[Vec<Rational>],
    dim: usize,
) -> Result<HullPair> {
    match hull_distance(pos, neg, dim)? {
        HullDistance::Touching { .. } => Err(Error::NotSeparable),
        HullDistance::Separated(pair) => Ok(pair),
    }
}

/// Verify the closest-pair optimality conditions from scratch: both points
/// are certified hull members and the difference direction supports both
/// hulls. Used by debug assertions and the property verifier.
pub fn verify_hull_pair(pos: &[Vec<Rational>], neg: &[Vec<Rational>], pair: &HullPair) -> bool {
    let v = sub(&pair.p, &pair.n);
    if pair.squared_distance != dot(&v, &v) || v.iter().all(|c| c.is_zero()) {
        return false;
    }
    if !verify_combination(pos, &pair.pos_support, &pair.p)
        || !verify_combination(neg, &pair.neg_support, &pair.n)
    {
        return false;
    }
    let vp = dot(&v, &pair.p);
    let vn = dot(&v, &pair.n);
    pos.iter().all(|s| dot(&v, s) >= vp) && neg.iter().all(|t| dot(&v, t) <= vn)
}

fn verify_combination(
    points: &[Vec<Rational>],
    support: &[(usize, Rational)],
    expected: &[Rational],
) -> bool {
    let mut total = zero();
    let mut combo = vec![zero(); expected.len()];
    for (i, c) in support {
        if *c <= zero() || *i >= points.len() {
            return false;
        }
        total += c;
        for (o, v) in combo.iter_mut().zip(&points[*i]) {
            *o = &*o + &(c * v);
        }
    }
    total == one() && combo == expected
}

/// A reduced support set: indices into `pos` and `neg` whose max-margin
/// hyperplane reproduces the full-data one exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    pub pos_indices: Vec<usize>,
    pub neg_indices: Vec<usize>,
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.pos_indices.len() + self.neg_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos_indices.is_empty() && self.neg_indices.is_empty()
    }
}

/// Reduce the closest-pair certificates to at most `dim + 1` labeled points
/// whose max-margin hyperplane equals the full-data one.
///
/// All certificate points lie on the faces exposed by the difference
/// direction `v`, so the extended certificate columns satisfy one extra
/// linear relation; repeatedly stepping along kernel vectors of the active
/// columns drives coefficients to zero until the columns are independent,
/// which caps the support at `dim + 1`.
pub fn support_reduction(
    pos: &[Vec<Rational>],
    neg: &[Vec<Rational>],
    dim: usize,
) -> Result<SupportSet> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let pair = closest_hull_pair(pos, neg, dim)?;
    let v = sub(&pair.p, &pair.n);

    #[derive(Clone, Copy, PartialEq)]
    enum Side {
        Pos,
        Neg,
    }
    // Extended columns: (point, 1, 0) for positives, (−point, 0, 1) for
    // negatives; kernel steps preserve p − n = v and both coefficient sums.
    let mut entries: Vec<(Side, usize, Rational)> = Vec::new();
    for (i, c) in &pair.pos_support {
        entries.push((Side::Pos, *i, c.clone()));
    }
    for (j, c) in &pair.neg_support {
        entries.push((Side::Neg, *j, c.clone()));
    }
    let column = |side: Side, ix: usize| -> Vec<Rational> {
        let mut col: Vec<Rational> = match side {
            Side::Pos => pos[ix].clone(),
            Side::Neg => neg[ix].iter().map(|v| -v).collect(),
        };
        col.push(if side == Side::Pos { one() } else { zero() });
        col.push(if side == Side::Neg { one() } else { zero() });
        col
    };

    loop {
        let cols: Vec<Vec<Rational>> =
            entries.iter().map(|(s, i, _)| column(*s, *i)).collect();
        let Some(mut z) = linalg::kernel_vector(&cols) else { break };
        if z.iter().all(|c| *c <= zero()) {
            for c in &mut z {
                *c = -c.clone();
            }
        }
        let mut theta: Option<Rational> = None;
        for ((_, _, coeff), step) in entries.iter().zip(&z) {
            if *step > zero() {
                let t = coeff / step;
                if theta.as_ref().is_none_or(|cur| t < *cur) {
                    theta = Some(t);
                }
            }
        }
        let theta = theta.expect("kernel vector has a positive entry");
        for ((_, _, coeff), step) in entries.iter_mut().zip(&z) {
            let delta = &theta * step;
            *coeff = &*coeff - &delta;
        }
        entries.retain(|(_, _, c)| !c.is_zero());
    }

    let mut out = SupportSet { pos_indices: vec![], neg_indices: vec![] };
    for (side, ix, _) in entries {
        match side {
            Side::Pos => out.pos_indices.push(ix),
            Side::Neg => out.neg_indices.push(ix),
        }
    }
    out.pos_indices.sort_unstable();
    out.neg_indices.sort_unstable();
    debug_assert!(out.len() <= dim + 1);
    debug_assert!({
        let rp: Vec<_> = out.pos_indices.iter().map(|&i| pos[i].clone()).collect();
        let rn: Vec<_> = out.neg_indices.iter().map(|&j| neg[j].clone()).collect();
        match closest_hull_pair(&rp, &rn, dim) {
            Ok(reduced) => sub(&reduced.p, &reduced.n) == v,
            Err(_) => false,
        }
    });
    Ok(out)
}

fn combine(points: &[Vec<Rational>], coeffs: &[Rational], dim: usize) -> Vec<Rational> {
    let mut out = vec![zero(); dim];
    for (c, p) in coeffs.iter().zip(points) {
        if !c.is_zero() {
            for (o, v) in out.iter_mut().zip(p) {
                *o = &*o + &(c * v);
            }
        }
    }
    out
}

fn collect_support(coeffs: Vec<Rational>) -> Vec<(usize, Rational)> {
    coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

fn check_dims(pos: &[Vec<Rational>], neg: &[Vec<Rational>], dim: usize) -> Result<()> {
    for p in pos.iter().chain(neg) {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn pts(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn separable_intervals_on_a_line() {
        let pos = pts(&[&[3], &[4]]);
        let neg = pts(&[&[1], &[2]]);
        let w = separating_witness(&pos, &neg, 1).unwrap().expect("separable");
        for p in &pos {
            assert!(w.eval(p) >= int(1));
        }
        for q in &neg {
            assert!(w.eval(q) <= int(-1));
        }
    }

    #[test]
    fn xor_square_is_not_separable() {
        let pos = pts(&[&[0, 1], &[1, 0]]);
        let neg = pts(&[&[0, 0], &[1, 1]]);
        assert!(separating_witness(&pos, &neg, 2).unwrap().is_none());
        assert!(matches!(
            hull_distance(&pos, &neg, 2).unwrap(),
            HullDistance::Touching { .. }
        ));
    }

    #[test]
    fn empty_class_is_trivially_separable() {
        let neg = pts(&[&[7]]);
        let none: Vec<Vec<Rational>> = vec![];
        assert!(separating_witness(&none, &neg, 1).unwrap().is_some());
        assert!(separating_witness(&neg, &none, 1).unwrap().is_some());
        assert!(separating_witness(&none, &none, 0).unwrap().is_some());
    }

    #[test]
    fn zero_dimensions_need_an_empty_side() {
        let a = vec![vec![]];
        let b = vec![vec![]];
        assert!(separating_witness(&a, &b, 0).unwrap().is_none());
        assert!(separating_witness(&a, &[], 0).unwrap().is_some());
    }

    #[test]
    fn closest_pair_on_a_line() {
        let pos = pts(&[&[3], &[4]]);
        let neg = pts(&[&[1], &[2]]);
        let pair = closest_hull_pair(&pos, &neg, 1).unwrap();
        assert_eq!(pair.p, vec![int(3)]);
        assert_eq!(pair.n, vec![int(2)]);
        assert_eq!(pair.squared_distance, int(1));
        assert!(verify_hull_pair(&pos, &neg, &pair));
    }

    #[test]
    fn closest_pair_projects_onto_a_segment() {
        let pos = pts(&[&[0, 2], &[2, 0]]);
        let neg = pts(&[&[0, 0]]);
        let pair = closest_hull_pair(&pos, &neg, 2).unwrap();
        assert_eq!(pair.p, vec![int(1), int(1)]);
        assert_eq!(pair.n, vec![int(0), int(0)]);
        assert_eq!(pair.squared_distance, int(2));
        assert!(verify_hull_pair(&pos, &neg, &pair));
    }

    #[test]
    fn closest_pair_of_singletons() {
        let pos = pts(&[&[5]]);
        let neg = pts(&[&[1]]);
        let pair = closest_hull_pair(&pos, &neg, 1).unwrap();
        assert_eq!(pair.squared_distance, int(16));
    }

    #[test]
    fn touching_hulls_are_not_separable() {
        let pos = pts(&[&[0], &[2]]);
        let neg = pts(&[&[1]]);
        assert!(matches!(closest_hull_pair(&pos, &neg, 1), Err(Error::NotSeparable)));
    }

    #[test]
    fn empty_class_is_an_error_for_hull_distance() {
        let pos = pts(&[&[1]]);
        let none: Vec<Vec<Rational>> = vec![];
        assert!(matches!(hull_distance(&pos, &none, 1), Err(Error::EmptyClass)));
    }

    #[test]
    fn max_margin_hyperplane_is_the_bisector() {
        let pos = pts(&[&[3]]);
        let neg = pts(&[&[2]]);
        let pair = closest_hull_pair(&pos, &neg, 1).unwrap();
        let h = pair.max_margin_hyperplane();
        assert_eq!(h.weights, vec![int(1)]);
        assert_eq!(h.offset, ratio(-5, 2));
    }

    #[test]
    fn support_reduction_keeps_the_closest_endpoints() {
        let pos = pts(&[&[3], &[4]]);
        let neg = pts(&[&[1], &[2]]);
        let s = support_reduction(&pos, &neg, 1).unwrap();
        assert_eq!(s.pos_indices, vec![0]); // (3)
        assert_eq!(s.neg_indices, vec![1]); // (2)
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn support_reduction_caratheodory_case() {
        let pos = pts(&[&[0, 2], &[2, 0], &[5, 5]]);
        let neg = pts(&[&[0, 0]]);
        let s = support_reduction(&pos, &neg, 2).unwrap();
        assert_eq!(s.pos_indices, vec![0, 1]); // (0,2) and (2,0)
        assert_eq!(s.neg_indices, vec![0]);
        assert_eq!(s.len(), 3); // = d + 1
    }

    #[test]
    fn support_reduction_of_singletons_keeps_both() {
        let pos = pts(&[&[1]]);
        let neg = pts(&[&[0]]);
        let s = support_reduction(&pos, &neg, 1).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn support_reduction_reproduces_the_hyperplane() {
        let pos = pts(&[&[0, 2], &[2, 0], &[5, 5], &[3, 3]]);
        let neg = pts(&[&[0, 0], &[-1, -2]]);
        let full = closest_hull_pair(&pos, &neg, 2).unwrap().max_margin_hyperplane();
        let s = support_reduction(&pos, &neg, 2).unwrap();
        assert!(s.len() <= 3);
        let rp: Vec<_> = s.pos_indices.iter().map(|&i| pos[i].clone()).collect();
        let rn: Vec<_> = s.neg_indices.iter().map(|&j| neg[j].clone()).collect();
        let reduced = closest_hull_pair(&rp, &rn, 2).unwrap().max_margin_hyperplane();
        assert_eq!(full, reduced);
        // And the reduced hyperplane still strictly separates all inputs.
        for p in &pos {
            assert!(reduced.eval(p) > int(0));
        }
        for q in &neg {
            assert!(reduced.eval(q) < int(0));
        }
    }

    #[test]
    fn proportional_hyperplanes() {
        let a = Hyperplane { weights: vec![int(1), int(-2)], offset: int(3) };
        let b = Hyperplane { weights: vec![int(2), int(-4)], offset: int(6) };
        let c = Hyperplane { weights: vec![int(-1), int(2)], offset: int(-3) };
        let d = Hyperplane { weights: vec![int(1), int(-2)], offset: int(4) };
        assert!(a.proportional_to(&b));
        assert!(!a.proportional_to(&c)); // negative scale flips predictions
        assert!(!a.proportional_to(&d));
    }
}
