//! The two consistent learners: 1-nearest-neighbor and the exact
//! max-margin linear learner.
//!
//! Conventions (fixed across the whole engine):
//! * `sign(0)` maps to label 0, so a point exactly on a hyperplane is
//!   classified 0.
//! * An empty training set trains to `Constant(0)` for both learners; a
//!   single-label training set trains the linear learner to a constant.
//! * The 1NN tie rule returns the minimal label among the closest stored
//!   points.
//!
//! Training and prediction are pure functions; classifiers are immutable.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{self, Hyperplane, HullDistance};
use crate::instance::{FeaturizedPoint, Label};
use crate::rational::Rational;

/// Learner selector: `lin` or `1nn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LearnerKind {
    OneNn,
    Linear,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 2] = [LearnerKind::OneNn, LearnerKind::Linear];

    pub fn id(self) -> &'static str {
        match self {
            LearnerKind::OneNn => "1nn",
            LearnerKind::Linear => "lin",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "1nn" => Ok(LearnerKind::OneNn),
            "lin" => Ok(LearnerKind::Linear),
            other => Err(Error::InvalidParams(format!("unknown learner {other:?} (use lin or 1nn)"))),
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A trained classifier, evaluable on any point of the right dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classifier {
    Constant(Label),
    OneNn { points: Vec<(FeaturizedPoint, Label)>, dim: usize },
    Linear { hyperplane: Hyperplane },
}

impl Classifier {
    pub fn dim(&self) -> Option<usize> {
        match self {
            Classifier::Constant(_) => None,
            Classifier::OneNn { dim, .. } => Some(*dim),
            Classifier::Linear { hyperplane } => Some(hyperplane.weights.len()),
        }
    }

    pub fn predict(&self, pt: &FeaturizedPoint) -> Result<Label> {
        if let Some(d) = self.dim() {
            if pt.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: pt.dim() });
            }
        }
        Ok(match self {
            Classifier::Constant(label) => *label,
            Classifier::OneNn { points, .. } => {
                let mut best_dist: Option<Rational> = None;
                let mut best_label = Label::One;
                for (q, label) in points {
                    let d = pt.sq_dist(q);
                    match &best_dist {
                        Some(cur) if d > *cur => {}
                        Some(cur) if d == *cur => best_label = best_label.min(*label),
                        _ => {
                            best_dist = Some(d);
                            best_label = *label;
                        }
                    }
                }
                best_label
            }
            Classifier::Linear { hyperplane } => {
                if hyperplane.eval(pt.coords()) > crate::rational::zero() {
                    Label::One
                } else {
                    Label::Zero
                }
            }
        })
    }
}

fn check_data_dims(dim: usize, data: &[(FeaturizedPoint, Label)]) -> Result<()> {
    for (pt, _) in data {
        if pt.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: pt.dim() });
        }
    }
    Ok(())
}

/// Train the 1NN learner: stores the featurized data verbatim; an empty
/// training set yields `Constant(0)`.
pub fn train_1nn(dim: usize, data: &[(FeaturizedPoint, Label)]) -> Result<Classifier> {
    check_data_dims(dim, data)?;
    if data.is_empty() {
        return Ok(Classifier::Constant(Label::Zero));
    }
    Ok(Classifier::OneNn { points: data.to_vec(), dim })
}

/// Train the max-margin linear learner.
///
/// Strictly separable data yields the perpendicular bisector of the closest
/// pair of the class hulls (the maximum-margin hyperplane); non-separable
/// data yields `Constant(0)`; a single-label training set yields that
/// constant.
pub fn train_linear(dim: usize, data: &[(FeaturizedPoint, Label)]) -> Result<Classifier> {
    check_data_dims(dim, data)?;
    if data.is_empty() {
        return Ok(Classifier::Constant(Label::Zero));
    }
    let (pos, neg) = split_classes(data);
    if pos.is_empty() {
        return Ok(Classifier::Constant(Label::Zero));
    }
    if neg.is_empty() {
        return Ok(Classifier::Constant(Label::One));
    }
    if dim == 0 {
        return Ok(Classifier::Constant(Label::Zero));
    }
    match geometry::hull_distance(&pos, &neg, dim)? {
        HullDistance::Touching { .. } => Ok(Classifier::Constant(Label::Zero)),
        HullDistance::Separated(pair) => {
            Ok(Classifier::Linear { hyperplane: pair.max_margin_hyperplane() })
        }
    }
}

pub fn train(kind: LearnerKind, dim: usize, data: &[(FeaturizedPoint, Label)]) -> Result<Classifier> {
    match kind {
        LearnerKind::OneNn => train_1nn(dim, data),
        LearnerKind::Linear => train_linear(dim, data),
    }
}

/// Strict separability of featurized labeled data, with a witness
/// hyperplane on success (`> 0` on positives, `< 0` on negatives).
pub fn strict_separability(
    pos: &[FeaturizedPoint],
    neg: &[FeaturizedPoint],
    dim: usize,
) -> Result<Option<Hyperplane>> {
    let pos: Vec<Vec<Rational>> = pos.iter().map(|p| p.coords().to_vec()).collect();
    let neg: Vec<Vec<Rational>> = neg.iter().map(|p| p.coords().to_vec()).collect();
    geometry::separating_witness(&pos, &neg, dim)
}

/// Hyperplane equality as the engine defines it: proportional `(w, b)`;
/// positive scaling never changes a prediction.
pub fn same_hyperplane(a: &Hyperplane, b: &Hyperplane) -> bool {
    a.proportional_to(b)
}

pub(crate) fn split_classes(data: &[(FeaturizedPoint, Label)]) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (pt, label) in data {
        match label {
            Label::One => pos.push(pt.coords().to_vec()),
            Label::Zero => neg.push(pt.coords().to_vec()),
        }
    }
    (pos, neg)
}

/// Zero training error: every training example is classified as labeled.
pub fn consistent_on(classifier: &Classifier, data: &[(FeaturizedPoint, Label)]) -> Result<bool> {
    for (pt, label) in data {
        if classifier.predict(pt)? != *label {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn pt(coords: &[i64]) -> FeaturizedPoint {
        FeaturizedPoint::new(coords.iter().map(|&v| int(v)).collect())
    }

    fn labeled(rows: &[(&[i64], u8)]) -> Vec<(FeaturizedPoint, Label)> {
        rows.iter().map(|(c, l)| (pt(c), Label::from_u8(*l).unwrap())).collect()
    }

    #[test]
    fn one_nn_breaks_ties_with_the_minimal_label() {
        let c = train_1nn(1, &labeled(&[(&[1], 0), (&[3], 1)])).unwrap();
        // (2) is at distance 1 from both stored points; labels {0,1} -> 0.
        assert_eq!(c.predict(&pt(&[2])).unwrap(), Label::Zero);
        assert_eq!(c.predict(&pt(&[3])).unwrap(), Label::One);
        assert_eq!(c.predict(&pt(&[100])).unwrap(), Label::One);
    }

    #[test]
    fn one_nn_empty_data_is_constant_zero() {
        let c = train_1nn(3, &[]).unwrap();
        assert_eq!(c, Classifier::Constant(Label::Zero));
    }

    #[test]
    fn one_nn_zero_dimensional_collision() {
        let data = labeled(&[(&[], 0), (&[], 1)]);
        let c = train_1nn(0, &data).unwrap();
        assert_eq!(c.predict(&pt(&[])).unwrap(), Label::Zero);
    }

    #[test]
    fn one_nn_argmin_set_minimum() {
        let data = labeled(&[(&[0, 0], 0), (&[1, 1], 0), (&[0, 1], 1)]);
        let c = train_1nn(2, &data).unwrap();
        // (1,0): squared distances 1, 1, 2 -> argmin labels {0,0} -> 0.
        assert_eq!(c.predict(&pt(&[1, 0])).unwrap(), Label::Zero);
    }

    #[test]
    fn linear_prediction_maps_boundary_to_zero() {
        let c = Classifier::Linear {
            hyperplane: Hyperplane { weights: vec![int(1)], offset: ratio(-5, 2) },
        };
        assert_eq!(c.predict(&pt(&[3])).unwrap(), Label::One);
        assert_eq!(c.predict(&pt(&[2])).unwrap(), Label::Zero);
        let boundary = FeaturizedPoint::new(vec![ratio(5, 2)]);
        assert_eq!(c.predict(&boundary).unwrap(), Label::Zero);
    }

    #[test]
    fn constant_ignores_input() {
        let c = Classifier::Constant(Label::Zero);
        assert_eq!(c.predict(&pt(&[9, 9, 9])).unwrap(), Label::Zero);
    }

    #[test]
    fn train_linear_midpoint_threshold() {
        let c = train_linear(1, &labeled(&[(&[2], 0), (&[3], 1)])).unwrap();
        let Classifier::Linear { hyperplane } = &c else { panic!("expected a hyperplane") };
        assert_eq!(hyperplane.weights, vec![int(1)]);
        assert_eq!(hyperplane.offset, ratio(-5, 2));
        // Pool 1,2,3,4 classifies as 0,0,1,1.
        let labels: Vec<Label> =
            (1..=4).map(|v| c.predict(&pt(&[v])).unwrap()).collect();
        assert_eq!(labels, vec![Label::Zero, Label::Zero, Label::One, Label::One]);
    }

    #[test]
    fn train_linear_on_xor_is_constant_zero() {
        let data = labeled(&[(&[0, 0], 0), (&[0, 1], 1), (&[1, 0], 1), (&[1, 1], 0)]);
        assert_eq!(train_linear(2, &data).unwrap(), Classifier::Constant(Label::Zero));
    }

    #[test]
    fn train_linear_single_class_is_constant() {
        let c = train_linear(1, &labeled(&[(&[7], 1)])).unwrap();
        assert_eq!(c, Classifier::Constant(Label::One));
        let c = train_linear(2, &[]).unwrap();
        assert_eq!(c, Classifier::Constant(Label::Zero));
    }

    #[test]
    fn train_linear_zero_dim_with_both_labels_is_constant_zero() {
        let data = labeled(&[(&[], 0), (&[], 1)]);
        assert_eq!(train_linear(0, &data).unwrap(), Classifier::Constant(Label::Zero));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let data = labeled(&[(&[1, 2], 0)]);
        assert!(matches!(train_linear(1, &data), Err(Error::DimensionMismatch { .. })));
        let c = train_1nn(2, &data).unwrap();
        assert!(matches!(c.predict(&pt(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn separability_checks() {
        let pos = vec![pt(&[3]), pt(&[4])];
        let neg = vec![pt(&[1]), pt(&[2])];
        assert!(strict_separability(&pos, &neg, 1).unwrap().is_some());

        let pos = vec![pt(&[0, 1]), pt(&[1, 0])];
        let neg = vec![pt(&[0, 0]), pt(&[1, 1])];
        assert!(strict_separability(&pos, &neg, 2).unwrap().is_none());

        let empty: Vec<FeaturizedPoint> = vec![];
        assert!(strict_separability(&empty, &[pt(&[7])], 1).unwrap().is_some());
    }

    #[test]
    fn separable_training_is_consistent() {
        let data = labeled(&[(&[0, 0], 0), (&[0, 1], 0), (&[3, 3], 1), (&[4, 2], 1)]);
        let c = train_linear(2, &data).unwrap();
        assert!(consistent_on(&c, &data).unwrap());
    }
}
