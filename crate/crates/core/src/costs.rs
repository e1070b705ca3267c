//! Sufficiency, minimal concept teaching sets, minimal invalidation sets,
//! and the per-feature-set cost vector, all by exact search.
//!
//! Subsets are enumerated by cardinality and then lexicographically over
//! object ids, so minimal-set ties resolve deterministically. Infinite
//! costs are a distinct value, never a sentinel.

use std::fmt;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instance::{FeatureSet, FeaturizedPoint, Instance, Label, TrainingSet};
use crate::learners::{self, Classifier, LearnerKind};

/// A count that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(usize),
    Infinite,
}

impl Cost {
    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(k) => write!(f, "{k}"),
            Cost::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cost::Finite(k) => serializer.serialize_u64(*k as u64),
            Cost::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(k) => Ok(Cost::Finite(k as usize)),
            Raw::Text(s) if s == "inf" => Ok(Cost::Infinite),
            Raw::Text(s) => Err(D::Error::custom(format!("expected a count or \"inf\", got {s:?}"))),
        }
    }
}

/// The optimal feature-set cost vector: representation cost (`|F|`),
/// concept specification cost, and invalidation cost. For a consistent
/// learner exactly one of the two search costs is infinite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostVector {
    pub representation: usize,
    pub concept_spec: Cost,
    pub invalidation: Cost,
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.representation, self.concept_spec, self.invalidation)
    }
}

/// Limits for the exact searches. Searches are exact within budget and
/// report exhaustion rather than guessing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest training-subset cardinality to enumerate (clamped to |X|).
    pub max_subset_size: usize,
    /// Total number of search states (candidate subsets / protocol states).
    pub max_states: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_subset_size: usize::MAX, max_states: 10_000_000 }
    }
}

impl SearchBudget {
    pub fn with_max_states(max_states: u64) -> Self {
        SearchBudget { max_states, ..SearchBudget::default() }
    }
}

/// Featurization of a whole pool under one feature set, shared by the
/// searches so table lookups happen once.
pub(crate) struct FeatureContext<'a> {
    pub inst: &'a Instance,
    pub points: Vec<FeaturizedPoint>,
    pub dim: usize,
}

impl<'a> FeatureContext<'a> {
    pub fn new(inst: &'a Instance, fs: &FeatureSet) -> Result<Self> {
        let points = inst.featurize_pool(fs)?;
        Ok(FeatureContext { inst, points, dim: fs.len() })
    }

    pub fn labeled(&self, ixs: impl IntoIterator<Item = usize>) -> Vec<(FeaturizedPoint, Label)> {
        ixs.into_iter()
            .map(|ix| (self.points[ix].clone(), self.inst.target_ix(ix)))
            .collect()
    }

    pub fn train(&self, learner: LearnerKind, ixs: &[usize]) -> Result<Classifier> {
        learners::train(learner, self.dim, &self.labeled(ixs.iter().copied()))
    }

    pub fn train_mask(&self, learner: LearnerKind, mask: u64) -> Result<Classifier> {
        learners::train(learner, self.dim, &self.labeled(mask_indices(mask, self.points.len())))
    }

    /// Does the classifier reproduce the target on every pool object?
    pub fn pool_correct(&self, c: &Classifier) -> Result<bool> {
        for (ix, pt) in self.points.iter().enumerate() {
            if c.predict(pt)? != self.inst.target_ix(ix) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Is some training example (given by pool index) misclassified?
    pub fn training_error(&self, c: &Classifier, ixs: impl IntoIterator<Item = usize>) -> Result<bool> {
        for ix in ixs {
            if c.predict(&self.points[ix])? != self.inst.target_ix(ix) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

pub(crate) fn mask_indices(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask & (1 << i) != 0).collect()
}

fn require_in_lattice(inst: &Instance, fs: &FeatureSet) -> Result<()> {
    if !inst.lattice().contains(fs) {
        return Err(Error::FeatureSetNotInLattice(fs.clone()));
    }
    Ok(())
}

/// Is there an honest training set that teaches the target exactly?
///
/// 1NN: sufficient iff no two objects share a featurized point with
/// different target labels (then the full pool teaches). Linear: sufficient
/// iff the featurized positive and negative pools are strictly separable.
pub fn is_sufficient(inst: &Instance, fs: &FeatureSet, learner: LearnerKind) -> Result<bool> {
    require_in_lattice(inst, fs)?;
    let ctx = FeatureContext::new(inst, fs)?;
    is_sufficient_ctx(&ctx, learner)
}

pub(crate) fn is_sufficient_ctx(ctx: &FeatureContext, learner: LearnerKind) -> Result<bool> {
    match learner {
        LearnerKind::OneNn => {
            for i in 0..ctx.points.len() {
                for j in (i + 1)..ctx.points.len() {
                    if ctx.inst.target_ix(i) != ctx.inst.target_ix(j)
                        && ctx.points[i] == ctx.points[j]
                    {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        LearnerKind::Linear => {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for (ix, pt) in ctx.points.iter().enumerate() {
                match ctx.inst.target_ix(ix) {
                    Label::One => pos.push(pt.clone()),
                    Label::Zero => neg.push(pt.clone()),
                }
            }
            Ok(learners::strict_separability(&pos, &neg, ctx.dim)?.is_some())
        }
    }
}

/// The smallest honest training set whose trained classifier equals the
/// target on the whole pool; `None` when the feature set is insufficient.
/// Ties break lexicographically on object ids.
pub fn min_concept_teaching_set(
    inst: &Instance,
    fs: &FeatureSet,
    learner: LearnerKind,
    budget: &SearchBudget,
) -> Result<Option<TrainingSet>> {
    require_in_lattice(inst, fs)?;
    let ctx = FeatureContext::new(inst, fs)?;
    if !is_sufficient_ctx(&ctx, learner)? {
        return Ok(None);
    }
    let found = search_min_subset(&ctx, budget, |subset| {
        let c = ctx.train(learner, subset)?;
        ctx.pool_correct(&c)
    })?;
    match found {
        Some(ixs) => Ok(Some(inst.honest_training_set(&ixs))),
        // A sufficient feature set always teaches within the pool, so the
        // enumeration can only come up empty when the budget clipped it.
        None => Err(Error::BudgetExceeded {
            states: budget.max_states,
            size_reached: budget.max_subset_size.min(inst.len()),
        }),
    }
}

/// The smallest honest training set on which the trained classifier
/// misclassifies one of its own examples; `None` when the feature set is
/// sufficient (consistent learners never err on consistent data).
pub fn min_invalidation_set(
    inst: &Instance,
    fs: &FeatureSet,
    learner: LearnerKind,
    budget: &SearchBudget,
) -> Result<Option<TrainingSet>> {
    require_in_lattice(inst, fs)?;
    let ctx = FeatureContext::new(inst, fs)?;
    if is_sufficient_ctx(&ctx, learner)? {
        return Ok(None);
    }
    let found = search_min_subset(&ctx, budget, |subset| {
        let c = ctx.train(learner, subset)?;
        ctx.training_error(&c, subset.iter().copied())
    })?;
    match found {
        Some(ixs) => Ok(Some(inst.honest_training_set(&ixs))),
        None => Err(Error::BudgetExceeded {
            states: budget.max_states,
            size_reached: budget.max_subset_size.min(inst.len()),
        }),
    }
}

/// Enumerate honest subsets by (cardinality, lexicographic object id) and
/// return the first one satisfying `accept`.
fn search_min_subset(
    ctx: &FeatureContext,
    budget: &SearchBudget,
    mut accept: impl FnMut(&[usize]) -> Result<bool>,
) -> Result<Option<Vec<usize>>> {
    let order = ctx.inst.objects_by_id();
    let n = order.len();
    let max_k = budget.max_subset_size.min(n);
    let mut states: u64 = 0;
    for k in 0..=max_k {
        for combo in order.iter().copied().combinations(k) {
            states += 1;
            if states > budget.max_states {
                return Err(Error::BudgetExceeded { states, size_reached: k });
            }
            if accept(&combo)? {
                return Ok(Some(combo));
            }
        }
    }
    Ok(None)
}

/// Assemble the full cost vector for a feature set and learner.
pub fn fs_cost(
    inst: &Instance,
    fs: &FeatureSet,
    learner: LearnerKind,
    budget: &SearchBudget,
) -> Result<CostVector> {
    let concept_spec = match min_concept_teaching_set(inst, fs, learner, budget)? {
        Some(t) => Cost::Finite(t.len()),
        None => Cost::Infinite,
    };
    let invalidation = match min_invalidation_set(inst, fs, learner, budget)? {
        Some(t) => Cost::Finite(t.len()),
        None => Cost::Infinite,
    };
    debug_assert!(
        concept_spec.is_finite() != invalidation.is_finite(),
        "exactly one of the two search costs is infinite for a consistent learner"
    );
    Ok(CostVector { representation: fs.len(), concept_spec, invalidation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{collision_pair, thresh4, xor4};
    use crate::instance::ObjectId;

    fn f1(inst: &Instance) -> FeatureSet {
        inst.lattice().sets().iter().find(|s| s.len() == 1).unwrap().clone()
    }

    fn top(inst: &Instance) -> FeatureSet {
        inst.lattice().sets().last().unwrap().clone()
    }

    fn names(t: &TrainingSet) -> Vec<String> {
        t.iter().map(|(x, _)| x.to_string()).collect()
    }

    #[test]
    fn sufficiency_of_the_canned_instances() {
        let thresh = thresh4();
        assert!(is_sufficient(&thresh, &f1(&thresh), LearnerKind::Linear).unwrap());
        assert!(is_sufficient(&thresh, &f1(&thresh), LearnerKind::OneNn).unwrap());

        let xor = xor4();
        assert!(!is_sufficient(&xor, &top(&xor), LearnerKind::Linear).unwrap());
        assert!(is_sufficient(&xor, &top(&xor), LearnerKind::OneNn).unwrap());

        // The empty feature set collides every object at one point.
        assert!(!is_sufficient(&thresh, &FeatureSet::empty(), LearnerKind::Linear).unwrap());
        assert!(!is_sufficient(&thresh, &FeatureSet::empty(), LearnerKind::OneNn).unwrap());
    }

    #[test]
    fn unknown_feature_set_is_rejected() {
        let thresh = thresh4();
        let bogus = FeatureSet::from_ids([crate::instance::FeatureId::new("f9")]);
        assert!(matches!(
            is_sufficient(&thresh, &bogus, LearnerKind::Linear),
            Err(Error::FeatureSetNotInLattice(_))
        ));
    }

    #[test]
    fn thresh4_linear_concept_set() {
        // Brute force over subsets: {x1, x3} trains the midpoint-2 threshold,
        // which puts x2 exactly on the boundary and therefore at label 0.
        // It precedes {x2, x3} lexicographically.
        let thresh = thresh4();
        let t = min_concept_teaching_set(&thresh, &f1(&thresh), LearnerKind::Linear, &SearchBudget::default())
            .unwrap()
            .expect("sufficient");
        assert_eq!(t.len(), 2);
        assert_eq!(names(&t), vec!["x1", "x3"]);
    }

    #[test]
    fn xor4_one_nn_needs_the_whole_pool() {
        let xor = xor4();
        let t = min_concept_teaching_set(&xor, &top(&xor), LearnerKind::OneNn, &SearchBudget::default())
            .unwrap()
            .expect("sufficient");
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn xor4_linear_concept_cost_is_infinite() {
        let xor = xor4();
        let t = min_concept_teaching_set(&xor, &top(&xor), LearnerKind::Linear, &SearchBudget::default())
            .unwrap();
        assert!(t.is_none());
    }

    #[test]
    fn empty_feature_set_invalidation_is_a_pair() {
        let thresh = thresh4();
        for learner in LearnerKind::ALL {
            let t = min_invalidation_set(&thresh, &FeatureSet::empty(), learner, &SearchBudget::default())
                .unwrap()
                .expect("insufficient");
            assert_eq!(t.len(), 2);
        }
    }

    #[test]
    fn xor4_linear_invalidation_needs_all_four() {
        let xor = xor4();
        let t = min_invalidation_set(&xor, &top(&xor), LearnerKind::Linear, &SearchBudget::default())
            .unwrap()
            .expect("insufficient");
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn collision_pair_invalidates_one_nn() {
        let coll = collision_pair();
        let t = min_invalidation_set(&coll, &f1(&coll), LearnerKind::OneNn, &SearchBudget::default())
            .unwrap()
            .expect("insufficient");
        assert_eq!(t.len(), 2);
        assert_eq!(t.iter().count(), 2);
    }

    #[test]
    fn fs_cost_rows() {
        let thresh = thresh4();
        for learner in LearnerKind::ALL {
            let cv = fs_cost(&thresh, &FeatureSet::empty(), learner, &SearchBudget::default()).unwrap();
            assert_eq!(cv, CostVector {
                representation: 0,
                concept_spec: Cost::Infinite,
                invalidation: Cost::Finite(2),
            });
        }
        let cv = fs_cost(&thresh, &f1(&thresh), LearnerKind::Linear, &SearchBudget::default()).unwrap();
        assert_eq!(cv, CostVector {
            representation: 1,
            concept_spec: Cost::Finite(2),
            invalidation: Cost::Infinite,
        });

        let xor = xor4();
        let cv = fs_cost(&xor, &top(&xor), LearnerKind::Linear, &SearchBudget::default()).unwrap();
        assert_eq!(cv, CostVector {
            representation: 2,
            concept_spec: Cost::Infinite,
            invalidation: Cost::Finite(4),
        });
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let xor = xor4();
        let tight = SearchBudget { max_subset_size: usize::MAX, max_states: 3 };
        let err = min_concept_teaching_set(&xor, &top(&xor), LearnerKind::OneNn, &tight).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn subset_size_budget_reports_exhaustion() {
        let xor = xor4();
        let tight = SearchBudget { max_subset_size: 2, max_states: u64::MAX };
        let err = min_concept_teaching_set(&xor, &top(&xor), LearnerKind::OneNn, &tight).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { size_reached: 2, .. }));
    }

    #[test]
    fn min_sets_are_lexicographically_tied() {
        // Both {x1,x2} and {x3,x4}-style pairs invalidate the empty feature
        // set; the lexicographically first pair must win.
        let thresh = thresh4();
        let t = min_invalidation_set(&thresh, &FeatureSet::empty(), LearnerKind::OneNn, &SearchBudget::default())
            .unwrap()
            .unwrap();
        let ids: Vec<ObjectId> = t.iter().map(|(x, _)| x.clone()).collect();
        assert_eq!(ids[0].as_str(), "x1");
        assert_eq!(ids[1].as_str(), "x3");
    }
}
