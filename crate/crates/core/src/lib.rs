//! Exact teaching-cost analysis over feature lattices.
//!
//! A teacher grows a classifier by alternately adding features (along a
//! lattice of teachable feature sets) and honest labeled examples. This
//! crate measures the effort that takes, with no floating point anywhere:
//!
//! * [`instance`] — object pools, rational feature value tables, feature
//!   lattices, training sets, and featurization.
//! * [`learners`] — the consistent 1-nearest-neighbor and max-margin
//!   linear learners.
//! * [`geometry`] — the exact convex machinery behind the linear learner:
//!   simplex separability, Wolfe minimum-norm points, closest hull pairs,
//!   and support reduction.
//! * [`costs`] — sufficiency, minimal concept teaching sets, minimal
//!   invalidation sets, and per-feature-set cost vectors by exhaustive
//!   search.
//! * [`protocol`] — the Open-Featuring and Error-Driven-Featuring teaching
//!   protocols as replayable state machines, plus optimal teaching costs
//!   over all legal teacher behaviors.
//! * [`generators`] — seeded random instances and certified bound-tightness
//!   constructions.
//! * [`verifier`] — mechanical checks of the cost-bound properties with
//!   deterministic machine reports.
//!
//! Everything is immutable after validation and all computations are pure,
//! so values can be shared freely across threads.

pub mod costs;
pub mod document;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod instance;
pub mod learners;
pub mod protocol;
pub mod rational;
pub mod verifier;

pub use costs::{fs_cost, is_sufficient, min_concept_teaching_set, min_invalidation_set, Cost,
    CostVector, SearchBudget};
pub use document::{load_instance, parse_instance, save_instance, InstanceDoc};
pub use error::{Error, Result};
pub use instance::{FeatureId, FeatureLattice, FeatureSet, FeaturizedPoint, Instance, Label,
    ObjectId, TrainingSet};
pub use learners::{train, train_1nn, train_linear, Classifier, LearnerKind};
pub use protocol::{optimal_costs, optimal_teaching_cost, protocol_start, run_protocol, step_edf,
    step_open, Protocol, ProtocolState, ScriptTeacher, Teacher, TeacherAction, TeachingCost,
    Transcript};
pub use rational::Rational;
pub use verifier::{check_property, run_verification, PropertyId, PropertyReport, TrialCounts,
    VerificationReport, VerifyConfig};
