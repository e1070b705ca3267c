//! Crate-wide error type.

use crate::instance::{FeatureId, FeatureSet, ObjectId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed instance document: {0}")]
    MalformedDocument(String),
    #[error("bad rational literal {literal:?}: {reason}")]
    BadRational { literal: String, reason: String },
    #[error("duplicate object id {0}")]
    DuplicateObjectId(ObjectId),
    #[error("feature {feature} has no value for object {object}")]
    MissingFeatureValue { feature: FeatureId, object: ObjectId },
    #[error("lattice chain violation: {0} has no immediate predecessor in the lattice")]
    LatticeChainViolation(FeatureSet),
    #[error("unknown feature {0}")]
    UnknownFeature(FeatureId),
    #[error("unknown object {0}")]
    UnknownObject(ObjectId),
    #[error("feature set {0} is not in the lattice")]
    FeatureSetNotInLattice(FeatureSet),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point classes are not strictly separable")]
    NotSeparable,
    #[error("operation requires both point classes to be non-empty")]
    EmptyClass,
    #[error("search budget exceeded after {states} states (subset size {size_reached})")]
    BudgetExceeded { states: u64, size_reached: usize },
    #[error("illegal teacher action{}: {reason}", fmt_step(.step))]
    IllegalAction { step: Option<usize>, reason: String },
    #[error("protocol is stuck: a training error persists but the lattice has no successor feature")]
    ProtocolStuck,
    #[error("teacher script exhausted at step {step} before the protocol terminated")]
    ScriptExhausted { step: usize },
    #[error("step limit of {0} exceeded")]
    StepLimitExceeded(usize),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
}

fn fmt_step(step: &Option<usize>) -> String {
    match step {
        Some(i) => format!(" at step {i}"),
        None => String::new(),
    }
}

impl Error {
    pub fn illegal(reason: impl Into<String>) -> Self {
        Error::IllegalAction { step: None, reason: reason.into() }
    }

    /// Attach a script step index to an illegal-action error.
    pub fn at_step(self, step: usize) -> Self {
        match self {
            Error::IllegalAction { reason, .. } => Error::IllegalAction { step: Some(step), reason },
            other => other,
        }
    }
}
