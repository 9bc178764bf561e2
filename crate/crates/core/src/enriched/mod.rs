//! V-enriched spaces, maps, predicates and relations.
//!
//! Every structure here is finite: a space is a list of element names with
//! a square matrix of values, a relation is a rectangular matrix between
//! two spaces, and a predicate is a vector over one space. Element order
//! follows declaration order.

mod predicate;
mod relation;
mod report;
mod space;
pub mod wire;

use thiserror::Error;

pub use predicate::{lower_approx, predicate_closure, upper_approx, yoneda, VPredicate};
pub use relation::{VMap, VRelation};
pub use report::{ValidationReport, Violation};
pub use space::{ApproximationSpace, VSpace};

use crate::valuation::{Valuation, ValuationError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnrichedError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("valuation mismatch: {left} vs {right}")]
    ValuationMismatch { left: Valuation, right: Valuation },
    #[error("space mismatch: {0}")]
    SpaceMismatch(&'static str),
    #[error("space is not symmetric:\n{0}")]
    Asymmetric(ValidationReport),
    #[error("not a V-map:\n{0}")]
    InvalidMap(ValidationReport),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}
