//! Conceptual scales: abstract scales with an implication basis, concrete
//! scales binding queries to terms, and enriched scales as V-relations
//! from a term space to a data space.

mod concrete;
mod enriched_scale;
mod implication;
pub mod interval;
pub mod query;
mod standard;

use thiserror::Error;

pub use concrete::{bind_queries, ConcreteScale, ConstraintViolation, DataDomain, Extension};
pub use enriched_scale::{make_enriched_scale, EnrichedScale, Membership, PiecewiseLinear};
pub use implication::{AbstractScale, Closure, Implication, ScaleDoc};
pub use interval::IntervalSet;
pub use query::{Constant, Datatype, DateUnit, Datum, Order, Query, QueryError};
pub use standard::{biordinal, interordinal, nominal, ordinal};

use crate::enriched::{EnrichedError, ValidationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScaleError {
    #[error("scale `{0}` has no terms")]
    EmptyTerms(String),
    #[error("duplicate term `{0}`")]
    DuplicateTerm(String),
    #[error("unknown term `{0}`")]
    UnknownTerm(String),
    #[error("term `{0}` has no query")]
    UnboundTerm(String),
    #[error("constraint checks over {0} need a finite declared domain")]
    UnboundedDomain(Datatype),
    #[error("{} implicational constraint(s) violated: {}", .0.len(), join_violations(.0))]
    Constraints(Vec<ConstraintViolation>),
    #[error("scale relation is not closed under the term metric:\n{0}")]
    NotClosed(ValidationReport),
    #[error("membership for `{term}`: {reason}")]
    BadMembership { term: String, reason: String },
    #[error("apposition needs a common valuation")]
    ValuationMismatch,
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Enriched(#[from] EnrichedError),
}

fn join_violations(vs: &[ConstraintViolation]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
