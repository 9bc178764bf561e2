//! Formal contexts, derivation operators (crisp and enriched), concept
//! lattices and the browsing algebra over them.

mod browse;
mod build;
mod context;
mod enriched;
mod export;
mod next_closure;

use thiserror::Error;

pub use browse::{Element, Mode, RelationLabel, View};
pub use build::{build_lattice, Concept, ConceptId, ConceptLattice};
pub use context::{ContextDoc, FormalContext};
pub use enriched::{enriched_concepts, enriched_derive_extent, enriched_derive_intent, EnrichedConcept};
pub use export::{ConceptDoc, LatticeDoc, ViewDoc};
pub use next_closure::closed_sets;

use crate::enriched::EnrichedError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("duplicate {what} `{name}`")]
    Duplicate { what: &'static str, name: String },
    #[error("incidence rows do not match the object and attribute lists")]
    Shape,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("unknown view `{0}`")]
    UnknownView(String),
    #[error("concept {0} is not in this lattice")]
    ForeignConcept(usize),
    #[error("view name `{0}` is already taken")]
    DuplicateView(String),
    #[error("enumeration stopped after {0} concepts")]
    TooManyConcepts(usize),
    #[error(transparent)]
    Enriched(#[from] EnrichedError),
}
