//! Soft concept analysis: valuations and enriched spaces, conceptual
//! scales, the scaling pipeline from metadata to facets, and concept
//! lattices with browsing operations.

pub mod enriched;
pub mod lattice;
pub mod markup;
pub mod pipeline;
pub mod scales;
pub mod scaling;
pub mod valuation;

pub use enriched::{VPredicate, VRelation, VSpace};
pub use lattice::{ConceptId, ConceptLattice, Element, FormalContext, Mode, RelationLabel};
pub use markup::{CollectionDoc, Dataset, OntologyDoc};
pub use pipeline::{ConceptualSpace, PipelineError, PipelineOptions};
pub use scales::{AbstractScale, ConcreteScale, EnrichedScale, Query};
pub use scaling::{DescriptionFunction, Facet};
pub use valuation::{VValue, Valuation, ValuationKind};
