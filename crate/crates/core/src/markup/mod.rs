//! CKML subset: ontologies declaring categories, function schemata and
//! abstract scales; attribute collections binding queries to scale terms;
//! and CSV datasets of description-function values.
//!
//! Grammar (element and attribute names are case-sensitive):
//!
//! ```text
//! ONTOLOGY(NAME, VERSION)
//!   CATEGORY(NAME)
//!   FNSCHEMA(NAME, ARGTYPE, IMAGETYPE)  [VALUE(NAME)*]
//!   SCALE(CATEGORY, NAME)  TERM(NAME)*  IMPLICATION*
//!     IMPLICATION  IF(TERM*)  [THEN(TERM*)]      no THEN: ⇒ ⊥
//! COLLECTION(KIND, SCOPE)
//!   USES(ONTOLOGY, VERSION)
//!   ATTRIBUTE(SCALE, KEY)  QUERY  [MEMBERSHIP]
//!     QUERY(VARIABLE, CATEGORY)  query+           several: conjoined
//!     query := FN2REL(NAME, ORDER) ARGUMENT(VALUE) ARGUMENT(VALUE)
//!            | AND(query*) | OR(query*) | NOT(query)
//!     MEMBERSHIP  POINT(X, Y)+
//! ```

mod dataset;
mod parse;
mod write;

use serde::Serialize;
use thiserror::Error;

pub use dataset::{load_dataset, Dataset};
pub use parse::{parse_collection, parse_ontology};
pub use write::{write_collection, write_ontology};

use crate::scales::{AbstractScale, Datatype, PiecewiseLinear, Query, QueryError, ScaleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarkupError {
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("{pos}: expected {expected}, found {found}")]
    Unexpected { pos: String, expected: String, found: String },
    #[error("{pos}: <{element}> lacks attribute {attribute}")]
    MissingAttribute { pos: String, element: String, attribute: String },
    #[error("{pos}: {message}")]
    Invalid { pos: String, message: String },
    #[error("scale `{scale}` references undeclared term `{term}`")]
    UndeclaredTerm { scale: String, term: String },
    #[error("duplicate {what} `{name}`")]
    Duplicate { what: &'static str, name: String },
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown scale `{0}`")]
    UnknownScale(String),
    #[error("collection uses ontology {expected}, given {found}")]
    OntologyMismatch { expected: String, found: String },
    #[error("CSV: {0}")]
    Csv(String),
    #[error("line {line}, column `{column}`: {message}")]
    Cell { line: u64, column: String, message: String },
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
}

/// `FNSCHEMA`: a description function from a category into a datatype.
/// String-valued functions list their finite value domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionSchema {
    pub name: String,
    pub arg_type: String,
    pub image_type: Datatype,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleDecl {
    pub category: String,
    pub scale: AbstractScale,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OntologyDoc {
    pub name: String,
    pub version: String,
    pub categories: Vec<String>,
    pub functions: Vec<FunctionSchema>,
    pub scales: Vec<ScaleDecl>,
}

impl OntologyDoc {
    pub fn function(&self, name: &str) -> Result<&FunctionSchema, MarkupError> {
        self.functions.iter().find(|f| f.name == name).ok_or_else(|| MarkupError::UnknownFunction(name.to_string()))
    }

    pub fn scale(&self, name: &str) -> Result<&ScaleDecl, MarkupError> {
        self.scales.iter().find(|s| s.scale.name() == name).ok_or_else(|| MarkupError::UnknownScale(name.to_string()))
    }
}

/// One `ATTRIBUTE`: a query bound to a scale term, with an optional
/// graded membership used under non-boolean valuations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributeDecl {
    pub scale: String,
    pub key: String,
    pub variable: String,
    pub category: String,
    pub query: Query,
    pub membership: Option<PiecewiseLinear>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollectionDoc {
    pub kind: String,
    pub scope: String,
    pub ontology: String,
    pub version: String,
    pub attributes: Vec<AttributeDecl>,
}
