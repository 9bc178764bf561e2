//! JSON mirror of spaces, relations and predicates: element arrays plus
//! row-major matrices of payloads, tagged with the valuation kind.
//! Booleans are JSON booleans, reals use the string `"inf"` for ∞.

use serde::{Deserialize, Serialize};

use crate::valuation::{VValue, Valuation, ValuationError, ValuationKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Bool(bool),
    Number(f64),
    Text(String),
}

impl From<VValue> for Payload {
    fn from(v: VValue) -> Self {
        match v {
            VValue::Bool(b) => Payload::Bool(b),
            VValue::Real(x) if x.is_infinite() => Payload::Text("inf".to_string()),
            VValue::Fuzzy(x) | VValue::Real(x) => Payload::Number(x),
        }
    }
}

impl Payload {
    pub fn into_value(self, valuation: Valuation) -> Result<VValue, ValuationError> {
        let v = match (valuation.kind(), self) {
            (ValuationKind::Boolean, Payload::Bool(b)) => VValue::Bool(b),
            (ValuationKind::Boolean, Payload::Number(x)) => return valuation.value(x),
            (ValuationKind::Fuzzy, Payload::Number(x)) => VValue::Fuzzy(x),
            (ValuationKind::Real, Payload::Number(x)) => VValue::Real(x),
            (ValuationKind::Real, Payload::Text(t)) if t == "inf" || t == "∞" => VValue::Real(f64::INFINITY),
            (kind, Payload::Bool(b)) => return Err(ValuationError::Mixed { expected: kind, found: VValue::Bool(b) }),
            (_, Payload::Text(t)) => return Err(ValuationError::BadPayload(t)),
        };
        valuation.check(v)?;
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub valuation: ValuationKind,
    pub elements: Vec<String>,
    pub matrix: Vec<Vec<Payload>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDoc {
    pub valuation: ValuationKind,
    pub source: SpaceDoc,
    pub target: SpaceDoc,
    pub matrix: Vec<Vec<Payload>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredicateDoc {
    pub valuation: ValuationKind,
    pub space: SpaceDoc,
    pub values: Vec<Payload>,
}
