//! Conceptual scaling: description functions over an object collection,
//! simple scaling through an enriched scale into a facet, and composite
//! scaling by residuation along a binary relation.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::enriched::{EnrichedError, VRelation, VSpace, ValidationReport};
use crate::lattice::FormalContext;
use crate::scales::{Datatype, Datum, EnrichedScale, Query, QueryError};
use crate::valuation::{VValue, Valuation, ValuationKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalingError {
    #[error("{function}: value `{datum}` of `{object}` is not in the scale's data space")]
    OutsideDataSpace { function: String, object: String, datum: String },
    #[error("{function}: value `{datum}` of `{object}` is not of type {datatype}")]
    IllTyped { function: String, object: String, datum: String, datatype: Datatype },
    #[error("{function}: duplicate object `{object}`")]
    DuplicateObject { function: String, object: String },
    #[error("{function}: {objects} objects but {values} values")]
    Length { function: String, objects: usize, values: usize },
    #[error("object space does not match the function's objects")]
    ObjectMismatch,
    #[error("facet is not closed:\n{0}")]
    NotClosed(ValidationReport),
    #[error("operation needs a boolean facet, found {0}")]
    NotBoolean(ValuationKind),
    #[error("valuation mismatch: {0} vs {1}")]
    ValuationMismatch(Valuation, Valuation),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Enriched(#[from] EnrichedError),
}

/// `φ: G → D`, partial: `None` is a missing value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptionFunction {
    name: String,
    source_category: String,
    datatype: Datatype,
    objects: Vec<String>,
    values: Vec<Option<Datum>>,
}

impl DescriptionFunction {
    pub fn new(
        name: impl Into<String>,
        source_category: impl Into<String>,
        datatype: Datatype,
        objects: Vec<String>,
        values: Vec<Option<Datum>>,
    ) -> Result<Self, ScalingError> {
        let name = name.into();
        if objects.len() != values.len() {
            return Err(ScalingError::Length { function: name, objects: objects.len(), values: values.len() });
        }
        let mut seen = HashMap::with_capacity(objects.len());
        for (g, v) in objects.iter().zip(&values) {
            if seen.insert(g.as_str(), ()).is_some() {
                return Err(ScalingError::DuplicateObject { function: name, object: g.clone() });
            }
            if let Some(d) = v {
                if !datatype.admits(d) {
                    return Err(ScalingError::IllTyped {
                        function: name,
                        object: g.clone(),
                        datum: d.to_string(),
                        datatype,
                    });
                }
            }
        }
        Ok(DescriptionFunction { name, source_category: source_category.into(), datatype, objects, values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source_category(&self) -> &str {
        &self.source_category
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn values(&self) -> &[Option<Datum>] {
        &self.values
    }

    pub fn value(&self, object: &str) -> Option<&Datum> {
        let i = self.objects.iter().position(|g| g == object)?;
        self.values[i].as_ref()
    }

    /// Distinct non-null values in ascending order.
    pub fn observed(&self) -> Vec<Datum> {
        let mut out: Vec<Datum> = self.values.iter().flatten().cloned().collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Boolean truth of a query at a datum.
pub fn evaluate_query(q: &Query, d: &Datum) -> Result<VValue, ScalingError> {
    Ok(VValue::Bool(q.evaluate(d)?))
}

/// An enriched formal context `ι: G ⇸ M`, closed under the object metric
/// and the (opposite) term metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Facet {
    name: String,
    relation: VRelation,
}

impl Facet {
    pub fn new(name: impl Into<String>, relation: VRelation) -> Result<Self, ScalingError> {
        let report = relation.check_closure();
        if !report.is_valid() {
            return Err(ScalingError::NotClosed(report));
        }
        Ok(Facet { name: name.into(), relation })
    }

    /// A boolean facet over discrete object and attribute spaces.
    pub fn from_context(name: impl Into<String>, ctx: &FormalContext) -> Facet {
        let v = Valuation::BOOLEAN;
        let objects = Arc::new(VSpace::discrete(v, ctx.objects().to_vec()).expect("unique objects"));
        let terms = Arc::new(VSpace::discrete(v, ctx.attributes().to_vec()).expect("unique attributes"));
        let relation =
            VRelation::from_fn(objects, terms, |g, m| VValue::Bool(ctx.incidence(g, m))).expect("boolean entries");
        Facet { name: name.into(), relation }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn relation(&self) -> &VRelation {
        &self.relation
    }

    pub fn valuation(&self) -> Valuation {
        self.relation.source().valuation()
    }

    pub fn object_space(&self) -> &Arc<VSpace> {
        self.relation.source()
    }

    pub fn term_space(&self) -> &Arc<VSpace> {
        self.relation.target()
    }

    pub fn objects(&self) -> &[String] {
        self.object_space().elements()
    }

    pub fn terms(&self) -> &[String] {
        self.term_space().elements()
    }

    pub fn value(&self, object: &str, term: &str) -> Result<VValue, ScalingError> {
        Ok(self.relation.value(object, term)?)
    }

    fn require_boolean(&self) -> Result<(), ScalingError> {
        match self.valuation().kind() {
            ValuationKind::Boolean => Ok(()),
            k => Err(ScalingError::NotBoolean(k)),
        }
    }

    pub fn to_context(&self) -> Result<FormalContext, ScalingError> {
        self.require_boolean()?;
        let r = &self.relation;
        Ok(FormalContext::new(self.objects().to_vec(), self.terms().to_vec(), |g, m| r.get(g, m) == VValue::Bool(true))
            .expect("space elements are unique"))
    }

    /// Each object with the terms of its row, in term order.
    pub fn object_concept_assignments(&self) -> Result<Vec<(String, Vec<String>)>, ScalingError> {
        self.require_boolean()?;
        Ok(self
            .objects()
            .iter()
            .enumerate()
            .map(|(g, name)| {
                let row = self
                    .terms()
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| self.relation.get(g, m) == VValue::Bool(true))
                    .map(|(_, t)| t.clone())
                    .collect();
                (name.clone(), row)
            })
            .collect())
    }

    /// Facets over the same objects side by side. Term names present in
    /// both are qualified as `facet.term`.
    pub fn apposition(&self, other: &Facet) -> Result<Facet, ScalingError> {
        let v = self.valuation();
        if v != other.valuation() {
            return Err(ScalingError::ValuationMismatch(v, other.valuation()));
        }
        if self.object_space() != other.object_space() {
            return Err(ScalingError::ObjectMismatch);
        }
        let (m0, m1) = (self.term_space(), other.term_space());
        let clash = m0.elements().iter().any(|t| m1.index_of(t).is_some());
        let right = if self.name == other.name { format!("{}#2", other.name) } else { other.name.clone() };
        let qualify = |prefix: &str, t: &String| if clash { format!("{prefix}.{t}") } else { t.clone() };
        let names: Vec<String> = m0
            .elements()
            .iter()
            .map(|t| qualify(&self.name, t))
            .chain(m1.elements().iter().map(|t| qualify(&right, t)))
            .collect();
        let n0 = m0.len();
        let terms = Arc::new(VSpace::from_fn(v, names, |i, j| match (i < n0, j < n0) {
            (true, true) => m0.metric(i, j),
            (false, false) => m1.metric(i - n0, j - n0),
            _ => v.bottom(),
        })?);
        let relation = VRelation::from_fn(self.object_space().clone(), terms, |g, m| {
            if m < n0 {
                self.relation.get(g, m)
            } else {
                other.relation.get(g, m - n0)
            }
        })?;
        let name = if self.name.is_empty() { other.name.clone() } else { format!("{}|{}", self.name, other.name) };
        Facet::new(name, relation)
    }
}

/// `ι(g, m) = σ(m, φ(g))` over a discrete object space; missing values
/// give a bottom row.
pub fn simple_scaling(phi: &DescriptionFunction, scale: &EnrichedScale) -> Result<Facet, ScalingError> {
    let objects = Arc::new(VSpace::discrete(scale.valuation(), phi.objects().to_vec())?);
    simple_scaling_over(phi, scale, objects)
}

/// Simple scaling over a given object space (for an indiscernibility
/// metric on the objects).
pub fn simple_scaling_over(
    phi: &DescriptionFunction,
    scale: &EnrichedScale,
    objects: Arc<VSpace>,
) -> Result<Facet, ScalingError> {
    let v = scale.valuation();
    if objects.valuation() != v {
        return Err(ScalingError::ValuationMismatch(objects.valuation(), v));
    }
    if objects.elements() != phi.objects() {
        return Err(ScalingError::ObjectMismatch);
    }
    let data = scale.data_space();
    let mut columns = Vec::with_capacity(phi.objects().len());
    for (g, value) in phi.objects().iter().zip(phi.values()) {
        let column = match value {
            None => None,
            Some(d) => Some(data.index_of(&d.to_string()).ok_or_else(|| ScalingError::OutsideDataSpace {
                function: phi.name().to_string(),
                object: g.clone(),
                datum: d.to_string(),
            })?),
        };
        columns.push(column);
    }
    let terms = Arc::new(scale.term_space().opposite());
    let sigma = scale.sigma();
    let relation = VRelation::from_fn(objects, terms, |g, m| match columns[g] {
        Some(d) => sigma.get(m, d),
        None => v.bottom(),
    })?;
    Facet::new(scale.name(), relation)
}

/// `ψ ⊸ ι`: `result(g', m) = ⋀_g ψ(g, g') ⇒ ι(g, m)`.
pub fn composite_scaling(psi: &VRelation, inner: &Facet) -> Result<Facet, ScalingError> {
    let relation = psi.residuate(inner.relation())?;
    Facet::new(inner.name(), relation)
}
