//! Ontology, collection and dataset in; concrete scales, the apposed facet
//! and (for boolean valuations) its concept lattice out.

use std::collections::BTreeMap;
use std::sync::Arc;

use chrono::NaiveDate;
use thiserror::Error;

use crate::enriched::{VRelation, VSpace};
use crate::lattice::{ConceptLattice, LatticeError};
use crate::markup::{CollectionDoc, Dataset, MarkupError, OntologyDoc};
use crate::scales::{bind_queries, ConcreteScale, DataDomain, Membership, Query, ScaleError};
use crate::scaling::{simple_scaling, Facet, ScalingError};
use crate::valuation::{Valuation, ValuationKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Markup(#[from] MarkupError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Scaling(#[from] ScalingError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("scale `{scale}` reads `{function}`, which the dataset does not provide")]
    MissingFunction { scale: String, function: String },
    #[error("scale `{0}` has no query reading a description function")]
    NoFunction(String),
}

impl PipelineError {
    /// The module the failure comes from.
    pub fn module(&self) -> &'static str {
        match self {
            PipelineError::Markup(_) => "markup-io",
            PipelineError::Scale(_) => "scales",
            PipelineError::Scaling(_) | PipelineError::MissingFunction { .. } | PipelineError::NoFunction(_) => {
                "scaling"
            }
            PipelineError::Lattice(_) => "fca-lattice",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineOptions {
    pub valuation: Valuation,
    /// Resolves relative dates such as `today-10y`.
    pub reference_date: Option<NaiveDate>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { valuation: Valuation::BOOLEAN, reference_date: None }
    }
}

/// Scale names in order of first use, with their attributes.
fn grouped(collection: &CollectionDoc) -> Vec<(&str, Vec<&crate::markup::AttributeDecl>)> {
    let mut out: Vec<(&str, Vec<_>)> = Vec::new();
    for a in &collection.attributes {
        match out.iter_mut().find(|(s, _)| *s == a.scale) {
            Some((_, list)) => list.push(a),
            None => out.push((&a.scale, vec![a])),
        }
    }
    out
}

/// Binds the collection's queries to the ontology's scales and checks the
/// implicational constraints.
pub fn concrete_scales(
    onto: &OntologyDoc,
    collection: &CollectionDoc,
    reference_date: Option<NaiveDate>,
) -> Result<Vec<ConcreteScale>, PipelineError> {
    let mut out = Vec::new();
    for (name, attrs) in grouped(collection) {
        let decl = onto.scale(name)?;
        let assignment: BTreeMap<String, Query> = attrs.iter().map(|a| (a.key.clone(), a.query.clone())).collect();
        let function = attrs
            .iter()
            .flat_map(|a| a.query.functions())
            .next()
            .ok_or_else(|| PipelineError::NoFunction(name.to_string()))?;
        let schema = onto.function(&function)?;
        let domain = if schema.values.is_empty() {
            DataDomain::of(schema.image_type)
        } else {
            let values = schema
                .values
                .iter()
                .map(|v| schema.image_type.parse_datum(v))
                .collect::<Result<Vec<_>, _>>()
                .map_err(ScaleError::from)?;
            DataDomain::finite(schema.image_type, values)
        };
        out.push(bind_queries(&decl.scale, &assignment, &domain, reference_date)?);
    }
    Ok(out)
}

/// A scaled dataset: the facet of every scale in the collection, apposed
/// in order of first use.
#[derive(Debug, Clone)]
pub struct ConceptualSpace {
    scales: Vec<ConcreteScale>,
    facets: Vec<Facet>,
    facet: Facet,
    lattice: Option<Arc<ConceptLattice>>,
}

impl ConceptualSpace {
    pub fn build(
        onto: &OntologyDoc,
        collection: &CollectionDoc,
        dataset: &Dataset,
        options: PipelineOptions,
    ) -> Result<ConceptualSpace, PipelineError> {
        let v = options.valuation;
        let scales = concrete_scales(onto, collection, options.reference_date)?;
        let mut facets = Vec::with_capacity(scales.len());
        for cs in &scales {
            let name = cs.abstract_scale().name();
            let function = cs.function().expect("bound scales read a function");
            let phi = dataset
                .function(&function)
                .ok_or_else(|| PipelineError::MissingFunction { scale: name.to_string(), function })?;
            let memberships: BTreeMap<String, Membership> = if v.kind() == ValuationKind::Boolean {
                BTreeMap::new()
            } else {
                collection
                    .attributes
                    .iter()
                    .filter(|a| a.scale == name)
                    .filter_map(|a| Some((a.key.clone(), Membership::Piecewise(a.membership.clone()?))))
                    .collect()
            };
            let enriched = cs.to_enriched(v, &phi.observed(), &memberships)?;
            facets.push(simple_scaling(phi, &enriched)?);
        }
        let facet = match facets.split_first() {
            None => {
                let objects = Arc::new(VSpace::discrete(v, dataset.objects.clone()).map_err(ScalingError::from)?);
                let terms = Arc::new(VSpace::discrete(v, Vec::new()).map_err(ScalingError::from)?);
                let rows = vec![Vec::new(); dataset.objects.len()];
                Facet::new("", VRelation::new(objects, terms, rows).map_err(ScalingError::from)?)?
            }
            Some((first, rest)) => {
                let mut acc = first.clone();
                for f in rest {
                    acc = acc.apposition(f)?;
                }
                acc
            }
        };
        let lattice = match v.kind() {
            ValuationKind::Boolean => Some(Arc::new(ConceptLattice::build(Arc::new(facet.to_context()?)))),
            _ => None,
        };
        Ok(ConceptualSpace { scales, facets, facet, lattice })
    }

    pub fn scales(&self) -> &[ConcreteScale] {
        &self.scales
    }

    /// One facet per scale.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// The apposition of all facets.
    pub fn facet(&self) -> &Facet {
        &self.facet
    }

    pub fn valuation(&self) -> Valuation {
        self.facet.valuation()
    }

    /// The crisp concept lattice; only boolean spaces have one.
    pub fn lattice(&self) -> Result<&Arc<ConceptLattice>, PipelineError> {
        self.lattice.as_ref().ok_or_else(|| ScalingError::NotBoolean(self.valuation().kind()).into())
    }
}
