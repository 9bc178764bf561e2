use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use chrono::NaiveDate;
use serde::Serialize;

use super::enriched_scale::{make_enriched_scale, EnrichedScale, Membership};
use super::interval::IntervalSet;
use super::query::{Datatype, Datum, Query, QueryError};
use super::{AbstractScale, Implication, ScaleError};
use crate::enriched::VSpace;
use crate::valuation::Valuation;
use std::sync::Arc;

/// What a scale's queries range over: a datatype and, for unordered
/// types, the finite set of values to check constraints against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataDomain {
    pub datatype: Datatype,
    pub values: Option<Vec<Datum>>,
}

impl DataDomain {
    pub fn of(datatype: Datatype) -> Self {
        DataDomain { datatype, values: None }
    }

    pub fn finite(datatype: Datatype, values: Vec<Datum>) -> Self {
        DataDomain { datatype, values: Some(values) }
    }
}

/// The denotation of a query within a domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    Intervals(IntervalSet),
    Finite(BTreeSet<Datum>),
}

impl Extension {
    pub fn of(query: &Query, domain: &DataDomain) -> Result<Extension, ScaleError> {
        if domain.datatype.is_ordered_numeric() {
            return Ok(Extension::Intervals(query.denotation(domain.datatype)?));
        }
        let values = domain.values.as_ref().ok_or(ScaleError::UnboundedDomain(domain.datatype))?;
        let mut out = BTreeSet::new();
        for v in values {
            if query.evaluate(v)? {
                out.insert(v.clone());
            }
        }
        Ok(Extension::Finite(out))
    }

    fn full(domain: &DataDomain) -> Result<Extension, ScaleError> {
        Self::of(&Query::tautology(), domain)
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Extension::Intervals(s) => s.is_empty(),
            Extension::Finite(s) => s.is_empty(),
        }
    }

    pub fn intersect(&self, other: &Extension) -> Extension {
        match (self, other) {
            (Extension::Intervals(a), Extension::Intervals(b)) => Extension::Intervals(a.intersect(b)),
            (Extension::Finite(a), Extension::Finite(b)) => Extension::Finite(a.intersection(b).cloned().collect()),
            _ => unreachable!("extensions of one domain share a representation"),
        }
    }

    /// Some element of `self \ other`, if any.
    pub fn witness_outside(&self, other: &Extension, datatype: Datatype) -> Option<Datum> {
        match (self, other) {
            (Extension::Intervals(a), Extension::Intervals(b)) => {
                a.difference(b).first().map(|k| datatype.datum_from_key(k))
            }
            (Extension::Finite(a), Extension::Finite(b)) => a.difference(b).next().cloned(),
            _ => unreachable!("extensions of one domain share a representation"),
        }
    }

    pub fn first(&self, datatype: Datatype) -> Option<Datum> {
        match self {
            Extension::Intervals(s) => s.first().map(|k| datatype.datum_from_key(k)),
            Extension::Finite(s) => s.iter().next().cloned(),
        }
    }

    pub fn contains(&self, d: &Datum) -> bool {
        match self {
            Extension::Intervals(s) => d.key().is_some_and(|k| s.contains(k)),
            Extension::Finite(s) => s.contains(d),
        }
    }
}

/// A basis implication whose query denotations fail containment (or, for
/// an incompatibility, overlap).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintViolation {
    pub implication: Implication,
    pub witness: Option<Datum>,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imp = &self.implication;
        let lhs = if imp.premise.is_empty() { "⊤".to_string() } else { imp.premise.join(" ∧ ") };
        if imp.is_incompatibility() {
            write!(f, "{lhs} = ∅")?;
        } else {
            write!(f, "{lhs} ⊆ {}", imp.conclusion.join(" ∧ "))?;
        }
        if let Some(w) = &self.witness {
            write!(f, " (fails at {w})")?;
        }
        Ok(())
    }
}

/// An abstract scale with a query bound to every term.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcreteScale {
    scale: AbstractScale,
    domain: DataDomain,
    queries: Vec<Query>,
}

/// Binds queries to terms and checks every basis implication by
/// containment of denotations. Relative dates resolve against `reference`.
pub fn bind_queries(
    scale: &AbstractScale,
    assignment: &BTreeMap<String, Query>,
    domain: &DataDomain,
    reference: Option<NaiveDate>,
) -> Result<ConcreteScale, ScaleError> {
    for key in assignment.keys() {
        scale.term_index(key)?;
    }
    let mut queries = Vec::with_capacity(scale.len());
    for term in scale.terms() {
        let q = assignment.get(term).ok_or_else(|| ScaleError::UnboundTerm(term.clone()))?;
        let q = q.resolve(reference)?;
        q.typecheck(domain.datatype)?;
        queries.push(q);
    }
    let functions: BTreeSet<String> = queries.iter().flat_map(Query::functions).collect();
    if functions.len() > 1 {
        return Err(QueryError::MixedFunctions(functions.into_iter().collect()).into());
    }
    let extensions = queries.iter().map(|q| Extension::of(q, domain)).collect::<Result<Vec<_>, _>>()?;
    let meet = |terms: &[String]| -> Result<Extension, ScaleError> {
        let mut acc = Extension::full(domain)?;
        for t in terms {
            acc = acc.intersect(&extensions[scale.term_index(t)?]);
        }
        Ok(acc)
    };
    let mut violations = Vec::new();
    for imp in scale.basis() {
        let premise = meet(&imp.premise)?;
        let witness = if imp.is_incompatibility() {
            premise.first(domain.datatype).map(Some)
        } else {
            premise.witness_outside(&meet(&imp.conclusion)?, domain.datatype).map(Some)
        };
        if let Some(witness) = witness {
            violations.push(ConstraintViolation { implication: imp.clone(), witness });
        }
    }
    if !violations.is_empty() {
        return Err(ScaleError::Constraints(violations));
    }
    Ok(ConcreteScale { scale: scale.clone(), domain: domain.clone(), queries })
}

impl ConcreteScale {
    pub fn abstract_scale(&self) -> &AbstractScale {
        &self.scale
    }

    pub fn domain(&self) -> &DataDomain {
        &self.domain
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn query(&self, term: &str) -> Result<&Query, ScaleError> {
        Ok(&self.queries[self.scale.term_index(term)?])
    }

    /// The description function the queries read, if any query mentions one.
    pub fn function(&self) -> Option<String> {
        self.queries.iter().flat_map(Query::functions).next()
    }

    pub fn extension(&self, term: &str) -> Result<Extension, ScaleError> {
        Extension::of(self.query(term)?, &self.domain)
    }

    /// Immediate lower covers of term `i` in the term order, skipping
    /// inconsistent terms and terms equivalent to `i`.
    pub fn children(&self, i: usize) -> Vec<usize> {
        let s = &self.scale;
        let strictly_below = |j: usize, k: usize| s.below(j, k) && !s.below(k, j);
        let candidates: Vec<usize> =
            (0..s.len()).filter(|&j| !s.is_inconsistent_term(j) && strictly_below(j, i)).collect();
        candidates.iter().copied().filter(|&j| !candidates.iter().any(|&k| strictly_below(j, k))).collect()
    }

    /// `γ_n = φ_n ∧ ⋀ ¬φ_c` over the children `c` of each term `n`.
    pub fn contingents(&self) -> Vec<(String, Query)> {
        (0..self.scale.len())
            .map(|i| {
                let children = self.children(i);
                let q = if children.is_empty() {
                    self.queries[i].clone()
                } else {
                    let mut parts = vec![self.queries[i].clone()];
                    parts.extend(children.iter().map(|&c| self.queries[c].clone().negate()));
                    Query::And(parts)
                };
                (self.scale.terms()[i].clone(), q)
            })
            .collect()
    }

    /// The enriched form over the given data points, with crisp query
    /// entries unless a term has an explicit membership.
    pub fn to_enriched(
        &self,
        valuation: Valuation,
        data: &[Datum],
        memberships: &BTreeMap<String, Membership>,
    ) -> Result<EnrichedScale, ScaleError> {
        for key in memberships.keys() {
            self.scale.term_index(key)?;
        }
        let mut points: Vec<Datum> = data.to_vec();
        points.sort();
        points.dedup();
        let names = points.iter().map(ToString::to_string).collect();
        let data_space = Arc::new(VSpace::discrete(valuation, names)?);
        let term_space = Arc::new(self.scale.term_space(valuation));
        let mut rows = Vec::with_capacity(self.scale.len());
        for (i, term) in self.scale.terms().iter().enumerate() {
            let membership = match memberships.get(term) {
                Some(m) => m.clone(),
                None => Membership::Query(self.queries[i].clone()),
            };
            let row = points.iter().map(|d| membership.grade(term, valuation, d)).collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        make_enriched_scale(self.scale.name(), term_space, data_space, rows)
    }
}
