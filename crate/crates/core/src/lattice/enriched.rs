//! Enriched derivation as residuation. An extent `ε` over `G` is read as
//! a relation `G ⇸ {*}`; residuating it against the facet `ι: G ⇸ M`
//! gives `{*} ⇸ M`, the intent. Intents go back through `ι^op: M^op ⇸ G^op`.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::LatticeError;
use crate::enriched::{EnrichedError, VPredicate, VRelation, VSpace};
use crate::scaling::Facet;
use crate::valuation::VValue;

fn point(facet: &Facet) -> Arc<VSpace> {
    Arc::new(VSpace::discrete(facet.valuation(), vec!["*".into()]).expect("one point"))
}

fn check_space(p: &VPredicate, space: &Arc<VSpace>) -> Result<(), LatticeError> {
    if p.space().as_ref() != space.as_ref() {
        return Err(EnrichedError::SpaceMismatch("predicate lives on another space").into());
    }
    Ok(())
}

/// `intent(m) = ⋀_g ε(g) ⇒ ι(g, m)`.
pub fn enriched_derive_intent(facet: &Facet, extent: &VPredicate) -> Result<VPredicate, LatticeError> {
    let objects = facet.object_space();
    check_space(extent, objects)?;
    let as_relation =
        VRelation::new(objects.clone(), point(facet), extent.values().iter().map(|&v| vec![v]).collect())?;
    let r = as_relation.residuate(facet.relation())?;
    Ok(VPredicate::new(facet.term_space().clone(), r.row(0).to_vec())?)
}

/// `extent(g) = ⋀_m ι_int(m) ⇒ ι(g, m)`.
pub fn enriched_derive_extent(facet: &Facet, intent: &VPredicate) -> Result<VPredicate, LatticeError> {
    check_space(intent, facet.term_space())?;
    let transposed = facet.relation().transpose();
    let as_relation =
        VRelation::new(transposed.source().clone(), point(facet), intent.values().iter().map(|&v| vec![v]).collect())?;
    let r = as_relation.residuate(&transposed)?;
    Ok(VPredicate::new(facet.object_space().clone(), r.row(0).to_vec())?)
}

/// A fixpoint pair of the enriched derivations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnrichedConcept {
    pub extent: VPredicate,
    pub intent: VPredicate,
}

/// Enumerates enriched concepts whose extent values lie in `grades`, by
/// raising one object at a time to a grade and closing. With a boolean
/// facet, or a fuzzy facet whose grades include `0`, `1` and every facet
/// entry, this reaches every concept. Stops with an error past `limit`.
pub fn enriched_concepts(facet: &Facet, grades: &[VValue], limit: usize) -> Result<Vec<EnrichedConcept>, LatticeError> {
    let v = facet.valuation();
    let mut grades: Vec<VValue> = grades.to_vec();
    grades.push(v.bottom());
    grades.push(v.unit());
    for &g in &grades {
        v.check(g).map_err(EnrichedError::from)?;
    }
    // ascending in ⪯, duplicates removed
    grades.sort_by(|&a, &b| {
        if v.equiv_raw(a, b) {
            std::cmp::Ordering::Equal
        } else if v.leq_raw(a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    grades.dedup_by(|a, b| v.equiv_raw(*a, *b));

    let objects = facet.object_space().clone();
    let close = |ext: &VPredicate| -> Result<EnrichedConcept, LatticeError> {
        let intent = enriched_derive_intent(facet, ext)?;
        let extent = enriched_derive_extent(facet, &intent)?;
        Ok(EnrichedConcept { extent, intent })
    };
    let key = |p: &VPredicate| -> Vec<u64> { p.values().iter().map(|x| x.as_f64().to_bits()).collect() };

    let start = close(&VPredicate::constant(objects.clone(), v.bottom())?)?;
    let mut seen: HashSet<Vec<u64>> = HashSet::from([key(&start.extent)]);
    let mut queue = VecDeque::from([start.extent.clone()]);
    let mut out = vec![start];
    while let Some(ext) = queue.pop_front() {
        for g in 0..objects.len() {
            for &grade in &grades {
                if v.leq_raw(grade, ext.value(g)) {
                    continue;
                }
                let mut raised = ext.values().to_vec();
                raised[g] = grade;
                let c = close(&VPredicate::new(objects.clone(), raised)?)?;
                if seen.insert(key(&c.extent)) {
                    if out.len() >= limit {
                        return Err(LatticeError::TooManyConcepts(limit));
                    }
                    queue.push_back(c.extent.clone());
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}
