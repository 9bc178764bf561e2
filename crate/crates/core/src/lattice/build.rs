use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::browse::View;
use super::context::FormalContext;
use super::next_closure::closed_sets;
use super::LatticeError;

/// Index of a concept in lectic order of intents (0 is the top).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConceptId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    extent: FixedBitSet,
    intent: FixedBitSet,
}

impl Concept {
    pub fn extent(&self) -> &FixedBitSet {
        &self.extent
    }

    pub fn intent(&self) -> &FixedBitSet {
        &self.intent
    }
}

#[derive(Debug, Clone)]
pub struct ConceptLattice {
    pub(super) context: Arc<FormalContext>,
    pub(super) concepts: Vec<Concept>,
    pub(super) by_intent: HashMap<FixedBitSet, ConceptId>,
    pub(super) upper: Vec<Vec<ConceptId>>,
    pub(super) lower: Vec<Vec<ConceptId>>,
    pub(super) object_concepts: Vec<ConceptId>,
    pub(super) attribute_concepts: Vec<ConceptId>,
    pub(super) views: BTreeMap<String, View>,
}

impl PartialEq for ConceptLattice {
    fn eq(&self, other: &Self) -> bool {
        self.context == other.context
            && self.concepts == other.concepts
            && self.upper == other.upper
            && self.views == other.views
    }
}

/// All concepts by NextClosure over intents, with covers and labels.
pub fn build_lattice(ctx: &FormalContext) -> ConceptLattice {
    ConceptLattice::build(Arc::new(ctx.clone()))
}

impl ConceptLattice {
    pub fn build(context: Arc<FormalContext>) -> ConceptLattice {
        let ctx = &context;
        let intents = closed_sets(ctx.attribute_count(), |b| ctx.close_intent(b));
        let concepts: Vec<Concept> =
            intents.into_iter().map(|intent| Concept { extent: ctx.common_objects(&intent), intent }).collect();
        let by_intent: HashMap<FixedBitSet, ConceptId> =
            concepts.iter().enumerate().map(|(i, c)| (c.intent.clone(), ConceptId(i))).collect();

        let n = concepts.len();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for (i, c) in concepts.iter().enumerate() {
            // candidates: the closures of the extent plus one object
            let mut candidates: Vec<ConceptId> = Vec::new();
            for g in 0..ctx.object_count() {
                if c.extent.contains(g) {
                    continue;
                }
                let mut seed = c.extent.clone();
                seed.insert(g);
                let id = by_intent[&ctx.common_attributes(&seed)];
                if !candidates.contains(&id) {
                    candidates.push(id);
                }
            }
            let mut covers: Vec<ConceptId> = candidates
                .iter()
                .copied()
                .filter(|&d| {
                    !candidates.iter().any(|&e| e != d && concepts[e.0].extent.is_subset(&concepts[d.0].extent))
                })
                .collect();
            covers.sort_unstable();
            for &d in &covers {
                lower[d.0].push(ConceptId(i));
            }
            upper[i] = covers;
        }
        for l in &mut lower {
            l.sort_unstable();
        }

        let object_concepts = (0..ctx.object_count()).map(|g| by_intent[ctx.row(g)]).collect();
        let attribute_concepts = (0..ctx.attribute_count())
            .map(|m| {
                let mut s = FixedBitSet::with_capacity(ctx.attribute_count());
                s.insert(m);
                by_intent[&ctx.close_intent(&s)]
            })
            .collect();

        ConceptLattice {
            context,
            concepts,
            by_intent,
            upper,
            lower,
            object_concepts,
            attribute_concepts,
            views: BTreeMap::new(),
        }
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn ids(&self) -> impl Iterator<Item = ConceptId> {
        (0..self.concepts.len()).map(ConceptId)
    }

    pub fn concept(&self, id: ConceptId) -> Result<&Concept, LatticeError> {
        self.concepts.get(id.0).ok_or(LatticeError::ForeignConcept(id.0))
    }

    pub fn top(&self) -> ConceptId {
        ConceptId(0)
    }

    pub fn bottom(&self) -> ConceptId {
        ConceptId(self.concepts.len() - 1)
    }

    pub fn extent_names(&self, id: ConceptId) -> Result<Vec<String>, LatticeError> {
        Ok(self.context.object_names(&self.concept(id)?.extent))
    }

    pub fn intent_names(&self, id: ConceptId) -> Result<Vec<String>, LatticeError> {
        Ok(self.context.attribute_names(&self.concept(id)?.intent))
    }

    pub fn upper_covers(&self, id: ConceptId) -> Result<&[ConceptId], LatticeError> {
        self.concept(id)?;
        Ok(&self.upper[id.0])
    }

    pub fn lower_covers(&self, id: ConceptId) -> Result<&[ConceptId], LatticeError> {
        self.concept(id)?;
        Ok(&self.lower[id.0])
    }

    /// The concept with exactly this intent, if the set is closed.
    pub fn find_by_intent(&self, intent: &FixedBitSet) -> Option<ConceptId> {
        self.by_intent.get(intent).copied()
    }

    pub fn object_concept(&self, name: &str) -> Result<ConceptId, LatticeError> {
        Ok(self.object_concepts[self.context.object_id(name)?])
    }

    pub fn attribute_concept(&self, name: &str) -> Result<ConceptId, LatticeError> {
        Ok(self.attribute_concepts[self.context.attribute_id(name)?])
    }

    /// Objects whose smallest concept is `id`.
    pub fn object_labels(&self, id: ConceptId) -> Vec<String> {
        self.object_concepts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == id)
            .map(|(g, _)| self.context.objects()[g].clone())
            .collect()
    }

    /// Attributes whose largest concept is `id`.
    pub fn attribute_labels(&self, id: ConceptId) -> Vec<String> {
        self.attribute_concepts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == id)
            .map(|(m, _)| self.context.attributes()[m].clone())
            .collect()
    }

    /// Lattice order: extent inclusion.
    pub fn leq(&self, a: ConceptId, b: ConceptId) -> Result<bool, LatticeError> {
        Ok(self.concept(a)?.extent.is_subset(&self.concept(b)?.extent))
    }

    /// Infimum; the empty meet is the top.
    pub fn meet(&self, ids: &[ConceptId]) -> Result<ConceptId, LatticeError> {
        let mut extent = FixedBitSet::with_capacity(self.context.object_count());
        extent.insert_range(..);
        for &id in ids {
            extent.intersect_with(&self.concept(id)?.extent);
        }
        Ok(self.by_intent[&self.context.common_attributes(&extent)])
    }

    /// Supremum; the empty join is the bottom.
    pub fn join(&self, ids: &[ConceptId]) -> Result<ConceptId, LatticeError> {
        let mut intent = FixedBitSet::with_capacity(self.context.attribute_count());
        intent.insert_range(..);
        for &id in ids {
            intent.intersect_with(&self.concept(id)?.intent);
        }
        Ok(self.by_intent[&intent])
    }
}
