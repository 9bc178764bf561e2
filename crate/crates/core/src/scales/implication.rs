use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::ScaleError;
use crate::enriched::VSpace;
use crate::lattice::{closed_sets, FormalContext};
use crate::valuation::Valuation;

/// `premise ⇒ conclusion`. An empty conclusion is `⇒ ⊥`: the premise
/// terms are incompatible. Term lists keep their written order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Implication {
    pub premise: Vec<String>,
    pub conclusion: Vec<String>,
}

impl Implication {
    pub fn new<S: AsRef<str>>(premise: &[S], conclusion: &[S]) -> Self {
        Implication {
            premise: premise.iter().map(|s| s.as_ref().to_string()).collect(),
            conclusion: conclusion.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    pub fn incompatible<S: AsRef<str>>(terms: &[S]) -> Self {
        Self::new(terms, &[])
    }

    pub fn is_incompatibility(&self) -> bool {
        self.conclusion.is_empty()
    }
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &[String]| s.join(" ∧ ");
        let lhs = if self.premise.is_empty() { "⊤".to_string() } else { join(&self.premise) };
        let rhs = if self.conclusion.is_empty() { "⊥".to_string() } else { join(&self.conclusion) };
        write!(f, "{lhs} ⇒ {rhs}")
    }
}

/// Result of closing a term set under the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closure {
    Consistent(Vec<String>),
    Inconsistent,
}

#[derive(Debug, Clone)]
struct Rule {
    premise: FixedBitSet,
    conclusion: Option<FixedBitSet>,
}

/// A named term set with an implication basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ScaleDoc", into = "ScaleDoc")]
pub struct AbstractScale {
    name: String,
    terms: Vec<String>,
    basis: Vec<Implication>,
    index: HashMap<String, usize>,
    rules: Vec<Rule>,
}

impl PartialEq for AbstractScale {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.terms == other.terms && self.basis == other.basis
    }
}

/// JSON mirror of an abstract scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleDoc {
    pub name: String,
    pub terms: Vec<String>,
    pub basis: Vec<Implication>,
}

impl TryFrom<ScaleDoc> for AbstractScale {
    type Error = ScaleError;

    fn try_from(doc: ScaleDoc) -> Result<Self, Self::Error> {
        AbstractScale::new(doc.name, doc.terms, doc.basis)
    }
}

impl From<AbstractScale> for ScaleDoc {
    fn from(s: AbstractScale) -> Self {
        ScaleDoc { name: s.name, terms: s.terms, basis: s.basis }
    }
}

impl AbstractScale {
    /// Terms may be empty here (apposition needs the empty scale); the
    /// standard constructors reject empty term lists.
    pub fn new(name: impl Into<String>, terms: Vec<String>, basis: Vec<Implication>) -> Result<Self, ScaleError> {
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(ScaleError::DuplicateTerm(t.clone()));
            }
        }
        let n = terms.len();
        let bits = |set: &[String]| -> Result<FixedBitSet, ScaleError> {
            let mut b = FixedBitSet::with_capacity(n);
            for t in set {
                b.insert(*index.get(t).ok_or_else(|| ScaleError::UnknownTerm(t.clone()))?);
            }
            Ok(b)
        };
        let rules = basis
            .iter()
            .map(|imp| {
                Ok(Rule {
                    premise: bits(&imp.premise)?,
                    conclusion: if imp.is_incompatibility() { None } else { Some(bits(&imp.conclusion)?) },
                })
            })
            .collect::<Result<Vec<_>, ScaleError>>()?;
        Ok(AbstractScale { name: name.into(), terms, basis, index, rules })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn basis(&self) -> &[Implication] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_index(&self, term: &str) -> Result<usize, ScaleError> {
        self.index.get(term).copied().ok_or_else(|| ScaleError::UnknownTerm(term.to_string()))
    }

    pub(crate) fn bits<S: AsRef<str>>(&self, terms: impl IntoIterator<Item = S>) -> Result<FixedBitSet, ScaleError> {
        let mut b = FixedBitSet::with_capacity(self.terms.len());
        for t in terms {
            b.insert(self.term_index(t.as_ref())?);
        }
        Ok(b)
    }

    /// Forward chaining to a fixpoint; `None` once an incompatibility fires.
    pub(crate) fn close_bits(&self, start: &FixedBitSet) -> Option<FixedBitSet> {
        let mut set = start.clone();
        loop {
            let mut changed = false;
            for rule in &self.rules {
                if !rule.premise.is_subset(&set) {
                    continue;
                }
                match &rule.conclusion {
                    None => return None,
                    Some(c) if !c.is_subset(&set) => {
                        set.union_with(c);
                        changed = true;
                    }
                    Some(_) => {}
                }
            }
            if !changed {
                return Some(set);
            }
        }
    }

    /// Closure with `⊥` read as the full term set.
    pub(crate) fn close_or_full(&self, start: &FixedBitSet) -> FixedBitSet {
        self.close_bits(start).unwrap_or_else(|| {
            let mut all = FixedBitSet::with_capacity(self.terms.len());
            all.insert_range(..);
            all
        })
    }

    pub fn implication_closure<S: AsRef<str>>(&self, premise: &[S]) -> Result<Closure, ScaleError> {
        let start = self.bits(premise)?;
        Ok(match self.close_bits(&start) {
            Some(c) => Closure::Consistent(c.ones().map(|i| self.terms[i].clone()).collect()),
            None => Closure::Inconsistent,
        })
    }

    pub fn follows(&self, imp: &Implication) -> Result<bool, ScaleError> {
        let premise = self.bits(&imp.premise)?;
        let conclusion = self.bits(&imp.conclusion)?;
        Ok(match self.close_bits(&premise) {
            None => true,
            Some(c) => !imp.is_incompatibility() && conclusion.is_subset(&c),
        })
    }

    /// Whether `{j} ⇒ {i}` follows (term `j` sits below term `i`).
    pub(crate) fn below(&self, j: usize, i: usize) -> bool {
        let mut s = FixedBitSet::with_capacity(self.terms.len());
        s.insert(j);
        self.close_bits(&s).is_none_or(|c| c.contains(i))
    }

    pub(crate) fn is_inconsistent_term(&self, j: usize) -> bool {
        let mut s = FixedBitSet::with_capacity(self.terms.len());
        s.insert(j);
        self.close_bits(&s).is_none()
    }

    /// Boolean term metric: `μ(m1, m2) = 1` iff `{m2} ⇒ {m1}` follows.
    pub fn term_metric(&self) -> VSpace {
        self.term_space(Valuation::BOOLEAN)
    }

    /// The term metric embedded in another valuation (crisp 0/1 entries
    /// become bottom/unit).
    pub fn term_space(&self, valuation: Valuation) -> VSpace {
        VSpace::from_fn(valuation, self.terms.clone(), |i, j| valuation.from_bool(self.below(j, i)))
            .expect("term names are unique")
    }

    /// The closed term sets as a one-valued context, objects named `0..n`
    /// in lectic order. An inconsistent set is represented by the full
    /// term set (the bottom node).
    pub fn scale_context(&self) -> FormalContext {
        let closed = closed_sets(self.terms.len(), |s| self.close_or_full(s));
        let objects = (0..closed.len()).map(|i| i.to_string()).collect();
        FormalContext::new(objects, self.terms.clone(), |g, m| closed[g].contains(m))
            .expect("generated names are unique")
    }
}
