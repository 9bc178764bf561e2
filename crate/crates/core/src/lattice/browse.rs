use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::build::{ConceptId, ConceptLattice};
use super::LatticeError;

/// Browsing mode. Intentional browsing is the order dual of extensional
/// browsing: similarity counts shared attributes of the join instead of
/// shared objects of the meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Extensional,
    Intentional,
}

impl Mode {
    pub fn toggled(self) -> Mode {
        match self {
            Mode::Extensional => Mode::Intentional,
            Mode::Intentional => Mode::Extensional,
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "extensional" => Ok(Mode::Extensional),
            "intentional" => Ok(Mode::Intentional),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// A named lattice element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name", rename_all = "lowercase")]
pub enum Element {
    Object(String),
    Attribute(String),
    View(String),
}

impl Element {
    pub fn name(&self) -> &str {
        match self {
            Element::Object(n) | Element::Attribute(n) | Element::View(n) => n,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Element::Object(_) => "object",
            Element::Attribute(_) => "attribute",
            Element::View(_) => "view",
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind(), self.name())
    }
}

/// Relation of a named element to the current concept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationLabel {
    Equivalent,
    Intent,
    Extent,
    Ancestor,
    Descendant,
    Similar,
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A named concept with an optional, unenforced owner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct View {
    pub concept: ConceptId,
    pub owner: Option<String>,
}

impl ConceptLattice {
    pub fn views(&self) -> impl Iterator<Item = (&String, &View)> {
        self.views.iter()
    }

    pub fn view(&self, name: &str) -> Result<&View, LatticeError> {
        self.views.get(name).ok_or_else(|| LatticeError::UnknownView(name.to_string()))
    }

    /// Registers a view in place.
    pub fn add_view(&mut self, name: &str, concept: ConceptId, owner: Option<String>) -> Result<(), LatticeError> {
        self.concept(concept)?;
        if self.views.contains_key(name) {
            return Err(LatticeError::DuplicateView(name.to_string()));
        }
        self.views.insert(name.to_string(), View { concept, owner });
        Ok(())
    }

    /// A new lattice value with the view registered.
    pub fn bookmark_view(&self, concept: ConceptId, name: &str) -> Result<ConceptLattice, LatticeError> {
        let mut next = self.clone();
        next.add_view(name, concept, None)?;
        Ok(next)
    }

    pub fn concept_of(&self, element: &Element) -> Result<ConceptId, LatticeError> {
        match element {
            Element::Object(n) => self.object_concept(n),
            Element::Attribute(n) => self.attribute_concept(n),
            Element::View(n) => Ok(self.view(n)?.concept),
        }
    }

    /// Extensional: objects shared by the meet. Intentional: attributes
    /// shared by the join.
    pub fn similarity(&self, a: ConceptId, b: ConceptId, mode: Mode) -> Result<usize, LatticeError> {
        Ok(match mode {
            Mode::Extensional => self.concept(self.meet(&[a, b])?)?.extent().count_ones(..),
            Mode::Intentional => self.concept(self.join(&[a, b])?)?.intent().count_ones(..),
        })
    }

    /// Attributes: `Intent` when in the current intent, `Descendant` when
    /// their concept lies strictly below. Objects: `Extent` when in the
    /// current extent, `Ancestor` when their concept lies strictly above.
    /// Views: `Equivalent`, `Ancestor` or `Descendant` by position.
    /// Anything incomparable is `Similar`.
    pub fn classify_relation(&self, current: ConceptId, element: &Element) -> Result<RelationLabel, LatticeError> {
        let c = self.concept_of(element)?;
        let below = self.leq(c, current)?;
        let above = self.leq(current, c)?;
        Ok(match element {
            Element::Attribute(_) if above => RelationLabel::Intent,
            Element::Object(_) if below => RelationLabel::Extent,
            _ if above && below => RelationLabel::Equivalent,
            _ if above => RelationLabel::Ancestor,
            _ if below => RelationLabel::Descendant,
            _ => RelationLabel::Similar,
        })
    }
}
