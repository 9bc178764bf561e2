use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use axum::http::StatusCode;
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use softscale_core::lattice::{ConceptDoc, LatticeDoc, LatticeError};
use softscale_core::markup::{load_dataset, parse_collection, parse_ontology};
use softscale_core::{
    ConceptId, ConceptLattice, ConceptualSpace, Element, Mode, PipelineError, PipelineOptions, RelationLabel,
};

use crate::error::ApiError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServiceConfig {
    /// Sessions idle longer than this are dropped.
    pub session_ttl: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { session_ttl: Duration::from_secs(30 * 60) }
    }
}

/// The source documents of a space.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpaceDocuments {
    pub ontology: String,
    pub collection: String,
    pub dataset: String,
    #[serde(default)]
    pub reference_date: Option<NaiveDate>,
}

/// A built lattice shared by all sessions on it. Views live in the
/// lattice and are added under the write lock.
pub struct Space {
    id: u64,
    lattice: RwLock<ConceptLattice>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    Meet,
    Join,
}

struct Session {
    id: u64,
    space: Arc<Space>,
    current: ConceptId,
    mode: Mode,
    operation: Option<Operation>,
    definition: Vec<Element>,
    last_used: Instant,
}

/// An element as sent by clients: `{"kind": ..., "name": ...}`, a string
/// `kind:name`, or a bare name that matches exactly one element.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Tagged(Element),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ElementRow {
    pub kind: &'static str,
    pub name: String,
    /// The owning agent of a view, stored as given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub owner: Option<String>,
    pub concept: ConceptId,
    pub relation: RelationLabel,
    pub similarity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StateDoc {
    pub session_id: u64,
    pub space_id: u64,
    pub mode: Mode,
    pub operation: Option<Operation>,
    pub definition: Vec<Element>,
    pub current: ConceptDoc,
    /// Every view, attribute and object, in that order.
    pub elements: Vec<ElementRow>,
    /// Views at or below the current concept.
    pub local_views: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ViewRecord {
    pub name: String,
    pub concept: ConceptId,
    pub owner: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpaceCreated {
    pub space_id: u64,
    pub concepts: usize,
}

fn concept_doc(l: &ConceptLattice, id: ConceptId) -> Result<ConceptDoc, LatticeError> {
    Ok(ConceptDoc {
        id,
        extent: l.extent_names(id)?,
        intent: l.intent_names(id)?,
        object_labels: l.object_labels(id),
        attribute_labels: l.attribute_labels(id),
        upper_covers: l.upper_covers(id)?.to_vec(),
        lower_covers: l.lower_covers(id)?.to_vec(),
    })
}

fn resolve(l: &ConceptLattice, r: ElementRef) -> Result<Element, ApiError> {
    let unknown = |what: String| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "fca-lattice", what);
    let element = match r {
        ElementRef::Tagged(e) => e,
        ElementRef::Text(text) => {
            let prefixed = text.split_once(':').and_then(|(kind, name)| match kind {
                "object" => Some(Element::Object(name.to_string())),
                "attribute" => Some(Element::Attribute(name.to_string())),
                "view" => Some(Element::View(name.to_string())),
                _ => None,
            });
            match prefixed {
                Some(e) => e,
                None => {
                    let candidates: Vec<Element> =
                        [Element::Attribute(text.clone()), Element::Object(text.clone()), Element::View(text.clone())]
                            .into_iter()
                            .filter(|e| l.concept_of(e).is_ok())
                            .collect();
                    match candidates.as_slice() {
                        [one] => one.clone(),
                        [] => return Err(unknown(format!("unknown element `{text}`"))),
                        _ => return Err(unknown(format!("`{text}` is ambiguous; prefix it with its kind"))),
                    }
                }
            }
        }
    };
    l.concept_of(&element)?;
    Ok(element)
}

/// All spaces and sessions of one server.
pub struct Registry {
    config: ServiceConfig,
    next_space: AtomicU64,
    next_session: AtomicU64,
    spaces: RwLock<BTreeMap<u64, Arc<Space>>>,
    sessions: Mutex<HashMap<u64, Arc<Mutex<Session>>>>,
}

impl Registry {
    pub fn new(config: ServiceConfig) -> Self {
        Registry {
            config,
            next_space: AtomicU64::new(1),
            next_session: AtomicU64::new(1),
            spaces: RwLock::new(BTreeMap::new()),
            sessions: Mutex::new(HashMap::new()),
        }
    }

    /// Runs the scaling pipeline with the boolean valuation and caches
    /// the lattice.
    pub fn create_space(&self, docs: &SpaceDocuments) -> Result<SpaceCreated, ApiError> {
        let onto = parse_ontology(&docs.ontology).map_err(PipelineError::from)?;
        let collection = parse_collection(&docs.collection, &onto).map_err(PipelineError::from)?;
        let dataset = load_dataset(&docs.dataset, &onto).map_err(PipelineError::from)?;
        let options = PipelineOptions { reference_date: docs.reference_date, ..PipelineOptions::default() };
        let space = ConceptualSpace::build(&onto, &collection, &dataset, options)?;
        let lattice = ConceptLattice::clone(space.lattice()?);
        let concepts = lattice.len();
        let mut spaces = self.spaces.write().expect("space registry");
        let id = self.next_space.fetch_add(1, Ordering::SeqCst);
        spaces.insert(id, Arc::new(Space { id, lattice: RwLock::new(lattice) }));
        log::info!("space {id}: {concepts} concepts");
        Ok(SpaceCreated { space_id: id, concepts })
    }

    fn space(&self, id: u64) -> Result<Arc<Space>, ApiError> {
        self.spaces.read().expect("space registry").get(&id).cloned().ok_or_else(|| ApiError::not_found("space", id))
    }

    pub fn lattice(&self, space: u64) -> Result<LatticeDoc, ApiError> {
        Ok(self.space(space)?.lattice.read().expect("lattice").to_doc())
    }

    pub fn create_session(&self, space: u64) -> Result<StateDoc, ApiError> {
        let space = self.space(space)?;
        let top = space.lattice.read().expect("lattice").top();
        let mut sessions = self.sessions.lock().expect("session registry");
        self.expire(&mut sessions);
        let id = self.next_session.fetch_add(1, Ordering::SeqCst);
        let session = Session {
            id,
            space,
            current: top,
            mode: Mode::default(),
            operation: None,
            definition: Vec::new(),
            last_used: Instant::now(),
        };
        let doc = state_doc(&session)?;
        sessions.insert(id, Arc::new(Mutex::new(session)));
        Ok(doc)
    }

    fn expire(&self, sessions: &mut HashMap<u64, Arc<Mutex<Session>>>) {
        let ttl = self.config.session_ttl;
        sessions.retain(|_, s| s.lock().map(|s| s.last_used.elapsed() <= ttl).unwrap_or(false));
    }

    /// Runs `f` on a live session, serialized with its other requests.
    fn with_session<T>(&self, id: u64, f: impl FnOnce(&mut Session) -> Result<T, ApiError>) -> Result<T, ApiError> {
        let session = {
            let mut sessions = self.sessions.lock().expect("session registry");
            self.expire(&mut sessions);
            sessions.get(&id).cloned().ok_or_else(|| ApiError::not_found("session", id))?
        };
        let mut s = session.lock().expect("session");
        s.last_used = Instant::now();
        f(&mut s)
    }

    pub fn state(&self, session: u64) -> Result<StateDoc, ApiError> {
        self.with_session(session, |s| state_doc(s))
    }

    /// Moves to the meet or join of the named elements' concepts.
    pub fn transition(&self, session: u64, op: Operation, elements: Vec<ElementRef>) -> Result<StateDoc, ApiError> {
        self.with_session(session, |s| {
            let (next, definition) = {
                let l = s.space.lattice.read().expect("lattice");
                let definition = elements.into_iter().map(|e| resolve(&l, e)).collect::<Result<Vec<_>, _>>()?;
                let ids = definition.iter().map(|e| l.concept_of(e)).collect::<Result<Vec<_>, _>>()?;
                let next = match op {
                    Operation::Meet => l.meet(&ids)?,
                    Operation::Join => l.join(&ids)?,
                };
                (next, definition)
            };
            s.current = next;
            s.operation = Some(op);
            s.definition = definition;
            state_doc(s)
        })
    }

    /// Sets the mode, or toggles it when `mode` is `None`.
    pub fn set_mode(&self, session: u64, mode: Option<Mode>) -> Result<StateDoc, ApiError> {
        self.with_session(session, |s| {
            s.mode = mode.unwrap_or(s.mode.toggled());
            state_doc(s)
        })
    }

    /// Names the current concept. The first writer of a name wins.
    pub fn create_view(&self, session: u64, name: &str, owner: Option<String>) -> Result<ViewRecord, ApiError> {
        if name.is_empty() {
            return Err(ApiError::bad_request("view name is empty"));
        }
        self.with_session(session, |s| {
            let mut l = s.space.lattice.write().expect("lattice");
            l.add_view(name, s.current, owner.clone())?;
            log::info!("space {}: view `{name}` at concept {}", s.space.id, s.current.0);
            Ok(ViewRecord { name: name.to_string(), concept: s.current, owner })
        })
    }
}

fn state_doc(s: &Session) -> Result<StateDoc, ApiError> {
    let l = s.space.lattice.read().expect("lattice");
    let ctx = l.context();
    let mut elements = Vec::new();
    let views: Vec<(String, Option<String>)> = l.views().map(|(n, v)| (n.clone(), v.owner.clone())).collect();
    let named = views
        .iter()
        .map(|(n, owner)| (Element::View(n.clone()), owner.clone()))
        .chain(ctx.attributes().iter().map(|a| (Element::Attribute(a.clone()), None)))
        .chain(ctx.objects().iter().map(|g| (Element::Object(g.clone()), None)));
    let mut local_views = Vec::new();
    for (e, owner) in named {
        let concept = l.concept_of(&e)?;
        let relation = l.classify_relation(s.current, &e)?;
        if matches!(e, Element::View(_)) && l.leq(concept, s.current)? {
            local_views.push(e.name().to_string());
        }
        elements.push(ElementRow {
            kind: e.kind(),
            name: e.name().to_string(),
            owner,
            concept,
            relation,
            similarity: l.similarity(s.current, concept, s.mode)?,
        });
    }
    Ok(StateDoc {
        session_id: s.id,
        space_id: s.space.id,
        mode: s.mode,
        operation: s.operation,
        definition: s.definition.clone(),
        current: concept_doc(&l, s.current)?,
        elements,
        local_views,
    })
}
