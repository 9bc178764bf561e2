use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::build::{ConceptId, ConceptLattice};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConceptDoc {
    pub id: ConceptId,
    pub extent: Vec<String>,
    pub intent: Vec<String>,
    pub object_labels: Vec<String>,
    pub attribute_labels: Vec<String>,
    pub upper_covers: Vec<ConceptId>,
    pub lower_covers: Vec<ConceptId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewDoc {
    pub concept: ConceptId,
    pub owner: Option<String>,
}

/// JSON export: concepts in lectic order of intents with covers, labels
/// and views.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub top: ConceptId,
    pub bottom: ConceptId,
    pub concepts: Vec<ConceptDoc>,
    pub views: BTreeMap<String, ViewDoc>,
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl ConceptLattice {
    pub fn to_doc(&self) -> LatticeDoc {
        let ctx = self.context();
        let concepts = self
            .ids()
            .map(|id| ConceptDoc {
                id,
                extent: self.extent_names(id).expect("own concept"),
                intent: self.intent_names(id).expect("own concept"),
                object_labels: self.object_labels(id),
                attribute_labels: self.attribute_labels(id),
                upper_covers: self.upper[id.0].clone(),
                lower_covers: self.lower[id.0].clone(),
            })
            .collect();
        LatticeDoc {
            objects: ctx.objects().to_vec(),
            attributes: ctx.attributes().to_vec(),
            top: self.top(),
            bottom: self.bottom(),
            concepts,
            views: self
                .views()
                .map(|(n, v)| (n.clone(), ViewDoc { concept: v.concept, owner: v.owner.clone() }))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("lattice documents serialize")
    }

    /// Graphviz covering diagram, bottom to top. Nodes carry attribute
    /// labels above object labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for id in self.ids() {
            let attrs = self.attribute_labels(id).join(", ");
            let objs = self.object_labels(id).join(", ");
            let mut label = dot_escape(&attrs);
            if !objs.is_empty() {
                if !label.is_empty() {
                    label.push_str("\\n");
                }
                label.push_str(&dot_escape(&objs));
            }
            let _ = writeln!(out, "  c{} [label=\"{}\"];", id.0, label);
        }
        for id in self.ids() {
            for up in &self.upper[id.0] {
                let _ = writeln!(out, "  c{} -> c{};", id.0, up.0);
            }
        }
        for (name, view) in self.views() {
            let _ = writeln!(
                out,
                "  \"view:{}\" [shape=note];\n  \"view:{}\" -> c{} [style=dashed];",
                dot_escape(name),
                dot_escape(name),
                view.concept.0
            );
        }
        out.push_str("}\n");
        out
    }
}
