use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::LatticeError;

/// A crisp formal context: objects × attributes incidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<FixedBitSet>,
    columns: Vec<FixedBitSet>,
    object_index: HashMap<String, usize>,
    attribute_index: HashMap<String, usize>,
}

fn index(names: &[String], what: &'static str) -> Result<HashMap<String, usize>, LatticeError> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(LatticeError::Duplicate { what, name: n.clone() });
        }
    }
    Ok(map)
}

impl FormalContext {
    pub fn new(
        objects: Vec<String>,
        attributes: Vec<String>,
        incidence: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, LatticeError> {
        let object_index = index(&objects, "object")?;
        let attribute_index = index(&attributes, "attribute")?;
        let (n, m) = (objects.len(), attributes.len());
        let rows: Vec<FixedBitSet> = (0..n)
            .map(|g| {
                let mut row = FixedBitSet::with_capacity(m);
                row.extend((0..m).filter(|&a| incidence(g, a)));
                row
            })
            .collect();
        let mut columns = vec![FixedBitSet::with_capacity(n); m];
        for (g, row) in rows.iter().enumerate() {
            for a in row.ones() {
                columns[a].insert(g);
            }
        }
        Ok(FormalContext { objects, attributes, rows, columns, object_index, attribute_index })
    }

    pub fn from_rows(objects: Vec<String>, attributes: Vec<String>, rows: &[Vec<bool>]) -> Result<Self, LatticeError> {
        if rows.len() != objects.len() || rows.iter().any(|r| r.len() != attributes.len()) {
            return Err(LatticeError::Shape);
        }
        Self::new(objects, attributes, |g, m| rows[g][m])
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn incidence(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    pub fn row(&self, g: usize) -> &FixedBitSet {
        &self.rows[g]
    }

    pub fn column(&self, m: usize) -> &FixedBitSet {
        &self.columns[m]
    }

    pub fn object_id(&self, name: &str) -> Result<usize, LatticeError> {
        self.object_index.get(name).copied().ok_or_else(|| LatticeError::UnknownObject(name.to_string()))
    }

    pub fn attribute_id(&self, name: &str) -> Result<usize, LatticeError> {
        self.attribute_index.get(name).copied().ok_or_else(|| LatticeError::UnknownAttribute(name.to_string()))
    }

    /// `A'`: attributes shared by every object in `objects`.
    pub fn common_attributes(&self, objects: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.attributes.len());
        out.insert_range(..);
        for g in objects.ones() {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    /// `B'`: objects having every attribute in `attributes`.
    pub fn common_objects(&self, attributes: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.objects.len());
        out.insert_range(..);
        for m in attributes.ones() {
            out.intersect_with(&self.columns[m]);
        }
        out
    }

    pub fn close_intent(&self, attributes: &FixedBitSet) -> FixedBitSet {
        self.common_attributes(&self.common_objects(attributes))
    }

    pub fn close_extent(&self, objects: &FixedBitSet) -> FixedBitSet {
        self.common_objects(&self.common_attributes(objects))
    }

    pub fn object_set<S: AsRef<str>>(&self, names: &[S]) -> Result<FixedBitSet, LatticeError> {
        let mut s = FixedBitSet::with_capacity(self.objects.len());
        for n in names {
            s.insert(self.object_id(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn attribute_set<S: AsRef<str>>(&self, names: &[S]) -> Result<FixedBitSet, LatticeError> {
        let mut s = FixedBitSet::with_capacity(self.attributes.len());
        for n in names {
            s.insert(self.attribute_id(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn object_names(&self, set: &FixedBitSet) -> Vec<String> {
        set.ones().map(|g| self.objects[g].clone()).collect()
    }

    pub fn attribute_names(&self, set: &FixedBitSet) -> Vec<String> {
        set.ones().map(|m| self.attributes[m].clone()).collect()
    }

    /// Named derivation of an object set, in attribute declaration order.
    pub fn derive_attributes<S: AsRef<str>>(&self, objects: &[S]) -> Result<Vec<String>, LatticeError> {
        Ok(self.attribute_names(&self.common_attributes(&self.object_set(objects)?)))
    }

    /// Named derivation of an attribute set, in object declaration order.
    pub fn derive_objects<S: AsRef<str>>(&self, attributes: &[S]) -> Result<Vec<String>, LatticeError> {
        Ok(self.object_names(&self.common_objects(&self.attribute_set(attributes)?)))
    }

    pub fn to_doc(&self) -> ContextDoc {
        ContextDoc {
            objects: self.objects.clone(),
            attributes: self.attributes.clone(),
            incidence: self
                .rows
                .iter()
                .map(|r| (0..self.attributes.len()).map(|m| u8::from(r.contains(m))).collect())
                .collect(),
        }
    }
}

/// JSON shape of a crisp context: 0/1 incidence rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextDoc {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub incidence: Vec<Vec<u8>>,
}
